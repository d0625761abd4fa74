#include "psadf/maxplus.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace psadf::maxplus {

Matrix Matrix::neg_inf(std::vector<std::string> labels) {
    Matrix m;
    m.labels = std::move(labels);
    m.entries.assign(m.labels.size(), std::vector<Value>(m.labels.size()));
    return m;
}

Vector multiply(const Matrix& m, const Vector& v) {
    if (v.size() != m.size()) throw std::invalid_argument("matrix/vector size mismatch");
    Vector out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        Value acc;
        for (std::size_t j = 0; j < m.size(); ++j) acc = oplus(acc, otimes(m.at(i, j), v[j]));
        out[i] = acc;
    }
    return out;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.labels != b.labels) throw std::invalid_argument("matrix label mismatch");
    Matrix out = Matrix::neg_inf(a.labels);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) {
            Value acc;
            for (std::size_t k = 0; k < a.size(); ++k)
                acc = oplus(acc, otimes(a.at(i, k), b.at(k, j)));
            out.at(i, j) = acc;
        }
    return out;
}

Matrix elementwise_max(const std::vector<Matrix>& ms) {
    if (ms.empty()) throw std::invalid_argument("elementwise_max of an empty list");
    Matrix out = ms.front();
    for (std::size_t k = 1; k < ms.size(); ++k) {
        if (ms[k].labels != out.labels) throw std::invalid_argument("matrix label mismatch");
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = 0; j < out.size(); ++j)
                out.at(i, j) = oplus(out.at(i, j), ms[k].at(i, j));
    }
    return out;
}

Mpag build_mpag(const Matrix& m) {
    Mpag g;
    g.labels = m.labels;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if (m.at(i, j).finite()) g.edges.push_back({j, i, m.at(i, j).get()});
    return g;
}

namespace {

// Tarjan strongly connected components, iterative. Component ids are
// assigned deterministically from node 0 upward.
std::vector<int> scc_ids(std::size_t n, const std::vector<Mpag::Edge>& edges, int& count) {
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t e = 0; e < edges.size(); ++e) adj[edges[e].from].push_back(edges[e].to);

    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    int next_index = 0;
    count = 0;

    struct Frame {
        std::size_t v;
        std::size_t child;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.child < adj[f.v].size()) {
                std::size_t w = adj[f.v][f.child++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                std::size_t v = f.v;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                if (low[v] == index[v]) {
                    while (true) {
                        std::size_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp[w] = count;
                        if (w == v) break;
                    }
                    ++count;
                }
            }
        }
    }
    return comp;
}

struct SccResult {
    bool has_cycle = false;
    Rational lambda;
    std::vector<std::size_t> cycle;  // global node indices
};

// Karp's recurrence on one strongly connected component. nodes holds the
// component members in ascending global order; edges are the internal edges.
SccResult karp(const std::vector<std::size_t>& nodes, const std::vector<Mpag::Edge>& edges) {
    SccResult res;
    if (edges.empty()) return res;  // single node without self-loop
    const std::size_t m = nodes.size();

    std::vector<std::size_t> local(edges.size());
    std::vector<std::vector<std::pair<std::size_t, Rational>>> in(m);  // (from, weight)
    {
        std::vector<std::size_t> remap;  // global -> local
        remap.assign(*std::max_element(nodes.begin(), nodes.end()) + 1, 0);
        for (std::size_t i = 0; i < m; ++i) remap[nodes[i]] = i;
        for (const auto& e : edges) in[remap[e.to]].push_back({remap[e.from], e.weight});
    }

    // D[k][v] = max weight of a walk with exactly k edges from node 0 to v.
    std::vector<std::vector<Value>> D(m + 1, std::vector<Value>(m));
    std::vector<std::vector<std::size_t>> pred(m + 1, std::vector<std::size_t>(m, 0));
    D[0][0] = Value::zero();
    for (std::size_t k = 1; k <= m; ++k)
        for (std::size_t v = 0; v < m; ++v)
            for (const auto& [u, w] : in[v]) {
                if (!D[k - 1][u].finite()) continue;
                Value cand(D[k - 1][u].get() + w);
                if (!D[k][v].finite() || D[k][v].get() < cand.get()) {
                    D[k][v] = cand;
                    pred[k][v] = u;
                }
            }

    bool found = false;
    Rational best;
    std::size_t best_v = 0;
    for (std::size_t v = 0; v < m; ++v) {
        if (!D[m][v].finite()) continue;
        bool any = false;
        Rational inner_min;
        for (std::size_t k = 0; k < m; ++k) {
            if (!D[k][v].finite()) continue;
            Rational ratio = (D[m][v].get() - D[k][v].get()) / Rational(m - k);
            if (!any || ratio < inner_min) {
                inner_min = ratio;
                any = true;
            }
        }
        if (!any) continue;
        if (!found || best < inner_min) {
            best = inner_min;
            best_v = v;
            found = true;
        }
    }
    if (!found) return res;  // cannot happen in a strongly connected component
    res.has_cycle = true;
    res.lambda = best;

    // Critical cycle recovery: every cycle on the maximal m-edge walk ending
    // at the winning vertex has mean exactly lambda; take the first repeat.
    std::vector<std::size_t> walk(m + 1);
    walk[m] = best_v;
    for (std::size_t k = m; k > 0; --k) walk[k - 1] = pred[k][walk[k]];
    std::vector<int> seen(m, -1);
    std::size_t lo = 0, hi = 0;
    for (std::size_t k = 0; k <= m; ++k) {
        if (seen[walk[k]] >= 0) {
            lo = static_cast<std::size_t>(seen[walk[k]]);
            hi = k;
            break;
        }
        seen[walk[k]] = static_cast<int>(k);
    }
    assert(hi > lo);
    std::vector<std::size_t> cyc(walk.begin() + lo, walk.begin() + hi);
    // Rotate to start at the lowest global index for a deterministic report.
    std::size_t arg = 0;
    for (std::size_t i = 1; i < cyc.size(); ++i)
        if (nodes[cyc[i]] < nodes[cyc[arg]]) arg = i;
    std::rotate(cyc.begin(), cyc.begin() + arg, cyc.end());
    res.cycle.reserve(cyc.size());
    for (std::size_t v : cyc) res.cycle.push_back(nodes[v]);
    return res;
}

}  // namespace

CycleMean maximum_cycle_mean(const Mpag& g) {
    int count = 0;
    std::vector<int> comp = scc_ids(g.node_count(), g.edges, count);

    CycleMean out;
    std::vector<std::vector<std::size_t>> members(count);
    for (std::size_t v = 0; v < g.node_count(); ++v) members[comp[v]].push_back(v);
    std::vector<std::vector<Mpag::Edge>> internal(count);
    for (const auto& e : g.edges)
        if (comp[e.from] == comp[e.to]) internal[comp[e.from]].push_back(e);

    bool found = false;
    for (int c = 0; c < count; ++c) {
        SccResult r = karp(members[c], internal[c]);
        if (!r.has_cycle) continue;
        if (!found || out.lambda.get() < r.lambda ||
            (out.lambda.get() == r.lambda && r.cycle.front() < out.cycle.front())) {
            out.lambda = Value(r.lambda);
            out.cycle = r.cycle;
            found = true;
        }
    }
    return out;
}

Rational throughput_from_matrix(const Matrix& m) {
    CycleMean cm = maximum_cycle_mean(build_mpag(m));
    if (!cm.lambda.finite())
        throw std::domain_error("no cycle: throughput is not bounded by initial tokens");
    if (!(cm.lambda.get() > 0))
        throw std::domain_error("maximum cycle mean is not positive");
    return Rational(1) / cm.lambda.get();
}

}  // namespace psadf::maxplus
