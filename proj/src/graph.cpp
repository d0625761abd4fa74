#include "psadf/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace psadf {

std::string LinearConstraint::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [name, c] : coeffs) {
        if (c < 0) {
            os << (first ? "-" : " - ");
            if (c != -1) os << pretty_rational(-c) << "*";
        } else {
            if (!first) os << " + ";
            if (c != 1) os << pretty_rational(c) << "*";
        }
        os << name;
        first = false;
    }
    if (first) os << "0";
    os << " <= " << pretty_rational(rhs);
    return os.str();
}

std::vector<TokenRef> PsadfGraph::tokens() const {
    std::vector<TokenRef> out;
    for (std::size_t c = 0; c < channels.size(); ++c)
        for (int m = 1; m <= channels[c].initial_tokens; ++m) out.push_back({c, m});
    return out;
}

std::vector<std::string> PsadfGraph::token_labels() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < tokens().size(); ++i) out.push_back("t" + std::to_string(i + 1));
    return out;
}

std::vector<std::string> ConcreteSdf::token_labels() const {
    std::size_t n = 0;
    for (const auto& c : channels) n += static_cast<std::size_t>(c.initial_tokens);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back("t" + std::to_string(i + 1));
    return out;
}

namespace {

// Fractional repetition counts from spanning-tree propagation, one connected
// component at a time (channel direction is irrelevant for balance).
std::map<std::string, RateExpr> propagate_counts(const PsadfGraph& g) {
    std::map<std::string, RateExpr> counts;
    std::map<std::string, std::vector<std::size_t>> touching;
    for (std::size_t i = 0; i < g.channels.size(); ++i) {
        touching[g.channels[i].src].push_back(i);
        touching[g.channels[i].dst].push_back(i);
    }
    for (const auto& root : g.actor_order) {
        if (counts.count(root)) continue;
        counts[root] = RateExpr::constant(1);
        std::vector<std::string> queue{root};
        while (!queue.empty()) {
            std::string a = queue.back();
            queue.pop_back();
            for (std::size_t ci : touching[a]) {
                const Channel& ch = g.channels[ci];
                // production * #src = consumption * #dst
                if (!counts.count(ch.dst)) {
                    counts[ch.dst] = counts[ch.src] * ch.production * ch.consumption.inverse();
                    queue.push_back(ch.dst);
                } else if (!counts.count(ch.src)) {
                    counts[ch.src] = counts[ch.dst] * ch.consumption * ch.production.inverse();
                    queue.push_back(ch.src);
                }
            }
        }
    }
    return counts;
}

Integer lcm_int(const Integer& a, const Integer& b) {
    return a / gcd(a, b) * b;
}

}  // namespace

RepetitionVector repetition_vector(const PsadfGraph& g) {
    if (g.actor_order.empty()) throw ModelError("graph has no actors");
    std::map<std::string, RateExpr> counts = propagate_counts(g);

    // Scale to the minimal all-integer monomial solution.
    Integer denom_lcm = 1, num_gcd = 0;
    std::map<std::string, int> min_pow, max_neg;
    bool first = true;
    for (const auto& [actor, c] : counts) {
        (void)actor;
        denom_lcm = lcm_int(denom_lcm, denominator(c.coeff));
        for (const auto& [p, pw] : c.powers)
            if (pw < 0) max_neg[p] = std::max(max_neg[p], -pw);
    }
    RateExpr scale;
    scale.coeff = Rational(denom_lcm);
    for (const auto& [p, pw] : max_neg) scale.powers[p] = pw;
    for (auto& [actor, c] : counts) {
        (void)actor;
        c = c * scale;
        num_gcd = first ? numerator(c.coeff) : gcd(num_gcd, numerator(c.coeff));
        if (first)
            min_pow = c.powers;
        else {
            for (auto it = min_pow.begin(); it != min_pow.end();) {
                auto jt = c.powers.find(it->first);
                if (jt == c.powers.end())
                    it = min_pow.erase(it);
                else {
                    it->second = std::min(it->second, jt->second);
                    ++it;
                }
            }
        }
        first = false;
    }
    RateExpr shrink;
    shrink.coeff = Rational(num_gcd);
    shrink.powers = min_pow;
    for (auto& [actor, c] : counts) {
        (void)actor;
        c = c * shrink.inverse();
        if (!c.is_model_rate())
            throw ModelError("repetition vector has a non-monomial entry for " + actor);
    }

    for (const auto& ch : g.channels) {
        if (!(ch.production * counts.at(ch.src) == ch.consumption * counts.at(ch.dst))) {
            throw ModelError("graph not consistent: channel " + ch.src + " -> " + ch.dst +
                             " violates the balance equation");
        }
    }
    return counts;
}

RepetitionVector repetition_vector(const ConcreteSdf& g) {
    return repetition_vector(as_psadf(g));
}

DagDecomposition dag_decompose(const PsadfGraph& g) {
    DagDecomposition out;
    for (std::size_t i = 0; i < g.channels.size(); ++i) {
        if (g.channels[i].is_self_loop() || g.channels[i].initial_tokens > 0)
            out.removed_channels.push_back(i);
        else
            out.dag_channels.push_back(i);
    }

    std::map<std::string, int> indeg;
    std::map<std::string, std::vector<std::string>> succ;
    for (const auto& a : g.actor_order) indeg[a] = 0;
    for (std::size_t i : out.dag_channels) {
        succ[g.channels[i].src].push_back(g.channels[i].dst);
        indeg[g.channels[i].dst]++;
    }
    std::set<std::string> ready;
    for (const auto& [a, d] : indeg)
        if (d == 0) ready.insert(a);
    while (!ready.empty()) {
        std::string a = *ready.begin();  // name order breaks ties
        ready.erase(ready.begin());
        out.topo_order.push_back(a);
        for (const auto& b : succ[a])
            if (--indeg[b] == 0) ready.insert(b);
    }
    if (out.topo_order.size() != g.actor_order.size()) {
        std::ostringstream os;
        os << "deadlocked cycle: token-free dependency cycle through {";
        bool first = true;
        for (const auto& [a, d] : indeg)
            if (d > 0) {
                if (!first) os << ", ";
                os << a;
                first = false;
            }
        os << "}";
        throw ModelError(os.str());
    }
    return out;
}

QuasiStaticSchedule quasi_static_schedule(const PsadfGraph& g) {
    RepetitionVector rv = repetition_vector(g);
    DagDecomposition dag = dag_decompose(g);
    QuasiStaticSchedule s;
    for (const auto& a : dag.topo_order) s.push_back({a, rv.at(a)});
    return s;
}

std::string schedule_string(const QuasiStaticSchedule& s) {
    std::ostringstream os;
    bool first = true;
    for (const auto& e : s) {
        if (!first) os << " ";
        os << e.actor;
        if (!e.count.is_one()) os << "^" << e.count.str();
        first = false;
    }
    return os.str();
}

std::vector<std::string> validate(const PsadfGraph& g) {
    std::vector<std::string> diags;
    auto add = [&](const std::string& d) { diags.push_back(d); };

    if (g.actor_order.empty()) add("graph has no actors");

    for (const auto& [p, rp] : g.rate_params) {
        if (rp.lo < 1 || rp.hi < rp.lo)
            add("rate parameter " + p + " needs integer bounds with 1 <= lo <= hi");
        if (rp.has_modifier && !g.has_actor(*rp.modifier_actor))
            add("rate parameter " + p + " has unknown modifier actor " + *rp.modifier_actor);
        if (rp.has_modifier && !rp.modifier_period.is_model_rate())
            add("rate parameter " + p + " has an invalid change period");
    }
    for (const auto& [p, dp] : g.duration_params) {
        if (dp.lo < 0 || dp.hi < dp.lo)
            add("duration parameter " + p + " needs bounds with 0 <= lo <= hi");
    }
    for (const auto& [a, t] : g.exec_times) {
        if (t.constant < 0) add("actor " + a + " has a negative constant execution time");
        for (const auto& [p, c] : t.coeffs) {
            if (c < 0) add("actor " + a + " has a negative coefficient on " + p);
            if (!g.duration_params.count(p))
                add("actor " + a + " uses undeclared duration parameter " + p);
        }
    }

    auto check_rate = [&](const RateExpr& r, const std::string& where) {
        if (!r.is_model_rate()) add(where + ": rate must be a positive integer monomial");
        for (const auto& [p, pw] : r.powers) {
            (void)pw;
            if (!g.rate_params.count(p)) add(where + ": undeclared rate parameter " + p);
        }
    };
    for (const auto& ch : g.channels) {
        std::string where = "channel " + ch.src + " -> " + ch.dst;
        if (!g.has_actor(ch.src)) add(where + ": unknown producer");
        if (!g.has_actor(ch.dst)) add(where + ": unknown consumer");
        check_rate(ch.production, where);
        check_rate(ch.consumption, where);
        if (ch.initial_tokens < 0) add(where + ": negative initial token count");
        if (ch.is_self_loop()) {
            if (!(ch.production == ch.consumption))
                add(where + ": self-loop production and consumption rates must match");
            if (!ch.consumption.is_constant() ||
                ch.consumption.coeff != Rational(ch.initial_tokens))
                add(where + ": self-loop initial tokens must equal the (constant) rate");
        }
    }
    for (const auto& lc : g.rate_constraints)
        for (const auto& [p, c] : lc.coeffs) {
            (void)c;
            if (!g.rate_params.count(p))
                add("constraint " + lc.str() + ": undeclared rate parameter " + p);
        }
    for (const auto& lc : g.duration_constraints)
        for (const auto& [p, c] : lc.coeffs) {
            (void)c;
            if (!g.duration_params.count(p))
                add("constraint " + lc.str() + ": undeclared duration parameter " + p);
        }
    if (!diags.empty()) return diags;  // structural errors make the rest unreliable

    RepetitionVector rv;
    try {
        rv = repetition_vector(g);
    } catch (const ModelError& e) {
        add(e.what());
        return diags;
    }

    for (const auto& [p, rp] : g.rate_params) {
        if (!rp.has_modifier) continue;
        const RateExpr& reps = rv.at(*rp.modifier_actor);
        auto q = reps.divide_exact(rp.modifier_period);
        if (!q || !q->is_one())
            add("rate parameter " + p + ": modifier " + *rp.modifier_actor +
                " fires " + reps.str() + " times per iteration but the change period is " +
                rp.modifier_period.str() + " (quotient must be identically 1)");
    }

    DagDecomposition dag;
    try {
        dag = dag_decompose(g);
    } catch (const ModelError& e) {
        add(e.what());
        return diags;
    }

    std::set<std::string> has_dag_out, has_dag_in;
    for (std::size_t i : dag.dag_channels) {
        has_dag_out.insert(g.channels[i].src);
        has_dag_in.insert(g.channels[i].dst);
    }
    for (std::size_t i : dag.removed_channels) {
        const Channel& ch = g.channels[i];
        if (ch.is_self_loop()) continue;
        std::string where = "channel " + ch.src + " -> " + ch.dst;
        if (has_dag_out.count(ch.src))
            add(where + ": producer of an inter-iteration channel must be a sink of the "
                        "intra-iteration DAG");
        if (has_dag_in.count(ch.dst))
            add(where + ": consumer of an inter-iteration channel must be a source of the "
                        "intra-iteration DAG");
        // One local iteration of the consumer must be covered by the tokens
        // already present; the producer only replenishes at the iteration end.
        RateExpr need = ch.consumption * rv.at(ch.dst);
        Rational worst = need.coeff;
        for (const auto& [p, pw] : need.powers)
            for (int k = 0; k < pw; ++k) worst *= Rational(g.rate_params.at(p).hi);
        if (worst > Rational(ch.initial_tokens))
            add(where + ": initial tokens (" + std::to_string(ch.initial_tokens) +
                ") cannot cover one iteration of " + ch.dst + " (needs up to " +
                pretty_rational(worst) + ")");
    }
    return diags;
}

ConcreteSdf bind(const PsadfGraph& g, const std::map<std::string, Rational>& point,
                 std::vector<std::string>* warnings) {
    for (const auto& [p, rp] : g.rate_params) {
        auto it = point.find(p);
        if (it == point.end()) throw ModelError("bind: missing value for rate parameter " + p);
        if (!is_integral(it->second) || it->second < 1)
            throw ModelError("bind: rate parameter " + p + " must be a positive integer, got " +
                             pretty_rational(it->second));
        if (warnings && (it->second < Rational(rp.lo) || it->second > Rational(rp.hi)))
            warnings->push_back("rate parameter " + p + " = " + pretty_rational(it->second) +
                                " lies outside its declared interval");
    }
    for (const auto& [p, dp] : g.duration_params) {
        auto it = point.find(p);
        if (it == point.end())
            throw ModelError("bind: missing value for duration parameter " + p);
        if (it->second < 0)
            throw ModelError("bind: duration parameter " + p + " must be nonnegative");
        if (dp.integer && !is_integral(it->second))
            throw ModelError("bind: duration parameter " + p + " is integer-valued");
        if (warnings && (it->second < dp.lo || it->second > dp.hi))
            warnings->push_back("duration parameter " + p + " = " + pretty_rational(it->second) +
                                " lies outside its declared interval");
    }

    ConcreteSdf out;
    out.name = g.name;
    out.actor_order = g.actor_order;
    for (const auto& [a, t] : g.exec_times) out.exec_times[a] = t.evaluate(point);
    for (const auto& ch : g.channels) {
        Rational prod = ch.production.evaluate(point);
        Rational cons = ch.consumption.evaluate(point);
        if (!is_integral(prod) || prod < 1 || !is_integral(cons) || cons < 1)
            throw ModelError("bind: channel " + ch.src + " -> " + ch.dst +
                             " has a non-integer or non-positive rate at this point");
        out.channels.push_back(
            {ch.src, ch.dst, numerator(prod), numerator(cons), ch.initial_tokens});
    }
    return out;
}

PsadfGraph as_psadf(const ConcreteSdf& g) {
    PsadfGraph out;
    out.name = g.name;
    out.actor_order = g.actor_order;
    for (const auto& [a, t] : g.exec_times) out.exec_times[a] = TimeExpr::constant_time(t);
    for (const auto& ch : g.channels)
        out.channels.push_back({ch.src, ch.dst, RateExpr::constant(Rational(ch.production)),
                                RateExpr::constant(Rational(ch.consumption)), ch.initial_tokens});
    return out;
}

}  // namespace psadf
