#include "psadf/simulate.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace psadf {

using maxplus::Matrix;
using maxplus::Value;
using maxplus::Vector;

Matrix extract_numeric_matrix(
    const ConcreteSdf& g,
    const std::function<std::string(const std::vector<std::string>&)>& fire_order) {
    RepetitionVector rv = repetition_vector(g);
    std::map<std::string, Integer> reps, fired;
    for (const auto& [a, r] : rv) reps[a] = numerator(r.coeff);

    std::size_t n = 0;
    for (const auto& ch : g.channels) n += static_cast<std::size_t>(ch.initial_tokens);

    std::vector<std::deque<TimestampToken>> queues(g.channels.size());
    {
        std::size_t idx = 0;
        for (std::size_t c = 0; c < g.channels.size(); ++c)
            for (int m = 0; m < g.channels[c].initial_tokens; ++m) {
                TimestampToken t(n);
                t[idx] = Value::zero();
                queues[c].push_back(std::move(t));
                ++idx;
            }
    }

    std::map<std::string, std::vector<std::size_t>> inputs, outputs;
    for (std::size_t c = 0; c < g.channels.size(); ++c) {
        inputs[g.channels[c].dst].push_back(c);
        outputs[g.channels[c].src].push_back(c);
    }

    auto ready = [&](const std::string& a) {
        if (fired[a] >= reps[a]) return false;
        for (std::size_t c : inputs[a])
            if (Integer(queues[c].size()) < g.channels[c].consumption) return false;
        return true;
    };

    Integer total_left = 0;
    for (const auto& [a, r] : reps) total_left += r;

    while (total_left > 0) {
        std::vector<std::string> ready_set;
        for (const auto& a : g.actor_order)
            if (ready(a)) ready_set.push_back(a);
        std::sort(ready_set.begin(), ready_set.end());
        if (ready_set.empty()) {
            std::ostringstream os;
            os << "graph not live: deadlock with pending firings of {";
            bool first = true;
            for (const auto& [a, r] : reps)
                if (fired[a] < r) {
                    if (!first) os << ", ";
                    os << a;
                    first = false;
                }
            os << "}";
            throw ModelError(os.str());
        }

        std::vector<std::string> to_fire;
        if (fire_order)
            to_fire.push_back(fire_order(ready_set));
        else
            to_fire = ready_set;  // one firing per ready actor per round

        for (const auto& a : to_fire) {
            if (!ready(a)) continue;  // an earlier firing in this round consumed its input
            TimestampToken stamp(n);
            for (std::size_t c : inputs[a]) {
                Integer take = g.channels[c].consumption;
                for (Integer i = 0; i < take; ++i) {
                    const TimestampToken& tok = queues[c].front();
                    for (std::size_t j = 0; j < n; ++j) stamp[j] = oplus(stamp[j], tok[j]);
                    queues[c].pop_front();
                }
            }
            const Rational& e = g.exec_times.at(a);
            for (std::size_t j = 0; j < n; ++j)
                if (stamp[j].finite()) stamp[j] = Value(stamp[j].get() + e);
            for (std::size_t c : outputs[a]) {
                Integer put = g.channels[c].production;
                for (Integer i = 0; i < put; ++i) queues[c].push_back(stamp);
            }
            ++fired[a];
            --total_left;
        }
    }

    Matrix out = Matrix::neg_inf(g.token_labels());
    std::size_t idx = 0;
    for (std::size_t c = 0; c < g.channels.size(); ++c) {
        if (Integer(queues[c].size()) != Integer(g.channels[c].initial_tokens))
            throw ModelError("graph not consistent: channel " + g.channels[c].src + " -> " +
                             g.channels[c].dst + " did not return to its initial fill");
        for (int m = 0; m < g.channels[c].initial_tokens; ++m) {
            out.entries[idx] = queues[c][static_cast<std::size_t>(m)];
            ++idx;
        }
    }
    return out;
}

Vector evolve(const Matrix& m, const Vector& gamma0, unsigned k) {
    Vector v = gamma0;
    for (unsigned i = 0; i < k; ++i) v = multiply(m, v);
    return v;
}

Matrix sadf_worstcase_matrix(const ScenarioSet& s, std::vector<std::string>* diagnostics) {
    if (s.scenarios.empty()) throw ModelError("scenario set is empty");

    std::map<std::string, std::string> state_scenario;
    std::map<std::string, std::set<std::string>> succ;
    for (const auto& st : s.fsm.states) state_scenario[st.name] = st.scenario;
    for (const auto& [a, b] : s.fsm.transitions) succ[a].insert(b);

    std::set<std::string> reachable;
    std::vector<std::string> queue{s.fsm.initial};
    if (!state_scenario.count(s.fsm.initial)) throw ModelError("fsm: unknown initial state");
    reachable.insert(s.fsm.initial);
    while (!queue.empty()) {
        std::string st = queue.back();
        queue.pop_back();
        for (const auto& nx : succ[st])
            if (reachable.insert(nx).second) queue.push_back(nx);
    }

    std::set<std::string> active;
    for (const auto& st : reachable) active.insert(state_scenario.at(st));

    bool fully_connected = true;
    if (reachable.size() != active.size()) fully_connected = false;
    for (const auto& a : reachable)
        for (const auto& b : reachable)
            if (!succ[a].count(b)) fully_connected = false;
    if (!fully_connected && diagnostics)
        diagnostics->push_back(
            "fsm is not a fully connected machine with one state per scenario; the combined "
            "matrix is a conservative over-approximation of the worst case");

    std::vector<Matrix> mats;
    for (const auto& [name, graph] : s.scenarios)
        if (active.count(name)) mats.push_back(extract_numeric_matrix(graph));
    if (mats.empty()) throw ModelError("fsm reaches no declared scenario");
    return elementwise_max(mats);
}

}  // namespace psadf
