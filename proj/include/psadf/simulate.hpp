#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "psadf/graph.hpp"
#include "psadf/maxplus.hpp"

namespace psadf {

// A token during simulation carries its production time as a max-plus
// dependency vector over the initial tokens (unit vector at the start).
using TimestampToken = maxplus::Vector;

// One-iteration symbolic-timestamp simulation of a concrete graph. Fires
// ready actors in a deterministic round robin (actor name order) until every
// actor reaches its repetition count; the result is independent of the
// firing order. Throws ModelError when the graph deadlocks or a channel does
// not return to its initial fill.
//
// fire_order, when given, overrides the ready-actor policy (used by the
// order-independence tests): it receives the sorted ready set and picks one.
maxplus::Matrix extract_numeric_matrix(
    const ConcreteSdf& g,
    const std::function<std::string(const std::vector<std::string>&)>& fire_order = nullptr);

// k-step evolution gamma_k = G^k gamma_0.
maxplus::Vector evolve(const maxplus::Matrix& m, const maxplus::Vector& gamma0, unsigned k);

// A finite-state scenario specification: per-scenario concrete graphs over a
// common channel structure plus the scenario FSM.
struct ScenarioSet {
    struct Fsm {
        struct State {
            std::string name;
            std::string scenario;
        };
        std::vector<State> states;
        std::string initial;
        std::vector<std::pair<std::string, std::string>> transitions;
    };
    std::vector<std::pair<std::string, ConcreteSdf>> scenarios;
    Fsm fsm;
};

// Worst-case characteristic matrix: elementwise max of the per-scenario
// matrices, restricted to scenarios reachable from the FSM initial state.
// When the FSM is not a fully connected machine with one state per reachable
// scenario, a conservative-over-approximation note lands in *diagnostics.
maxplus::Matrix sadf_worstcase_matrix(const ScenarioSet& s,
                                      std::vector<std::string>* diagnostics = nullptr);

}  // namespace psadf
