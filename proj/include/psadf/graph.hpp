#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psadf/expr.hpp"
#include "psadf/rational.hpp"

namespace psadf {

struct Channel {
    std::string src, dst;
    RateExpr production, consumption;
    int initial_tokens = 0;

    bool is_self_loop() const { return src == dst; }
};

struct RateParam {
    Integer lo = 1, hi = 1;  // integer bounds, lo >= 1
    // Optional modifier: the actor that rewrites this parameter, once per
    // alpha of its own firings.
    std::optional<std::string> modifier_actor;
    RateExpr modifier_period = RateExpr::constant(1);
    bool has_modifier = false;
};

struct DurationParam {
    Rational lo = 0, hi = 0;  // lo >= 0
    bool integer = false;     // enumerated like a rate when true
};

// Linear inequality sum(coeffs[x] * x) <= rhs over either rate parameters or
// duration parameters (never mixed).
struct LinearConstraint {
    std::map<std::string, Rational> coeffs;
    Rational rhs;

    bool satisfied(const std::map<std::string, Rational>& pt) const {
        Rational lhs = 0;
        for (const auto& [name, c] : coeffs) lhs += c * pt.at(name);
        return lhs <= rhs;
    }
    friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
    std::string str() const;
};

// Position of one initial token: channel index plus 1-based queue position,
// oldest first. Labels t1..tn follow channel declaration order.
struct TokenRef {
    std::size_t channel;
    int position;
};

struct PsadfGraph {
    std::string name;
    std::vector<std::string> actor_order;        // declaration order
    std::map<std::string, TimeExpr> exec_times;  // per actor
    std::vector<Channel> channels;
    std::map<std::string, RateParam> rate_params;
    std::map<std::string, DurationParam> duration_params;
    std::vector<LinearConstraint> rate_constraints;
    std::vector<LinearConstraint> duration_constraints;

    bool has_actor(const std::string& a) const { return exec_times.count(a) != 0; }
    bool is_concrete() const { return rate_params.empty() && duration_params.empty(); }

    std::vector<TokenRef> tokens() const;
    std::vector<std::string> token_labels() const;
};

// Fully bound instance: integer rates, rational execution times.
struct ConcreteSdf {
    std::string name;
    std::vector<std::string> actor_order;
    std::map<std::string, Rational> exec_times;
    struct Chan {
        std::string src, dst;
        Integer production, consumption;
        int initial_tokens;
        bool is_self_loop() const { return src == dst; }
    };
    std::vector<Chan> channels;

    std::vector<std::string> token_labels() const;
};

// Symbolic repetition vector: actor -> firing-count monomial, minimal.
using RepetitionVector = std::map<std::string, RateExpr>;

struct ScheduleEntry {
    std::string actor;
    RateExpr count;
};
// Topologically ordered single-appearance schedule; ties broken by actor name.
using QuasiStaticSchedule = std::vector<ScheduleEntry>;

struct DagDecomposition {
    std::vector<std::size_t> dag_channels;      // intra-iteration dependencies
    std::vector<std::size_t> removed_channels;  // token-carrying + self-loops
    std::vector<std::string> topo_order;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class UnsupportedPattern : public ModelError {
public:
    using ModelError::ModelError;
};

// Structural validation. Returns human-readable diagnostics (empty means the
// graph is in the supported class); does not stop at the first finding.
std::vector<std::string> validate(const PsadfGraph& g);

// Minimal symbolic solution of the balance equations. Throws ModelError when
// inconsistent.
RepetitionVector repetition_vector(const PsadfGraph& g);

DagDecomposition dag_decompose(const PsadfGraph& g);

QuasiStaticSchedule quasi_static_schedule(const PsadfGraph& g);
std::string schedule_string(const QuasiStaticSchedule& s);

// Substitutes a full parameter assignment. Rates must come out as positive
// integers. Values outside the declared boxes bind fine but are reported in
// *warnings when provided.
ConcreteSdf bind(const PsadfGraph& g, const std::map<std::string, Rational>& point,
                 std::vector<std::string>* warnings = nullptr);

// View of a concrete graph as a parameter-free PsadfGraph so the symbolic
// pipeline can run on plain SDF models.
PsadfGraph as_psadf(const ConcreteSdf& g);

RepetitionVector repetition_vector(const ConcreteSdf& g);

}  // namespace psadf
