#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "psadf/graph.hpp"
#include "psadf/simulate.hpp"

namespace psadf {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    ParseError(const std::string& path, const ParseError& inner)
        : std::runtime_error(path + ": " + inner.what()), line_(inner.line()) {}
    int line() const { return line_; }

private:
    int line_;
};

enum class ModelKind { Sdf, Sadf, Psadf };

std::string kind_string(ModelKind k);

// Parsed text model. The graph carries the base declarations for every kind;
// sadf files add scenario override blocks and an optional FSM.
struct ModelFile {
    ModelKind kind = ModelKind::Sdf;
    PsadfGraph graph;

    struct Scenario {
        std::string name;
        std::map<std::string, Rational> exec_overrides;
    };
    std::vector<Scenario> scenarios;  // sadf only
    ScenarioSet::Fsm fsm;             // sadf only; may be empty

    bool has_fsm() const { return !fsm.states.empty(); }
};

// Line-oriented parser; throws ParseError with a 1-based line number.
// Declarations must precede use (parameters before rates and execution times,
// actors before channels).
ModelFile parse_model(std::istream& in);
ModelFile parse_model(const std::string& text);
ModelFile load_model(const std::string& path);  // adds the path to errors

// Canonical text form; parse(print(m)) == m and printing is idempotent.
std::string print_model(const ModelFile& m);

// kind sdf: fully concrete graph
ConcreteSdf to_concrete(const ModelFile& m);
// kind sadf: per-scenario graphs plus the FSM (fully connected one when the
// file declares none)
ScenarioSet to_scenarios(const ModelFile& m);

}  // namespace psadf
