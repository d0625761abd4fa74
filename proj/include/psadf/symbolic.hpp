#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psadf/graph.hpp"
#include "psadf/maxplus.hpp"
#include "psadf/polynomial.hpp"
#include "psadf/region.hpp"

namespace psadf {

// Producer firing index needed by firing kappa of a consumer:
//   idx(kappa) = ceil((cons * kappa - init) / prod)
// kept in the strongest of four simplified shapes.
struct IndexExpr {
    enum class Kind {
        Concrete,  // integer; <= 0 selects an initial token
        Monomial,  // rate monomial, >= 1 at every parameter point
        Affine,    // mono * kappa + offset (prod divided out exactly)
        Ceil,      // unsimplified ceil((cons * kappa - init) / prod)
    };
    Kind kind = Kind::Concrete;
    Integer concrete = 0;
    RateExpr mono;
    Integer offset = 0;
    RateExpr cons, prod;
    Integer init = 0;
    // Ceil built from a fixed firing folds the firing into cons, without kappa.
    bool has_kappa = true;

    std::string str() const;
};

// firing argument of index_expr: the symbolic iteration-local index kappa, or
// a fixed monomial value
struct FiringIndex {
    bool symbolic = true;
    RateExpr value;  // used when !symbolic

    static FiringIndex kappa() { return {true, RateExpr::constant(1)}; }
    static FiringIndex at(RateExpr v) { return {false, std::move(v)}; }
    static FiringIndex at(long v) { return at(RateExpr::constant(Integer(v))); }
};

IndexExpr index_expr(const RateExpr& cons, const FiringIndex& firing, const Integer& init,
                     const RateExpr& prod);

// Completion times of one actor's firings within an iteration, as a function
// of the firing index kappa in [1, count]. Only two kappa-shapes occur in the
// supported graph class: weights independent of kappa, and the serialized
// self-loop form base (x) kappa*increment.
struct GammaFunction {
    std::string actor;
    RateExpr count;
    enum class Shape { Constant, Accumulating };
    Shape shape = Shape::Constant;
    std::map<std::string, Weight> base;  // token label -> weight; absent = -inf
    TimeExpr increment;                  // Accumulating only

    // weight vector of firing `index`; index must be provably in [1, count]
    std::map<std::string, Weight> at(const RateExpr& index) const;
};

GammaFunction solve_actor(const std::map<std::string, GammaFunction>& env,
                          const PsadfGraph& g, const std::string& actor, const RateExpr& count,
                          const std::vector<ConflictConstraint>& context);

// token label -> polynomials of a weight that stayed ambiguous after
// normalization
std::vector<std::pair<std::string, std::vector<Polynomial>>> detect_conflicts(
    const GammaFunction& g, const std::vector<ConflictConstraint>& context);

struct SymbolicMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<std::optional<Polynomial>>> entries;  // nullopt = -inf
    Region region;

    const std::optional<Polynomial>& at(std::size_t i, std::size_t j) const {
        return entries[i][j];
    }
    friend bool operator==(const SymbolicMatrix& a, const SymbolicMatrix& b);
};

std::vector<SymbolicMatrix> symbolic_extract(const PsadfGraph& g,
                                             const QuasiStaticSchedule& schedule,
                                             const Region& omega);

// convenience: schedule and omega derived from the graph itself
std::vector<SymbolicMatrix> symbolic_extract(const PsadfGraph& g);

maxplus::Matrix evaluate_symbolic(const SymbolicMatrix& m, const Point& point);

}  // namespace psadf
