#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "psadf/expr.hpp"
#include "psadf/rational.hpp"

namespace psadf {

// One elapsed-time term: coeff * (product of rate parameters) * [duration].
// Duration degree is at most one; the rate part is a plain monomial. All
// coefficients are nonnegative, so terms never decrease when a parameter
// grows.
struct Monomial {
    Rational coeff;
    std::map<std::string, int> rate_powers;
    std::optional<std::string> duration;

    // Ordering ignores the coefficient: it identifies the term shape.
    friend bool shape_less(const Monomial& a, const Monomial& b) {
        if (a.rate_powers != b.rate_powers) return a.rate_powers < b.rate_powers;
        if (a.duration.has_value() != b.duration.has_value()) return !a.duration.has_value();
        return a.duration < b.duration;
    }
    friend bool shape_equal(const Monomial& a, const Monomial& b) {
        return a.rate_powers == b.rate_powers && a.duration == b.duration;
    }

    std::string str() const;
};

// Conventional sum of monomials; as a max-plus quantity it is the "product"
// (time accumulation) of its factors. Kept in canonical sorted-merged form.
class Polynomial {
public:
    Polynomial() = default;  // zero
    static Polynomial from_monomial(Monomial m);
    static Polynomial from_time(const TimeExpr& t);
    // count * t, the accumulated execution time of `count` firings.
    static Polynomial scaled_time(const RateExpr& count, const TimeExpr& t);

    const std::vector<Monomial>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Polynomial& operator+=(const Polynomial& o);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }

    Rational evaluate(const std::map<std::string, Rational>& point) const;

    friend bool operator==(const Polynomial& a, const Polynomial& b);
    friend bool operator<(const Polynomial& a, const Polynomial& b);

    // Removes the shared part of two sums (used to state conflicts in their
    // smallest form): returns {a - common, b - common}.
    static std::pair<Polynomial, Polynomial> cancel_common(const Polynomial& a,
                                                           const Polynomial& b);

    // Sufficient test for a >= b at every point with rates >= 1 and durations
    // >= 0: coefficientwise comparison plus absorption of each residual term
    // of b into a term of a with componentwise-larger rate exponents.
    static bool dominates(const Polynomial& a, const Polynomial& b);

    std::string str() const;

private:
    std::vector<Monomial> terms_;
    void normalize();
};

// lhs >= rhs, with disjoint supports after cancellation.
struct ConflictConstraint {
    Polynomial lhs, rhs;

    bool satisfied(const std::map<std::string, Rational>& point) const {
        return lhs.evaluate(point) >= rhs.evaluate(point);
    }
    friend bool operator==(const ConflictConstraint& a, const ConflictConstraint& b) {
        return a.lhs == b.lhs && a.rhs == b.rhs;
    }
    friend bool operator<(const ConflictConstraint& a, const ConflictConstraint& b) {
        if (!(a.lhs == b.lhs)) return a.lhs < b.lhs;
        return a.rhs < b.rhs;
    }
    // Prints with the canonically smaller polynomial on the left.
    std::string str() const;
};

// Max of finitely many polynomials; empty set is -inf. Values stay normalized
// against a constraint context: provably dominated members are dropped.
class Weight {
public:
    Weight() = default;  // -inf
    static Weight from_polynomial(Polynomial p);
    static Weight zero() { return from_polynomial(Polynomial()); }  // elapsed 0

    bool neg_inf() const { return polys_.empty(); }
    const std::vector<Polynomial>& polynomials() const { return polys_; }

    // max with another weight, then normalization under the given constraints.
    void merge(const Weight& o, const std::vector<ConflictConstraint>& context);
    // adds p to every member (time accumulation).
    void accumulate(const Polynomial& p);
    void normalize(const std::vector<ConflictConstraint>& context);

    // nullopt = -inf
    std::optional<Rational> evaluate(const std::map<std::string, Rational>& point) const;

    friend bool operator==(const Weight& a, const Weight& b) { return a.polys_ == b.polys_; }

    std::string str() const;

private:
    std::vector<Polynomial> polys_;  // canonically sorted
};

// True when `a >= b` is provable from the constraint context: direct
// coefficient dominance, or dominance after applying one context inequality.
bool dominates_under(const Polynomial& a, const Polynomial& b,
                     const std::vector<ConflictConstraint>& context);

// Inverse of Polynomial::str(). Factors named in `durations` fill the duration
// slot of their term; all other identifiers are rate factors. Throws
// std::invalid_argument on malformed input.
Polynomial parse_polynomial(const std::string& text, const std::set<std::string>& durations);

}  // namespace psadf
