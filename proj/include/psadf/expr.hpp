#pragma once

#include <map>
#include <optional>
#include <string>

#include "psadf/rational.hpp"

namespace psadf {

// Monomial over rate parameters: coeff * prod(param^power). Model-level rate
// expressions have a positive integer coefficient and positive powers;
// intermediate results of balance solving may hold rational coefficients and
// negative powers, so the type allows both and the model loader validates.
struct RateExpr {
    Rational coeff = 1;
    std::map<std::string, int> powers;  // no zero powers stored

    static RateExpr constant(Rational c) {
        RateExpr r;
        r.coeff = std::move(c);
        return r;
    }
    static RateExpr param(const std::string& name) {
        RateExpr r;
        r.powers[name] = 1;
        return r;
    }

    bool is_constant() const { return powers.empty(); }
    bool is_one() const { return is_constant() && coeff == 1; }
    // A well-formed model rate: positive integer coefficient, positive powers.
    bool is_model_rate() const;

    RateExpr& operator*=(const RateExpr& o);
    friend RateExpr operator*(RateExpr a, const RateExpr& b) { return a *= b; }
    RateExpr inverse() const;
    // Exact quotient this/o, or nullopt when o does not divide this within
    // integer-coefficient monomials.
    std::optional<RateExpr> divide_exact(const RateExpr& o) const;

    Rational evaluate(const std::map<std::string, Rational>& point) const;

    friend bool operator==(const RateExpr& a, const RateExpr& b) {
        return a.coeff == b.coeff && a.powers == b.powers;
    }
    friend bool operator!=(const RateExpr& a, const RateExpr& b) { return !(a == b); }
    friend bool operator<(const RateExpr& a, const RateExpr& b) {
        if (a.powers != b.powers) return a.powers < b.powers;
        return a.coeff < b.coeff;
    }

    std::string str() const;
};

// Linear form over duration parameters with nonnegative rational coefficients
// plus a nonnegative constant: k1*pd1 + ... + c.
struct TimeExpr {
    std::map<std::string, Rational> coeffs;  // no zero coefficients stored
    Rational constant = 0;

    static TimeExpr constant_time(Rational c) {
        TimeExpr t;
        t.constant = std::move(c);
        return t;
    }
    static TimeExpr param(const std::string& name, Rational coeff = Rational(1)) {
        TimeExpr t;
        if (coeff != 0) t.coeffs[name] = std::move(coeff);
        return t;
    }

    bool is_zero() const { return coeffs.empty() && constant == 0; }
    TimeExpr& operator+=(const TimeExpr& o);
    friend TimeExpr operator+(TimeExpr a, const TimeExpr& b) { return a += b; }

    Rational evaluate(const std::map<std::string, Rational>& point) const;

    friend bool operator==(const TimeExpr& a, const TimeExpr& b) {
        return a.coeffs == b.coeffs && a.constant == b.constant;
    }

    std::string str() const;
};

}  // namespace psadf
