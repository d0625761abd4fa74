#include "psadf/expr.hpp"

#include <sstream>
#include <stdexcept>

namespace psadf {

bool RateExpr::is_model_rate() const {
    if (!is_integral(coeff) || coeff < 1) return false;
    for (const auto& [name, pw] : powers)
        if (pw < 1) return false;
    return true;
}

RateExpr& RateExpr::operator*=(const RateExpr& o) {
    coeff *= o.coeff;
    for (const auto& [name, pw] : o.powers) {
        int& mine = powers[name];
        mine += pw;
        if (mine == 0) powers.erase(name);
    }
    return *this;
}

RateExpr RateExpr::inverse() const {
    if (coeff == 0) throw std::domain_error("inverse of zero monomial");
    RateExpr r;
    r.coeff = Rational(1) / coeff;
    for (const auto& [name, pw] : powers) r.powers[name] = -pw;
    return r;
}

std::optional<RateExpr> RateExpr::divide_exact(const RateExpr& o) const {
    RateExpr q = *this * o.inverse();
    if (!q.is_model_rate()) return std::nullopt;
    return q;
}

Rational RateExpr::evaluate(const std::map<std::string, Rational>& point) const {
    Rational v = coeff;
    for (const auto& [name, pw] : powers) {
        auto it = point.find(name);
        if (it == point.end()) throw std::invalid_argument("unbound rate parameter " + name);
        if (pw < 0) {
            if (it->second == 0) throw std::domain_error("division by zero rate");
            for (int i = 0; i < -pw; ++i) v /= it->second;
        } else {
            for (int i = 0; i < pw; ++i) v *= it->second;
        }
    }
    return v;
}

std::string RateExpr::str() const {
    std::ostringstream os;
    bool printed = false;
    if (powers.empty() || coeff != 1) {
        os << pretty_rational(coeff);
        printed = true;
    }
    for (const auto& [name, pw] : powers) {
        if (printed) os << "*";
        os << name;
        if (pw != 1) os << "^" << pw;
        printed = true;
    }
    return os.str();
}

TimeExpr& TimeExpr::operator+=(const TimeExpr& o) {
    constant += o.constant;
    for (const auto& [name, c] : o.coeffs) {
        Rational& mine = coeffs[name];
        mine += c;
        if (mine == 0) coeffs.erase(name);
    }
    return *this;
}

Rational TimeExpr::evaluate(const std::map<std::string, Rational>& point) const {
    Rational v = constant;
    for (const auto& [name, c] : coeffs) {
        auto it = point.find(name);
        if (it == point.end()) throw std::invalid_argument("unbound duration parameter " + name);
        v += c * it->second;
    }
    return v;
}

std::string TimeExpr::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [name, c] : coeffs) {
        if (!first) os << " + ";
        if (c != 1) os << pretty_rational(c) << "*";
        os << name;
        first = false;
    }
    if (constant != 0) {
        if (!first) os << " + ";
        os << pretty_rational(constant);
    }
    return os.str();
}

}  // namespace psadf
