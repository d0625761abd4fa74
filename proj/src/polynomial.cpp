#include "psadf/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace psadf {

std::string Monomial::str() const {
    std::ostringstream os;
    bool printed = false;
    if (coeff != 1 || (rate_powers.empty() && !duration)) {
        os << pretty_rational(coeff);
        printed = true;
    }
    for (const auto& [p, pw] : rate_powers) {
        if (printed) os << "*";
        os << p;
        if (pw != 1) os << "^" << pw;
        printed = true;
    }
    if (duration) {
        if (printed) os << "*";
        os << *duration;
    }
    return os.str();
}

Polynomial Polynomial::from_monomial(Monomial m) {
    Polynomial p;
    if (m.coeff != 0) p.terms_.push_back(std::move(m));
    return p;
}

Polynomial Polynomial::from_time(const TimeExpr& t) {
    return scaled_time(RateExpr::constant(1), t);
}

Polynomial Polynomial::scaled_time(const RateExpr& count, const TimeExpr& t) {
    Polynomial p;
    for (const auto& [pd, c] : t.coeffs) {
        Monomial m;
        m.coeff = count.coeff * c;
        m.rate_powers = count.powers;
        m.duration = pd;
        if (m.coeff != 0) p.terms_.push_back(std::move(m));
    }
    if (t.constant != 0) {
        Monomial m;
        m.coeff = count.coeff * t.constant;
        m.rate_powers = count.powers;
        if (m.coeff != 0) p.terms_.push_back(std::move(m));
    }
    p.normalize();
    return p;
}

void Polynomial::normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Monomial& a, const Monomial& b) { return shape_less(a, b); });
    std::vector<Monomial> merged;
    for (auto& m : terms_) {
        if (!merged.empty() && shape_equal(merged.back(), m))
            merged.back().coeff += m.coeff;
        else
            merged.push_back(std::move(m));
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const Monomial& m) { return m.coeff == 0; }),
                 merged.end());
    terms_ = std::move(merged);
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    normalize();
    return *this;
}

Rational Polynomial::evaluate(const std::map<std::string, Rational>& point) const {
    Rational v = 0;
    for (const auto& m : terms_) {
        Rational t = m.coeff;
        for (const auto& [p, pw] : m.rate_powers) {
            auto it = point.find(p);
            if (it == point.end()) throw std::invalid_argument("unbound parameter " + p);
            for (int i = 0; i < pw; ++i) t *= it->second;
        }
        if (m.duration) {
            auto it = point.find(*m.duration);
            if (it == point.end()) throw std::invalid_argument("unbound parameter " + *m.duration);
            t *= it->second;
        }
        v += t;
    }
    return v;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (!shape_equal(a.terms_[i], b.terms_[i]) || a.terms_[i].coeff != b.terms_[i].coeff)
            return false;
    return true;
}

bool operator<(const Polynomial& a, const Polynomial& b) {
    for (std::size_t i = 0; i < std::min(a.terms_.size(), b.terms_.size()); ++i) {
        if (shape_less(a.terms_[i], b.terms_[i])) return true;
        if (shape_less(b.terms_[i], a.terms_[i])) return false;
        if (a.terms_[i].coeff != b.terms_[i].coeff) return a.terms_[i].coeff < b.terms_[i].coeff;
    }
    return a.terms_.size() < b.terms_.size();
}

std::pair<Polynomial, Polynomial> Polynomial::cancel_common(const Polynomial& a,
                                                            const Polynomial& b) {
    Polynomial ra, rb;
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() && j < b.terms_.size()) {
        if (shape_equal(a.terms_[i], b.terms_[j])) {
            Rational common = std::min(a.terms_[i].coeff, b.terms_[j].coeff);
            Monomial ma = a.terms_[i], mb = b.terms_[j];
            ma.coeff -= common;
            mb.coeff -= common;
            if (ma.coeff != 0) ra.terms_.push_back(std::move(ma));
            if (mb.coeff != 0) rb.terms_.push_back(std::move(mb));
            ++i, ++j;
        } else if (shape_less(a.terms_[i], b.terms_[j])) {
            ra.terms_.push_back(a.terms_[i++]);
        } else {
            rb.terms_.push_back(b.terms_[j++]);
        }
    }
    while (i < a.terms_.size()) ra.terms_.push_back(a.terms_[i++]);
    while (j < b.terms_.size()) rb.terms_.push_back(b.terms_[j++]);
    return {std::move(ra), std::move(rb)};
}

bool Polynomial::dominates(const Polynomial& a, const Polynomial& b) {
    auto [ra, rb] = cancel_common(a, b);
    if (rb.terms_.empty()) return true;
    // Try to absorb every residual term of b into a residual term of a with
    // componentwise-larger rate exponents (rates are >= 1) and the same
    // duration factor. Greedy over the canonical order is deterministic.
    std::vector<Rational> budget;
    for (const auto& m : ra.terms_) budget.push_back(m.coeff);
    for (const auto& need : rb.terms_) {
        Rational remaining = need.coeff;
        for (std::size_t k = 0; k < ra.terms_.size() && remaining > 0; ++k) {
            if (budget[k] == 0) continue;
            const Monomial& have = ra.terms_[k];
            if (have.duration != need.duration) continue;
            bool covers = true;
            for (const auto& [p, pw] : need.rate_powers) {
                auto it = have.rate_powers.find(p);
                if (it == have.rate_powers.end() || it->second < pw) {
                    covers = false;
                    break;
                }
            }
            if (!covers) continue;
            Rational take = std::min(budget[k], remaining);
            budget[k] -= take;
            remaining -= take;
        }
        if (remaining > 0) return false;
    }
    return true;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i) os << "+";
        os << terms_[i].str();
    }
    return os.str();
}

std::string ConflictConstraint::str() const {
    if (lhs < rhs || lhs == rhs) return lhs.str() + " >= " + rhs.str();
    return rhs.str() + " <= " + lhs.str();
}

bool dominates_under(const Polynomial& a, const Polynomial& b,
                     const std::vector<ConflictConstraint>& context) {
    if (Polynomial::dominates(a, b)) return true;
    for (const auto& c : context) {
        // From lhs >= rhs: a >= b holds if (a + rhs) >= (b + lhs) termwise.
        if (Polynomial::dominates(a + c.rhs, b + c.lhs)) return true;
    }
    return false;
}

Weight Weight::from_polynomial(Polynomial p) {
    Weight w;
    w.polys_.push_back(std::move(p));
    return w;
}

void Weight::normalize(const std::vector<ConflictConstraint>& context) {
    std::sort(polys_.begin(), polys_.end());
    polys_.erase(std::unique(polys_.begin(), polys_.end(),
                             [](const Polynomial& a, const Polynomial& b) { return a == b; }),
                 polys_.end());
    std::vector<char> dead(polys_.size(), 0);
    for (std::size_t i = 0; i < polys_.size(); ++i) {
        if (dead[i]) continue;
        for (std::size_t j = 0; j < polys_.size(); ++j) {
            if (i == j || dead[j]) continue;
            if (dominates_under(polys_[i], polys_[j], context)) dead[j] = 1;
        }
    }
    std::vector<Polynomial> kept;
    for (std::size_t i = 0; i < polys_.size(); ++i)
        if (!dead[i]) kept.push_back(std::move(polys_[i]));
    polys_ = std::move(kept);
}

void Weight::merge(const Weight& o, const std::vector<ConflictConstraint>& context) {
    polys_.insert(polys_.end(), o.polys_.begin(), o.polys_.end());
    normalize(context);
}

void Weight::accumulate(const Polynomial& p) {
    for (auto& q : polys_) q += p;
}

std::optional<Rational> Weight::evaluate(const std::map<std::string, Rational>& point) const {
    std::optional<Rational> best;
    for (const auto& p : polys_) {
        Rational v = p.evaluate(point);
        if (!best || *best < v) best = v;
    }
    return best;
}

std::string Weight::str() const {
    if (polys_.empty()) return "-inf";
    std::ostringstream os;
    for (std::size_t i = 0; i < polys_.size(); ++i) {
        if (i) os << " | ";
        os << polys_[i].str();
    }
    return os.str();
}

namespace {

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

Polynomial parse_polynomial(const std::string& text, const std::set<std::string>& durations) {
    auto bad = [&](const std::string& why) {
        throw std::invalid_argument("malformed polynomial '" + text + "': " + why);
    };
    Polynomial out;
    for (const std::string& term : split_on(text, '+')) {
        if (term.empty()) bad("empty term");
        Monomial m;
        m.coeff = 1;
        for (const std::string& factor : split_on(term, '*')) {
            if (factor.empty()) bad("empty factor");
            if (std::isdigit(static_cast<unsigned char>(factor[0]))) {
                auto v = parse_rational(factor);
                if (!v) bad("bad coefficient '" + factor + "'");
                m.coeff *= *v;
                continue;
            }
            auto caret = factor.find('^');
            std::string id = factor.substr(0, caret);
            int e = 1;
            if (caret != std::string::npos) {
                try {
                    e = std::stoi(factor.substr(caret + 1));
                } catch (...) {
                    bad("bad exponent in '" + factor + "'");
                }
                if (e < 1) bad("bad exponent in '" + factor + "'");
            }
            if (durations.count(id)) {
                if (m.duration || e != 1) bad("duration factor must appear once, unexponented");
                m.duration = id;
            } else {
                m.rate_powers[id] += e;
            }
        }
        out += Polynomial::from_monomial(std::move(m));
    }
    return out;
}

}  // namespace psadf
