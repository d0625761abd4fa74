#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "psadf/polynomial.hpp"

using namespace psadf;

namespace {

const std::set<std::string> DUR{"a", "b", "c", "d", "e"};

Polynomial poly(const std::string& s) { return parse_polynomial(s, DUR); }

Monomial mono(Rational coeff, std::map<std::string, int> rates,
              std::optional<std::string> dur = std::nullopt) {
    Monomial m;
    m.coeff = std::move(coeff);
    m.rate_powers = std::move(rates);
    m.duration = std::move(dur);
    return m;
}

}  // namespace

TEST_CASE("monomials print coefficient, rates, then duration") {
    CHECK(mono(1, {}, "a").str() == "a");
    CHECK(mono(3, {}, "a").str() == "3*a");
    CHECK(mono(1, {{"p", 1}, {"q", 1}}, "c").str() == "p*q*c");
    CHECK(mono(1, {{"p", 2}}).str() == "p^2");
    CHECK(mono(Rational(5), {}).str() == "5");
    CHECK(mono(Rational(1, 2), {{"s", 1}}, "d").str() == "1/2*s*d");
}

TEST_CASE("sums stay sorted and merged") {
    Polynomial p = Polynomial::from_monomial(mono(1, {{"s", 1}}, "d")) +
                   Polynomial::from_monomial(mono(1, {}, "a")) +
                   Polynomial::from_monomial(mono(2, {{"s", 1}}, "d"));
    CHECK(p.str() == "a+3*s*d");
    CHECK(p == poly("a+3*s*d"));
    CHECK(poly("a") + poly("b") == poly("b") + poly("a"));
    CHECK((poly("a") + Polynomial()) == poly("a"));
}

TEST_CASE("rate-only terms come before duration terms of equal rates") {
    // raw rate factors sort ahead of the same factors times a duration
    Polynomial p = poly("p*q*c") + poly("p*q");
    CHECK(p.str() == "p*q+p*q*c");
    CHECK(poly("a+s*d").str() == "a+s*d");
    CHECK((poly("e") + poly("p*q*c")).str() == "e+p*q*c");
}

TEST_CASE("scaled time multiplies a firing count into an execution time") {
    TimeExpr t = TimeExpr::param("c");
    RateExpr n = RateExpr::param("p") * RateExpr::param("q");
    CHECK(Polynomial::scaled_time(n, t).str() == "p*q*c");

    TimeExpr mix = TimeExpr::param("a", Rational(2)) + TimeExpr::constant_time(7);
    CHECK(Polynomial::scaled_time(RateExpr::param("s"), mix).str() == "7*s+2*s*a");
    CHECK(Polynomial::scaled_time(RateExpr::constant(3), mix).str() == "21+6*a");
}

TEST_CASE("evaluation is plain arithmetic") {
    std::map<std::string, Rational> pt{{"p", 10}, {"q", 15}, {"s", 100},
                                       {"a", 30}, {"c", 4},  {"d", 3}};
    CHECK(poly("a+s*d").evaluate(pt) == Rational(330));
    CHECK(poly("p*q*c").evaluate(pt) == Rational(600));
    CHECK(Polynomial().evaluate(pt) == Rational(0));
}

TEST_CASE("parse round-trips the printed form") {
    for (const std::string& s :
         {"a", "a+s*d", "s*d", "a+b+p*q*c", "p*q*c", "a+b+e+p*q*c", "e+s*d",
          "e+p*q*c", "a+e+s*d", "7*s+2*s*a", "1/2*p^2", "4+p^3*q"}) {
        CAPTURE(s);
        CHECK(poly(s).str() == s);
    }
    CHECK_THROWS_AS(poly("a+"), std::invalid_argument);
    CHECK_THROWS_AS(poly("a*b"), std::invalid_argument);  // two durations in a term
    CHECK_THROWS_AS(poly(""), std::invalid_argument);
    CHECK_THROWS_AS(poly("p^x"), std::invalid_argument);
}

TEST_CASE("common part of two sums cancels") {
    auto [l, r] = Polynomial::cancel_common(poly("a+b+p*q*c"), poly("a+s*d"));
    CHECK(l.str() == "b+p*q*c");
    CHECK(r.str() == "s*d");
    auto [x, y] = Polynomial::cancel_common(poly("3*a+b"), poly("a+b"));
    CHECK(x.str() == "2*a");
    CHECK(y.is_zero());
    auto [u, v] = Polynomial::cancel_common(poly("a"), poly("a"));
    CHECK(u.is_zero());
    CHECK(v.is_zero());
}

TEST_CASE("conflicts print with the smaller side first") {
    ConflictConstraint c{poly("b+p*q*c"), poly("s*d")};
    CHECK(c.str() == "b+p*q*c >= s*d");
    ConflictConstraint flipped{poly("s*d"), poly("b+p*q*c")};
    CHECK(flipped.str() == "b+p*q*c <= s*d");
    std::map<std::string, Rational> pt{{"p", 10}, {"q", 10}, {"s", 100},
                                       {"b", 20}, {"c", 4},  {"d", 3}};
    CHECK(c.satisfied(pt));        // 420 >= 300
    CHECK(!flipped.satisfied(pt));
}

TEST_CASE("dominance needs every term absorbed") {
    CHECK(Polynomial::dominates(poly("a+s*d"), poly("a")));
    CHECK(Polynomial::dominates(poly("a+s*d"), poly("s*d")));
    CHECK(Polynomial::dominates(poly("3*a"), poly("2*a")));
    CHECK(!Polynomial::dominates(poly("a"), poly("b")));
    CHECK(!Polynomial::dominates(poly("s*d"), poly("d")) == false);  // s >= 1 absorbs
    CHECK(Polynomial::dominates(poly("p*q*c"), poly("p*c")));
    CHECK(!Polynomial::dominates(poly("p*c"), poly("p*q*c")));
    // rates only grow terms, durations can be zero: a cannot absorb b
    CHECK(!Polynomial::dominates(poly("a+b"), poly("a+e")));
    CHECK(Polynomial::dominates(poly("a+b"), poly("a+b")));
}

TEST_CASE("dominance under a context inequality") {
    std::vector<ConflictConstraint> ctx{{poly("b+p*q*c"), poly("s*d")}};
    CHECK(dominates_under(poly("a+b+p*q*c"), poly("a+s*d"), ctx));
    CHECK(!dominates_under(poly("a+s*d"), poly("a+b+p*q*c"), ctx));
    CHECK(!dominates_under(poly("a+s*d"), poly("a+b+p*q*c"), {}));
    std::vector<ConflictConstraint> rev{{poly("s*d"), poly("b+p*q*c")}};
    CHECK(dominates_under(poly("a+s*d"), poly("a+b+p*q*c"), rev));
}

TEST_CASE("weights drop dominated members") {
    Weight w = Weight::from_polynomial(poly("a+s*d"));
    w.merge(Weight::from_polynomial(poly("a")), {});
    CHECK(w.polynomials().size() == 1);
    CHECK(w.str() == "a+s*d");

    Weight incomparable = Weight::from_polynomial(poly("a"));
    incomparable.merge(Weight::from_polynomial(poly("b")), {});
    CHECK(incomparable.polynomials().size() == 2);

    std::vector<ConflictConstraint> ctx{{poly("b+p*q*c"), poly("s*d")}};
    Weight u = Weight::from_polynomial(poly("a+s*d"));
    u.merge(Weight::from_polynomial(poly("a+b+p*q*c")), ctx);
    CHECK(u.polynomials().size() == 1);
    CHECK(u.str() == "a+b+p*q*c");
}

TEST_CASE("weight accumulation shifts every member") {
    Weight w = Weight::from_polynomial(poly("a"));
    w.merge(Weight::from_polynomial(poly("b")), {});
    w.accumulate(poly("e"));
    CHECK(w.str() == "a+e | b+e");
    std::map<std::string, Rational> pt{{"a", 30}, {"b", 20}, {"e", 1}};
    CHECK(w.evaluate(pt) == Rational(31));

    Weight ninf;
    CHECK(ninf.neg_inf());
    CHECK(!ninf.evaluate(pt).has_value());
    ninf.accumulate(poly("a"));
    CHECK(ninf.neg_inf());  // -inf absorbs accumulation
    ninf.merge(Weight::zero(), {});
    CHECK(ninf.evaluate(pt) == Rational(0));
}

TEST_CASE("order relation is total on canonical forms") {
    std::vector<Polynomial> v{poly("s*d"), poly("a"), poly("a+s*d"), poly("p*q*c")};
    std::sort(v.begin(), v.end());
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        CHECK(v[i] < v[i + 1]);
        CHECK(!(v[i + 1] < v[i]));
    }
}

TEST_CASE("random evaluation agrees with term-by-term arithmetic") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> small(1, 9);
    for (int round = 0; round < 50; ++round) {
        Monomial m1 = mono(small(rng), {{"p", small(rng) % 3 + 1}}, "a");
        Monomial m2 = mono(small(rng), {{"q", 1}});
        Polynomial p = Polynomial::from_monomial(m1) + Polynomial::from_monomial(m2);
        std::map<std::string, Rational> pt{{"p", small(rng)}, {"q", small(rng)}, {"a", small(rng)}};
        Rational want = 0;
        for (const auto& t : p.terms()) {
            Rational v = t.coeff;
            for (const auto& [r, pw] : t.rate_powers)
                for (int k = 0; k < pw; ++k) v *= pt.at(r);
            if (t.duration) v *= pt.at(*t.duration);
            want += v;
        }
        CHECK(p.evaluate(pt) == want);
    }
}
