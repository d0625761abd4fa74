#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "psadf/model_io.hpp"
#include "psadf/optimize.hpp"
#include "psadf/simplex.hpp"
#include "psadf/simulate.hpp"

using namespace psadf;

namespace {

PsadfGraph loops_model() {
    static ModelFile mf = load_model(std::string(PSADF_MODEL_DIR) + "/example.psadf");
    return mf.graph;
}

Polynomial poly(const std::string& s) {
    return parse_polynomial(s, {"a", "b", "c", "d", "e", "ci"});
}

}  // namespace

TEST_CASE("simplex maximizes over a bounded polytope") {
    LinearProgram p;
    p.vars = 1;
    p.add_row({1}, 5);
    p.objective = {1};
    auto r = solve_lp(p);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == Rational(5));
    CHECK(r.point[0] == Rational(5));

    LinearProgram q;
    q.vars = 2;
    q.add_row({1, 0}, 3);
    q.add_row({0, 1}, 4);
    q.add_row({1, 1}, 5);
    q.objective = {1, 1};
    r = solve_lp(q);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == Rational(5));
}

TEST_CASE("simplex handles unrestricted variables") {
    // maximize -x subject to -x <= 2: optimum at x = -2
    LinearProgram p;
    p.vars = 1;
    p.add_row({-1}, 2);
    p.objective = {-1};
    auto r = solve_lp(p);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == Rational(2));
    CHECK(r.point[0] == Rational(-2));
}

TEST_CASE("simplex reports infeasible and unbounded programs") {
    LinearProgram p;
    p.vars = 1;
    p.add_row({1}, 1);
    p.add_row({-1}, -3);  // x >= 3 contradicts x <= 1
    p.objective = {1};
    CHECK(solve_lp(p).status == LpStatus::Infeasible);

    LinearProgram u;
    u.vars = 1;
    u.add_row({-1}, 0);  // x >= 0, maximize x
    u.objective = {1};
    CHECK(solve_lp(u).status == LpStatus::Unbounded);
}

TEST_CASE("minimization shares the constraint form") {
    LinearProgram p;
    p.vars = 1;
    p.add_row({-1}, -3);  // x >= 3
    p.objective = {1};
    auto r = solve_lp_min(p);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == Rational(3));
    // exact fractions survive
    LinearProgram f;
    f.vars = 1;
    f.add_row({Rational(3)}, Rational(1));
    f.objective = {1};
    auto fr = solve_lp(f);
    CHECK(fr.value == Rational(1, 3));
}

TEST_CASE("region feasibility finds a contained witness") {
    Region omega = Region::of_graph(loops_model());
    auto f = feasible(omega);
    REQUIRE(f.ok);
    CHECK(omega.contains(f.witness));
}

TEST_CASE("contradictory constraints empty the region") {
    Region r = Region::of_graph(loops_model());
    LinearConstraint lc;
    lc.coeffs["p"] = -1;
    lc.rhs = -3000;  // p >= 3000 against p <= 2000
    r.rate_constraints.push_back(lc);
    CHECK(!feasible(r).ok);

    Region d = Region::of_graph(loops_model());
    LinearConstraint dc;
    dc.coeffs["a"] = 1;
    dc.rhs = 20;  // a <= 20 against box a >= 30
    d.duration_constraints.push_back(dc);
    CHECK(!feasible(d).ok);
    CHECK_THROWS_AS(maximize_entry(poly("a"), d), AnalysisError);
}

TEST_CASE("hand-built region maximizes a single rate") {
    Region r;
    r.rate_bounds["p"] = {10, 2000};
    r.rate_bounds["s"] = {100, 1500};
    LinearConstraint lc;
    lc.coeffs["p"] = 1;
    lc.coeffs["s"] = 1;
    lc.rhs = 1400;
    r.rate_constraints.push_back(lc);

    for (bool prune : {true, false}) {
        auto m = maximize_entry(poly("p"), r, {prune});
        CHECK(m.value == Rational(1300));
        CHECK(m.argmax.at("p") == Rational(1300));
    }
}

TEST_CASE("the dominant loop entry peaks at the documented corner") {
    auto mats = symbolic_extract(loops_model());
    REQUIRE(mats.size() == 2);
    auto m = maximize_entry(poly("p*q*c"), mats[0].region);
    CHECK(m.value == Rational(390000));
    CHECK(m.argmax.at("p") == Rational(1300));
    CHECK(m.argmax.at("q") == Rational(15));
    CHECK(m.argmax.at("s") == Rational(100));
    CHECK(m.argmax.at("ci") == Rational(5));
    CHECK(m.argmax.at("c") == Rational(20));

    // the serial-path region forces 3s >= 20 + 4pq, capping the product
    auto m2 = maximize_entry(poly("p*q*c"), mats[1].region);
    CHECK(m2.value == Rational(19800));
    CHECK(m2.argmax.at("p") == Rational(66));
    CHECK(m2.argmax.at("q") == Rational(15));
}

TEST_CASE("pruned and exhaustive walks agree on random objectives") {
    Region r = Region::of_graph(loops_model());
    r.rate_bounds["p"] = {10, 25};
    r.rate_bounds["q"] = {10, 15};
    r.rate_bounds["s"] = {100, 110};
    std::mt19937 rng(21);
    std::uniform_int_distribution<int> coeff(0, 3);
    const std::vector<std::string> rates{"p", "q", "s"};
    const std::vector<std::string> durs{"a", "b", "c", "d", "e"};
    for (int round = 0; round < 12; ++round) {
        Polynomial obj;
        for (int t = 0; t < 3; ++t) {
            Monomial m;
            m.coeff = coeff(rng) + 1;
            if (coeff(rng)) m.rate_powers[rates[rng() % 3]] = 1;
            if (coeff(rng)) m.duration = durs[rng() % 5];
            obj += Polynomial::from_monomial(m);
        }
        auto fast = maximize_entry(obj, r, {true});
        auto slow = maximize_entry(obj, r, {false});
        CAPTURE(obj.str());
        CHECK(fast.value == slow.value);
        CHECK(r.contains(fast.argmax));
        CHECK(obj.evaluate(fast.argmax) == fast.value);
    }
}

TEST_CASE("matrix maxima deduplicate repeated entries") {
    auto mats = symbolic_extract(loops_model());
    PsadfGraph g = loops_model();
    // shrink to keep the walk cheap
    SymbolicMatrix m = mats[0];
    m.region.rate_bounds["p"] = {10, 12};
    m.region.rate_bounds["s"] = {100, 102};
    RegionReport rep = maximize_matrix(m);
    CHECK(rep.maxima.labels == m.labels);
    // (t5,t1) and (t5,t4) hold the same polynomial, hence the same maximum
    CHECK(rep.maxima.at(4, 0) == rep.maxima.at(4, 3));
    for (const auto& e : rep.entries) {
        CHECK(rep.maxima.at(e.row, e.col) == maxplus::Value(e.value));
        CHECK(e.objective.evaluate(e.argmax) == e.value);
        CHECK(m.region.contains(e.argmax));
    }
    // every finite symbolic entry got a maximum and vice versa
    for (std::size_t i = 0; i < m.labels.size(); ++i)
        for (std::size_t j = 0; j < m.labels.size(); ++j)
            CHECK(m.at(i, j).has_value() == rep.maxima.at(i, j).finite());
}

TEST_CASE("worst case over a small box matches exhaustive simulation") {
    PsadfGraph g = loops_model();
    g.rate_params["p"].lo = 10;
    g.rate_params["p"].hi = 12;
    g.rate_params["q"].hi = 12;
    g.rate_params["s"].hi = 102;

    ThroughputAnalysis an = worstcase_throughput(g);
    CHECK(schedule_string(an.schedule) == "A B^p C^p*q D^s E");

    // every matrix entry is a nonnegative-coefficient polynomial in the
    // durations and all boxes scale with ci, so the entrywise max over the
    // box sits at ci = 5; rates are enumerated exhaustively
    maxplus::Matrix want;
    bool first = true;
    for (int p = 10; p <= 12; ++p)
        for (int q = 10; q <= p; ++q)
            for (int s = 100; s <= 102; ++s) {
                Point pt{{"p", p},   {"q", q},  {"s", s},
                         {"a", 150}, {"b", 100}, {"c", 20},
                         {"d", 15},  {"e", 5},   {"ci", 5}};
                maxplus::Matrix m = extract_numeric_matrix(psadf::bind(g, pt));
                want = first ? m : maxplus::elementwise_max({want, m});
                first = false;
            }
    CHECK(an.combined == want);
    CHECK(maxplus::Value(an.lambda) == maxplus::maximum_cycle_mean(maxplus::build_mpag(want)).lambda);
    CHECK(an.throughput == 1 / an.lambda);
}

TEST_CASE("scaling every duration interval scales the cycle mean") {
    PsadfGraph g = loops_model();
    for (auto& [name, dp] : g.duration_params) {
        dp.lo /= 5;
        dp.hi /= 5;
    }
    ThroughputAnalysis an = worstcase_throughput(g);
    CHECK(an.lambda == Rational(78000));
    CHECK(an.throughput == Rational(1, 78000));
}

TEST_CASE("point completion follows the couplings") {
    PsadfGraph g = loops_model();
    Point partial{{"p", 10}, {"q", 10}, {"s", 100}, {"ci", 1}};
    Point full = complete_point(g, partial);
    CHECK(full.at("a") == Rational(30));
    CHECK(full.at("b") == Rational(20));
    CHECK(full.at("c") == Rational(4));
    CHECK(full.at("d") == Rational(3));
    CHECK(full.at("e") == Rational(1));

    // any single duration pins the rest through ci
    Point via_a = complete_point(g, {{"p", 10}, {"q", 10}, {"s", 100}, {"a", 60}});
    CHECK(via_a.at("ci") == Rational(2));
    CHECK(via_a.at("d") == Rational(6));

    // completion is about the couplings, not the boxes: out-of-range works
    Point big = complete_point(g, {{"p", 10}, {"q", 10}, {"s", 100}, {"ci", 10}});
    CHECK(big.at("a") == Rational(300));

    // contradictory assignment has no completion
    CHECK_THROWS_AS(
        complete_point(g, {{"p", 10}, {"q", 10}, {"s", 100}, {"a", 30}, {"ci", 2}}),
        AnalysisError);
}

TEST_CASE("point completion reports free parameters") {
    PsadfGraph g = loops_model();
    g.duration_constraints.clear();  // nothing pins anything now
    std::vector<std::string> undetermined;
    Point out = complete_point(g, {{"p", 10}, {"q", 10}, {"s", 100}, {"a", 30}},
                               &undetermined);
    CHECK(out.count("a") == 1);
    CHECK(out.count("b") == 0);
    CHECK(undetermined == std::vector<std::string>{"b", "c", "ci", "d", "e"});
}

TEST_CASE("region sampling lands inside and is reproducible") {
    auto mats = symbolic_extract(loops_model());
    for (const auto& m : mats) {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 8; ++i) {
            auto pt = sample_region(m.region, rng);
            REQUIRE(pt.has_value());
            CHECK(m.region.contains(*pt));
        }
        std::mt19937_64 r1(3), r2(3);
        CHECK(sample_region(m.region, r1) == sample_region(m.region, r2));
    }
}

TEST_CASE("sampling an empty region gives up") {
    Region r = Region::of_graph(loops_model());
    LinearConstraint lc;
    lc.coeffs["p"] = -1;
    lc.rhs = -3000;
    r.rate_constraints.push_back(lc);
    std::mt19937_64 rng(1);
    CHECK(!sample_region(r, rng, 50).has_value());
}

TEST_CASE("sampled throughput never beats the worst case") {
    PsadfGraph g = loops_model();
    ThroughputAnalysis an = worstcase_throughput(g);
    CHECK(an.lambda == Rational(390000));
    auto mats = symbolic_extract(g);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 6; ++i) {
        auto pt = sample_region(mats[i % mats.size()].region, rng);
        REQUIRE(pt.has_value());
        auto cm = maxplus::maximum_cycle_mean(
            maxplus::build_mpag(extract_numeric_matrix(psadf::bind(g, *pt))));
        CHECK(cm.lambda.get() <= an.lambda);
    }
}
