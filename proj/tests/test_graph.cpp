#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "psadf/graph.hpp"
#include "psadf/model_io.hpp"

using namespace psadf;

namespace {

PsadfGraph two_actor(int prod, int cons) {
    PsadfGraph g;
    g.name = "pair";
    g.actor_order = {"A", "B"};
    g.exec_times["A"] = TimeExpr::constant_time(1);
    g.exec_times["B"] = TimeExpr::constant_time(2);
    Channel ch;
    ch.src = "A";
    ch.dst = "B";
    ch.production = RateExpr::constant(prod);
    ch.consumption = RateExpr::constant(cons);
    g.channels.push_back(ch);
    return g;
}

PsadfGraph loops_model() {
    static ModelFile mf = load_model(std::string(PSADF_MODEL_DIR) + "/example.psadf");
    return mf.graph;
}

}  // namespace

TEST_CASE("validate accepts a plain two-actor graph") {
    CHECK(validate(two_actor(2, 3)).empty());
}

TEST_CASE("validate reports unknown endpoints and bad bounds") {
    PsadfGraph g = two_actor(1, 1);
    g.channels[0].dst = "Z";
    RateParam rp;
    rp.lo = 5;
    rp.hi = 2;
    g.rate_params["p"] = rp;
    DurationParam dp;
    dp.lo = 3;
    dp.hi = 1;
    g.duration_params["d"] = dp;
    auto diags = validate(g);
    auto has = [&](const std::string& needle) {
        return std::any_of(diags.begin(), diags.end(), [&](const std::string& d) {
            return d.find(needle) != std::string::npos;
        });
    };
    CHECK(has("unknown consumer"));
    CHECK(has("rate parameter p"));
    CHECK(has("duration parameter d"));
}

TEST_CASE("validate reports undeclared parameters") {
    PsadfGraph g = two_actor(1, 1);
    g.channels[0].production = RateExpr::param("p");  // never declared
    g.exec_times["A"] = TimeExpr::param("dur");       // never declared
    auto diags = validate(g);
    REQUIRE(!diags.empty());
    bool rate_hit = false, dur_hit = false;
    for (const auto& d : diags) {
        if (d.find("undeclared rate parameter p") != std::string::npos) rate_hit = true;
        if (d.find("undeclared duration parameter dur") != std::string::npos) dur_hit = true;
    }
    CHECK(rate_hit);
    CHECK(dur_hit);
}

TEST_CASE("validate rejects mismatched self-loops") {
    PsadfGraph g = two_actor(1, 1);
    Channel self;
    self.src = self.dst = "A";
    self.production = RateExpr::constant(2);
    self.consumption = RateExpr::constant(2);
    self.initial_tokens = 1;  // must equal the rate
    g.channels.push_back(self);
    auto diags = validate(g);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].find("initial tokens must equal") != std::string::npos);
}

TEST_CASE("repetition vector of a constant-rate pair") {
    auto rv = repetition_vector(two_actor(2, 3));
    CHECK(rv.at("A") == RateExpr::constant(3));
    CHECK(rv.at("B") == RateExpr::constant(2));
}

TEST_CASE("inconsistent balance equations throw") {
    PsadfGraph g = two_actor(2, 3);
    Channel ch;
    ch.src = "A";
    ch.dst = "B";
    ch.production = RateExpr::constant(1);
    ch.consumption = RateExpr::constant(1);
    g.channels.push_back(ch);
    CHECK_THROWS_WITH_AS(repetition_vector(g),
                         doctest::Contains("not consistent"), ModelError);
}

TEST_CASE("repetition vector of the parametric loops model") {
    PsadfGraph g = loops_model();
    auto rv = repetition_vector(g);
    CHECK(rv.at("A") == RateExpr::constant(1));
    CHECK(rv.at("B") == RateExpr::param("p"));
    CHECK(rv.at("C") == RateExpr::param("p") * RateExpr::param("q"));
    CHECK(rv.at("D") == RateExpr::param("s"));
    CHECK(rv.at("E") == RateExpr::constant(1));
}

TEST_CASE("schedule of the parametric loops model") {
    auto sched = quasi_static_schedule(loops_model());
    CHECK(schedule_string(sched) == "A B^p C^p*q D^s E");
}

TEST_CASE("schedule breaks topological ties by actor name") {
    // diamond: S feeds X and Y, both feed T; X and Y are incomparable
    PsadfGraph g;
    g.actor_order = {"S", "Y", "X", "T"};
    for (const auto& a : g.actor_order) g.exec_times[a] = TimeExpr::constant_time(1);
    auto chan = [&](const std::string& s, const std::string& d) {
        Channel c;
        c.src = s;
        c.dst = d;
        c.production = c.consumption = RateExpr::constant(1);
        g.channels.push_back(c);
    };
    chan("S", "X");
    chan("S", "Y");
    chan("X", "T");
    chan("Y", "T");
    CHECK(schedule_string(quasi_static_schedule(g)) == "S X Y T");
}

TEST_CASE("dag decomposition drops token-carrying channels and self-loops") {
    PsadfGraph g = two_actor(1, 1);
    Channel self;
    self.src = self.dst = "A";
    self.production = self.consumption = RateExpr::constant(1);
    self.initial_tokens = 1;
    g.channels.push_back(self);
    Channel back;
    back.src = "B";
    back.dst = "A";
    back.production = back.consumption = RateExpr::constant(1);
    back.initial_tokens = 2;
    g.channels.push_back(back);

    auto dec = dag_decompose(g);
    CHECK(dec.dag_channels == std::vector<std::size_t>{0});
    CHECK(dec.removed_channels == std::vector<std::size_t>{1, 2});
    CHECK(dec.topo_order == std::vector<std::string>{"A", "B"});
}

TEST_CASE("token labels follow channel order, oldest first") {
    PsadfGraph g = two_actor(1, 1);
    g.channels[0].initial_tokens = 2;
    Channel back;
    back.src = "B";
    back.dst = "A";
    back.production = back.consumption = RateExpr::constant(1);
    back.initial_tokens = 1;
    g.channels.push_back(back);
    CHECK(g.token_labels() == std::vector<std::string>{"t1", "t2", "t3"});
    auto toks = g.tokens();
    REQUIRE(toks.size() == 3);
    CHECK(toks[0].channel == 0);
    CHECK(toks[0].position == 1);
    CHECK(toks[1].channel == 0);
    CHECK(toks[1].position == 2);
    CHECK(toks[2].channel == 1);
    CHECK(toks[2].position == 1);
}

TEST_CASE("bind substitutes a full point") {
    PsadfGraph g = loops_model();
    std::map<std::string, Rational> pt{{"p", 10}, {"q", 10}, {"s", 100},
                                       {"a", 30}, {"b", 20}, {"c", 4},
                                       {"d", 3},  {"e", 1},  {"ci", 1}};
    ConcreteSdf c = psadf::bind(g, pt);
    CHECK(c.exec_times.at("A") == Rational(30));
    CHECK(c.exec_times.at("C") == Rational(4));
    // A -> B carries p tokens per firing
    bool found = false;
    for (const auto& ch : c.channels)
        if (ch.src == "A" && ch.dst == "B") {
            found = true;
            CHECK(ch.production == Integer(10));
            CHECK(ch.consumption == Integer(1));
        }
    CHECK(found);
    auto rv = repetition_vector(c);
    CHECK(rv.at("C") == RateExpr::constant(100));
}

TEST_CASE("bind warns about values outside the declared boxes") {
    PsadfGraph g = loops_model();
    std::map<std::string, Rational> pt{{"p", 10},  {"q", 10}, {"s", 100},
                                       {"a", 500}, {"b", 20}, {"c", 4},
                                       {"d", 3},   {"e", 1},  {"ci", 1}};
    std::vector<std::string> warnings;
    psadf::bind(g, pt, &warnings);
    REQUIRE(warnings.size() >= 1);
    CHECK(warnings[0].find("a") != std::string::npos);
    CHECK(warnings[0].find("outside") != std::string::npos);
}

TEST_CASE("bind rejects fractional and missing rates") {
    PsadfGraph g = loops_model();
    std::map<std::string, Rational> pt{{"p", Rational(21, 2)}, {"q", 10}, {"s", 100},
                                       {"a", 30}, {"b", 20}, {"c", 4},
                                       {"d", 3},  {"e", 1},  {"ci", 1}};
    CHECK_THROWS_AS(psadf::bind(g, pt), ModelError);
    pt.erase("p");
    CHECK_THROWS_WITH_AS(psadf::bind(g, pt), doctest::Contains("missing value"), ModelError);
}

TEST_CASE("concrete graph round-trips through the parametric view") {
    ConcreteSdf c = to_concrete(load_model(std::string(PSADF_MODEL_DIR) + "/example.sdf"));
    PsadfGraph g = as_psadf(c);
    CHECK(g.is_concrete());
    CHECK(g.actor_order == c.actor_order);
    ConcreteSdf back = psadf::bind(g, {});
    CHECK(back.exec_times == c.exec_times);
    REQUIRE(back.channels.size() == c.channels.size());
    for (std::size_t i = 0; i < c.channels.size(); ++i) {
        CHECK(back.channels[i].src == c.channels[i].src);
        CHECK(back.channels[i].initial_tokens == c.channels[i].initial_tokens);
    }
}
