#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <optional>
#include <random>

#include "doctest.h"
#include "psadf/model_io.hpp"
#include "psadf/simulate.hpp"

using namespace psadf;
using maxplus::Matrix;
using maxplus::Value;

namespace {

const std::optional<int> N = std::nullopt;

Matrix mat(const std::vector<std::string>& labels,
           const std::vector<std::vector<std::optional<int>>>& rows) {
    Matrix m = Matrix::neg_inf(labels);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            if (rows[i][j]) m.at(i, j) = Value(Rational(*rows[i][j]));
    return m;
}

ConcreteSdf pipeline() {
    static ModelFile mf = load_model(std::string(PSADF_MODEL_DIR) + "/example.sdf");
    return to_concrete(mf);
}

Matrix pipeline_matrix() {
    return mat({"t1", "t2", "t3", "t4", "t5"}, {{29, N, N, 29, N},
                                                {33, 4, N, 33, N},
                                                {63, N, 30, 63, N},
                                                {N, N, N, N, 0},
                                                {64, 5, 31, 64, N}});
}

}  // namespace

TEST_CASE("timestamp simulation recovers the pipeline matrix") {
    CHECK(extract_numeric_matrix(pipeline()) == pipeline_matrix());
}

TEST_CASE("result does not depend on the firing order") {
    ConcreteSdf g = pipeline();
    Matrix want = pipeline_matrix();
    std::mt19937 rng(99);
    for (int round = 0; round < 20; ++round) {
        auto pick = [&](const std::vector<std::string>& ready) {
            std::uniform_int_distribution<std::size_t> d(0, ready.size() - 1);
            return ready[d(rng)];
        };
        CHECK(extract_numeric_matrix(g, pick) == want);
    }
    // always pick the last ready actor
    auto last = [](const std::vector<std::string>& ready) { return ready.back(); };
    CHECK(extract_numeric_matrix(g, last) == want);
}

TEST_CASE("multirate graph needs several firings per iteration") {
    ConcreteSdf g;
    g.name = "updown";
    g.actor_order = {"A", "B"};
    g.exec_times["A"] = 2;
    g.exec_times["B"] = 5;
    g.channels.push_back({"A", "B", 2, 3, 0});
    g.channels.push_back({"B", "A", 3, 2, 4});
    Matrix m = extract_numeric_matrix(g);
    // four initial tokens on the return channel; A fires 3 times, B twice.
    // The leftover of B's first firing ends up oldest in the queue (done at
    // 7), the second firing's three tokens land at 14, and every output
    // depends on the whole initial marking.
    CHECK(m == mat({"t1", "t2", "t3", "t4"}, {{7, 7, 7, 7},
                                              {14, 14, 14, 14},
                                              {14, 14, 14, 14},
                                              {14, 14, 14, 14}}));
}

TEST_CASE("deadlocked graph reports missing liveness") {
    ConcreteSdf g;
    g.name = "stuck";
    g.actor_order = {"A", "B"};
    g.exec_times["A"] = 1;
    g.exec_times["B"] = 1;
    g.channels.push_back({"A", "B", 1, 1, 0});
    g.channels.push_back({"B", "A", 1, 1, 0});  // no tokens anywhere
    CHECK_THROWS_WITH_AS(extract_numeric_matrix(g), doctest::Contains("not live"),
                         ModelError);
}

TEST_CASE("channel fill must return to its initial state") {
    ConcreteSdf g;
    g.name = "drift";
    g.actor_order = {"A", "B"};
    g.exec_times["A"] = 1;
    g.exec_times["B"] = 1;
    g.channels.push_back({"A", "B", 2, 1, 0});
    g.channels.push_back({"B", "A", 1, 1, 4});
    CHECK_THROWS_AS(extract_numeric_matrix(g), ModelError);
}

TEST_CASE("evolution iterates the matrix") {
    Matrix g = pipeline_matrix();
    maxplus::Vector g0(5, Value::zero());
    maxplus::Vector g1 = evolve(g, g0, 1);
    CHECK(g1 == maxplus::multiply(g, g0));
    maxplus::Vector g3 = evolve(g, g0, 3);
    CHECK(g3 == maxplus::multiply(g, maxplus::multiply(g, g1)));
    CHECK(evolve(g, g0, 0) == g0);
}

TEST_CASE("scenario worst case joins the reachable matrices") {
    ModelFile mf = load_model(std::string(PSADF_MODEL_DIR) + "/example.sadf");
    ScenarioSet s = to_scenarios(mf);
    REQUIRE(s.scenarios.size() == 2);
    CHECK(s.scenarios[0].first == "a");
    CHECK(extract_numeric_matrix(s.scenarios[0].second) == pipeline_matrix());
    Matrix gb = extract_numeric_matrix(s.scenarios[1].second);
    CHECK(gb == mat({"t1", "t2", "t3", "t4", "t5"}, {{28, N, N, 28, N},
                                                     {34, 6, N, 34, N},
                                                     {72, N, 24, 72, N},
                                                     {N, N, N, N, 0},
                                                     {82, 16, 34, 82, N}}));

    std::vector<std::string> notes;
    Matrix wc = sadf_worstcase_matrix(s, &notes);
    CHECK(notes.empty());  // two states, fully connected
    CHECK(wc == mat({"t1", "t2", "t3", "t4", "t5"}, {{29, N, N, 29, N},
                                                     {34, 6, N, 34, N},
                                                     {72, N, 30, 72, N},
                                                     {N, N, N, N, 0},
                                                     {82, 16, 34, 82, N}}));
}

TEST_CASE("unreachable scenarios do not contribute") {
    ModelFile mf = load_model(std::string(PSADF_MODEL_DIR) + "/example.sadf");
    ScenarioSet s = to_scenarios(mf);
    // keep only the self-loop on the initial state: scenario b unreachable,
    // and the reachable sub-machine is still fully connected, so no note
    s.fsm.transitions = {{"qa", "qa"}};
    std::vector<std::string> notes;
    Matrix wc = sadf_worstcase_matrix(s, &notes);
    CHECK(wc == pipeline_matrix());
    CHECK(notes.empty());
}

TEST_CASE("sparse fsm earns an over-approximation note") {
    ModelFile mf = load_model(std::string(PSADF_MODEL_DIR) + "/example.sadf");
    ScenarioSet s = to_scenarios(mf);
    s.fsm.transitions = {{"qa", "qb"}};  // can never return or repeat
    std::vector<std::string> notes;
    Matrix wc = sadf_worstcase_matrix(s, &notes);
    REQUIRE(notes.size() == 1);
    CHECK(notes[0].find("over-approximation") != std::string::npos);
    // still joins both scenarios
    CHECK(wc == sadf_worstcase_matrix(to_scenarios(mf)));
}

TEST_CASE("scenario set sanity errors") {
    ScenarioSet s;
    CHECK_THROWS_AS(sadf_worstcase_matrix(s), ModelError);
    ModelFile mf = load_model(std::string(PSADF_MODEL_DIR) + "/example.sadf");
    s = to_scenarios(mf);
    s.fsm.initial = "nowhere";
    CHECK_THROWS_WITH_AS(sadf_worstcase_matrix(s), doctest::Contains("initial"),
                         ModelError);
}
