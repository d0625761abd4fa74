#pragma once

#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "psadf/graph.hpp"
#include "psadf/maxplus.hpp"
#include "psadf/polynomial.hpp"
#include "psadf/region.hpp"
#include "psadf/symbolic.hpp"

namespace psadf {

struct FeasibilityResult {
    bool ok = false;
    Point witness;
};

// Decides emptiness by walking the integer lattice (rate parameters and
// integer durations) and testing the continuous-duration polytope exactly at
// each point; first witness wins.
FeasibilityResult feasible(const Region& r);

struct MaximizeOptions {
    bool prune = true;  // skip lattice points dominated along monotone dimensions
};

struct EntryMaximum {
    Rational value;
    Point argmax;
};

// Exact maximum of a coefficient-nonnegative polynomial over the region.
// Throws AnalysisError when the region is empty.
EntryMaximum maximize_entry(const Polynomial& obj, const Region& r,
                            const MaximizeOptions& opts = {});

struct EntryReport {
    std::size_t row = 0, col = 0;
    Polynomial objective;
    Rational value;
    Point argmax;
};

struct RegionReport {
    SymbolicMatrix matrix;
    maxplus::Matrix maxima;
    std::vector<EntryReport> entries;
};

// Entrywise maxima; repeated polynomial entries are solved once and all
// entries of one matrix share a single lattice walk.
RegionReport maximize_matrix(const SymbolicMatrix& m, const MaximizeOptions& opts = {});

struct ThroughputAnalysis {
    RepetitionVector repetition;
    QuasiStaticSchedule schedule;
    std::vector<RegionReport> regions;
    maxplus::Matrix combined;
    maxplus::Mpag mpag;
    Rational lambda;
    std::vector<std::size_t> critical_cycle;
    Rational throughput;
};

// Full pipeline: symbolic extraction, per-region maximization, elementwise
// max across regions, maximum cycle mean.
ThroughputAnalysis worstcase_throughput(const PsadfGraph& g, const MaximizeOptions& opts = {});

// Fills in duration parameters that the declared linear couplings pin
// uniquely given the assigned ones (e.g. a = 30*ci fixes a once ci is given).
// Parameters that stay free are reported in *undetermined and left out.
Point complete_point(const PsadfGraph& g, const Point& partial,
                     std::vector<std::string>* undetermined = nullptr);

// Draws a uniform-ish point of the region: integer coordinates by rejection,
// continuous durations on their affine hull (couplings leave the naive box
// acceptance probability at zero). Returns nullopt when no point was found
// within max_attempts.
std::optional<Point> sample_region(const Region& r, std::mt19937_64& rng,
                                   int max_attempts = 10000);

struct AnalysisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace psadf
