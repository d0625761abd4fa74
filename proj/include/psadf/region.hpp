#pragma once

#include <map>
#include <string>
#include <vector>

#include "psadf/graph.hpp"
#include "psadf/polynomial.hpp"

namespace psadf {

// full parameter valuation: rate and duration parameters by name
using Point = std::map<std::string, Rational>;

struct RateInterval {
    Integer lo, hi;
    friend bool operator==(const RateInterval&, const RateInterval&) = default;
};

struct DurationInterval {
    Rational lo, hi;
    bool integer = false;
    friend bool operator==(const DurationInterval&, const DurationInterval&) = default;
};

// A closed subset of parameter space: boxes and linear constraints over the
// declared parameters plus the polynomial constraints accumulated while
// splitting on conflicts. Membership is non-strict everywhere.
struct Region {
    std::map<std::string, RateInterval> rate_bounds;
    std::map<std::string, DurationInterval> duration_bounds;
    std::vector<LinearConstraint> rate_constraints;
    std::vector<LinearConstraint> duration_constraints;
    std::vector<ConflictConstraint> conflicts;

    static Region of_graph(const PsadfGraph& g);

    Region with_conflict(ConflictConstraint c) const;

    // every bound, linear constraint and conflict holds; integer-flagged
    // parameters must take integral values
    bool contains(const std::map<std::string, Rational>& point) const;

    friend bool operator==(const Region& a, const Region& b);

    // the conflict constraints only; the boxes are the model's and identical
    // across the regions of one extraction
    std::string str() const;
};

}  // namespace psadf
