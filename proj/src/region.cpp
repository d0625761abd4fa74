#include "psadf/region.hpp"

#include <sstream>

namespace psadf {

Region Region::of_graph(const PsadfGraph& g) {
    Region r;
    for (const auto& [p, rp] : g.rate_params) r.rate_bounds[p] = {rp.lo, rp.hi};
    for (const auto& [p, dp] : g.duration_params)
        r.duration_bounds[p] = {dp.lo, dp.hi, dp.integer};
    r.rate_constraints = g.rate_constraints;
    r.duration_constraints = g.duration_constraints;
    return r;
}

Region Region::with_conflict(ConflictConstraint c) const {
    Region r = *this;
    for (const auto& have : r.conflicts)
        if (have == c) return r;
    r.conflicts.push_back(std::move(c));
    return r;
}

bool Region::contains(const std::map<std::string, Rational>& point) const {
    auto value = [&](const std::string& p) -> const Rational* {
        auto it = point.find(p);
        return it == point.end() ? nullptr : &it->second;
    };
    for (const auto& [p, iv] : rate_bounds) {
        const Rational* v = value(p);
        if (!v || !is_integral(*v) || *v < Rational(iv.lo) || *v > Rational(iv.hi)) return false;
    }
    for (const auto& [p, iv] : duration_bounds) {
        const Rational* v = value(p);
        if (!v || *v < iv.lo || *v > iv.hi) return false;
        if (iv.integer && !is_integral(*v)) return false;
    }
    for (const auto& c : rate_constraints)
        if (!c.satisfied(point)) return false;
    for (const auto& c : duration_constraints)
        if (!c.satisfied(point)) return false;
    for (const auto& c : conflicts)
        if (!c.satisfied(point)) return false;
    return true;
}

bool operator==(const Region& a, const Region& b) {
    return a.rate_bounds == b.rate_bounds && a.duration_bounds == b.duration_bounds &&
           a.rate_constraints == b.rate_constraints &&
           a.duration_constraints == b.duration_constraints && a.conflicts == b.conflicts;
}

std::string Region::str() const {
    if (conflicts.empty()) return "unconstrained";
    std::ostringstream os;
    for (std::size_t i = 0; i < conflicts.size(); ++i) {
        if (i) os << " and ";
        os << conflicts[i].str();
    }
    return os.str();
}

}  // namespace psadf
