#include "psadf/optimize.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

#include "psadf/simplex.hpp"

namespace psadf {

namespace {

// ---------------------------------------------------------------- affine
// Linear form over the free continuous-duration coordinates y.
struct Affine {
    std::vector<Rational> c;
    Rational k;

    explicit Affine(std::size_t dim) : c(dim, Rational(0)), k(0) {}
};

void add_scaled(Affine& a, const Affine& b, const Rational& f) {
    for (std::size_t i = 0; i < a.c.size(); ++i) a.c[i] += f * b.c[i];
    a.k += f * b.k;
}

struct YRow {  // c.y <= rhs
    std::vector<Rational> c;
    Rational rhs;
};

// ------------------------------------------------- duration space reduction
// Continuous durations frequently sit on the affine hull of their polytope
// (coupled parameters are written as pairs of opposite inequalities), so the
// effective dimension is found once per region: detect the inequalities that
// hold with equality everywhere, solve them out, and keep the rest as rows
// over the remaining free coordinates.
struct DurationSpace {
    std::vector<std::string> continuous;  // name order
    std::map<std::string, std::size_t> index;
    std::vector<std::size_t> free_cols;
    std::vector<Affine> subst;  // per continuous duration, over the free ones
    std::vector<YRow> static_rows;
    bool infeasible = false;

    std::size_t dim() const { return free_cols.size(); }

    void fill(const std::vector<Rational>& y, Point& out) const {
        for (std::size_t i = 0; i < continuous.size(); ++i) {
            Rational v = subst[i].k;
            for (std::size_t f = 0; f < y.size(); ++f) v += subst[i].c[f] * y[f];
            out[continuous[i]] = v;
        }
    }
};

// Reduces n coordinates constrained by raw rows (c.x <= rhs) to their affine
// hull: finds the implicit equalities, solves them out, and restates the rest
// over the remaining free coordinates.
struct HullReduction {
    bool infeasible = false;
    std::vector<std::size_t> free_cols;
    std::vector<Affine> subst;  // per original coordinate, over the free ones
    std::vector<YRow> static_rows;
};

HullReduction reduce_affine_hull(std::size_t n,
                                 std::vector<std::pair<std::vector<Rational>, Rational>> raw) {
    HullReduction out;
    if (n == 0) {
        for (const auto& [row, rhs] : raw) {
            (void)row;
            if (rhs < 0) out.infeasible = true;
        }
        return out;
    }

    LinearProgram lp;
    lp.vars = n;
    for (const auto& [row, rhs] : raw) lp.add_row(row, rhs);
    lp.objective.assign(n, Rational(0));
    if (solve_lp(lp).status != LpStatus::Optimal) {
        out.infeasible = true;
        return out;
    }

    // g.x <= h is an implicit equality iff min g.x over the polytope equals h
    std::vector<std::pair<std::vector<Rational>, Rational>> eqs;
    for (const auto& [row, rhs] : raw) {
        LinearProgram sub = lp;
        sub.objective = row;
        LpResult res = solve_lp_min(std::move(sub));
        if (res.status == LpStatus::Optimal && res.value == rhs) eqs.emplace_back(row, rhs);
    }

    std::vector<std::size_t> pivot_col;
    std::size_t used = 0;
    for (std::size_t col = 0; col < n && used < eqs.size(); ++col) {
        std::size_t sel = used;
        while (sel < eqs.size() && eqs[sel].first[col] == 0) ++sel;
        if (sel == eqs.size()) continue;
        std::swap(eqs[used], eqs[sel]);
        auto& [prow, prhs] = eqs[used];
        const Rational piv = prow[col];
        for (auto& v : prow) v /= piv;
        prhs /= piv;
        for (std::size_t i = 0; i < eqs.size(); ++i) {
            if (i == used || eqs[i].first[col] == 0) continue;
            const Rational f = eqs[i].first[col];
            for (std::size_t j = 0; j < n; ++j) eqs[i].first[j] -= f * eqs[used].first[j];
            eqs[i].second -= f * eqs[used].second;
        }
        pivot_col.push_back(col);
        ++used;
    }

    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;
    for (std::size_t i = 0; i < n; ++i)
        if (!is_pivot[i]) out.free_cols.push_back(i);

    const std::size_t d = out.free_cols.size();
    std::map<std::size_t, std::size_t> free_pos;
    for (std::size_t f = 0; f < d; ++f) free_pos[out.free_cols[f]] = f;

    out.subst.assign(n, Affine(d));
    for (std::size_t f = 0; f < d; ++f) out.subst[out.free_cols[f]].c[f] = 1;
    for (std::size_t rix = 0; rix < used; ++rix) {
        const std::size_t p = pivot_col[rix];
        Affine a(d);
        a.k = eqs[rix].second;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == p || eqs[rix].first[j] == 0) continue;
            a.c[free_pos.at(j)] -= eqs[rix].first[j];
        }
        out.subst[p] = std::move(a);
    }

    for (const auto& [row, rhs] : raw) {
        Affine a(d);
        for (std::size_t j = 0; j < n; ++j)
            if (row[j] != 0) add_scaled(a, out.subst[j], row[j]);
        bool flat = true;
        for (const auto& v : a.c)
            if (v != 0) flat = false;
        if (flat) continue;  // implied by the solved equalities
        out.static_rows.push_back({std::move(a.c), rhs - a.k});
    }
    return out;
}

DurationSpace build_duration_space(const Region& r) {
    DurationSpace ds;
    for (const auto& [p, iv] : r.duration_bounds)
        if (!iv.integer) ds.continuous.push_back(p);
    const std::size_t n = ds.continuous.size();
    for (std::size_t i = 0; i < n; ++i) ds.index[ds.continuous[i]] = i;
    if (n == 0) return ds;

    std::vector<std::pair<std::vector<Rational>, Rational>> raw;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& iv = r.duration_bounds.at(ds.continuous[i]);
        std::vector<Rational> up(n, Rational(0)), down(n, Rational(0));
        up[i] = 1;
        down[i] = -1;
        raw.emplace_back(std::move(up), iv.hi);
        raw.emplace_back(std::move(down), -iv.lo);
    }
    for (const auto& c : r.duration_constraints) {
        bool continuous_only = true;
        for (const auto& [p, f] : c.coeffs) {
            (void)f;
            if (!ds.index.count(p)) continuous_only = false;
        }
        if (!continuous_only) continue;  // joins the per-lattice-point rows
        std::vector<Rational> row(n, Rational(0));
        for (const auto& [p, f] : c.coeffs) row[ds.index.at(p)] = f;
        raw.emplace_back(std::move(row), c.rhs);
    }

    HullReduction hull = reduce_affine_hull(n, std::move(raw));
    ds.infeasible = hull.infeasible;
    ds.free_cols = std::move(hull.free_cols);
    ds.subst = std::move(hull.subst);
    ds.static_rows = std::move(hull.static_rows);
    if (ds.infeasible) {
        ds.subst.assign(n, Affine(0));
        ds.free_cols.clear();
        ds.static_rows.clear();
    }
    return ds;
}

// ---------------------------------------------------------------- lattice
struct LatticeDim {
    std::string name;
    Integer lo, hi;
    bool integer_duration = false;
    bool prunable = false;
};

struct Lattice {
    std::vector<LatticeDim> dims;
    struct Row {
        std::vector<Rational> c;
        Rational rhs;
    };
    std::vector<Row> rows;
    bool empty = false;

    bool rows_ok(const std::vector<Rational>& v) const {
        for (const auto& row : rows) {
            Rational s = 0;
            for (std::size_t j = 0; j < dims.size(); ++j)
                if (row.c[j] != 0) s += row.c[j] * v[j];
            if (s > row.rhs) return false;
        }
        return true;
    }

    // Enumerates every box point that can still satisfy the rows (interval
    // pruning on prefixes). With skip_dominated, a point is not visited when
    // bumping one prunable coordinate stays inside the lattice constraints:
    // the bumped point dominates it. visit returns false to stop the walk.
    bool walk(bool skip_dominated,
              const std::function<bool(const std::vector<Rational>&)>& visit) const;
};

bool Lattice::walk(bool skip_dominated,
                   const std::function<bool(const std::vector<Rational>&)>& visit) const {
    if (empty) return true;
    const std::size_t nd = dims.size();
    std::vector<Rational> v(nd, Rational(0));

    // minimal possible contribution of each still-unassigned suffix, per row
    std::vector<std::vector<Rational>> suffix_min(rows.size(),
                                                  std::vector<Rational>(nd + 1, Rational(0)));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t j = nd; j-- > 0;) {
            const Rational& c = rows[r].c[j];
            Rational contrib = c > 0 ? c * Rational(dims[j].lo) : c * Rational(dims[j].hi);
            suffix_min[r][j] = suffix_min[r][j + 1] + contrib;
        }

    std::vector<std::vector<Rational>> partial(nd + 1,
                                               std::vector<Rational>(rows.size(), Rational(0)));

    bool jump = skip_dominated && nd > 0 && dims.back().prunable;
    for (const auto& row : rows)
        if (jump && row.c[nd - 1] < 0) jump = false;

    auto leaf = [&]() -> bool {
        if (skip_dominated) {
            for (std::size_t k = 0; k < nd; ++k) {
                if (!dims[k].prunable || Integer(numerator(v[k])) >= dims[k].hi) continue;
                v[k] += 1;
                const bool dominated = rows_ok(v);
                v[k] -= 1;
                if (dominated) return true;
            }
        }
        return visit(v);
    };

    std::function<bool(std::size_t)> rec = [&](std::size_t depth) -> bool {
        if (depth == nd) return leaf();
        const LatticeDim& d = dims[depth];
        if (depth + 1 == nd && jump) {
            Integer vmax = d.hi;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                const Rational& c = rows[r].c[depth];
                if (c == 0) {
                    if (partial[depth][r] > rows[r].rhs) return true;
                    continue;
                }
                Rational cap = (rows[r].rhs - partial[depth][r]) / c;
                Integer f = floor_rat(cap);
                if (f < vmax) vmax = f;
            }
            if (vmax < d.lo) return true;
            v[depth] = Rational(vmax);
            return leaf();
        }
        for (Integer val = d.lo; val <= d.hi; ++val) {
            v[depth] = Rational(val);
            bool viable = true;
            for (std::size_t r = 0; r < rows.size() && viable; ++r) {
                partial[depth + 1][r] = partial[depth][r] + rows[r].c[depth] * v[depth];
                if (partial[depth + 1][r] + suffix_min[r][depth + 1] > rows[r].rhs) viable = false;
            }
            if (!viable) continue;
            if (!rec(depth + 1)) return false;
        }
        return true;
    };
    return rec(0);
}

Lattice build_lattice(const Region& r, const DurationSpace& ds, bool prune) {
    Lattice lat;
    for (const auto& [p, iv] : r.rate_bounds) {
        if (iv.lo > iv.hi) lat.empty = true;
        lat.dims.push_back({p, iv.lo, iv.hi, false, false});
    }
    for (const auto& [p, iv] : r.duration_bounds) {
        if (iv.integer) {
            Integer lo = ceil_rat(iv.lo), hi = floor_rat(iv.hi);
            if (lo > hi) lat.empty = true;
            lat.dims.push_back({p, lo, hi, true, false});
        }
    }

    if (prune) {
        bool durations_nonneg = true;
        for (const auto& [p, iv] : r.duration_bounds) {
            (void)p;
            if (iv.lo < 0) durations_nonneg = false;
        }
        for (auto& d : lat.dims) {
            if (!durations_nonneg) break;
            bool ok = true;
            for (const auto& cc : r.conflicts) {
                for (const auto& m : cc.rhs.terms()) {
                    if (m.rate_powers.count(d.name)) ok = false;
                    if (m.duration && *m.duration == d.name) ok = false;
                }
            }
            if (d.integer_duration) {
                // mixed constraints become per-point polytope rows; a
                // positive coefficient there shrinks the polytope as the
                // dimension grows
                for (const auto& c : r.duration_constraints) {
                    bool mixed = false;
                    for (const auto& [p, f] : c.coeffs) {
                        (void)f;
                        if (ds.index.count(p)) mixed = true;
                    }
                    auto it = c.coeffs.find(d.name);
                    if (mixed && it != c.coeffs.end() && it->second > 0) ok = false;
                }
            }
            d.prunable = ok;
        }
        std::stable_partition(lat.dims.begin(), lat.dims.end(),
                              [](const LatticeDim& d) { return !d.prunable; });
    }

    std::map<std::string, std::size_t> at;
    for (std::size_t i = 0; i < lat.dims.size(); ++i) at[lat.dims[i].name] = i;
    auto to_row = [&](const LinearConstraint& c) {
        Lattice::Row row{std::vector<Rational>(lat.dims.size(), Rational(0)), c.rhs};
        for (const auto& [p, f] : c.coeffs) row.c[at.at(p)] = f;
        return row;
    };
    for (const auto& c : r.rate_constraints) lat.rows.push_back(to_row(c));
    for (const auto& c : r.duration_constraints) {
        bool lattice_only = true;
        for (const auto& [p, f] : c.coeffs) {
            (void)f;
            if (!at.count(p)) lattice_only = false;
        }
        if (lattice_only) lat.rows.push_back(to_row(c));
    }
    return lat;
}

// ------------------------------------------------------- per-point solving
struct TermPlan {
    Rational coeff;
    std::size_t shape;
    enum class Dur { None, Lattice, Continuous } dur = Dur::None;
    std::size_t which = 0;  // lattice dim or continuous index
};

struct PolyPlan {
    std::vector<TermPlan> terms;
};

class RegionSolver {
public:
    RegionSolver(const Region& r, const DurationSpace& ds, const Lattice& lat)
        : region_(r), ds_(ds), lat_(lat) {
        for (std::size_t i = 0; i < lat.dims.size(); ++i) dim_at_[lat.dims[i].name] = i;
        for (const auto& cc : r.conflicts)
            conflicts_.emplace_back(compile(cc.lhs), compile(cc.rhs));
        for (const auto& c : r.duration_constraints) {
            bool has_cont = false, has_lat = false;
            for (const auto& [p, f] : c.coeffs) {
                (void)f;
                (ds.index.count(p) ? has_cont : has_lat) = true;
            }
            if (has_cont && has_lat) dynamic_.emplace_back(compile_linear(c), c.rhs);
        }
    }

    PolyPlan compile(const Polynomial& p) {
        PolyPlan plan;
        for (const auto& m : p.terms()) {
            TermPlan t;
            t.coeff = m.coeff;
            t.shape = intern(m.rate_powers);
            if (m.duration) {
                auto cont = ds_.index.find(*m.duration);
                if (cont != ds_.index.end()) {
                    t.dur = TermPlan::Dur::Continuous;
                    t.which = cont->second;
                } else {
                    auto lt = dim_at_.find(*m.duration);
                    if (lt == dim_at_.end())
                        throw AnalysisError("polynomial references undeclared parameter " +
                                            *m.duration);
                    t.dur = TermPlan::Dur::Lattice;
                    t.which = lt->second;
                }
            }
            plan.terms.push_back(std::move(t));
        }
        return plan;
    }

    std::size_t add_objective(const Polynomial& p) {
        objectives_.push_back(compile(p));
        return objectives_.size() - 1;
    }

    // continuous feasibility at one lattice point; fills the cached rows
    bool solve_point(const std::vector<Rational>& v) {
        point_ = &v;
        shape_val_.clear();
        for (const auto& s : shapes_) {
            Rational val = 1;
            for (const auto& [d, e] : s)
                for (int i = 0; i < e; ++i) val *= v[d];
            shape_val_.push_back(std::move(val));
        }

        rows_ = ds_.static_rows;
        for (const auto& [plan, rhs] : dynamic_) {
            Affine a = eval(plan);
            rows_.push_back({std::move(a.c), rhs - a.k});
        }
        for (const auto& [lhs, rhs] : conflicts_) {
            Affine l = eval(lhs), rr = eval(rhs);
            for (std::size_t i = 0; i < rr.c.size(); ++i) rr.c[i] -= l.c[i];
            rows_.push_back({std::move(rr.c), l.k - rr.k});
        }

        const std::size_t d = ds_.dim();
        if (d == 0) {
            for (const auto& row : rows_)
                if (row.rhs < 0) return false;
            return true;
        }
        if (d == 1) {
            ylo_.reset();
            yhi_.reset();
            for (const auto& row : rows_) {
                const Rational& c = row.c[0];
                if (c == 0) {
                    if (row.rhs < 0) return false;
                } else if (c > 0) {
                    Rational b = row.rhs / c;
                    if (!yhi_ || b < *yhi_) yhi_ = std::move(b);
                } else {
                    Rational b = row.rhs / c;
                    if (!ylo_ || b > *ylo_) ylo_ = std::move(b);
                }
            }
            if (!ylo_ || !yhi_) throw AnalysisError("continuous parameter space is unbounded");
            return *ylo_ <= *yhi_;
        }
        LinearProgram lp = as_lp();
        lp.objective.assign(d, Rational(0));
        LpResult res = solve_lp(lp);
        if (res.status != LpStatus::Optimal) return false;
        feas_y_ = std::move(res.point);
        return true;
    }

    std::vector<Rational> witness_y() const {
        switch (ds_.dim()) {
            case 0: return {};
            case 1: return {*ylo_};
            default: return feas_y_;
        }
    }

    // exact maximum of one registered objective at the current lattice point
    std::pair<Rational, std::vector<Rational>> maximize_obj(std::size_t i) const {
        const Affine o = eval(objectives_[i]);
        switch (ds_.dim()) {
            case 0:
                return {o.k, {}};
            case 1: {
                const Rational& y = o.c[0] > 0 ? *yhi_ : *ylo_;
                return {o.k + o.c[0] * y, {y}};
            }
            default: {
                LinearProgram lp = as_lp();
                lp.objective = o.c;
                LpResult res = solve_lp(lp);
                if (res.status == LpStatus::Unbounded)
                    throw AnalysisError("continuous parameter space is unbounded");
                assert(res.status == LpStatus::Optimal);
                return {res.value + o.k, std::move(res.point)};
            }
        }
    }

    Point assemble(const std::vector<Rational>& v, const std::vector<Rational>& y) const {
        Point pt;
        for (std::size_t i = 0; i < lat_.dims.size(); ++i) pt[lat_.dims[i].name] = v[i];
        ds_.fill(y, pt);
        return pt;
    }

private:
    Affine eval(const PolyPlan& plan) const {
        Affine a(ds_.dim());
        for (const auto& t : plan.terms) {
            Rational base = t.coeff * shape_val_[t.shape];
            switch (t.dur) {
                case TermPlan::Dur::None:
                    a.k += base;
                    break;
                case TermPlan::Dur::Lattice:
                    a.k += base * (*point_)[t.which];
                    break;
                case TermPlan::Dur::Continuous:
                    add_scaled(a, ds_.subst[t.which], base);
                    break;
            }
        }
        return a;
    }

    PolyPlan compile_linear(const LinearConstraint& c) {
        PolyPlan plan;
        for (const auto& [p, f] : c.coeffs) {
            TermPlan t;
            t.coeff = f;
            t.shape = intern({});
            auto cont = ds_.index.find(p);
            if (cont != ds_.index.end()) {
                t.dur = TermPlan::Dur::Continuous;
                t.which = cont->second;
            } else {
                t.dur = TermPlan::Dur::Lattice;
                t.which = dim_at_.at(p);
            }
            plan.terms.push_back(std::move(t));
        }
        return plan;
    }

    std::size_t intern(const std::map<std::string, int>& powers) {
        std::vector<std::pair<std::size_t, int>> s;
        for (const auto& [p, e] : powers) {
            auto it = dim_at_.find(p);
            if (it == dim_at_.end())
                throw AnalysisError("polynomial references undeclared parameter " + p);
            s.emplace_back(it->second, e);
        }
        for (std::size_t i = 0; i < shapes_.size(); ++i)
            if (shapes_[i] == s) return i;
        shapes_.push_back(std::move(s));
        return shapes_.size() - 1;
    }

    LinearProgram as_lp() const {
        LinearProgram lp;
        lp.vars = ds_.dim();
        for (const auto& row : rows_) lp.add_row(row.c, row.rhs);
        return lp;
    }

    const Region& region_;
    const DurationSpace& ds_;
    const Lattice& lat_;
    std::map<std::string, std::size_t> dim_at_;
    std::vector<std::vector<std::pair<std::size_t, int>>> shapes_;
    std::vector<std::pair<PolyPlan, PolyPlan>> conflicts_;
    std::vector<std::pair<PolyPlan, Rational>> dynamic_;
    std::vector<PolyPlan> objectives_;

    const std::vector<Rational>* point_ = nullptr;
    std::vector<Rational> shape_val_;
    std::vector<YRow> rows_;
    std::optional<Rational> ylo_, yhi_;
    std::vector<Rational> feas_y_;
};

// cheap certificate of emptiness: some conflict cannot hold anywhere in the
// boxes (interval arithmetic; coefficients are nonnegative)
bool obviously_empty(const Region& r) {
    auto mono_range = [&](const Monomial& m) -> std::optional<std::pair<Rational, Rational>> {
        Rational lo = m.coeff, hi = m.coeff;
        for (const auto& [p, e] : m.rate_powers) {
            auto it = r.rate_bounds.find(p);
            if (it == r.rate_bounds.end()) return std::nullopt;
            for (int i = 0; i < e; ++i) {
                lo *= Rational(it->second.lo);
                hi *= Rational(it->second.hi);
            }
        }
        if (m.duration) {
            auto it = r.duration_bounds.find(*m.duration);
            if (it == r.duration_bounds.end()) return std::nullopt;
            if (it->second.lo < 0) return std::nullopt;
            lo *= it->second.lo;
            hi *= it->second.hi;
        }
        return std::make_pair(lo, hi);
    };
    for (const auto& cc : r.conflicts) {
        Rational lhs_hi = 0, rhs_lo = 0;
        bool usable = true;
        for (const auto& m : cc.lhs.terms()) {
            auto b = mono_range(m);
            if (!b) {
                usable = false;
                break;
            }
            lhs_hi += b->second;
        }
        for (const auto& m : cc.rhs.terms()) {
            if (!usable) break;
            auto b = mono_range(m);
            if (!b) {
                usable = false;
                break;
            }
            rhs_lo += b->first;
        }
        if (usable && lhs_hi < rhs_lo) return true;
    }
    return false;
}

// canonical point order: parameter names alphabetically, then value
bool point_less(const Point& a, const Point& b) { return a < b; }

}  // namespace

FeasibilityResult feasible(const Region& r) {
    if (obviously_empty(r)) return {};
    DurationSpace ds = build_duration_space(r);
    if (ds.infeasible) return {};
    Lattice lat = build_lattice(r, ds, /*prune=*/false);
    if (lat.empty) return {};
    RegionSolver solver(r, ds, lat);
    FeasibilityResult out;
    lat.walk(false, [&](const std::vector<Rational>& v) {
        if (!solver.solve_point(v)) return true;
        out.ok = true;
        out.witness = solver.assemble(v, solver.witness_y());
        return false;
    });
    return out;
}

namespace {

std::vector<EntryMaximum> maximize_many(const std::vector<Polynomial>& objs, const Region& r,
                                        const MaximizeOptions& opts) {
    if (obviously_empty(r)) throw AnalysisError("region is empty");
    DurationSpace ds = build_duration_space(r);
    if (ds.infeasible) throw AnalysisError("region is empty");
    Lattice lat = build_lattice(r, ds, opts.prune);
    if (lat.empty) throw AnalysisError("region is empty");
    RegionSolver solver(r, ds, lat);
    for (const auto& o : objs) solver.add_objective(o);

    struct Best {
        bool any = false;
        Rational value;
        Point arg;
    };
    std::vector<Best> best(objs.size());
    bool reachable = false;
    lat.walk(opts.prune, [&](const std::vector<Rational>& v) {
        if (!solver.solve_point(v)) return true;
        reachable = true;
        for (std::size_t i = 0; i < objs.size(); ++i) {
            auto [value, y] = solver.maximize_obj(i);
            Best& b = best[i];
            if (b.any && value < b.value) continue;
            Point pt = solver.assemble(v, y);
            if (!b.any || value > b.value || point_less(pt, b.arg)) {
                b.any = true;
                b.value = std::move(value);
                b.arg = std::move(pt);
            }
        }
        return true;
    });
    if (!reachable) throw AnalysisError("region is empty: no feasible parameter point");

    std::vector<EntryMaximum> out;
    out.reserve(objs.size());
    for (auto& b : best) out.push_back({std::move(b.value), std::move(b.arg)});
    return out;
}

}  // namespace

EntryMaximum maximize_entry(const Polynomial& obj, const Region& r,
                            const MaximizeOptions& opts) {
    return maximize_many({obj}, r, opts)[0];
}

RegionReport maximize_matrix(const SymbolicMatrix& m, const MaximizeOptions& opts) {
    std::map<Polynomial, std::size_t> seen;
    std::vector<Polynomial> objs;
    const std::size_t n = m.labels.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!m.entries[i][j]) continue;
            if (seen.emplace(*m.entries[i][j], objs.size()).second)
                objs.push_back(*m.entries[i][j]);
        }

    RegionReport out;
    out.matrix = m;
    out.maxima = maxplus::Matrix::neg_inf(m.labels);
    if (objs.empty()) {
        if (!feasible(m.region).ok) throw AnalysisError("region is empty");
        return out;
    }
    std::vector<EntryMaximum> res = maximize_many(objs, m.region, opts);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!m.entries[i][j]) continue;
            const EntryMaximum& em = res[seen.at(*m.entries[i][j])];
            out.maxima.at(i, j) = maxplus::Value(em.value);
            out.entries.push_back({i, j, *m.entries[i][j], em.value, em.argmax});
        }
    return out;
}

ThroughputAnalysis worstcase_throughput(const PsadfGraph& g, const MaximizeOptions& opts) {
    ThroughputAnalysis out;
    out.repetition = repetition_vector(g);
    out.schedule = quasi_static_schedule(g);

    std::vector<SymbolicMatrix> mats = symbolic_extract(g);
    std::vector<maxplus::Matrix> maxed;
    for (const auto& m : mats) {
        out.regions.push_back(maximize_matrix(m, opts));
        maxed.push_back(out.regions.back().maxima);
    }
    out.combined = maxplus::elementwise_max(maxed);
    out.mpag = maxplus::build_mpag(out.combined);
    maxplus::CycleMean cm = maxplus::maximum_cycle_mean(out.mpag);
    if (!cm.lambda.finite())
        throw AnalysisError("no cycle: throughput is not bounded by initial tokens");
    out.lambda = cm.lambda.get();
    out.critical_cycle = cm.cycle;
    if (out.lambda <= 0)
        throw AnalysisError("maximum cycle mean is not positive; throughput undefined");
    out.throughput = Rational(1) / out.lambda;
    return out;
}

Point complete_point(const PsadfGraph& g, const Point& partial,
                     std::vector<std::string>* undetermined) {
    Point pt = partial;
    if (undetermined) undetermined->clear();
    std::vector<std::string> missing;
    for (const auto& [p, dp] : g.duration_params) {
        (void)dp;
        if (!pt.count(p)) missing.push_back(p);
    }
    if (missing.empty()) return pt;

    // Only the declared linear couplings pin parameters; boxes are left out so
    // points outside the declared space still complete (bind warns about them).
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < missing.size(); ++i) index[missing[i]] = i;
    const std::size_t n = missing.size();
    std::vector<std::pair<std::vector<Rational>, Rational>> raw;
    for (const auto& c : g.duration_constraints) {
        std::vector<Rational> row(n, Rational(0));
        Rational rhs = c.rhs;
        for (const auto& [p, f] : c.coeffs) {
            auto it = index.find(p);
            if (it != index.end())
                row[it->second] = f;
            else
                rhs -= f * pt.at(p);
        }
        raw.emplace_back(std::move(row), rhs);
    }

    HullReduction hull = reduce_affine_hull(n, std::move(raw));
    if (hull.infeasible)
        throw AnalysisError(
            "no duration assignment satisfies the constraints with the given values");
    for (std::size_t i = 0; i < n; ++i) {
        bool pinned = true;
        for (const auto& v : hull.subst[i].c)
            if (v != 0) pinned = false;
        if (pinned)
            pt[missing[i]] = hull.subst[i].k;
        else if (undetermined)
            undetermined->push_back(missing[i]);
    }
    return pt;
}

std::optional<Point> sample_region(const Region& r, std::mt19937_64& rng, int max_attempts) {
    DurationSpace ds = build_duration_space(r);
    if (ds.infeasible) return std::nullopt;
    Lattice lat = build_lattice(r, ds, false);
    if (lat.empty) return std::nullopt;

    const std::size_t n = ds.continuous.size();
    auto pick = [&rng](const Integer& lo, const Integer& hi) {
        std::uniform_int_distribution<long long> d(lo.convert_to<long long>(),
                                                   hi.convert_to<long long>());
        return Integer(d(rng));
    };
    std::uniform_int_distribution<int> grid(0, 1000);

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<Rational> v(lat.dims.size());
        for (std::size_t i = 0; i < lat.dims.size(); ++i)
            v[i] = Rational(pick(lat.dims[i].lo, lat.dims[i].hi));
        if (!lat.rows_ok(v)) continue;

        Point pt;
        for (std::size_t i = 0; i < lat.dims.size(); ++i) pt[lat.dims[i].name] = v[i];

        if (n > 0) {
            // Couplings like a = 30*ci make blind box sampling useless: the
            // feasible set has measure zero in the box. Reduce to the affine
            // hull at this lattice point and sample only the free axes.
            std::vector<std::pair<std::vector<Rational>, Rational>> raw;
            for (std::size_t i = 0; i < n; ++i) {
                const auto& iv = r.duration_bounds.at(ds.continuous[i]);
                std::vector<Rational> up(n, Rational(0)), down(n, Rational(0));
                up[i] = 1;
                down[i] = -1;
                raw.emplace_back(std::move(up), iv.hi);
                raw.emplace_back(std::move(down), -iv.lo);
            }
            for (const auto& c : r.duration_constraints) {
                std::vector<Rational> row(n, Rational(0));
                Rational rhs = c.rhs;
                bool any = false;
                for (const auto& [p, f] : c.coeffs) {
                    auto it = ds.index.find(p);
                    if (it != ds.index.end()) {
                        row[it->second] = f;
                        any = true;
                    } else {
                        rhs -= f * pt.at(p);
                    }
                }
                if (any) raw.emplace_back(std::move(row), rhs);
            }

            HullReduction hull = reduce_affine_hull(n, std::move(raw));
            if (hull.infeasible) continue;

            const std::size_t d = hull.free_cols.size();
            std::vector<Rational> y(d);
            for (std::size_t f = 0; f < d; ++f) {
                const auto& iv = r.duration_bounds.at(ds.continuous[hull.free_cols[f]]);
                y[f] = iv.lo + (iv.hi - iv.lo) * Rational(grid(rng), 1000);
            }
            for (std::size_t i = 0; i < n; ++i) {
                Rational val = hull.subst[i].k;
                for (std::size_t f = 0; f < d; ++f)
                    if (hull.subst[i].c[f] != 0) val += hull.subst[i].c[f] * y[f];
                pt[ds.continuous[i]] = val;
            }
        }

        if (r.contains(pt)) return pt;
    }
    return std::nullopt;
}

}  // namespace psadf
