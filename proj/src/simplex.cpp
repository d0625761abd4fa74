#include "psadf/simplex.hpp"

#include <cassert>
#include <stdexcept>

namespace psadf {

void LinearProgram::add_row(std::vector<Rational> coeffs, Rational bound) {
    if (coeffs.size() != vars) throw std::invalid_argument("constraint arity mismatch");
    rows.push_back(std::move(coeffs));
    rhs.push_back(std::move(bound));
}

namespace {

// Tableau over columns [u_0..u_{n-1}, v_0..v_{n-1}, slacks, artificials],
// each x_j represented as u_j - v_j so the standard form needs no sign
// analysis of the input.
class Tableau {
public:
    Tableau(const LinearProgram& p) : n_(p.vars), m_(p.rows.size()) {
        cols_ = 2 * n_ + m_;
        for (std::size_t i = 0; i < m_; ++i) {
            std::vector<Rational> row(cols_, Rational(0));
            for (std::size_t j = 0; j < n_; ++j) {
                row[j] = p.rows[i][j];
                row[n_ + j] = -p.rows[i][j];
            }
            row[2 * n_ + i] = 1;  // slack
            rows_.push_back(std::move(row));
            rhs_.push_back(p.rhs[i]);
        }
    }

    bool phase1() {
        basis_.assign(m_, 0);
        std::vector<std::size_t> artificial_rows;
        for (std::size_t i = 0; i < m_; ++i) {
            if (rhs_[i] >= 0) {
                basis_[i] = 2 * n_ + i;
            } else {
                for (auto& c : rows_[i]) c = -c;
                rhs_[i] = -rhs_[i];
                artificial_rows.push_back(i);
            }
        }
        if (artificial_rows.empty()) return true;
        std::size_t first_art = cols_;
        cols_ += artificial_rows.size();
        for (auto& row : rows_) row.resize(cols_, Rational(0));
        for (std::size_t k = 0; k < artificial_rows.size(); ++k) {
            rows_[artificial_rows[k]][first_art + k] = 1;
            basis_[artificial_rows[k]] = first_art + k;
        }
        // maximize -(sum of artificials)
        std::vector<Rational> cost(cols_, Rational(0));
        for (std::size_t k = 0; k < artificial_rows.size(); ++k) cost[first_art + k] = -1;
        set_objective(cost);
        run();
        if (obj_val_ != 0) return false;
        // pivot surviving artificials out; all-zero rows are redundant
        for (std::size_t i = 0; i < m_;) {
            if (basis_[i] < first_art) {
                ++i;
                continue;
            }
            std::size_t j = 0;
            while (j < first_art && rows_[i][j] == 0) ++j;
            if (j < first_art) {
                pivot(i, j);
                ++i;
            } else {
                rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
                rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(i));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
                --m_;
            }
        }
        banned_from_ = first_art;
        return true;
    }

    // true = optimal, false = unbounded
    bool phase2(const std::vector<Rational>& objective) {
        std::vector<Rational> cost(cols_, Rational(0));
        for (std::size_t j = 0; j < n_; ++j) {
            cost[j] = objective[j];
            cost[n_ + j] = -objective[j];
        }
        set_objective(cost);
        return run();
    }

    Rational objective_value() const { return obj_val_; }

    std::vector<Rational> solution() const {
        std::vector<Rational> col_val(cols_, Rational(0));
        for (std::size_t i = 0; i < m_; ++i) col_val[basis_[i]] = rhs_[i];
        std::vector<Rational> x(n_);
        for (std::size_t j = 0; j < n_; ++j) x[j] = col_val[j] - col_val[n_ + j];
        return x;
    }

private:
    void set_objective(const std::vector<Rational>& cost) {
        obj_ = cost;
        obj_val_ = 0;
        for (std::size_t i = 0; i < m_; ++i) {
            const Rational c = cost[basis_[i]];
            if (c == 0) continue;
            for (std::size_t j = 0; j < cols_; ++j) obj_[j] -= c * rows_[i][j];
            obj_val_ += c * rhs_[i];
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        const Rational a = rows_[r][c];
        assert(a != 0);
        for (auto& v : rows_[r]) v /= a;
        rhs_[r] /= a;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r || rows_[i][c] == 0) continue;
            const Rational f = rows_[i][c];
            for (std::size_t j = 0; j < cols_; ++j) rows_[i][j] -= f * rows_[r][j];
            rhs_[i] -= f * rhs_[r];
        }
        if (obj_[c] != 0) {
            const Rational f = obj_[c];
            for (std::size_t j = 0; j < cols_; ++j) obj_[j] -= f * rows_[r][j];
            obj_val_ += f * rhs_[r];
        }
        basis_[r] = c;
    }

    // Bland's rule keeps the walk finite under degeneracy.
    bool run() {
        for (;;) {
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < cols_ && enter == cols_; ++j)
                if (j < banned_from_ && obj_[j] > 0) enter = j;
            if (enter == cols_) return true;
            std::size_t leave = m_;
            Rational best;
            for (std::size_t i = 0; i < m_; ++i) {
                if (rows_[i][enter] <= 0) continue;
                Rational ratio = rhs_[i] / rows_[i][enter];
                if (leave == m_ || ratio < best ||
                    (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m_) return false;
            pivot(leave, enter);
        }
    }

    std::size_t n_, m_, cols_;
    std::size_t banned_from_ = SIZE_MAX;
    std::vector<std::vector<Rational>> rows_;
    std::vector<Rational> rhs_;
    std::vector<std::size_t> basis_;
    std::vector<Rational> obj_;
    Rational obj_val_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& p) {
    if (p.rows.empty()) {
        bool flat = true;
        for (const auto& c : p.objective)
            if (c != 0) flat = false;
        if (!flat) return {LpStatus::Unbounded, 0, {}};
        return {LpStatus::Optimal, 0, std::vector<Rational>(p.vars, Rational(0))};
    }
    Tableau t(p);
    if (!t.phase1()) return {LpStatus::Infeasible, 0, {}};
    if (!t.phase2(p.objective)) return {LpStatus::Unbounded, 0, {}};
    return {LpStatus::Optimal, t.objective_value(), t.solution()};
}

LpResult solve_feasibility(LinearProgram p) {
    p.objective.assign(p.vars, Rational(0));
    return solve_lp(p);
}

LpResult solve_lp_min(LinearProgram p) {
    for (auto& c : p.objective) c = -c;
    LpResult r = solve_lp(p);
    if (r.status == LpStatus::Optimal) r.value = -r.value;
    return r;
}

}  // namespace psadf
