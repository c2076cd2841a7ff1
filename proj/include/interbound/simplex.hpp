#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "interbound/errors.hpp"

namespace interbound {

inline constexpr double kLpFeasTol = 1e-8;    // primal/dual feasibility
inline constexpr double kLpGapTol = 1e-7;     // duality gap
inline constexpr double kLpPivotTol = 1e-10;  // pivot / reduced-cost threshold

enum class LpStatus { Optimal, Infeasible, Unbounded };

// Equality-form LP: min c^T x  s.t.  A x = b,  x >= 0.
// Row/column names link back to constraint identity and variable identity.
struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<double> objective;
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    std::vector<std::string> row_names;
    std::vector<std::string> col_names;

    void add_row(std::vector<double> coeffs, double b, std::string name = {}) {
        if (coeffs.size() != num_vars)
            throw ShapeError("LinearProgram: row length != num_vars");
        rows.push_back(std::move(coeffs));
        rhs.push_back(b);
        row_names.push_back(std::move(name));
    }
};

struct LpSolution {
    LpStatus status = LpStatus::Optimal;
    double value = 0.0;
    std::vector<double> primal;  // size num_vars
    std::vector<double> dual;    // one multiplier per equality row
    int iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double duality_gap = 0.0;
};

namespace detail {

// Dense LU with partial pivoting. Solves A x = b and A^T y = c; the material
// here is tiny (tens of rows), so we refactorize per simplex iteration rather
// than maintain an update form.
class DenseLu {
  public:
    explicit DenseLu(std::vector<std::vector<double>> a)
        : lu_(std::move(a)), m_(lu_.size()), pivot_(m_) {
        for (std::size_t col = 0; col < m_; ++col) {
            std::size_t p = col;
            for (std::size_t i = col + 1; i < m_; ++i)
                if (std::abs(lu_[i][col]) > std::abs(lu_[p][col])) p = i;
            pivot_[col] = p;
            if (p != col) std::swap(lu_[p], lu_[col]);
            if (std::abs(lu_[col][col]) < 1e-14) {
                singular_ = true;
                return;
            }
            for (std::size_t i = col + 1; i < m_; ++i) {
                lu_[i][col] /= lu_[col][col];
                const double f = lu_[i][col];
                if (f == 0.0) continue;
                for (std::size_t j = col + 1; j < m_; ++j)
                    lu_[i][j] -= f * lu_[col][j];
            }
        }
    }

    bool singular() const { return singular_; }

    std::vector<double> solve(std::vector<double> b) const {
        for (std::size_t col = 0; col < m_; ++col)
            if (pivot_[col] != col) std::swap(b[col], b[pivot_[col]]);
        for (std::size_t i = 1; i < m_; ++i)
            for (std::size_t j = 0; j < i; ++j) b[i] -= lu_[i][j] * b[j];
        for (std::size_t ii = m_; ii-- > 0;) {
            for (std::size_t j = ii + 1; j < m_; ++j) b[ii] -= lu_[ii][j] * b[j];
            b[ii] /= lu_[ii][ii];
        }
        return b;
    }

    // Solves A^T y = c via U^T w = c, L^T v = w, then undoes the row swaps.
    std::vector<double> solve_transpose(std::vector<double> c) const {
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < i; ++j) c[i] -= lu_[j][i] * c[j];
            c[i] /= lu_[i][i];
        }
        for (std::size_t ii = m_; ii-- > 0;)
            for (std::size_t j = ii + 1; j < m_; ++j) c[ii] -= lu_[j][ii] * c[j];
        for (std::size_t col = m_; col-- > 0;)
            if (pivot_[col] != col) std::swap(c[col], c[pivot_[col]]);
        return c;
    }

  private:
    std::vector<std::vector<double>> lu_;
    std::size_t m_;
    std::vector<std::size_t> pivot_;
    bool singular_ = false;
};

// Working state for one phase of the primal simplex on columns `cols`
// (column-major), with entering restricted to indices < limit.
struct SimplexPhase {
    const std::vector<std::vector<double>>& cols;
    const std::vector<double>& cost;
    const std::vector<double>& b;
    std::vector<std::size_t>& basis;
    std::size_t enter_limit;
    int iterations = 0;

    DenseLu factorize() const {
        const std::size_t m = b.size();
        std::vector<std::vector<double>> bm(m, std::vector<double>(m));
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t i = 0; i < m; ++i) bm[i][p] = cols[basis[p]][i];
        DenseLu lu(std::move(bm));
        if (lu.singular())
            throw NumericalFailure("simplex: singular basis matrix");
        return lu;
    }

    // Bland's rule throughout: lowest-index entering column, lowest basic
    // variable index among minimum-ratio rows. Deterministic and cycle-free.
    LpStatus run(int max_iterations) {
        const std::size_t m = b.size();
        while (true) {
            if (++iterations > max_iterations)
                throw NumericalFailure(
                    "simplex: iteration limit reached (" +
                    std::to_string(max_iterations) + ")");
            DenseLu lu = factorize();
            std::vector<double> xb = lu.solve(b);
            std::vector<double> cb(m);
            for (std::size_t p = 0; p < m; ++p) cb[p] = cost[basis[p]];
            std::vector<double> y = lu.solve_transpose(cb);

            std::vector<char> basic(cols.size(), 0);
            for (std::size_t p = 0; p < m; ++p) basic[basis[p]] = 1;

            std::size_t entering = cols.size();
            for (std::size_t j = 0; j < enter_limit; ++j) {
                if (basic[j]) continue;
                double r = cost[j];
                for (std::size_t i = 0; i < m; ++i) r -= y[i] * cols[j][i];
                if (r < -kLpPivotTol) {
                    entering = j;
                    break;
                }
            }
            if (entering == cols.size()) return LpStatus::Optimal;

            std::vector<double> d = lu.solve(cols[entering]);
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i)
                if (d[i] > kLpPivotTol)
                    best = std::min(best, std::max(xb[i], 0.0) / d[i]);
            if (!std::isfinite(best)) return LpStatus::Unbounded;

            const double tie = best + 1e-12 * (1.0 + std::abs(best));
            std::size_t leave_pos = m;
            for (std::size_t i = 0; i < m; ++i) {
                if (d[i] <= kLpPivotTol) continue;
                if (std::max(xb[i], 0.0) / d[i] > tie) continue;
                if (leave_pos == m || basis[i] < basis[leave_pos]) leave_pos = i;
            }
            basis[leave_pos] = entering;
        }
    }
};

}  // namespace detail

// Two-phase primal simplex with dual extraction from the final basis.
// Redundant equality rows (detected when an artificial variable cannot be
// pivoted out after phase one) are dropped and report dual value 0.
inline LpSolution solve_lp(const LinearProgram& lp) {
    const std::size_t nv = lp.num_vars;
    const std::size_t m = lp.rows.size();
    if (nv == 0) throw ShapeError("solve_lp: no variables");
    if (lp.objective.size() != nv)
        throw ShapeError("solve_lp: objective length != num_vars");
    for (double c : lp.objective)
        if (!std::isfinite(c)) throw Error("solve_lp: non-finite objective");
    for (const auto& row : lp.rows) {
        if (row.size() != nv) throw ShapeError("solve_lp: ragged row");
        for (double a : row)
            if (!std::isfinite(a)) throw Error("solve_lp: non-finite coefficient");
    }

    LpSolution sol;
    if (m == 0) {
        for (double c : lp.objective) {
            if (c < -kLpPivotTol) {
                sol.status = LpStatus::Unbounded;
                return sol;
            }
        }
        sol.primal.assign(nv, 0.0);
        return sol;
    }

    // Column-major copy, rows scaled so b >= 0, plus artificial columns.
    std::vector<double> sign(m, 1.0), b(m);
    for (std::size_t i = 0; i < m; ++i) {
        sign[i] = lp.rhs[i] < 0.0 ? -1.0 : 1.0;
        b[i] = sign[i] * lp.rhs[i];
    }
    std::vector<std::vector<double>> cols(nv + m, std::vector<double>(m, 0.0));
    for (std::size_t j = 0; j < nv; ++j)
        for (std::size_t i = 0; i < m; ++i) cols[j][i] = sign[i] * lp.rows[i][j];
    for (std::size_t i = 0; i < m; ++i) cols[nv + i][i] = 1.0;

    const int max_iter = 2000 + 200 * static_cast<int>(m + nv);

    // Phase one: minimize the sum of artificials from the all-artificial basis.
    std::vector<double> phase1_cost(nv + m, 0.0);
    for (std::size_t i = 0; i < m; ++i) phase1_cost[nv + i] = 1.0;
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = nv + i;

    detail::SimplexPhase phase1{cols, phase1_cost, b, basis, nv + m};
    LpStatus st1 = phase1.run(max_iter);
    sol.iterations = phase1.iterations;
    if (st1 != LpStatus::Optimal)
        throw NumericalFailure("simplex: phase one did not terminate optimal");
    {
        detail::DenseLu lu = phase1.factorize();
        std::vector<double> xb = lu.solve(b);
        double infeas = 0.0;
        for (std::size_t p = 0; p < m; ++p)
            if (basis[p] >= nv) infeas += std::max(xb[p], 0.0);
        if (infeas > kLpFeasTol) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
    }

    // Pivot remaining artificials out; rows where no structural column can
    // enter are linear combinations of the others and get dropped.
    std::vector<char> redundant(m, 0);
    for (std::size_t pos = 0; pos < m; ++pos) {
        if (basis[pos] < nv) continue;
        detail::DenseLu lu = phase1.factorize();
        std::vector<char> basic(nv, 0);
        for (std::size_t p = 0; p < m; ++p)
            if (basis[p] < nv) basic[basis[p]] = 1;
        bool swapped = false;
        for (std::size_t j = 0; j < nv && !swapped; ++j) {
            if (basic[j]) continue;
            std::vector<double> d = lu.solve(cols[j]);
            if (std::abs(d[pos]) > kLpPivotTol) {
                basis[pos] = j;  // degenerate pivot at level zero
                swapped = true;
            }
        }
        if (!swapped) redundant[pos] = 1;
    }

    // Reduced problem on the kept rows with structural columns only.
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < m; ++i)
        if (!redundant[i]) kept.push_back(i);
    const std::size_t mr = kept.size();
    if (mr == 0) {
        // Every row was redundant against b = 0; the origin is optimal iff
        // no negative cost remains, matching the m == 0 case.
        for (double c : lp.objective)
            if (c < -kLpPivotTol) {
                sol.status = LpStatus::Unbounded;
                return sol;
            }
        sol.primal.assign(nv, 0.0);
        sol.dual.assign(m, 0.0);
        return sol;
    }

    std::vector<std::vector<double>> rcols(nv, std::vector<double>(mr));
    std::vector<double> rb(mr);
    for (std::size_t p = 0; p < mr; ++p) {
        rb[p] = b[kept[p]];
        for (std::size_t j = 0; j < nv; ++j) rcols[j][p] = cols[j][kept[p]];
    }
    std::vector<std::size_t> rbasis;
    for (std::size_t p = 0; p < m; ++p)
        if (!redundant[p]) rbasis.push_back(basis[p]);

    detail::SimplexPhase phase2{rcols, lp.objective, rb, rbasis, nv};
    LpStatus st2 = phase2.run(max_iter);
    sol.iterations += phase2.iterations;
    if (st2 == LpStatus::Unbounded) {
        sol.status = LpStatus::Unbounded;
        return sol;
    }

    // Extract primal and dual from the final basis.
    detail::DenseLu lu = phase2.factorize();
    std::vector<double> xb = lu.solve(rb);
    std::vector<double> cb(mr);
    for (std::size_t p = 0; p < mr; ++p) cb[p] = lp.objective[rbasis[p]];
    std::vector<double> y = lu.solve_transpose(cb);

    sol.primal.assign(nv, 0.0);
    for (std::size_t p = 0; p < mr; ++p) sol.primal[rbasis[p]] = xb[p];
    sol.dual.assign(m, 0.0);
    for (std::size_t p = 0; p < mr; ++p) sol.dual[kept[p]] = sign[kept[p]] * y[p];

    sol.value = 0.0;
    for (std::size_t j = 0; j < nv; ++j)
        sol.value += lp.objective[j] * sol.primal[j];

    for (std::size_t i = 0; i < m; ++i) {
        double r = -lp.rhs[i];
        for (std::size_t j = 0; j < nv; ++j) r += lp.rows[i][j] * sol.primal[j];
        sol.primal_residual = std::max(sol.primal_residual, std::abs(r));
    }
    for (std::size_t j = 0; j < nv; ++j) {
        sol.primal_residual = std::max(sol.primal_residual, -sol.primal[j]);
        double yta = 0.0;
        for (std::size_t i = 0; i < m; ++i) yta += sol.dual[i] * lp.rows[i][j];
        sol.dual_residual = std::max(sol.dual_residual, yta - lp.objective[j]);
    }
    double by = 0.0;
    for (std::size_t i = 0; i < m; ++i) by += sol.dual[i] * lp.rhs[i];
    sol.duality_gap = std::abs(sol.value - by);

    if (sol.primal_residual > kLpFeasTol || sol.dual_residual > kLpFeasTol ||
        sol.duality_gap > kLpGapTol) {
        throw NumericalFailure(
            "simplex: solution failed accuracy check (primal " +
            std::to_string(sol.primal_residual) + ", dual " +
            std::to_string(sol.dual_residual) + ", gap " +
            std::to_string(sol.duality_gap) + ")");
    }
    return sol;
}

}  // namespace interbound
