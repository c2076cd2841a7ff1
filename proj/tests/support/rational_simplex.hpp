#pragma once

// Exact-rational tableau simplex, used only as an independent oracle for the
// floating-point solver. Bland's rule with exact comparisons: terminates and
// cannot misjudge optimality. Value-only; slow, so keep instances small.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "interbound/distributions.hpp"
#include "interbound/mu_program.hpp"

namespace testutil {

using Rat = boost::multiprecision::cpp_rational;

struct RationalLp {
    std::size_t num_vars = 0;
    std::vector<std::vector<Rat>> rows;
    std::vector<Rat> rhs;
    std::vector<Rat> objective;
};

enum class RatStatus { Optimal, Infeasible, Unbounded };

struct RatResult {
    RatStatus status;
    Rat value;
};

namespace detail {

class RationalTableau {
  public:
    RationalTableau(const RationalLp& lp)
        : nv_(lp.num_vars), m_(lp.rows.size()) {
        t_.assign(m_, std::vector<Rat>(nv_ + m_ + 1, 0));
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            const bool flip = lp.rhs[i] < 0;
            for (std::size_t j = 0; j < nv_; ++j)
                t_[i][j] = flip ? -lp.rows[i][j] : lp.rows[i][j];
            t_[i][nv_ + i] = 1;
            t_[i].back() = flip ? -lp.rhs[i] : lp.rhs[i];
            basis_[i] = nv_ + i;
        }
    }

    RatStatus optimize(const std::vector<Rat>& cost, std::size_t enter_limit) {
        while (true) {
            std::size_t entering = enter_limit;
            for (std::size_t j = 0; j < enter_limit; ++j) {
                if (is_basic(j)) continue;
                Rat reduced = cost[j];
                for (std::size_t i = 0; i < m_; ++i)
                    reduced -= cost[basis_[i]] * t_[i][j];
                if (reduced < 0) {
                    entering = j;
                    break;
                }
            }
            if (entering == enter_limit) return RatStatus::Optimal;

            std::size_t leave = m_;
            Rat best_ratio = 0;
            for (std::size_t i = 0; i < m_; ++i) {
                if (t_[i][entering] <= 0) continue;
                const Rat ratio = t_[i].back() / t_[i][entering];
                if (leave == m_ || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == m_) return RatStatus::Unbounded;
            pivot(leave, entering);
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        const Rat p = t_[row][col];
        for (Rat& v : t_[row]) v /= p;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row) continue;
            const Rat f = t_[i][col];
            if (f == 0) continue;
            for (std::size_t j = 0; j < t_[i].size(); ++j)
                t_[i][j] -= f * t_[row][j];
        }
        basis_[row] = col;
    }

    bool is_basic(std::size_t col) const {
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] == col) return true;
        return false;
    }

    Rat objective_value(const std::vector<Rat>& cost) const {
        Rat v = 0;
        for (std::size_t i = 0; i < m_; ++i) v += cost[basis_[i]] * t_[i].back();
        return v;
    }

    // Pivot leftover artificials onto structural columns; rows that cannot
    // pivot are exact linear combinations of the others and are removed.
    void drop_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < nv_) continue;
            std::size_t col = nv_;
            for (std::size_t j = 0; j < nv_; ++j) {
                if (is_basic(j)) continue;
                if (t_[i][j] != 0) {
                    col = j;
                    break;
                }
            }
            if (col < nv_) pivot(i, col);
        }
        for (std::size_t i = m_; i-- > 0;) {
            if (basis_[i] < nv_) continue;
            t_.erase(t_.begin() + static_cast<long>(i));
            basis_.erase(basis_.begin() + static_cast<long>(i));
            --m_;
        }
    }

    std::size_t nv_;
    std::size_t m_;
    std::vector<std::vector<Rat>> t_;
    std::vector<std::size_t> basis_;
};

}  // namespace detail

// Exact mirror of build_mu_program: doubles convert to rationals exactly, so
// both solvers optimize the identical program.
inline RationalLp build_rational_mu_program(const interbound::ObservedJoint& pi,
                                            const interbound::LatentJoint& mu,
                                            const interbound::ObjectiveMatrix& l) {
    const std::size_t n = pi.n(), k = mu.k();
    std::vector<Rat> mu_u(k, 0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t u = 0; u < k; ++u) mu_u[u] += Rat(mu.at(x, u));

    RationalLp lp;
    lp.num_vars = n * n * k;
    lp.objective.assign(lp.num_vars, 0);
    const auto col = [&](std::size_t x, std::size_t z, std::size_t u) {
        return (x * n + z) * k + u;
    };
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t z = 0; z < n; ++z)
            for (std::size_t u = 0; u < k; ++u)
                lp.objective[col(x, z, u)] = Rat(l.at(x, z)) * mu_u[u];
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t u = 0; u < k; ++u) {
            std::vector<Rat> row(lp.num_vars, 0);
            for (std::size_t z = 0; z < n; ++z) row[col(x, z, u)] = 1;
            lp.rows.push_back(std::move(row));
            lp.rhs.emplace_back(1);
        }
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t z = 0; z < n; ++z) {
            std::vector<Rat> row(lp.num_vars, 0);
            for (std::size_t u = 0; u < k; ++u)
                row[col(x, z, u)] = Rat(mu.at(x, u));
            lp.rows.push_back(std::move(row));
            lp.rhs.emplace_back(Rat(pi.at(x, z)));
        }
    return lp;
}

inline RatResult solve_rational_lp(const RationalLp& lp) {
    detail::RationalTableau tab(lp);
    const std::size_t total = lp.num_vars + lp.rows.size();

    std::vector<Rat> phase1(total, 0);
    for (std::size_t j = lp.num_vars; j < total; ++j) phase1[j] = 1;
    if (tab.optimize(phase1, total) != RatStatus::Optimal)
        throw std::logic_error("rational phase one cannot be unbounded");
    if (tab.objective_value(phase1) != 0) return {RatStatus::Infeasible, 0};
    tab.drop_artificials();

    std::vector<Rat> cost(total, 0);
    for (std::size_t j = 0; j < lp.num_vars; ++j) cost[j] = lp.objective[j];
    const RatStatus status = tab.optimize(cost, lp.num_vars);
    if (status != RatStatus::Optimal) return {status, 0};
    return {RatStatus::Optimal, tab.objective_value(cost)};
}

}  // namespace testutil
