#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "interbound/distributions.hpp"
#include "interbound/errors.hpp"
#include "interbound/simplex.hpp"

namespace interbound {

// Objective weights l[x][z] applied to an interventional matrix:
// L(zeta) = sum_{x,z} l[x][z] * zeta[x][z].
struct ObjectiveMatrix {
    std::size_t n = 0;
    std::vector<double> data;  // [x][z]

    ObjectiveMatrix(std::size_t n_, std::vector<double> data_)
        : n(n_), data(std::move(data_)) {
        if (n == 0 || data.size() != n * n)
            throw ShapeError("ObjectiveMatrix: expected n*n entries");
    }

    static ObjectiveMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        return ObjectiveMatrix(
            rows.size(),
            detail::flatten_checked(rows, rows.size(), "ObjectiveMatrix"));
    }

    double at(std::size_t x, std::size_t z) const { return data[x * n + z]; }

    double value_of(const ConditionalMatrix& zeta) const {
        if (zeta.n() != n) throw ShapeError("ObjectiveMatrix: size mismatch");
        double v = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) v += data[i] * zeta.flat()[i];
        return v;
    }
};

// Dual multipliers of the mu-program: alpha for compatibility rows,
// beta for z-normalization rows. Feasible when
//   mu[x][u] * alpha[x][z] + beta[u][x] <= l[x][z] * mu_U[u]   for all (z,x,u).
struct DualCertificate {
    std::size_t n = 0, k = 0;
    std::vector<double> alpha;  // [x][z]
    std::vector<double> beta;   // [u][x]

    double alpha_at(std::size_t x, std::size_t z) const { return alpha[x * n + z]; }
    double beta_at(std::size_t u, std::size_t x) const { return beta[u * n + x]; }

    double objective(const ObservedJoint& pi) const {
        double v = 0.0;
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t z = 0; z < n; ++z) v += pi.at(x, z) * alpha_at(x, z);
        for (double bv : beta) v += bv;
        return v;
    }

    double feasibility_residual(const LatentJoint& mu,
                                const ObjectiveMatrix& l) const {
        const std::vector<double> mu_u = mu.marginal_u();
        double worst = 0.0;
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t z = 0; z < n; ++z)
                for (std::size_t u = 0; u < k; ++u) {
                    double slack = l.at(x, z) * mu_u[u] -
                                   mu.at(x, u) * alpha_at(x, z) - beta_at(u, x);
                    worst = std::max(worst, -slack);
                }
        return worst;
    }
};

namespace detail {

inline std::size_t mu_col(std::size_t x, std::size_t z, std::size_t u,
                          std::size_t n, std::size_t k) {
    return (x * n + z) * k + u;
}

inline void require_conforming(const ObservedJoint& pi, const LatentJoint& mu) {
    if (pi.n() != mu.n())
        throw ShapeError("mu-program: pi and mu sizes disagree");
    const std::vector<double> mu_x = mu.marginal_x();
    for (std::size_t x = 0; x < pi.n(); ++x) {
        if (std::abs(mu_x[x] - pi.marginal_x()[x]) > kSimplexTol)
            throw MarginalMismatch(
                "mu-program: mu_X[" + std::to_string(x) + "] = " +
                std::to_string(mu_x[x]) + " but pi_X = " +
                std::to_string(pi.marginal_x()[x]));
    }
}

}  // namespace detail

// The mu-program: with mu fixed, minimize L over the kernels compatible with
// pi. Variables nu[z][x][u] >= 0 with objective weight l[x][z] * mu_U[u];
// one z-normalization row per (x,u) and one compatibility row per (x,z).
inline LinearProgram build_mu_program(const ObservedJoint& pi,
                                      const LatentJoint& mu,
                                      const ObjectiveMatrix& l) {
    detail::require_conforming(pi, mu);
    if (l.n != pi.n()) throw ShapeError("mu-program: objective size mismatch");
    const std::size_t n = pi.n(), k = mu.k();
    const std::vector<double> mu_u = mu.marginal_u();

    LinearProgram lp;
    lp.num_vars = n * n * k;
    lp.objective.assign(lp.num_vars, 0.0);
    lp.col_names.resize(lp.num_vars);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t z = 0; z < n; ++z)
            for (std::size_t u = 0; u < k; ++u) {
                const std::size_t j = detail::mu_col(x, z, u, n, k);
                lp.objective[j] = l.at(x, z) * mu_u[u];
                lp.col_names[j] = "nu(z=" + std::to_string(z) +
                                  ",x=" + std::to_string(x) +
                                  ",u=" + std::to_string(u) + ")";
            }

    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t u = 0; u < k; ++u) {
            std::vector<double> row(lp.num_vars, 0.0);
            for (std::size_t z = 0; z < n; ++z)
                row[detail::mu_col(x, z, u, n, k)] = 1.0;
            lp.add_row(std::move(row), 1.0,
                       "norm(x=" + std::to_string(x) + ",u=" +
                           std::to_string(u) + ")");
        }
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t z = 0; z < n; ++z) {
            std::vector<double> row(lp.num_vars, 0.0);
            for (std::size_t u = 0; u < k; ++u)
                row[detail::mu_col(x, z, u, n, k)] = mu.at(x, u);
            lp.add_row(std::move(row), pi.at(x, z),
                       "compat(x=" + std::to_string(x) + ",z=" +
                           std::to_string(z) + ")");
        }
    return lp;
}

struct MuProgramSolution {
    double value;
    ResponseKernel kernel;       // an optimal vertex of the feasible polytope
    DualCertificate certificate;
    LpSolution lp;
};

// Solves the mu-program. The program is feasible (the honest kernel) and
// bounded (compact feasible set) for every conforming mu, so any other
// status is a solver defect and raises NumericalFailure.
inline MuProgramSolution solve_mu_program(const ObservedJoint& pi,
                                          const LatentJoint& mu,
                                          const ObjectiveMatrix& l) {
    LinearProgram lp = build_mu_program(pi, mu, l);
    LpSolution sol = solve_lp(lp);
    if (sol.status == LpStatus::Infeasible)
        throw NumericalFailure(
            "mu-program reported infeasible; it is feasible for every "
            "conforming mu, so this indicates a solver defect");
    if (sol.status == LpStatus::Unbounded)
        throw NumericalFailure(
            "mu-program reported unbounded; the feasible set is compact");

    const std::size_t n = pi.n(), k = mu.k();
    std::vector<double> kernel_data(n * n * k);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t z = 0; z < n; ++z)
            for (std::size_t u = 0; u < k; ++u)
                kernel_data[(z * n + x) * k + u] =
                    sol.primal[detail::mu_col(x, z, u, n, k)];

    DualCertificate cert;
    cert.n = n;
    cert.k = k;
    cert.alpha.assign(n * n, 0.0);
    cert.beta.assign(k * n, 0.0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t u = 0; u < k; ++u)
            cert.beta[u * n + x] = sol.dual[x * k + u];
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t z = 0; z < n; ++z)
            cert.alpha[x * n + z] = sol.dual[n * k + x * n + z];

    try {
        ResponseKernel kernel(n, k, std::move(kernel_data));
        return {sol.value, std::move(kernel), std::move(cert), std::move(sol)};
    } catch (const Error& e) {
        throw NumericalFailure(std::string("mu-program: optimal kernel failed "
                                           "validation: ") +
                               e.what());
    }
}

// The reduced dual objective: for any alpha (indexed [x][z]),
//   f(mu, alpha) = sum_{x,z} pi[x][z] alpha[x][z]
//                + sum_{x,u} min_z ( l[x][z] mu_U[u] - mu[x][u] alpha[x][z] ).
// Weak duality: f is a lower bound on the mu-program value for every alpha;
// the maximum over alpha attains it.
inline double dual_objective_f(const ObservedJoint& pi, const LatentJoint& mu,
                               const ObjectiveMatrix& l,
                               const std::vector<double>& alpha) {
    const std::size_t n = pi.n(), k = mu.k();
    if (alpha.size() != n * n)
        throw ShapeError("dual_objective_f: alpha must have n*n entries");
    detail::require_conforming(pi, mu);
    const std::vector<double> mu_u = mu.marginal_u();
    double f = 0.0;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t z = 0; z < n; ++z)
            f += pi.at(x, z) * alpha[x * n + z];
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t u = 0; u < k; ++u) {
            double inner = std::numeric_limits<double>::infinity();
            for (std::size_t z = 0; z < n; ++z)
                inner = std::min(inner, l.at(x, z) * mu_u[u] -
                                            mu.at(x, u) * alpha[x * n + z]);
            f += inner;
        }
    return f;
}

}  // namespace interbound
