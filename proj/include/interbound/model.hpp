#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "interbound/distributions.hpp"
#include "interbound/errors.hpp"

namespace interbound {

// A causal model (mu, nu): mu is the joint law of (X, U), nu the response
// kernel of Z given (X, U).
struct CausalModel {
    LatentJoint mu;
    ResponseKernel nu;

    CausalModel(LatentJoint mu_, ResponseKernel nu_)
        : mu(std::move(mu_)), nu(std::move(nu_)) {
        if (mu.n() != nu.n() || mu.k() != nu.k())
            throw ShapeError("CausalModel: mu and nu shapes disagree");
    }

    std::size_t n() const { return mu.n(); }
    std::size_t k() const { return mu.k(); }
};

// pi[x][z] = sum_u mu[x][u] * nu[z][x][u].
inline ObservedJoint observational(const CausalModel& m) {
    const std::size_t n = m.n(), k = m.k();
    std::vector<double> data(n * n, 0.0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t z = 0; z < n; ++z)
            for (std::size_t u = 0; u < k; ++u)
                data[x * n + z] += m.mu.at(x, u) * m.nu.at(z, x, u);
    return ObservedJoint(n, std::move(data));
}

// zeta[x][z] = sum_u mu_U[u] * nu[z][x][u], the law of Z when X is set by
// intervention.
inline ConditionalMatrix interventional(const CausalModel& m) {
    const std::size_t n = m.n(), k = m.k();
    const std::vector<double> mu_u = m.mu.marginal_u();
    std::vector<double> data(n * n, 0.0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t z = 0; z < n; ++z)
            for (std::size_t u = 0; u < k; ++u)
                data[x * n + z] += mu_u[u] * m.nu.at(z, x, u);
    return ConditionalMatrix(n, std::move(data));
}

// eta[x][z] = pi[x][z] / pi_x, the observed conditional of Z given X.
inline ConditionalMatrix honest(const ObservedJoint& pi) {
    const std::size_t n = pi.n();
    const std::vector<double>& px = pi.marginal_x();
    std::vector<double> data(n * n);
    for (std::size_t x = 0; x < n; ++x) {
        if (px[x] <= kSimplexTol) throw ZeroMarginal(x);
        for (std::size_t z = 0; z < n; ++z) data[x * n + z] = pi.at(x, z) / px[x];
    }
    return ConditionalMatrix(n, std::move(data));
}

struct CompatibilityReport {
    double joint_residual;     // max_|pi[x][z] - sum_u mu[x][u] nu[z][x][u]|
    double marginal_residual;  // max_x |sum_u mu[x][u] - pi_x|
    bool compatible;
};

// Reports residuals instead of throwing, so samplers can use it as a
// diagnostic.
inline CompatibilityReport is_compatible(const CausalModel& m,
                                         const ObservedJoint& pi,
                                         double tol = kSimplexTol) {
    if (m.n() != pi.n())
        throw ShapeError("is_compatible: model and pi sizes disagree");
    const std::size_t n = m.n(), k = m.k();
    double joint = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t z = 0; z < n; ++z) {
            double s = 0.0;
            for (std::size_t u = 0; u < k; ++u)
                s += m.mu.at(x, u) * m.nu.at(z, x, u);
            joint = std::max(joint, std::abs(pi.at(x, z) - s));
        }
    }
    double marg = 0.0;
    const std::vector<double> mu_x = m.mu.marginal_x();
    for (std::size_t x = 0; x < n; ++x)
        marg = std::max(marg, std::abs(mu_x[x] - pi.marginal_x()[x]));
    return {joint, marg, joint <= tol && marg <= tol};
}

struct IndependenceReport {
    bool independent;
    double max_row_deviation;  // max over z, x, x' of |zeta[x][z]-zeta[x'][z]|
};

// True iff all rows of zeta agree entrywise within tol.
inline IndependenceReport is_independent_of_x(const ConditionalMatrix& zeta,
                                              double tol = kSimplexTol) {
    const std::size_t n = zeta.n();
    double dev = 0.0;
    for (std::size_t z = 0; z < n; ++z)
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = x + 1; y < n; ++y)
                dev = std::max(dev, std::abs(zeta.at(x, z) - zeta.at(y, z)));
    return {dev <= tol, dev};
}

}  // namespace interbound
