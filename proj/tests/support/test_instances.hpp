#pragma once

// Random-instance generators shared across the test suites. Everything is
// driven by SubstreamRng so failures reproduce from the printed seed.

#include <cstdint>
#include <vector>

#include "interbound/interbound.hpp"

namespace testutil {

using namespace interbound;

// Random observed joint with every row marginal at least min_row.
inline ObservedJoint random_pi(SubstreamRng& rng, std::size_t n,
                               double min_row = 0.05) {
    while (true) {
        ObservedJoint pi(n, rng.dirichlet(n * n, 1.0));
        if (pi.min_marginal() >= min_row) return pi;
    }
}

// Random kernel: one Dirichlet row per (x, u).
inline ResponseKernel random_kernel(SubstreamRng& rng, std::size_t n,
                                    std::size_t k) {
    std::vector<double> data(n * n * k);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t u = 0; u < k; ++u) {
            const std::vector<double> row = rng.dirichlet(n, 1.0);
            for (std::size_t z = 0; z < n; ++z)
                data[(z * n + x) * k + u] = row[z];
        }
    return ResponseKernel(n, k, std::move(data));
}

inline CausalModel random_model(SubstreamRng& rng, std::size_t n,
                                std::size_t k) {
    LatentJoint mu(n, k, rng.dirichlet(n * k, 1.0));
    return CausalModel(std::move(mu), random_kernel(rng, n, k));
}

// Random full objective matrix with entries in [-1, 1].
inline ObjectiveMatrix random_objective(SubstreamRng& rng, std::size_t n) {
    std::vector<double> data(n * n);
    for (double& v : data) v = rng.uniform(-1.0, 1.0);
    return ObjectiveMatrix(n, std::move(data));
}

// An instance whose entries are exact dyadic rationals (denominator 64 for
// pi and mu, 8 for the objective), so the floating-point and exact-rational
// solvers see identical data and mu conforms to pi exactly.
struct DyadicInstance {
    ObservedJoint pi;
    LatentJoint mu;
    ObjectiveMatrix objective;
};

inline DyadicInstance random_dyadic_instance(SubstreamRng& rng, std::size_t n,
                                             std::size_t k) {
    constexpr int kGrain = 64;
    std::vector<int> cells(n * n, 0);
    for (std::size_t x = 0; x < n; ++x) cells[x * n + x] += 1;  // pi_x > 0
    for (int t = 0; t < kGrain - static_cast<int>(n); ++t) {
        const std::size_t c =
            static_cast<std::size_t>(rng.uniform() * static_cast<double>(n * n));
        cells[std::min(c, n * n - 1)] += 1;
    }
    std::vector<double> pi_data(n * n);
    for (std::size_t i = 0; i < n * n; ++i)
        pi_data[i] = static_cast<double>(cells[i]) / kGrain;
    ObservedJoint pi(n, std::move(pi_data));

    std::vector<double> mu_data(n * k, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        int row_units = 0;
        for (std::size_t z = 0; z < n; ++z) row_units += cells[x * n + z];
        std::vector<int> parts(k, 0);
        for (int t = 0; t < row_units; ++t) {
            const std::size_t u =
                static_cast<std::size_t>(rng.uniform() * static_cast<double>(k));
            parts[std::min(u, k - 1)] += 1;
        }
        for (std::size_t u = 0; u < k; ++u)
            mu_data[x * k + u] = static_cast<double>(parts[u]) / kGrain;
    }
    LatentJoint mu(n, k, std::move(mu_data));

    std::vector<double> l(n * n);
    for (double& v : l) {
        const int w = static_cast<int>(rng.uniform() * 17.0) - 8;  // [-8, 8]
        v = static_cast<double>(w) / 8.0;
    }
    return {std::move(pi), std::move(mu), ObjectiveMatrix(n, std::move(l))};
}

}  // namespace testutil
