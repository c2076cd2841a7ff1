#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "interbound/bounds.hpp"
#include "interbound/distributions.hpp"
#include "interbound/errors.hpp"
#include "interbound/model.hpp"
#include "interbound/mu_program.hpp"
#include "interbound/rng.hpp"

namespace interbound {

// How mu is drawn over the conforming slice {mu : mu_X = pi_X}.
//   DirichletInterior: flat Dirichlet rows; stays in the interior.
//   VertexBiased: Dirichlet(0.1) rows with small weights snapped to exact
//   zero; probes the low-entropy support patterns where bounds are tight.
//   The snap matters: the mu-program value is discontinuous at the support
//   boundary, so interior draws can never attain the extreme values.
enum class MuMode { DirichletInterior, VertexBiased };

// How the kernel is drawn within the fixed-mu polytope.
//   HonestPerturbed: random feasible ray from the honest kernel.
//   RandomObjectiveVertex: optimal vertex for a random linear objective.
enum class NuMode { HonestPerturbed, RandomObjectiveVertex };

struct SamplerConfig {
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::size_t k = 1;
    std::size_t count = 1;
    MuMode mu_mode = MuMode::VertexBiased;
    NuMode nu_mode = NuMode::RandomObjectiveVertex;
};

inline constexpr double kVertexSnapTol = 1e-3;

// Draws mu with mu_X = pi_X: row x is pi_x times a Dirichlet vector over u.
inline LatentJoint sample_conforming_mu(const ObservedJoint& pi, std::size_t k,
                                        SubstreamRng& rng,
                                        MuMode mode = MuMode::DirichletInterior) {
    const std::size_t n = pi.n();
    std::vector<double> data(n * k, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        std::vector<double> w =
            rng.dirichlet(k, mode == MuMode::VertexBiased ? 0.1 : 1.0);
        if (mode == MuMode::VertexBiased) {
            double kept = 0.0;
            std::size_t argmax = 0;
            for (std::size_t u = 0; u < k; ++u) {
                if (w[u] > w[argmax]) argmax = u;
                if (w[u] < kVertexSnapTol) w[u] = 0.0;
                kept += w[u];
            }
            if (kept <= 0.0) {
                w.assign(k, 0.0);
                w[argmax] = 1.0;
            } else {
                for (double& v : w) v /= kept;
            }
        }
        for (std::size_t u = 0; u < k; ++u)
            data[x * k + u] = pi.marginal_x()[x] * w[u];
    }
    return LatentJoint(n, k, std::move(data));
}

namespace detail {

// Random feasible step from the honest kernel. For each x independently, a
// Gaussian direction is projected onto the linear constraints (z-sums stay
// fixed, mu-weighted combinations per z stay fixed) and scaled by a uniform
// fraction of the largest step that keeps every entry nonnegative.
inline ResponseKernel honest_perturbed_kernel(const ObservedJoint& pi,
                                              const LatentJoint& mu,
                                              SubstreamRng& rng) {
    const std::size_t n = pi.n(), k = mu.k();
    const ConditionalMatrix eta = honest(pi);
    std::vector<double> nu(n * n * k);
    for (std::size_t z = 0; z < n; ++z)
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t u = 0; u < k; ++u)
                nu[(z * n + x) * k + u] = eta.at(x, z);

    for (std::size_t x = 0; x < n; ++x) {
        std::vector<double> dir(n * k);
        for (double& v : dir) v = rng.normal();
        // Zero the z-sum of every u-column.
        for (std::size_t u = 0; u < k; ++u) {
            double mean = 0.0;
            for (std::size_t z = 0; z < n; ++z) mean += dir[z * k + u];
            mean /= static_cast<double>(n);
            for (std::size_t z = 0; z < n; ++z) dir[z * k + u] -= mean;
        }
        // Zero the mu-weighted combination of every z-row.
        double norm2 = 0.0;
        for (std::size_t u = 0; u < k; ++u) norm2 += mu.at(x, u) * mu.at(x, u);
        if (norm2 > 0.0) {
            for (std::size_t z = 0; z < n; ++z) {
                double r = 0.0;
                for (std::size_t u = 0; u < k; ++u)
                    r += mu.at(x, u) * dir[z * k + u];
                for (std::size_t u = 0; u < k; ++u)
                    dir[z * k + u] -= r * mu.at(x, u) / norm2;
            }
        }
        // Largest step keeping nu >= 0 (upper bounds follow from the fixed
        // z-sums), computed exactly from the active entries.
        double s_max = std::numeric_limits<double>::infinity();
        for (std::size_t z = 0; z < n; ++z)
            for (std::size_t u = 0; u < k; ++u) {
                const double d = dir[z * k + u];
                if (d < -1e-12)
                    s_max = std::min(s_max, nu[(z * n + x) * k + u] / -d);
            }
        const double step =
            std::isfinite(s_max) ? rng.uniform() * s_max : 0.0;
        if (step > 0.0)
            for (std::size_t z = 0; z < n; ++z)
                for (std::size_t u = 0; u < k; ++u) {
                    double& v = nu[(z * n + x) * k + u];
                    v = std::max(v + step * dir[z * k + u], 0.0);
                }
    }
    return ResponseKernel(n, k, std::move(nu));
}

}  // namespace detail

// Draws a kernel compatible with pi for the given mu.
inline ResponseKernel sample_kernel_for_mu(const ObservedJoint& pi,
                                           const LatentJoint& mu,
                                           SubstreamRng& rng, NuMode mode) {
    if (mode == NuMode::HonestPerturbed)
        return detail::honest_perturbed_kernel(pi, mu, rng);
    const std::size_t n = pi.n();
    std::vector<double> l(n * n);
    for (double& v : l) v = rng.uniform(-1.0, 1.0);
    return solve_mu_program(pi, mu, ObjectiveMatrix(n, std::move(l))).kernel;
}

// One draw from the compatible-model set M_pi.
inline CausalModel sample_compatible_model(const ObservedJoint& pi,
                                           std::size_t k, SubstreamRng& rng,
                                           NuMode nu_mode,
                                           MuMode mu_mode = MuMode::DirichletInterior) {
    LatentJoint mu = sample_conforming_mu(pi, k, rng, mu_mode);
    ResponseKernel nu = sample_kernel_for_mu(pi, mu, rng, nu_mode);
    return CausalModel(std::move(mu), std::move(nu));
}

struct ModelSample {
    std::size_t index;
    LatentJoint mu;
    ResponseKernel nu;
    ConditionalMatrix zeta;
    double residual;
};

struct FunctionalStats {
    DiagonalFunctional functional;
    double min_value;
    double max_value;
    double bound;      // diagonal lower bound for this functional
    double min_slack;  // min over samples of L(zeta) - bound

    bool operator==(const FunctionalStats& o) const {
        return functional.weights == o.functional.weights &&
               min_value == o.min_value && max_value == o.max_value &&
               bound == o.bound && min_slack == o.min_slack;
    }
};

struct CloudSummary {
    std::size_t count = 0;
    std::vector<FunctionalStats> functionals;
    // min over samples of (bound for the sample's mu) - ||zeta - eta||_1
    double min_slack_deviation_delta = std::numeric_limits<double>::infinity();
    double min_slack_deviation_mi = std::numeric_limits<double>::infinity();
    double worst_residual = 0.0;

    // Negative slack beyond tolerance flags a defect in a bound or the
    // sampler; the cloud is the falsification harness for both.
    double worst_bound_violation() const {
        double worst = 0.0;
        for (const auto& s : functionals) worst = std::min(worst, s.min_slack);
        worst = std::min(worst, min_slack_deviation_delta);
        worst = std::min(worst, min_slack_deviation_mi);
        return -worst;
    }

    bool operator==(const CloudSummary& o) const {
        return count == o.count && functionals == o.functionals &&
               min_slack_deviation_delta == o.min_slack_deviation_delta &&
               min_slack_deviation_mi == o.min_slack_deviation_mi &&
               worst_residual == o.worst_residual;
    }
};

// Samples `config.count` compatible models, evaluates every functional on the
// induced interventional distributions and tracks the minimum slack against
// each registered bound. Deterministic given the seed: sample i draws only
// from substream i.
inline CloudSummary interventional_cloud(
    const ObservedJoint& pi, const SamplerConfig& config,
    const std::vector<DiagonalFunctional>& functionals,
    std::vector<ModelSample>* raw = nullptr) {
    if (config.n != 0 && config.n != pi.n())
        throw ShapeError("interventional_cloud: config.n disagrees with pi");
    const std::size_t k = config.k;
    const ConditionalMatrix eta = honest(pi);

    CloudSummary summary;
    summary.count = config.count;
    for (const auto& l : functionals)
        summary.functionals.push_back(
            {l, std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(),
             diagonal_bound(pi, l, k).value,
             std::numeric_limits<double>::infinity()});

    for (std::size_t i = 0; i < config.count; ++i) {
        SubstreamRng rng(config.seed, i);
        CausalModel model =
            sample_compatible_model(pi, k, rng, config.nu_mode, config.mu_mode);
        const ConditionalMatrix zeta = interventional(model);
        const CompatibilityReport compat = is_compatible(model, pi);
        const double residual =
            std::max(compat.joint_residual, compat.marginal_residual);
        summary.worst_residual = std::max(summary.worst_residual, residual);

        for (auto& stats : summary.functionals) {
            const double v = stats.functional.value_of(zeta);
            stats.min_value = std::min(stats.min_value, v);
            stats.max_value = std::max(stats.max_value, v);
            stats.min_slack = std::min(stats.min_slack, v - stats.bound);
        }
        const double dev = l1_distance(zeta, eta);
        summary.min_slack_deviation_delta =
            std::min(summary.min_slack_deviation_delta,
                     deviation_bound_delta(pi, model.mu).value - dev);
        summary.min_slack_deviation_mi = std::min(
            summary.min_slack_deviation_mi,
            deviation_bound_mi(pi, model.mu, PinskerConstant::Corrected).value -
                dev);

        if (raw)
            raw->push_back(
                {i, model.mu, model.nu, zeta, residual});
    }
    return summary;
}

// Empirical minimum of L over the interventional set: for every sampled mu
// the mu-program is solved to optimality, so the result is the exact minimum
// over the sampled mu-slices (an upper bound on the true minimum over all
// of I_pi, tight up to the mu sampling).
inline double brute_force_min_functional(const ObservedJoint& pi,
                                         const ObjectiveMatrix& l,
                                         const SamplerConfig& config) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < config.count; ++i) {
        SubstreamRng rng(config.seed, i);
        LatentJoint mu = sample_conforming_mu(pi, config.k, rng, config.mu_mode);
        best = std::min(best, solve_mu_program(pi, mu, l).value);
    }
    return best;
}

inline double brute_force_min_functional(const ObservedJoint& pi,
                                         const DiagonalFunctional& l,
                                         const SamplerConfig& config) {
    return brute_force_min_functional(pi, l.to_objective(), config);
}

}  // namespace interbound
