#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "interbound/distributions.hpp"
#include "interbound/errors.hpp"
#include "interbound/model.hpp"
#include "interbound/mu_program.hpp"

namespace interbound {

// Strictness margin for the independence-exclusion test; boundary cases are
// resolved conservatively (not excluded).
inline constexpr double kMarginTol = 1e-9;

inline constexpr const char* kTagDiagonalBound = "diagonal-lower-bound";
inline constexpr const char* kTagDeltaBound = "correlation-deviation-bound";
inline constexpr const char* kTagMiBound = "mutual-information-deviation-bound";
inline constexpr const char* kTagEmpirical = "empirical";

// Nonnegative weights on the diagonal of an interventional matrix:
// L(zeta) = sum_x l_x * zeta[x][x].
struct DiagonalFunctional {
    std::vector<double> weights;

    explicit DiagonalFunctional(std::vector<double> w) : weights(std::move(w)) {
        if (weights.empty())
            throw ShapeError("DiagonalFunctional: no weights");
        for (std::size_t x = 0; x < weights.size(); ++x)
            if (!std::isfinite(weights[x]) || weights[x] < 0.0)
                throw NegativeMass("DiagonalFunctional: weight " +
                                   std::to_string(x) + " must be >= 0");
    }

    static DiagonalFunctional all_ones(std::size_t n) {
        return DiagonalFunctional(std::vector<double>(n, 1.0));
    }

    std::size_t n() const { return weights.size(); }

    std::vector<std::size_t> support() const {
        std::vector<std::size_t> s;
        for (std::size_t x = 0; x < weights.size(); ++x)
            if (weights[x] > 0.0) s.push_back(x);
        return s;
    }

    double max_weight() const {
        double m = 0.0;
        for (double w : weights) m = std::max(m, w);
        return m;
    }

    double value_of(const ConditionalMatrix& zeta) const {
        if (zeta.n() != weights.size())
            throw ShapeError("DiagonalFunctional: size mismatch");
        double v = 0.0;
        for (std::size_t x = 0; x < weights.size(); ++x)
            v += weights[x] * zeta.at(x, x);
        return v;
    }

    ObjectiveMatrix to_objective() const {
        const std::size_t n = weights.size();
        std::vector<double> data(n * n, 0.0);
        for (std::size_t x = 0; x < n; ++x) data[x * n + x] = weights[x];
        return ObjectiveMatrix(n, std::move(data));
    }
};

struct BoundReport {
    double value = 0.0;
    std::string tag;
    std::optional<std::size_t> witness_x;  // index attaining the min term
    std::vector<double> alpha;             // certificate, when one is attached
    std::optional<double> margin;          // L(zeta) - value, when zeta given
};

// Guaranteed lower bound on L(zeta) over every interventional distribution
// compatible with pi, for a latent variable with at most k values:
//   (|supp(L)|^2 / k) * min_{x in supp(L)} l_x * pi[x][x].
inline BoundReport diagonal_bound(const ObservedJoint& pi,
                                  const DiagonalFunctional& l, std::size_t k,
                                  const ConditionalMatrix* zeta = nullptr) {
    if (l.n() != pi.n())
        throw ShapeError("diagonal_bound: functional size mismatch");
    if (k == 0) throw ShapeError("diagonal_bound: k must be >= 1");
    const auto supp = l.support();
    if (supp.empty())
        throw EmptySupport("diagonal_bound: functional has empty support");

    std::size_t witness = supp.front();
    double min_term = std::numeric_limits<double>::infinity();
    for (std::size_t x : supp) {
        const double term = l.weights[x] * pi.at(x, x);
        if (term < min_term) {
            min_term = term;
            witness = x;
        }
    }
    BoundReport report;
    report.value = static_cast<double>(supp.size() * supp.size()) /
                   static_cast<double>(k) * min_term;
    report.tag = kTagDiagonalBound;
    report.witness_x = witness;
    if (zeta) report.margin = l.value_of(*zeta) - report.value;
    return report;
}

struct DiagonalCertificate {
    std::vector<double> alpha;     // [x][z], zero off the diagonal
    double f_value = 0.0;          // reduced dual objective at this alpha
    std::vector<std::size_t> g;    // latent label per support index; k = unset
};

// The explicit dual point behind diagonal_bound: g(x) picks the latent value
// minimizing mu_U[u] / mu[x][u], and alpha[x][x] = l_x * mu_U[g(x)] / mu[x][g(x)].
// Ties break toward the lowest latent index.
inline DiagonalCertificate diagonal_dual_certificate(const ObservedJoint& pi,
                                                     const LatentJoint& mu,
                                                     const DiagonalFunctional& l) {
    if (l.n() != pi.n() || mu.n() != pi.n())
        throw ShapeError("diagonal_dual_certificate: size mismatch");
    const std::size_t n = pi.n(), k = mu.k();
    const std::vector<double> mu_u = mu.marginal_u();

    DiagonalCertificate cert;
    cert.alpha.assign(n * n, 0.0);
    cert.g.assign(n, k);
    for (std::size_t x : l.support()) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_u = k;
        for (std::size_t u = 0; u < k; ++u) {
            if (mu.at(x, u) <= 0.0) continue;
            const double ratio = mu_u[u] / mu.at(x, u);
            if (ratio < best) {
                best = ratio;
                best_u = u;
            }
        }
        if (best_u == k) throw DegenerateRow(x);
        cert.g[x] = best_u;
        cert.alpha[x * n + x] = l.weights[x] * best;
    }
    cert.f_value = dual_objective_f(pi, mu, l.to_objective(), cert.alpha);
    return cert;
}

// delta(mu) = || mu - mu_X (x) mu_U ||_1, a correlation distance in [0, 2].
inline double correlation_distance(const LatentJoint& mu) {
    const auto [mx, mu_u] = marginals(mu);
    return l1_distance(mu, product_distribution(mx, mu_u));
}

// I(U; X) in nats, as the divergence of mu from the product of its marginals.
// Zero entries of mu contribute nothing.
inline double mutual_information(const LatentJoint& mu) {
    const std::vector<double> mx = mu.marginal_x();
    const std::vector<double> mu_u = mu.marginal_u();
    double info = 0.0;
    for (std::size_t x = 0; x < mu.n(); ++x)
        for (std::size_t u = 0; u < mu.k(); ++u) {
            const double m = mu.at(x, u);
            if (m <= 0.0) continue;
            info += m * std::log(m / (mx[x] * mu_u[u]));
        }
    return std::max(info, 0.0);
}

namespace detail {

inline double positive_min_marginal(const ObservedJoint& pi) {
    const auto zeros = pi.zero_rows();
    if (!zeros.empty()) throw ZeroMarginal(zeros.front());
    return pi.min_marginal();
}

}  // namespace detail

// Upper bound on ||zeta - eta||_1 for every zeta arising from this mu:
// delta(mu) / min_x pi_x.
inline BoundReport deviation_bound_delta(const ObservedJoint& pi,
                                         const LatentJoint& mu) {
    const double min_px = detail::positive_min_marginal(pi);
    detail::require_conforming(pi, mu);
    BoundReport report;
    report.value = correlation_distance(mu) / min_px;
    report.tag = kTagDeltaBound;
    return report;
}

// Which constant to use in the Pinsker step of the mutual-information bound.
// Corrected is the standard ||p - q||_1 <= sqrt(2 KL) form. Stated keeps the
// sqrt(KL / 2) variant for comparison; it is NOT a valid upper bound on
// delta(mu) (mu = diag(.5,.5) gives delta = 1 > sqrt(ln2 / 2) ~ 0.589) and
// callers are expected to surface a warning when selecting it.
enum class PinskerConstant { Corrected, Stated };

inline BoundReport deviation_bound_mi(const ObservedJoint& pi,
                                      const LatentJoint& mu,
                                      PinskerConstant mode = PinskerConstant::Corrected) {
    const double min_px = detail::positive_min_marginal(pi);
    detail::require_conforming(pi, mu);
    const double info = mutual_information(mu);
    const double pinsker = mode == PinskerConstant::Corrected
                               ? std::sqrt(2.0 * info)
                               : std::sqrt(info / 2.0);
    BoundReport report;
    report.value = pinsker / min_px;
    report.tag = kTagMiBound;
    return report;
}

struct IndependenceExclusion {
    bool excluded;
    double margin;  // bound - max_x l_x; positive margin rules independence out
    BoundReport bound;
};

// An interventional distribution independent of X has rows all equal to one
// simplex vector c, so L(zeta) = sum_x l_x c_x <= max_x l_x (exactly 1 for
// all-ones weights). If the diagonal bound exceeds that threshold, no
// compatible interventional distribution can be independent of X.
inline IndependenceExclusion independence_excluded(const ObservedJoint& pi,
                                                   const DiagonalFunctional& l,
                                                   std::size_t k) {
    BoundReport bound = diagonal_bound(pi, l, k);
    const double margin = bound.value - l.max_weight();
    return {margin > kMarginTol, margin, std::move(bound)};
}

inline IndependenceExclusion independence_excluded(const ObservedJoint& pi,
                                                   std::size_t k) {
    return independence_excluded(pi, DiagonalFunctional::all_ones(pi.n()), k);
}

// Sign objective used to express an L1 distance as a linear functional:
// l[x][z] = -sgn(a[x][z] - b[x][z]) with sgn(0) = +1, so that
// L(a) - L(b) = -||a - b||_1.
inline ObjectiveMatrix sign_objective(const ConditionalMatrix& a,
                                      const ConditionalMatrix& b) {
    if (a.n() != b.n()) throw ShapeError("sign_objective: size mismatch");
    const std::size_t n = a.n();
    std::vector<double> data(n * n);
    for (std::size_t i = 0; i < n * n; ++i)
        data[i] = a.flat()[i] - b.flat()[i] >= 0.0 ? -1.0 : 1.0;
    return ObjectiveMatrix(n, std::move(data));
}

}  // namespace interbound
