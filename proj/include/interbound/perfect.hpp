#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "interbound/distributions.hpp"
#include "interbound/errors.hpp"
#include "interbound/model.hpp"

namespace interbound {

// Assignment of one latent label to each observed outcome.
struct LabelFunction {
    std::size_t k = 0;
    std::vector<std::size_t> labels;  // labels[x] in {0..k-1}

    LabelFunction() = default;
    LabelFunction(std::size_t k_, std::vector<std::size_t> labels_)
        : k(k_), labels(std::move(labels_)) {
        for (std::size_t u : labels)
            if (u >= k) throw ShapeError("LabelFunction: label out of range");
    }

    std::size_t n() const { return labels.size(); }
    std::size_t operator()(std::size_t x) const { return labels[x]; }

    // Total observed mass of the group sharing x's label.
    double group_mass(const ObservedJoint& pi, std::size_t x) const {
        double m = 0.0;
        for (std::size_t y = 0; y < labels.size(); ++y)
            if (labels[y] == labels[x]) m += pi.marginal_x()[y];
        return m;
    }

    bool operator==(const LabelFunction& o) const {
        return k == o.k && labels == o.labels;
    }
};

// Subset of (x, u) pairs allowed to carry latent mass.
struct SupportSet {
    std::size_t n = 0, k = 0;
    std::vector<char> member;  // [x*k + u]

    SupportSet(std::size_t n_, std::size_t k_)
        : n(n_), k(k_), member(n_ * k_, 0) {}

    static SupportSet from_label(const LabelFunction& f) {
        SupportSet s(f.n(), f.k);
        for (std::size_t x = 0; x < f.n(); ++x) s.member[x * f.k + f(x)] = 1;
        return s;
    }

    bool contains(std::size_t x, std::size_t u) const {
        return member[x * k + u] != 0;
    }
    void insert(std::size_t x, std::size_t u) { member[x * k + u] = 1; }

    // Every x must own at least one latent label for the mu-slice to be
    // nonempty.
    bool covering() const {
        for (std::size_t x = 0; x < n; ++x) {
            bool any = false;
            for (std::size_t u = 0; u < k; ++u) any = any || contains(x, u);
            if (!any) return false;
        }
        return true;
    }
};

// Deterministic response g(x, u) -> z, stored as a flat map.
struct ResponseFunction {
    std::size_t n = 0, k = 0;
    std::vector<std::size_t> map;  // [x*k + u] -> z

    ResponseFunction() = default;
    ResponseFunction(std::size_t n_, std::size_t k_, std::vector<std::size_t> map_)
        : n(n_), k(k_), map(std::move(map_)) {
        if (map.size() != n * k)
            throw ShapeError("ResponseFunction: expected n*k entries");
        for (std::size_t z : map)
            if (z >= n) throw ShapeError("ResponseFunction: value out of range");
    }

    std::size_t operator()(std::size_t x, std::size_t u) const {
        return map[x * k + u];
    }

    // Compatible with S iff g(x, u) = x on every (x, u) in S.
    bool compatible_with(const SupportSet& s) const {
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t u = 0; u < k; ++u)
                if (s.contains(x, u) && (*this)(x, u) != x) return false;
        return true;
    }

    ResponseKernel to_kernel() const {
        std::vector<double> data(n * n * k, 0.0);
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t u = 0; u < k; ++u)
                data[((*this)(x, u) * n + x) * k + u] = 1.0;
        return ResponseKernel(n, k, std::move(data));
    }
};

// A perfect channel has no observed off-diagonal mass.
inline bool is_perfect_channel(const ObservedJoint& pi,
                               double tol = kSimplexTol) {
    double off = 0.0;
    for (std::size_t x = 0; x < pi.n(); ++x)
        for (std::size_t z = 0; z < pi.n(); ++z)
            if (x != z) off += std::max(pi.at(x, z), 0.0);
    return off <= tol;
}

namespace detail {

inline void require_perfect(const ObservedJoint& pi, const char* where) {
    if (!is_perfect_channel(pi))
        throw Error(std::string(where) + ": pi is not a perfect channel");
}

}  // namespace detail

// mu^f[x][u] = pi_x * 1_{u = f(x)}: all of row x's mass on the label f(x).
inline LatentJoint mu_f(const ObservedJoint& pi, const LabelFunction& f) {
    if (f.n() != pi.n()) throw ShapeError("mu_f: label function size mismatch");
    const std::size_t n = pi.n(), k = f.k;
    std::vector<double> data(n * k, 0.0);
    for (std::size_t x = 0; x < n; ++x)
        data[x * k + f(x)] = pi.marginal_x()[x];
    return LatentJoint(n, k, std::move(data));
}

struct QfMembership {
    bool member;
    std::vector<double> slack;  // zeta[x][x] - group mass, per x
};

// Membership in the polytope Q_f: zeta[x][x] must dominate the observed mass
// of x's label group, for every x.
inline QfMembership qf_membership(const ConditionalMatrix& zeta,
                                  const ObservedJoint& pi,
                                  const LabelFunction& f) {
    if (zeta.n() != pi.n() || f.n() != pi.n())
        throw ShapeError("qf_membership: size mismatch");
    QfMembership result{true, {}};
    result.slack.resize(pi.n());
    for (std::size_t x = 0; x < pi.n(); ++x) {
        result.slack[x] = zeta.at(x, x) - f.group_mass(pi, x);
        if (result.slack[x] < -kSimplexTol) result.member = false;
    }
    return result;
}

// Constructive converse of qf_membership: recovers a model (mu^f, nu) whose
// observational distribution is pi and whose interventional distribution is
// zeta. On-support kernel rows copy x; off-support rows take
//   (zeta[x][z] - m_x 1_{z=x}) / (1 - m_x),   m_x = group mass of x.
// When m_x = 1 the off-support rows carry zero weight and are set to the
// copy row, the unique continuous extension on the membership set.
inline CausalModel qf_construct_model(const ConditionalMatrix& zeta,
                                      const ObservedJoint& pi,
                                      const LabelFunction& f) {
    detail::require_perfect(pi, "qf_construct_model");
    const QfMembership membership = qf_membership(zeta, pi, f);
    if (!membership.member) {
        std::size_t worst = 0;
        for (std::size_t x = 1; x < membership.slack.size(); ++x)
            if (membership.slack[x] < membership.slack[worst]) worst = x;
        throw MembershipViolated(
            "qf_construct_model: zeta[" + std::to_string(worst) + "][" +
            std::to_string(worst) + "] undercuts its group mass by " +
            std::to_string(-membership.slack[worst]));
    }

    const std::size_t n = pi.n(), k = f.k;
    LatentJoint mu = mu_f(pi, f);
    std::vector<double> nu(n * n * k, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        const double m_x = f.group_mass(pi, x);
        for (std::size_t u = 0; u < k; ++u) {
            if (u == f(x) || 1.0 - m_x <= kSimplexTol) {
                nu[(x * n + x) * k + u] = 1.0;  // stored as [z][x][u], z = x
                continue;
            }
            double row_sum = 0.0;
            for (std::size_t z = 0; z < n; ++z) {
                double v = (zeta.at(x, z) - (z == x ? m_x : 0.0)) / (1.0 - m_x);
                v = std::max(v, 0.0);  // borderline membership noise
                nu[(z * n + x) * k + u] = v;
                row_sum += v;
            }
            if (row_sum < 0.5)
                throw NumericalFailure(
                    "qf_construct_model: off-support row degenerated");
            for (std::size_t z = 0; z < n; ++z)
                nu[(z * n + x) * k + u] /= row_sum;
        }
    }
    // Repair pass above divides by row_sum = 1 up to the membership
    // tolerance; the hard verification below is the actual contract.
    CausalModel model(std::move(mu), ResponseKernel(n, k, std::move(nu)));
    const ObservedJoint back = observational(model);
    const ConditionalMatrix zeta_back = interventional(model);
    double residual = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) {
        residual = std::max(residual, std::abs(back.flat()[i] - pi.flat()[i]));
        residual =
            std::max(residual, std::abs(zeta_back.flat()[i] - zeta.flat()[i]));
    }
    if (residual > 1e-9)
        throw NumericalFailure(
            "qf_construct_model: reconstruction residual " +
            std::to_string(residual) + " exceeds 1e-9");
    return model;
}

struct ExtremePoint {
    ConditionalMatrix zeta;
    LabelFunction f;
    ResponseFunction g;
};

namespace detail {

inline bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline bool approx_equal(const std::vector<double>& a,
                         const std::vector<double>& b, double tol) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

// Odometer increment over fixed-base digits; returns false after the last.
inline bool next_assignment(std::vector<std::size_t>& digits, std::size_t base) {
    for (std::size_t i = digits.size(); i-- > 0;) {
        if (++digits[i] < base) return true;
        digits[i] = 0;
    }
    return false;
}

}  // namespace detail

inline constexpr double kEnumerationGuard = 1e6;

// All candidate extreme interventional distributions of a perfect channel:
// phi_int(mu^f, nu^g) over every label function f and every response function
// g that copies x on the support of mu^f. Deduplicated entrywise at 1e-9,
// generated in lexicographic (f, g) order and sorted before deduplication.
inline std::vector<ExtremePoint> enumerate_extreme_interventionals(
    const ObservedJoint& pi, std::size_t k) {
    detail::require_perfect(pi, "enumerate_extreme_interventionals");
    if (k == 0) throw ShapeError("enumerate: k must be >= 1");
    const std::size_t n = pi.n();

    double candidates = 1.0;
    for (std::size_t i = 0; i < n; ++i) candidates *= static_cast<double>(k);
    for (std::size_t i = 0; i < n * (k - 1); ++i)
        candidates *= static_cast<double>(n);
    if (candidates > kEnumerationGuard) throw TooLarge(candidates);

    std::vector<ExtremePoint> points;
    std::vector<std::size_t> fl(n, 0);
    do {
        LabelFunction f(k, fl);
        std::vector<double> w(k, 0.0);  // mu^f marginal on U
        for (std::size_t x = 0; x < n; ++x) w[f(x)] += pi.marginal_x()[x];

        const std::size_t free_slots = n * (k - 1);
        std::vector<std::size_t> free_digits(free_slots, 0);
        do {
            std::vector<std::size_t> gmap(n * k);
            std::size_t slot = 0;
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t u = 0; u < k; ++u)
                    gmap[x * k + u] = (u == f(x)) ? x : free_digits[slot++];
            ResponseFunction g(n, k, std::move(gmap));

            std::vector<double> zeta(n * n, 0.0);
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t u = 0; u < k; ++u)
                    zeta[x * n + g(x, u)] += w[u];
            points.push_back(
                {ConditionalMatrix(n, std::move(zeta)), f, std::move(g)});
        } while (detail::next_assignment(free_digits, n));
    } while (detail::next_assignment(fl, k));

    std::stable_sort(points.begin(), points.end(),
                     [](const ExtremePoint& a, const ExtremePoint& b) {
                         if (a.zeta.flat() != b.zeta.flat())
                             return detail::lex_less(a.zeta.flat(), b.zeta.flat());
                         return a.f.labels < b.f.labels;
                     });
    std::vector<ExtremePoint> unique;
    for (auto& p : points) {
        if (!unique.empty() &&
            detail::approx_equal(unique.back().zeta.flat(), p.zeta.flat(), 1e-9))
            continue;
        unique.push_back(std::move(p));
    }
    return unique;
}

// Searches all k^n label functions for one whose polytope contains zeta.
inline std::optional<LabelFunction> union_membership(
    const ConditionalMatrix& zeta, const ObservedJoint& pi, std::size_t k) {
    detail::require_perfect(pi, "union_membership");
    if (k == 0) throw ShapeError("union_membership: k must be >= 1");
    const std::size_t n = pi.n();
    double functions = 1.0;
    for (std::size_t i = 0; i < n; ++i) functions *= static_cast<double>(k);
    if (functions > kEnumerationGuard) throw TooLarge(functions);

    std::vector<std::size_t> fl(n, 0);
    do {
        LabelFunction f(k, fl);
        if (qf_membership(zeta, pi, f).member) return f;
    } while (detail::next_assignment(fl, k));
    return std::nullopt;
}

}  // namespace interbound
