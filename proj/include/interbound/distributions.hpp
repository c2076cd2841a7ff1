#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "interbound/errors.hpp"

namespace interbound {

// Absolute tolerance on all mass-sum checks. Sits well above double
// accumulation error for n,k <= 64 and well below any meaningful probability.
inline constexpr double kSimplexTol = 1e-9;

// Indexing convention, fixed project-wide:
//   pi[x][z], mu[x][u], nu[z][x][u], zeta[x][z].

namespace detail {

inline void check_entries(const std::vector<double>& v, double lo_tol,
                          const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw NegativeMass(std::string(what) + ": entry " +
                               std::to_string(i) + " is not finite");
        }
        if (v[i] < -lo_tol) {
            throw NegativeMass(std::string(what) + ": entry " +
                               std::to_string(i) + " = " +
                               std::to_string(v[i]) + " is negative");
        }
    }
}

inline void check_sum(double sum, double target, const char* what) {
    if (std::abs(sum - target) > kSimplexTol) {
        throw MassMismatch(std::string(what) + ": mass " + std::to_string(sum) +
                           " differs from " + std::to_string(target));
    }
}

template <class Nested>
std::vector<double> flatten_checked(const Nested& rows, std::size_t inner,
                                    const char* what) {
    std::vector<double> flat;
    for (const auto& row : rows) {
        if (row.size() != inner) {
            throw ShapeError(std::string(what) + ": ragged row of length " +
                             std::to_string(row.size()) + ", expected " +
                             std::to_string(inner));
        }
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return flat;
}

}  // namespace detail

// A probability distribution over a finite outcome set.
class SimplexVector {
  public:
    explicit SimplexVector(std::vector<double> entries)
        : entries_(std::move(entries)) {
        recheck();
    }

    std::size_t size() const { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<double>& flat() const { return entries_; }
    std::vector<std::size_t> shape() const { return {entries_.size()}; }

    void recheck() const {
        if (entries_.empty()) throw ShapeError("SimplexVector: empty");
        detail::check_entries(entries_, kSimplexTol, "SimplexVector");
        detail::check_sum(
            std::accumulate(entries_.begin(), entries_.end(), 0.0), 1.0,
            "SimplexVector");
    }

    bool operator==(const SimplexVector& o) const {
        return entries_ == o.entries_;
    }

  private:
    std::vector<double> entries_;
};

// Observed joint distribution of (X, Z), indexed pi[x][z].
class ObservedJoint {
  public:
    ObservedJoint(std::size_t n, std::vector<double> data)
        : n_(n), data_(std::move(data)) {
        recheck();
        marginal_x_.assign(n_, 0.0);
        for (std::size_t x = 0; x < n_; ++x)
            for (std::size_t z = 0; z < n_; ++z) marginal_x_[x] += at(x, z);
    }

    static ObservedJoint from_rows(const std::vector<std::vector<double>>& rows) {
        return ObservedJoint(
            rows.size(),
            detail::flatten_checked(rows, rows.size(), "ObservedJoint"));
    }

    std::size_t n() const { return n_; }
    double at(std::size_t x, std::size_t z) const { return data_[x * n_ + z]; }
    const std::vector<double>& flat() const { return data_; }
    std::vector<std::size_t> shape() const { return {n_, n_}; }

    // Marginal pi_x = sum_z pi[x][z].
    const std::vector<double>& marginal_x() const { return marginal_x_; }
    double min_marginal() const {
        double m = marginal_x_[0];
        for (double v : marginal_x_) m = std::min(m, v);
        return m;
    }
    // Rows x with pi_x = 0 (honest distribution undefined there).
    std::vector<std::size_t> zero_rows() const {
        std::vector<std::size_t> out;
        for (std::size_t x = 0; x < n_; ++x)
            if (marginal_x_[x] <= kSimplexTol) out.push_back(x);
        return out;
    }

    void recheck() const {
        if (n_ == 0 || data_.size() != n_ * n_)
            throw ShapeError("ObservedJoint: expected n*n entries");
        detail::check_entries(data_, kSimplexTol, "ObservedJoint");
        detail::check_sum(std::accumulate(data_.begin(), data_.end(), 0.0), 1.0,
                          "ObservedJoint");
    }

    bool operator==(const ObservedJoint& o) const {
        return n_ == o.n_ && data_ == o.data_;
    }

  private:
    std::size_t n_;
    std::vector<double> data_;
    std::vector<double> marginal_x_;
};

// Joint distribution of (X, U), indexed mu[x][u].
class LatentJoint {
  public:
    LatentJoint(std::size_t n, std::size_t k, std::vector<double> data)
        : n_(n), k_(k), data_(std::move(data)) {
        recheck();
    }

    static LatentJoint from_rows(const std::vector<std::vector<double>>& rows) {
        std::size_t k = rows.empty() ? 0 : rows.front().size();
        return LatentJoint(rows.size(), k,
                           detail::flatten_checked(rows, k, "LatentJoint"));
    }

    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }
    double at(std::size_t x, std::size_t u) const { return data_[x * k_ + u]; }
    const std::vector<double>& flat() const { return data_; }
    std::vector<std::size_t> shape() const { return {n_, k_}; }

    std::vector<double> marginal_x() const {
        std::vector<double> m(n_, 0.0);
        for (std::size_t x = 0; x < n_; ++x)
            for (std::size_t u = 0; u < k_; ++u) m[x] += at(x, u);
        return m;
    }
    std::vector<double> marginal_u() const {
        std::vector<double> m(k_, 0.0);
        for (std::size_t x = 0; x < n_; ++x)
            for (std::size_t u = 0; u < k_; ++u) m[u] += at(x, u);
        return m;
    }

    void recheck() const {
        if (n_ == 0 || k_ == 0 || data_.size() != n_ * k_)
            throw ShapeError("LatentJoint: expected n*k entries");
        detail::check_entries(data_, kSimplexTol, "LatentJoint");
        detail::check_sum(std::accumulate(data_.begin(), data_.end(), 0.0), 1.0,
                          "LatentJoint");
    }

    bool operator==(const LatentJoint& o) const {
        return n_ == o.n_ && k_ == o.k_ && data_ == o.data_;
    }

  private:
    std::size_t n_;
    std::size_t k_;
    std::vector<double> data_;
};

// Response kernel nu[z][x][u]: distribution of Z for each pair (x, u).
class ResponseKernel {
  public:
    ResponseKernel(std::size_t n, std::size_t k, std::vector<double> data)
        : n_(n), k_(k), data_(std::move(data)) {
        recheck();
    }

    static ResponseKernel from_nested(
        const std::vector<std::vector<std::vector<double>>>& zxu) {
        std::size_t n = zxu.size();
        std::vector<double> flat;
        std::size_t k = 0;
        for (const auto& plane : zxu) {
            if (plane.size() != n)
                throw ShapeError("ResponseKernel: expected n x-slices per z");
            for (const auto& row : plane) {
                if (k == 0) k = row.size();
                if (row.size() != k)
                    throw ShapeError("ResponseKernel: ragged u-dimension");
                flat.insert(flat.end(), row.begin(), row.end());
            }
        }
        return ResponseKernel(n, k, std::move(flat));
    }

    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }
    double at(std::size_t z, std::size_t x, std::size_t u) const {
        return data_[(z * n_ + x) * k_ + u];
    }
    const std::vector<double>& flat() const { return data_; }
    std::vector<std::size_t> shape() const { return {n_, n_, k_}; }

    void recheck() const {
        if (n_ == 0 || k_ == 0 || data_.size() != n_ * n_ * k_)
            throw ShapeError("ResponseKernel: expected n*n*k entries");
        detail::check_entries(data_, kSimplexTol, "ResponseKernel");
        for (double v : data_) {
            if (v > 1.0 + kSimplexTol)
                throw MassMismatch("ResponseKernel: entry " +
                                   std::to_string(v) + " exceeds 1");
        }
        for (std::size_t x = 0; x < n_; ++x) {
            for (std::size_t u = 0; u < k_; ++u) {
                double s = 0.0;
                for (std::size_t z = 0; z < n_; ++z) s += at(z, x, u);
                detail::check_sum(s, 1.0, "ResponseKernel z-sum");
            }
        }
    }

    bool operator==(const ResponseKernel& o) const {
        return n_ == o.n_ && k_ == o.k_ && data_ == o.data_;
    }

  private:
    std::size_t n_;
    std::size_t k_;
    std::vector<double> data_;
};

// Row-stochastic matrix indexed [x][z]; row x is the distribution of Z given
// Do(X=x) (zeta) or given X=x (eta).
class ConditionalMatrix {
  public:
    ConditionalMatrix(std::size_t n, std::vector<double> data)
        : n_(n), data_(std::move(data)) {
        recheck();
    }

    static ConditionalMatrix from_rows(
        const std::vector<std::vector<double>>& rows) {
        return ConditionalMatrix(
            rows.size(),
            detail::flatten_checked(rows, rows.size(), "ConditionalMatrix"));
    }

    std::size_t n() const { return n_; }
    double at(std::size_t x, std::size_t z) const { return data_[x * n_ + z]; }
    const std::vector<double>& flat() const { return data_; }
    std::vector<std::size_t> shape() const { return {n_, n_}; }

    SimplexVector row(std::size_t x) const {
        return SimplexVector(std::vector<double>(data_.begin() + x * n_,
                                                 data_.begin() + (x + 1) * n_));
    }

    void recheck() const {
        if (n_ == 0 || data_.size() != n_ * n_)
            throw ShapeError("ConditionalMatrix: expected n*n entries");
        detail::check_entries(data_, kSimplexTol, "ConditionalMatrix");
        for (std::size_t x = 0; x < n_; ++x) {
            double s = 0.0;
            for (std::size_t z = 0; z < n_; ++z) s += at(x, z);
            detail::check_sum(s, 1.0, "ConditionalMatrix row");
        }
    }

    bool operator==(const ConditionalMatrix& o) const {
        return n_ == o.n_ && data_ == o.data_;
    }

  private:
    std::size_t n_;
    std::vector<double> data_;
};

// Re-runs the invariant checks of an already constructed value and returns it
// unchanged. Validation never renormalizes.
template <class T>
T validate(T value) {
    value.recheck();
    return value;
}

// Entrywise L1 distance between two equal-shape containers.
template <class A, class B>
double l1_distance(const A& a, const B& b) {
    if (a.shape() != b.shape())
        throw ShapeError("l1_distance: shape mismatch");
    const auto& fa = a.flat();
    const auto& fb = b.flat();
    double d = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) d += std::abs(fa[i] - fb[i]);
    return d;
}

// Outer product of two distributions: (a (x) b)[i][j] = a_i * b_j.
inline LatentJoint product_distribution(const SimplexVector& a,
                                        const SimplexVector& b) {
    std::vector<double> data(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            data[i * b.size() + j] = a[i] * b[j];
    return LatentJoint(a.size(), b.size(), std::move(data));
}

// Row and column marginals of mu, each a valid distribution.
inline std::pair<SimplexVector, SimplexVector> marginals(const LatentJoint& mu) {
    return {SimplexVector(mu.marginal_x()), SimplexVector(mu.marginal_u())};
}

}  // namespace interbound
