#pragma once

#include <cmath>
#include <cstdint>
#include <cstddef>
#include <random>
#include <vector>

namespace interbound {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace detail

// Deterministic random stream derived from (master seed, substream index).
// Substreams let parallel and serial sample loops produce identical draws.
// All variates are generated from raw 64-bit words, so results are
// reproducible across standard library implementations.
class SubstreamRng {
  public:
    SubstreamRng(std::uint64_t master_seed, std::uint64_t substream)
        : gen_(detail::splitmix64(master_seed ^
                                  detail::splitmix64(substream + 1))) {}

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        // Box-Muller; fresh pair per call keeps the stream stateless.
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }

    // Marsaglia-Tsang for shape >= 1, boosted by u^(1/shape) below 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double u = 1.0 - uniform();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        while (true) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            const double u = 1.0 - uniform();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v))
                return d * v;
        }
    }

    std::vector<double> dirichlet(std::size_t dim, double concentration) {
        std::vector<double> w(dim);
        double total = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            w[i] = gamma(concentration);
            total += w[i];
        }
        if (total <= 0.0) {
            // Vanishingly rare underflow; fall back to a point mass.
            std::vector<double> p(dim, 0.0);
            p[0] = 1.0;
            return p;
        }
        for (double& v : w) v /= total;
        return w;
    }

    std::uint64_t next_word() { return gen_(); }

  private:
    std::mt19937_64 gen_;
};

}  // namespace interbound
