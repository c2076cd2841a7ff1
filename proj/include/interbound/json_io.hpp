#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "interbound/distributions.hpp"
#include "interbound/errors.hpp"
#include "interbound/mu_program.hpp"

// File schema, shared by the CLI and the raw cloud export:
//   {"n": int, "k": int (where applicable), "data": nested arrays}
// with data in the project-wide index order pi[x][z], mu[x][u], nu[z][x][u],
// zeta[x][z]. Values are re-validated after every parse; bit-exact decimal
// round-trips are not required.

namespace interbound {

using json = nlohmann::json;

namespace detail {

inline std::vector<std::vector<double>> nested2(const json& j) {
    try {
        return j.get<std::vector<std::vector<double>>>();
    } catch (const json::exception& e) {
        throw ShapeError(std::string("expected a 2-d numeric array: ") +
                         e.what());
    }
}

inline std::size_t json_dim(const json& j, const char* key) {
    try {
        return j.at(key).get<std::size_t>();
    } catch (const json::exception& e) {
        throw ShapeError(std::string("expected integer field '") + key +
                         "': " + e.what());
    }
}

}  // namespace detail

inline json schema_json(const SimplexVector& p) {
    return {{"n", p.size()}, {"data", p.flat()}};
}

inline json schema_json(const ObservedJoint& pi) {
    std::vector<std::vector<double>> rows(pi.n());
    for (std::size_t x = 0; x < pi.n(); ++x)
        for (std::size_t z = 0; z < pi.n(); ++z)
            rows[x].push_back(pi.at(x, z));
    return {{"n", pi.n()}, {"data", rows}};
}

inline json schema_json(const LatentJoint& mu) {
    std::vector<std::vector<double>> rows(mu.n());
    for (std::size_t x = 0; x < mu.n(); ++x)
        for (std::size_t u = 0; u < mu.k(); ++u) rows[x].push_back(mu.at(x, u));
    return {{"n", mu.n()}, {"k", mu.k()}, {"data", rows}};
}

inline json schema_json(const ResponseKernel& nu) {
    std::vector<std::vector<std::vector<double>>> data(nu.n());
    for (std::size_t z = 0; z < nu.n(); ++z) {
        data[z].resize(nu.n());
        for (std::size_t x = 0; x < nu.n(); ++x)
            for (std::size_t u = 0; u < nu.k(); ++u)
                data[z][x].push_back(nu.at(z, x, u));
    }
    return {{"n", nu.n()}, {"k", nu.k()}, {"data", data}};
}

inline json schema_json(const ConditionalMatrix& zeta) {
    std::vector<std::vector<double>> rows(zeta.n());
    for (std::size_t x = 0; x < zeta.n(); ++x)
        for (std::size_t z = 0; z < zeta.n(); ++z)
            rows[x].push_back(zeta.at(x, z));
    return {{"n", zeta.n()}, {"data", rows}};
}

inline json schema_json(const ObjectiveMatrix& l) {
    std::vector<std::vector<double>> rows(l.n);
    for (std::size_t x = 0; x < l.n; ++x)
        for (std::size_t z = 0; z < l.n; ++z) rows[x].push_back(l.at(x, z));
    return {{"n", l.n}, {"data", rows}};
}

inline SimplexVector parse_simplex_vector(const json& j) {
    std::vector<double> data;
    try {
        data = j.at("data").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ShapeError(std::string("SimplexVector: ") + e.what());
    }
    if (j.contains("n") && detail::json_dim(j, "n") != data.size())
        throw ShapeError("SimplexVector: declared n disagrees with data");
    return SimplexVector(std::move(data));
}

inline ObservedJoint parse_observed(const json& j) {
    auto rows = detail::nested2(j.at("data"));
    if (j.contains("n") && detail::json_dim(j, "n") != rows.size())
        throw ShapeError("ObservedJoint: declared n disagrees with data");
    return ObservedJoint::from_rows(rows);
}

inline LatentJoint parse_latent(const json& j) {
    auto rows = detail::nested2(j.at("data"));
    LatentJoint mu = LatentJoint::from_rows(rows);
    if (j.contains("n") && detail::json_dim(j, "n") != mu.n())
        throw ShapeError("LatentJoint: declared n disagrees with data");
    if (j.contains("k") && detail::json_dim(j, "k") != mu.k())
        throw ShapeError("LatentJoint: declared k disagrees with data");
    return mu;
}

inline ResponseKernel parse_kernel(const json& j) {
    std::vector<std::vector<std::vector<double>>> data;
    try {
        data = j.at("data").get<std::vector<std::vector<std::vector<double>>>>();
    } catch (const json::exception& e) {
        throw ShapeError(std::string("ResponseKernel: ") + e.what());
    }
    ResponseKernel nu = ResponseKernel::from_nested(data);
    if (j.contains("n") && detail::json_dim(j, "n") != nu.n())
        throw ShapeError("ResponseKernel: declared n disagrees with data");
    if (j.contains("k") && detail::json_dim(j, "k") != nu.k())
        throw ShapeError("ResponseKernel: declared k disagrees with data");
    return nu;
}

inline ConditionalMatrix parse_conditional(const json& j) {
    auto rows = detail::nested2(j.at("data"));
    if (j.contains("n") && detail::json_dim(j, "n") != rows.size())
        throw ShapeError("ConditionalMatrix: declared n disagrees with data");
    return ConditionalMatrix::from_rows(rows);
}

inline ObjectiveMatrix parse_objective(const json& j) {
    auto rows = detail::nested2(j.at("data"));
    if (j.contains("n") && detail::json_dim(j, "n") != rows.size())
        throw ShapeError("ObjectiveMatrix: declared n disagrees with data");
    return ObjectiveMatrix::from_rows(rows);
}

// FNV-1a over the canonical dump (sorted keys, shortest round-trip decimals),
// so the digest changes exactly when the canonicalized content changes.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string canonical_digest(const json& canonical) {
    static const char* hex = "0123456789abcdef";
    std::uint64_t h = fnv1a64(canonical.dump());
    std::string out(16, '0');
    for (std::size_t i = 16; i-- > 0; h >>= 4) out[i] = hex[h & 0xF];
    return out;
}

}  // namespace interbound
