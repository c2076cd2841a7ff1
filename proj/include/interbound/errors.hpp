#pragma once

#include <stdexcept>
#include <string>

namespace interbound {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Container has the wrong dimensions or ragged nesting.
struct ShapeError : Error {
    using Error::Error;
};

// An entry is below -tolerance.
struct NegativeMass : Error {
    using Error::Error;
};

// A row sum or total mass is off by more than the tolerance.
struct MassMismatch : Error {
    using Error::Error;
};

// A conditional distribution was requested for an outcome with zero mass.
struct ZeroMarginal : Error {
    explicit ZeroMarginal(std::size_t x)
        : Error("zero marginal at x=" + std::to_string(x)), x(x) {}
    std::size_t x;
};

// The X-marginal of mu does not match the X-marginal of pi.
struct MarginalMismatch : Error {
    using Error::Error;
};

// The solver could not reach the required accuracy.
struct NumericalFailure : Error {
    using Error::Error;
};

// A diagonal functional with no positive weight.
struct EmptySupport : Error {
    using Error::Error;
};

// A row of mu carries no mass where positive mass is required.
struct DegenerateRow : Error {
    explicit DegenerateRow(std::size_t x)
        : Error("mu row x=" + std::to_string(x) + " carries no mass"), x(x) {}
    std::size_t x;
};

// A model reconstruction was requested for a point outside the polytope.
struct MembershipViolated : Error {
    using Error::Error;
};

// An enumeration would exceed the candidate-count guard.
struct TooLarge : Error {
    explicit TooLarge(double candidates)
        : Error("enumeration too large: " + std::to_string(candidates) +
                " candidates"),
          candidates(candidates) {}
    double candidates;
};

}  // namespace interbound
