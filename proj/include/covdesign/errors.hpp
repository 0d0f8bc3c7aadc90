#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace covdesign {

/// No parameter set in the searched family satisfies the realizability
/// conditions for the requested sample count and dimension.
class infeasible_design_error : public std::runtime_error {
public:
    explicit infeasible_design_error(const std::string& what)
        : std::runtime_error(what) {}
};

/// A generator ran out of budget before reaching the requested sample count.
/// Carries the number of points that were actually placed.
class partial_design_error : public std::runtime_error {
public:
    partial_design_error(const std::string& what, std::size_t achieved)
        : std::runtime_error(what), achieved_(achieved) {}

    std::size_t achieved() const noexcept { return achieved_; }

private:
    std::size_t achieved_;
};

/// Numerical failure (e.g. a covariance factorization that cannot be
/// stabilized by jitter).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace covdesign
