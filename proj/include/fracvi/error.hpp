#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace fracvi {

/// Argument outside the admissible domain (alpha out of [0,1], h <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Sequence lengths or state dimensions that do not agree.
class LengthMismatch : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Newton iteration did not reach the residual tolerance.
class NewtonDiverged : public std::runtime_error {
public:
    NewtonDiverged(double residual_norm, int iterations, std::optional<std::size_t> step = std::nullopt);

    double residual_norm() const noexcept { return residual_norm_; }
    int iterations() const noexcept { return iterations_; }
    /// Index k of the time step being solved for, when raised from an integrator.
    std::optional<std::size_t> step() const noexcept { return step_; }

    NewtonDiverged at_step(std::size_t step) const { return {residual_norm_, iterations_, step}; }

private:
    double residual_norm_;
    int iterations_;
    std::optional<std::size_t> step_;
};

class SingularMatrix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fracvi
