#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fracvi/integrators.hpp"
#include "fracvi/models.hpp"

namespace fracvi {

enum class Quantity { Position, Momentum, Energy };

struct ConvergenceReport {
    std::vector<double> h_values;  // strictly decreasing
    std::vector<double> errors;
    double slope = 0.0;
    double intercept = 0.0;
    double max_fit_residual = 0.0;  // in log space
};

/// max_k |q(t_k) - q_k| against a reference evaluated at the grid times.
/// For Quantity::Energy the callable returns a one-element vector.
double global_error(const Trajectory& traj, const std::function<State(double)>& reference,
                    Quantity quantity = Quantity::Position);

/// Against a reference trajectory on the same grid or on a finer grid whose
/// step divides h; the reference is then sampled at the coincident nodes.
double global_error(const Trajectory& traj, const Trajectory& reference,
                    Quantity quantity = Quantity::Position);

/// Least-squares line through (log h, log error).
ConvergenceReport fit_slope(std::vector<double> h_values, std::vector<double> errors);

std::vector<double> energy_series(const MechModel& model, const Trajectory& traj);

/// max_k |x^A_k - x^B_k|.
double compare(const Trajectory& a, const Trajectory& b);

/// x_k -> x_{N-k}; momenta change sign and the grid direction flips.
Trajectory reverse(const Trajectory& traj);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares line through (i, y_i).
LineFit linear_trend(std::span<const double> y);

} // namespace fracvi
