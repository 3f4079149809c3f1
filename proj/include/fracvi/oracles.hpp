#pragma once

#include <utility>

#include "fracvi/fracops.hpp"
#include "fracvi/integrators.hpp"
#include "fracvi/models.hpp"

namespace fracvi {

/// Scalar linearly damped oscillator m x'' + c x + rho x' = 0.
struct OscillatorParams {
    double m = 1.0;
    double c = 1.0;
    double rho = 0.2;
    double x0 = 1.0;
    double p0 = 0.5;
};

/// Closed-form (x(t), p(t)) in the underdamped regime rho^2 < 4 m c.
/// Throws DomainError for overdamped or critically damped parameters.
std::pair<double, double> exact_oscillator(const OscillatorParams& params, double t);

/// Exact solution sampled on a grid, with energies.
Trajectory exact_oscillator_trajectory(const OscillatorParams& params, const Grid& grid);

struct MatrixOracleResult {
    Trajectory trajectory;        // positions only
    double residual_norm = 0.0;   // |A x - b|_inf of the assembled system, worst component
    double rhs_norm = 0.0;        // |b|_inf
};

/// Triangular-matrix benchmark for m x'' + rho D^beta x + c x = F(t) with
/// x(0) = x'(0) = 0. Row k >= 2 reads
///   m h^-2 (x_k - 2 x_{k-1} + x_{k-2}) + rho (T_beta x)_k + c x_k = F(t_k),
/// rows 0 and 1 impose x_0 = 0 and (x_1 - x_0)/h = 0. Requires a quadratic
/// potential. Solved per component with dense partially pivoted LU; throws
/// SingularMatrix on a zero pivot.
MatrixOracleResult matrix_oracle_solve(const MechModel& model, const Grid& grid, double beta);

} // namespace fracvi
