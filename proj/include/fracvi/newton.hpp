#pragma once

#include <functional>

#include <Eigen/Dense>

#include "fracvi/fracops.hpp"

namespace fracvi {

using Residual = std::function<State(const State&)>;
using Jacobian = std::function<Eigen::MatrixXd(const State&)>;

struct NewtonOptions {
    double tol = 1e-12;  // infinity norm of the residual
    int max_iter = 50;
};

struct NewtonResult {
    State x;
    int iterations = 0;
    double residual_norm = 0.0;
};

/// Newton's method for r(x) = 0. Without `jacobian` the Jacobian is formed by
/// forward differences with step 1e-7 (1 + |x_j|). Stops as soon as
/// |r(x)|_inf <= tol; throws NewtonDiverged after max_iter updates, on a
/// singular Jacobian, or on a non-finite iterate.
NewtonResult newton_solve(const Residual& residual, const Jacobian& jacobian, State guess,
                          const NewtonOptions& options = {});

Eigen::MatrixXd finite_difference_jacobian(const Residual& residual, const State& x, const State& r0);

} // namespace fracvi
