#pragma once

// Time steppers for mechanical systems with (fractional) damping.
//
// All Lagrangian schemes use the discrete mechanical Lagrangian
//   L_d(a, b) = 1/(2h) (b-a).m.(b-a) - h U(kappa a + (1-kappa) b)
// and solve, for k = 1..N-1,
//   m (x_{k+1} - 2 x_k + x_{k-1}) / h^2 + kappa grad U(S x_k) + (1-kappa) grad U(S x_{k-1})
//       + g_k - F(t_k) = 0
// for x_{k+1}, where S z_k = kappa z_k + (1-kappa) z_{k+1} and g_k is the
// scheme's dissipation term, built from x_0..x_k only:
//   fvi: g_k = rho D-^a D-^a x_k
//   lda: g_k = rho (x_k - x_{k-1}) / h
//   vi:  g_k = 0

#include <cstddef>
#include <vector>

#include "fracvi/fracops.hpp"
#include "fracvi/models.hpp"
#include "fracvi/newton.hpp"

namespace fracvi {

struct IntegratorConfig {
    double alpha = 0.5;
    double kappa = 0.5;
    double h = 0.1;
    std::size_t n_steps = 100;
    State x0;
    State p0;
    double newton_tol = 1e-12;
    int newton_max_iter = 50;
    double start_time = 0.0;

    Grid grid() const { return Grid(start_time, h, n_steps); }
    NewtonOptions newton() const { return {newton_tol, newton_max_iter}; }
};

struct Trajectory {
    Grid grid;
    Series x;
    Series p;                     // empty for position-only references
    std::vector<double> energy;   // empty when p is
    std::vector<int> newton_iterations;

    std::size_t size() const noexcept { return x.size(); }
    bool has_momentum() const noexcept { return !p.empty(); }
};

/// Throws DomainError / LengthMismatch when the config does not fit the model.
void validate(const MechModel& model, const IntegratorConfig& config);

/// Partial derivatives of the discrete mechanical Lagrangian.
State d1_discrete_lagrangian(const MechModel& model, double kappa, double h, const State& a, const State& b);
State d2_discrete_lagrangian(const MechModel& model, double kappa, double h, const State& a, const State& b);

/// x_1 from p_0 = -D_1 L_d(x_0, x_1).
State fvi_init(const MechModel& model, const IntegratorConfig& config);

/// Fractional variational integrator. The fractional memory term is causal.
Trajectory fvi_run(const MechModel& model, const IntegratorConfig& config);

/// Forced variational integrator with f- = 0 and f+(a, b) = -rho (b - a).
Trajectory lda_run(const MechModel& model, const IntegratorConfig& config);

/// Plain variational integrator; damping in the model is ignored.
Trajectory vi_run(const MechModel& model, const IntegratorConfig& config);

/// First-order Euler schemes for x' = m^-1 p, p' = -grad U(x) - rho m^-1 p + F(t).
/// They integrate the linear-damping system whatever config.alpha says.
Trajectory euler_explicit_run(const MechModel& model, const IntegratorConfig& config);
Trajectory euler_implicit_run(const MechModel& model, const IntegratorConfig& config);

/// Discrete Hamilton equations obtained from momentum matching with kappa = 0:
///   x_{k+1} = x_k + h m^-1 p_k
///   q_{k+1} = -h rho D-^a x_{k+1}
///   p_{k+1} = p_k - h grad U(x_{k+1}) + (D-^a q)_{k+1} + h F(t_{k+1})
/// Fully explicit. config.kappa is ignored (treated as 0).
Trajectory ham_fvi_run(const MechModel& model, const IntegratorConfig& config);

/// Advanced (mirror) residual at interior index k of a reversed sequence y:
///   m (y_{k+1} - 2 y_k + y_{k-1}) / h^2 + kappa grad U(S y_k) + (1-kappa) grad U(S y_{k-1})
///       + rho D+^a D+^a y_k
State mirror_residual(const MechModel& model, double kappa, const GrunwaldTable& table, double h,
                      std::span<const State> y, std::size_t k);

/// Residual of the retarded equation at interior index k of x (unforced).
State fvi_residual(const MechModel& model, double kappa, const GrunwaldTable& table, double h,
                   std::span<const State> x, std::size_t k);

/// Emits the well-posedness warning for alpha > 1/2 on stderr unless
/// FRACVI_WARN=0. Returns whether a warning was written.
bool warn_if_alpha_above_half(double alpha);

} // namespace fracvi
