#include "fracvi/integrators.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <iostream>
#include <memory>
#include <string>

#include "fracvi/error.hpp"

namespace fracvi {

namespace {

// g_k from the prefix x_0..x_k.
using DissipationTerm = std::function<State(std::span<const State>)>;

State quadrature_point(double kappa, const State& a, const State& b)
{
    return kappa * a + (1.0 - kappa) * b;
}

NewtonResult solve_at(std::size_t index, const Residual& r, const Jacobian& j, State guess,
                      const NewtonOptions& options)
{
    try {
        return newton_solve(r, j, std::move(guess), options);
    } catch (const NewtonDiverged& e) {
        throw e.at_step(index);
    }
}

void finish_energy(const MechModel& model, Trajectory& traj)
{
    traj.energy.resize(traj.x.size());
    for (std::size_t k = 0; k < traj.x.size(); ++k) {
        traj.energy[k] = energy(model, traj.x[k], traj.p[k]);
    }
}

Trajectory run_discrete_el(const MechModel& model, const IntegratorConfig& config,
                           const DissipationTerm& dissipation)
{
    validate(model, config);
    const Grid grid = config.grid();
    const std::size_t n = grid.n_steps();
    const double h = grid.h();
    const double kappa = config.kappa;
    const NewtonOptions options = config.newton();
    const State& mass = model.mass();
    const Potential& potential = model.potential();

    Trajectory traj{grid, {}, {}, {}, {}};
    traj.x.reserve(n + 1);
    traj.newton_iterations.assign(n + 1, 0);
    traj.x.push_back(config.x0);
    traj.x.push_back(fvi_init(model, config));

    for (std::size_t k = 1; k < n; ++k) {
        const State& xk = traj.x[k];
        const State& xprev = traj.x[k - 1];
        const State g = dissipation(std::span<const State>(traj.x.data(), k + 1));
        // Terms that do not depend on x_{k+1}.
        const State fixed = -d2_discrete_lagrangian(model, kappa, h, xprev, xk) / h + g - model.force_at(grid.t(k));

        const Residual residual = [&](const State& next) -> State {
            return -d1_discrete_lagrangian(model, kappa, h, xk, next) / h + fixed;
        };
        Jacobian jacobian;
        if (potential.has_hessian()) {
            jacobian = [&](const State& next) -> Eigen::MatrixXd {
                Eigen::MatrixXd jac = kappa * (1.0 - kappa) * potential.hessian(quadrature_point(kappa, xk, next));
                jac.diagonal() += mass / (h * h);
                return jac;
            };
        }
        auto result = solve_at(k + 1, residual, jacobian, 2.0 * xk - xprev, options);
        traj.newton_iterations[k + 1] = result.iterations;
        traj.x.push_back(std::move(result.x));
    }

    // p_k = -D_1 L_d(x_k, x_{k+1}); p_N = D_2 L_d(x_{N-1}, x_N) - h g_N + h F(t_N).
    traj.p.resize(n + 1);
    traj.p[0] = config.p0;
    for (std::size_t k = 1; k < n; ++k) {
        traj.p[k] = -d1_discrete_lagrangian(model, kappa, h, traj.x[k], traj.x[k + 1]);
    }
    traj.p[n] = d2_discrete_lagrangian(model, kappa, h, traj.x[n - 1], traj.x[n])
              - h * dissipation(std::span<const State>(traj.x.data(), n + 1)) + h * model.force_at(grid.t(n));
    finish_energy(model, traj);
    return traj;
}

} // namespace

void validate(const MechModel& model, const IntegratorConfig& config)
{
    if (!(config.alpha >= 0.0 && config.alpha <= 1.0)) {
        throw DomainError("alpha must lie in [0,1], got " + std::to_string(config.alpha));
    }
    if (!(config.kappa >= 0.0 && config.kappa <= 1.0)) {
        throw DomainError("kappa must lie in [0,1], got " + std::to_string(config.kappa));
    }
    if (!(config.h > 0.0) || !std::isfinite(config.h)) {
        throw DomainError("h must be positive and finite");
    }
    if (config.n_steps < 2) {
        throw DomainError("n_steps must be at least 2");
    }
    if (!(config.newton_tol > 0.0) || config.newton_max_iter < 1) {
        throw DomainError("Newton tolerance must be positive and max_iter at least 1");
    }
    if (config.x0.size() != model.dim() || config.p0.size() != model.dim()) {
        throw LengthMismatch("initial state dimension does not match the model");
    }
    if (!config.x0.allFinite() || !config.p0.allFinite()) {
        throw DomainError("initial state must be finite");
    }
}

State d1_discrete_lagrangian(const MechModel& model, double kappa, double h, const State& a, const State& b)
{
    return -model.mass().cwiseProduct(b - a) / h
         - h * kappa * model.potential().gradient(quadrature_point(kappa, a, b));
}

State d2_discrete_lagrangian(const MechModel& model, double kappa, double h, const State& a, const State& b)
{
    return model.mass().cwiseProduct(b - a) / h
         - h * (1.0 - kappa) * model.potential().gradient(quadrature_point(kappa, a, b));
}

State fvi_init(const MechModel& model, const IntegratorConfig& config)
{
    validate(model, config);
    const double h = config.h;
    const double kappa = config.kappa;
    const State& x0 = config.x0;
    const Potential& potential = model.potential();

    const Residual residual = [&](const State& x1) -> State {
        return -d1_discrete_lagrangian(model, kappa, h, x0, x1) - config.p0;
    };
    Jacobian jacobian;
    if (potential.has_hessian()) {
        jacobian = [&](const State& x1) -> Eigen::MatrixXd {
            Eigen::MatrixXd jac = h * kappa * (1.0 - kappa) * potential.hessian(quadrature_point(kappa, x0, x1));
            jac.diagonal() += model.mass() / h;
            return jac;
        };
    }
    State guess = x0 + h * config.p0.cwiseQuotient(model.mass());
    return solve_at(1, residual, jacobian, std::move(guess), config.newton()).x;
}

Trajectory fvi_run(const MechModel& model, const IntegratorConfig& config)
{
    validate(model, config);
    warn_if_alpha_above_half(config.alpha);
    const auto table = std::make_shared<const GrunwaldTable>(config.alpha, config.n_steps);
    const State rho = model.damping();
    const double h = config.h;
    return run_discrete_el(model, config, [table, rho, h](std::span<const State> prefix) -> State {
        return rho.cwiseProduct(delta_minus_squared(prefix, *table, h));
    });
}

Trajectory lda_run(const MechModel& model, const IntegratorConfig& config)
{
    const State rho = model.damping();
    const double h = config.h;
    return run_discrete_el(model, config, [rho, h](std::span<const State> prefix) -> State {
        const std::size_t k = prefix.size() - 1;
        return rho.cwiseProduct(prefix[k] - prefix[k - 1]) / h;
    });
}

Trajectory vi_run(const MechModel& model, const IntegratorConfig& config)
{
    const Eigen::Index dim = model.dim();
    return run_discrete_el(model, config,
                           [dim](std::span<const State>) -> State { return State::Zero(dim); });
}

Trajectory euler_explicit_run(const MechModel& model, const IntegratorConfig& config)
{
    validate(model, config);
    const Grid grid = config.grid();
    const double h = grid.h();
    const State& mass = model.mass();
    const State& rho = model.damping();

    Trajectory traj{grid, {config.x0}, {config.p0}, {}, std::vector<int>(grid.size(), 0)};
    for (std::size_t k = 0; k < grid.n_steps(); ++k) {
        const State& x = traj.x[k];
        const State& p = traj.p[k];
        const State v = p.cwiseQuotient(mass);
        State next_p = p + h * (-model.potential().gradient(x) - rho.cwiseProduct(v) + model.force_at(grid.t(k)));
        traj.x.push_back(x + h * v);
        traj.p.push_back(std::move(next_p));
    }
    finish_energy(model, traj);
    return traj;
}

Trajectory euler_implicit_run(const MechModel& model, const IntegratorConfig& config)
{
    validate(model, config);
    const Grid grid = config.grid();
    const double h = grid.h();
    const Eigen::Index d = model.dim();
    const State& mass = model.mass();
    const State& rho = model.damping();
    const Potential& potential = model.potential();

    Trajectory traj{grid, {config.x0}, {config.p0}, {}, std::vector<int>(grid.size(), 0)};
    for (std::size_t k = 0; k < grid.n_steps(); ++k) {
        const State& x = traj.x[k];
        const State& p = traj.p[k];
        const State f = model.force_at(grid.t(k + 1));
        // z = (x_{k+1}, p_{k+1})
        const Residual residual = [&](const State& z) -> State {
            State r(2 * d);
            const auto xn = z.head(d);
            const auto pn = z.tail(d);
            r.head(d) = xn - x - h * pn.cwiseQuotient(mass);
            r.tail(d) = pn - p + h * (potential.gradient(xn) + rho.cwiseProduct(pn.cwiseQuotient(mass)) - f);
            return r;
        };
        Jacobian jacobian;
        if (potential.has_hessian()) {
            jacobian = [&](const State& z) -> Eigen::MatrixXd {
                Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(2 * d, 2 * d);
                jac.topRightCorner(d, d).diagonal() = -h * mass.cwiseInverse();
                jac.bottomLeftCorner(d, d) = h * potential.hessian(z.head(d));
                jac.bottomRightCorner(d, d).diagonal() += h * rho.cwiseQuotient(mass);
                return jac;
            };
        }
        State guess(2 * d);
        guess << x, p;
        auto result = solve_at(k + 1, residual, jacobian, std::move(guess), config.newton());
        traj.newton_iterations[k + 1] = result.iterations;
        traj.x.push_back(result.x.head(d));
        traj.p.push_back(result.x.tail(d));
    }
    finish_energy(model, traj);
    return traj;
}

Trajectory ham_fvi_run(const MechModel& model, const IntegratorConfig& config)
{
    validate(model, config);
    warn_if_alpha_above_half(config.alpha);
    const Grid grid = config.grid();
    const std::size_t n = grid.n_steps();
    const double h = grid.h();
    const GrunwaldTable table(config.alpha, n);
    const State& mass = model.mass();
    const State& rho = model.damping();

    Trajectory traj{grid, {config.x0}, {config.p0}, {}, std::vector<int>(grid.size(), 0)};
    traj.x.reserve(n + 1);
    traj.p.reserve(n + 1);
    // Fractional momenta q_j = -h rho D-^a x_j.
    Series q;
    q.reserve(n + 1);
    q.push_back(-h * rho.cwiseProduct(delta_minus(std::span<const State>(traj.x.data(), 1), table, h)));
    for (std::size_t k = 0; k < n; ++k) {
        traj.x.push_back(traj.x[k] + h * traj.p[k].cwiseQuotient(mass));
        const std::span<const State> prefix(traj.x.data(), k + 2);
        q.push_back(-h * rho.cwiseProduct(delta_minus(prefix, table, h)));
        const State& xn = traj.x[k + 1];
        traj.p.push_back(traj.p[k] - h * model.potential().gradient(xn)
                         + delta_minus(std::span<const State>(q.data(), k + 2), table, h)
                         + h * model.force_at(grid.t(k + 1)));
    }
    finish_energy(model, traj);
    return traj;
}

State fvi_residual(const MechModel& model, double kappa, const GrunwaldTable& table, double h,
                   std::span<const State> x, std::size_t k)
{
    if (k == 0 || k + 1 >= x.size()) {
        throw LengthMismatch("residual index must be interior");
    }
    return -(d1_discrete_lagrangian(model, kappa, h, x[k], x[k + 1])
             + d2_discrete_lagrangian(model, kappa, h, x[k - 1], x[k])) / h
         + model.damping().cwiseProduct(delta_minus_squared(x.first(k + 1), table, h));
}

State mirror_residual(const MechModel& model, double kappa, const GrunwaldTable& table, double h,
                      std::span<const State> y, std::size_t k)
{
    if (k == 0 || k + 1 >= y.size()) {
        throw LengthMismatch("residual index must be interior");
    }
    return -(d1_discrete_lagrangian(model, kappa, h, y[k], y[k + 1])
             + d2_discrete_lagrangian(model, kappa, h, y[k - 1], y[k])) / h
         + model.damping().cwiseProduct(delta_plus_squared(y.subspan(k), table, h));
}

bool warn_if_alpha_above_half(double alpha)
{
    if (!(alpha > 0.5)) {
        return false;
    }
    if (const char* env = std::getenv("FRACVI_WARN"); env != nullptr && std::strcmp(env, "0") == 0) {
        return false;
    }
    std::cerr << "warning: alpha = " << alpha
              << " > 1/2; existence of the discrete solution is only guaranteed for alpha in [0, 1/2]\n";
    return true;
}

} // namespace fracvi
