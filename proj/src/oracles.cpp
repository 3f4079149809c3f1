#include "fracvi/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracvi/error.hpp"

namespace fracvi {

std::pair<double, double> exact_oscillator(const OscillatorParams& params, double t)
{
    const auto [m, c, rho, x0, p0] = params;
    if (!(m > 0.0) || !(c > 0.0) || !(rho >= 0.0)) {
        throw DomainError("oscillator needs m > 0, c > 0, rho >= 0");
    }
    if (!(rho * rho < 4.0 * m * c)) {
        throw DomainError("oscillator is not underdamped (rho^2 >= 4 m c)");
    }
    const double zeta = rho / (2.0 * m);
    const double omega = std::sqrt(c / m - zeta * zeta);
    const double a = x0;
    const double b = (p0 / m + zeta * x0) / omega;
    const double decay = std::exp(-zeta * t);
    const double cs = std::cos(omega * t);
    const double sn = std::sin(omega * t);
    const double x = decay * (a * cs + b * sn);
    const double v = decay * ((b * omega - zeta * a) * cs - (a * omega + zeta * b) * sn);
    return {x, m * v};
}

Trajectory exact_oscillator_trajectory(const OscillatorParams& params, const Grid& grid)
{
    Trajectory traj{grid, {}, {}, {}, std::vector<int>(grid.size(), 0)};
    traj.x.reserve(grid.size());
    traj.p.reserve(grid.size());
    traj.energy.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto [x, p] = exact_oscillator(params, grid.t(k));
        traj.x.push_back(State::Constant(1, x));
        traj.p.push_back(State::Constant(1, p));
        traj.energy.push_back(0.5 * p * p / params.m + 0.5 * params.c * x * x);
    }
    return traj;
}

MatrixOracleResult matrix_oracle_solve(const MechModel& model, const Grid& grid, double beta)
{
    if (!(beta > 0.0 && beta <= 2.0)) {
        throw DomainError("fractional order beta must lie in (0,2], got " + std::to_string(beta));
    }
    const auto& stiffness = model.potential().quadratic_coefficients();
    if (!stiffness) {
        throw DomainError("matrix oracle requires a quadratic potential");
    }
    const std::size_t size = grid.size();
    const auto n = static_cast<Eigen::Index>(size);
    const double h = grid.h();
    const GrunwaldTable second(1.0, grid.n_steps());
    const GrunwaldTable frac(beta / 2.0, grid.n_steps());
    const auto c2 = second.squared();
    const auto cb = frac.squared();
    const double h2 = 1.0 / (h * h);
    const double hb = std::pow(h, -beta);

    MatrixOracleResult out{Trajectory{grid, Series(size, State::Zero(model.dim())), {}, {},
                                      std::vector<int>(size, 0)},
                           0.0, 0.0};

    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index comp = 0; comp < model.dim(); ++comp) {
        const double m = model.mass()[comp];
        const double rho = model.damping()[comp];
        const double c = (*stiffness)[comp];
        // Toeplitz band of the system: w_l multiplies x_{k-l}.
        std::vector<double> w(size);
        for (std::size_t l = 0; l < size; ++l) {
            w[l] = m * h2 * c2[l] + rho * hb * cb[l] + (l == 0 ? c : 0.0);
        }

        a.setZero();
        for (Eigen::Index i = 2; i < n; ++i) {
            for (Eigen::Index j = 0; j <= i; ++j) {
                a(i, j) = w[static_cast<std::size_t>(i - j)];
            }
        }
        a(0, 0) = 1.0;
        a(1, 0) = -1.0 / h;
        a(1, 1) = 1.0 / h;
        rhs.setZero();
        for (Eigen::Index i = 2; i < n; ++i) {
            rhs[i] = model.force_at(grid.t(static_cast<std::size_t>(i)))[comp];
        }

        Eigen::PartialPivLU<Eigen::Ref<Eigen::MatrixXd>> lu(a);
        const auto diag = lu.matrixLU().diagonal();
        if (!diag.allFinite() || (diag.array() == 0.0).any()) {
            throw SingularMatrix("matrix oracle system is singular");
        }
        const Eigen::VectorXd x = lu.solve(rhs);
        if (!x.allFinite()) {
            throw SingularMatrix("matrix oracle solution is not finite");
        }

        // Residual from the Toeplitz band, independent of the factorisation.
        double res = std::max(std::abs(x[0]), std::abs((x[1] - x[0]) / h));
        for (Eigen::Index i = 2; i < n; ++i) {
            double s = 0.0;
            for (Eigen::Index l = 0; l <= i; ++l) {
                s += w[static_cast<std::size_t>(l)] * x[i - l];
            }
            res = std::max(res, std::abs(s - rhs[i]));
        }
        out.residual_norm = std::max(out.residual_norm, res);
        out.rhs_norm = std::max(out.rhs_norm, rhs.lpNorm<Eigen::Infinity>());
        for (std::size_t k = 0; k < size; ++k) {
            out.trajectory.x[k][comp] = x[static_cast<Eigen::Index>(k)];
        }
    }
    return out;
}

} // namespace fracvi
