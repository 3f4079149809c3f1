#include "fracvi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracvi/error.hpp"

namespace fracvi {

namespace {

double max_abs_diff(const State& a, const State& b)
{
    if (a.size() != b.size()) {
        throw LengthMismatch("state dimensions differ");
    }
    return a.size() == 0 ? 0.0 : (a - b).lpNorm<Eigen::Infinity>();
}

State sample(const Trajectory& traj, std::size_t k, Quantity quantity)
{
    switch (quantity) {
    case Quantity::Position:
        return traj.x[k];
    case Quantity::Momentum:
        if (!traj.has_momentum()) {
            throw DomainError("trajectory carries no momenta");
        }
        return traj.p[k];
    case Quantity::Energy:
        if (traj.energy.empty()) {
            throw DomainError("trajectory carries no energies");
        }
        return State::Constant(1, traj.energy[k]);
    }
    throw DomainError("unknown quantity");
}

struct Line {
    double slope;
    double intercept;
};

Line least_squares(std::span<const double> u, std::span<const double> v)
{
    const auto n = static_cast<double>(u.size());
    double mu = 0.0;
    double mv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        mu += u[i];
        mv += v[i];
    }
    mu /= n;
    mv /= n;
    double suu = 0.0;
    double suv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        suu += (u[i] - mu) * (u[i] - mu);
        suv += (u[i] - mu) * (v[i] - mv);
    }
    if (!(suu > 0.0)) {
        throw DomainError("degenerate abscissae in least-squares fit");
    }
    const double slope = suv / suu;
    return {slope, mv - slope * mu};
}

} // namespace

double global_error(const Trajectory& traj, const std::function<State(double)>& reference, Quantity quantity)
{
    double err = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        err = std::max(err, max_abs_diff(sample(traj, k, quantity), reference(traj.grid.t(k))));
    }
    return err;
}

double global_error(const Trajectory& traj, const Trajectory& reference, Quantity quantity)
{
    const double h = traj.grid.h();
    const double href = reference.grid.h();
    const double ratio = std::round(h / href);
    if (ratio < 1.0 || std::abs(ratio * href - h) > 1e-9 * h) {
        throw LengthMismatch("reference step must divide the trajectory step");
    }
    if (std::abs(traj.grid.start() - reference.grid.start()) > 1e-12 * std::max(1.0, h)) {
        throw LengthMismatch("grids start at different times");
    }
    const auto stride = static_cast<std::size_t>(ratio);
    if ((traj.size() - 1) * stride >= reference.size()) {
        throw LengthMismatch("reference grid does not cover the trajectory");
    }
    double err = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        err = std::max(err, max_abs_diff(sample(traj, k, quantity), sample(reference, k * stride, quantity)));
    }
    return err;
}

ConvergenceReport fit_slope(std::vector<double> h_values, std::vector<double> errors)
{
    if (h_values.size() != errors.size()) {
        throw LengthMismatch("h values and errors differ in length");
    }
    if (h_values.size() < 3) {
        throw DomainError("slope fit needs at least 3 step sizes");
    }
    for (std::size_t i = 0; i < h_values.size(); ++i) {
        if (!(h_values[i] > 0.0) || (i > 0 && !(h_values[i] < h_values[i - 1]))) {
            throw DomainError("h values must be positive and strictly decreasing");
        }
        if (!(errors[i] > 0.0) || !std::isfinite(errors[i])) {
            throw DomainError("error at h = " + std::to_string(h_values[i])
                              + " is not positive; slope not fitted");
        }
    }
    std::vector<double> lh(h_values.size());
    std::vector<double> le(errors.size());
    std::transform(h_values.begin(), h_values.end(), lh.begin(), [](double v) { return std::log(v); });
    std::transform(errors.begin(), errors.end(), le.begin(), [](double v) { return std::log(v); });
    const Line line = least_squares(lh, le);
    double worst = 0.0;
    for (std::size_t i = 0; i < lh.size(); ++i) {
        worst = std::max(worst, std::abs(le[i] - (line.intercept + line.slope * lh[i])));
    }
    return {std::move(h_values), std::move(errors), line.slope, line.intercept, worst};
}

std::vector<double> energy_series(const MechModel& model, const Trajectory& traj)
{
    if (!traj.has_momentum()) {
        throw DomainError("trajectory carries no momenta");
    }
    std::vector<double> e(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        e[k] = energy(model, traj.x[k], traj.p[k]);
    }
    return e;
}

double compare(const Trajectory& a, const Trajectory& b)
{
    if (a.size() != b.size()) {
        throw LengthMismatch("trajectories differ in length: " + std::to_string(a.size()) + " vs "
                             + std::to_string(b.size()));
    }
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        d = std::max(d, max_abs_diff(a.x[k], b.x[k]));
    }
    return d;
}

Trajectory reverse(const Trajectory& traj)
{
    Trajectory out{traj.grid.reversed(), {traj.x.rbegin(), traj.x.rend()}, {}, {traj.energy.rbegin(), traj.energy.rend()},
                   {traj.newton_iterations.rbegin(), traj.newton_iterations.rend()}};
    out.p.reserve(traj.p.size());
    for (auto it = traj.p.rbegin(); it != traj.p.rend(); ++it) {
        out.p.push_back(-*it);
    }
    return out;
}

LineFit linear_trend(std::span<const double> y)
{
    std::vector<double> idx(y.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        idx[i] = static_cast<double>(i);
    }
    const Line line = least_squares(idx, y);
    return {line.slope, line.intercept};
}

} // namespace fracvi
