#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fracvi/fracops.hpp"

namespace fracvi {

/// Potential energy U(x) with its gradient and, optionally, its Hessian.
class Potential {
public:
    using Value = std::function<double(const State&)>;
    using Gradient = std::function<State(const State&)>;
    using Hessian = std::function<Eigen::MatrixXd(const State&)>;

    /// User-supplied potential. `hessian` may be empty; Newton then falls
    /// back to finite-difference Jacobians.
    Potential(Value value, Gradient gradient, Hessian hessian = {});

    /// U(x) = 1/2 x.diag(c).x with c > 0 componentwise.
    static Potential quadratic(const State& c);

    double value(const State& x) const { return value_(x); }
    State gradient(const State& x) const { return gradient_(x); }
    bool has_hessian() const noexcept { return static_cast<bool>(hessian_); }
    Eigen::MatrixXd hessian(const State& x) const;

    /// Stiffness vector c when this is a built-in quadratic potential.
    const std::optional<State>& quadratic_coefficients() const noexcept { return quadratic_; }

private:
    Value value_;
    Gradient gradient_;
    Hessian hessian_;
    std::optional<State> quadratic_;
};

/// Piecewise-constant forcing. Intervals are closed on both ends and may touch;
/// where two intervals share an endpoint the later one wins. Zero elsewhere.
class ExternalForce {
public:
    struct Segment {
        double t_start;
        double t_end;
        State value;
    };

    ExternalForce(std::vector<Segment> segments, Eigen::Index dim);

    /// Every segment carries the same scalar value on each component.
    static ExternalForce scalar(const std::vector<std::array<double, 3>>& rows, Eigen::Index dim = 1);

    State at(double t) const;
    Eigen::Index dim() const noexcept { return dim_; }
    const std::vector<Segment>& segments() const noexcept { return segments_; }

private:
    std::vector<Segment> segments_;
    Eigen::Index dim_;
};

State force_at(const ExternalForce& force, double t);

/// Mechanical system with diagonal mass m and diagonal damping rho:
///   L(x, v) = 1/2 v.m.v - U(x), damping term rho D-^a D-^a x.
class MechModel {
public:
    MechModel(State mass, State damping, Potential potential,
              std::optional<ExternalForce> force = std::nullopt);

    Eigen::Index dim() const noexcept { return mass_.size(); }
    const State& mass() const noexcept { return mass_; }
    const State& damping() const noexcept { return damping_; }
    const Potential& potential() const noexcept { return potential_; }
    const std::optional<ExternalForce>& force() const noexcept { return force_; }

    /// F(t), or zero when the model is unforced.
    State force_at(double t) const;

    MechModel with_damping(State damping) const;

private:
    State mass_;
    State damping_;
    Potential potential_;
    std::optional<ExternalForce> force_;
};

/// 1/2 p.m^-1.p + U(x).
double energy(const MechModel& model, const State& x, const State& p);

/// Scalar model m x'' + c x + rho D^(2a) x = F.
MechModel scalar_quadratic_model(double mass, double stiffness, double damping,
                                 std::optional<ExternalForce> force = std::nullopt);

} // namespace fracvi
