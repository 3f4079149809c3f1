#include "fracvi/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracvi/error.hpp"

namespace fracvi {

namespace {

void check_dim(const State& v, Eigen::Index dim, const char* what)
{
    if (v.size() != dim) {
        throw LengthMismatch(std::string(what) + " has dimension " + std::to_string(v.size())
                             + ", expected " + std::to_string(dim));
    }
}

} // namespace

Potential::Potential(Value value, Gradient gradient, Hessian hessian)
    : value_(std::move(value)), gradient_(std::move(gradient)), hessian_(std::move(hessian))
{
    if (!value_ || !gradient_) {
        throw DomainError("potential needs both a value and a gradient");
    }
}

Potential Potential::quadratic(const State& c)
{
    if (c.size() == 0 || !(c.array() > 0.0).all() || !c.allFinite()) {
        throw DomainError("quadratic stiffness must be positive and finite");
    }
    Potential u(
        [c](const State& x) { return 0.5 * x.dot(c.cwiseProduct(x)); },
        [c](const State& x) -> State { return c.cwiseProduct(x); },
        [c](const State&) -> Eigen::MatrixXd { return c.asDiagonal(); });
    u.quadratic_ = c;
    return u;
}

Eigen::MatrixXd Potential::hessian(const State& x) const
{
    if (!hessian_) {
        throw DomainError("potential has no Hessian");
    }
    return hessian_(x);
}

ExternalForce::ExternalForce(std::vector<Segment> segments, Eigen::Index dim)
    : segments_(std::move(segments)), dim_(dim)
{
    if (dim <= 0) {
        throw DomainError("force dimension must be positive");
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        if (!std::isfinite(s.t_start) || !std::isfinite(s.t_end) || s.t_start > s.t_end) {
            throw DomainError("force interval " + std::to_string(i) + " is not a finite [t0,t1]");
        }
        check_dim(s.value, dim, "force value");
        if (!s.value.allFinite()) {
            throw DomainError("force value " + std::to_string(i) + " is not finite");
        }
    }
    std::vector<const Segment*> order;
    for (const auto& s : segments_) {
        order.push_back(&s);
    }
    std::sort(order.begin(), order.end(),
              [](const Segment* a, const Segment* b) { return a->t_start < b->t_start; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (order[i]->t_start < order[i - 1]->t_end) {
            throw DomainError("force intervals overlap");
        }
    }
}

ExternalForce ExternalForce::scalar(const std::vector<std::array<double, 3>>& rows, Eigen::Index dim)
{
    std::vector<Segment> segments;
    segments.reserve(rows.size());
    for (const auto& [t0, t1, v] : rows) {
        segments.push_back({t0, t1, State::Constant(dim, v)});
    }
    return ExternalForce(std::move(segments), dim);
}

State ExternalForce::at(double t) const
{
    State f = State::Zero(dim_);
    for (const auto& s : segments_) {
        if (t >= s.t_start && t <= s.t_end) {
            f = s.value;
        }
    }
    return f;
}

State force_at(const ExternalForce& force, double t)
{
    return force.at(t);
}

MechModel::MechModel(State mass, State damping, Potential potential, std::optional<ExternalForce> force)
    : mass_(std::move(mass)), damping_(std::move(damping)), potential_(std::move(potential)),
      force_(std::move(force))
{
    if (mass_.size() == 0) {
        throw DomainError("model dimension must be positive");
    }
    check_dim(damping_, dim(), "damping");
    if (!(mass_.array() > 0.0).all() || !mass_.allFinite()) {
        throw DomainError("mass entries must be positive and finite");
    }
    if (!(damping_.array() >= 0.0).all() || !damping_.allFinite()) {
        throw DomainError("damping entries must be non-negative and finite");
    }
    if (const auto& c = potential_.quadratic_coefficients()) {
        check_dim(*c, dim(), "stiffness");
    }
    if (force_ && force_->dim() != dim()) {
        throw LengthMismatch("force dimension does not match model dimension");
    }
}

State MechModel::force_at(double t) const
{
    return force_ ? force_->at(t) : State::Zero(dim());
}

MechModel MechModel::with_damping(State damping) const
{
    return MechModel(mass_, std::move(damping), potential_, force_);
}

double energy(const MechModel& model, const State& x, const State& p)
{
    check_dim(x, model.dim(), "position");
    check_dim(p, model.dim(), "momentum");
    return 0.5 * p.dot(p.cwiseQuotient(model.mass())) + model.potential().value(x);
}

MechModel scalar_quadratic_model(double mass, double stiffness, double damping,
                                 std::optional<ExternalForce> force)
{
    return MechModel(State::Constant(1, mass), State::Constant(1, damping),
                     Potential::quadratic(State::Constant(1, stiffness)), std::move(force));
}

} // namespace fracvi
