#include "fracvi/newton.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "fracvi/error.hpp"

namespace fracvi {

namespace {

std::string diverged_message(double residual_norm, int iterations, std::optional<std::size_t> step)
{
    std::ostringstream os;
    os << "Newton iteration failed";
    if (step) {
        os << " at step " << *step;
    }
    os << " after " << iterations << " iterations (residual " << residual_norm << ")";
    return os.str();
}

double inf_norm(const State& r)
{
    return r.size() == 0 ? 0.0 : r.lpNorm<Eigen::Infinity>();
}

} // namespace

NewtonDiverged::NewtonDiverged(double residual_norm, int iterations, std::optional<std::size_t> step)
    : std::runtime_error(diverged_message(residual_norm, iterations, step)),
      residual_norm_(residual_norm), iterations_(iterations), step_(step)
{}

Eigen::MatrixXd finite_difference_jacobian(const Residual& residual, const State& x, const State& r0)
{
    const Eigen::Index n = x.size();
    Eigen::MatrixXd jac(r0.size(), n);
    State probe = x;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double step = 1e-7 * (1.0 + std::abs(x[j]));
        probe[j] = x[j] + step;
        jac.col(j) = (residual(probe) - r0) / step;
        probe[j] = x[j];
    }
    return jac;
}

NewtonResult newton_solve(const Residual& residual, const Jacobian& jacobian, State guess,
                          const NewtonOptions& options)
{
    if (!(options.tol > 0.0) || options.max_iter < 0) {
        throw DomainError("Newton tolerance must be positive and max_iter non-negative");
    }
    State x = std::move(guess);
    double norm = std::numeric_limits<double>::infinity();
    for (int it = 0;; ++it) {
        const State r = residual(x);
        norm = inf_norm(r);
        if (!std::isfinite(norm)) {
            throw NewtonDiverged(norm, it);
        }
        if (norm <= options.tol) {
            return {std::move(x), it, norm};
        }
        if (it == options.max_iter) {
            throw NewtonDiverged(norm, it);
        }
        const Eigen::MatrixXd jac = jacobian ? jacobian(x) : finite_difference_jacobian(residual, x, r);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
        if (!lu.isInvertible()) {
            throw NewtonDiverged(norm, it);
        }
        x -= lu.solve(r);
    }
}

} // namespace fracvi
