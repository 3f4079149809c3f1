#include "fracvi/fracops.hpp"

#include <cmath>
#include <string>

#include "fracvi/error.hpp"

namespace fracvi {

namespace {

void check_step(double h)
{
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw DomainError("step h must be positive and finite, got " + std::to_string(h));
    }
}

void check_length(std::size_t len, const GrunwaldTable& table)
{
    if (len == 0) {
        throw LengthMismatch("empty sequence");
    }
    if (len - 1 > table.n_max()) {
        throw LengthMismatch("sequence index " + std::to_string(len - 1) + " exceeds table n_max "
                             + std::to_string(table.n_max()));
    }
}

// sum_{n=0}^{len-1} w_n z[at(n)], componentwise.
template <class Value, class Index>
Value weighted_sum(std::span<const Value> z, std::span<const double> w, Index at)
{
    Value acc = w[0] * z[at(0)];
    for (std::size_t n = 1; n < z.size(); ++n) {
        acc += w[n] * z[at(n)];
    }
    return acc;
}

template <class Value>
Value retarded(std::span<const Value> z, std::span<const double> w, const GrunwaldTable& table,
               double h, double order)
{
    check_step(h);
    check_length(z.size(), table);
    const std::size_t k = z.size() - 1;
    Value acc = weighted_sum(z, w, [k](std::size_t n) { return k - n; });
    acc *= std::pow(h, -order);
    return acc;
}

template <class Value>
Value advanced(std::span<const Value> z, std::span<const double> w, const GrunwaldTable& table,
               double h, double order)
{
    check_step(h);
    check_length(z.size(), table);
    Value acc = weighted_sum(z, w, [](std::size_t n) { return n; });
    acc *= std::pow(h, -order);
    return acc;
}

} // namespace

GrunwaldTable::GrunwaldTable(double alpha, std::size_t n_max)
    : alpha_(alpha), coeffs_(n_max + 1), squared_(n_max + 1, 0.0)
{
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("fractional order alpha must lie in [0,1], got " + std::to_string(alpha));
    }
    coeffs_[0] = 1.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double dn = static_cast<double>(n);
        coeffs_[n] = coeffs_[n - 1] * (dn - 1.0 - alpha) / dn;
    }
    for (std::size_t n = 0; n <= n_max; ++n) {
        double s = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            s += coeffs_[j] * coeffs_[n - j];
        }
        squared_[n] = s;
    }
}

GrunwaldTable grunwald_coeffs(double alpha, long long n_max)
{
    if (n_max < 0) {
        throw DomainError("n_max must be non-negative, got " + std::to_string(n_max));
    }
    return GrunwaldTable(alpha, static_cast<std::size_t>(n_max));
}

Grid::Grid(double start, double h, std::size_t n_steps, Direction direction)
    : start_(start), h_(h), n_steps_(n_steps), direction_(direction)
{
    check_step(h);
    if (!std::isfinite(start)) {
        throw DomainError("grid start must be finite");
    }
    if (n_steps < 2) {
        throw DomainError("grid needs at least 2 steps, got " + std::to_string(n_steps));
    }
}

Grid Grid::reversed() const
{
    return Grid(start_, h_, n_steps_,
                direction_ == Direction::Forward ? Direction::Reversed : Direction::Forward);
}

State delta_minus(std::span<const State> z, const GrunwaldTable& table, double h)
{
    return retarded(z, table.coeffs(), table, h, table.alpha());
}

double delta_minus(std::span<const double> z, const GrunwaldTable& table, double h)
{
    return retarded(z, table.coeffs(), table, h, table.alpha());
}

State delta_plus(std::span<const State> z, const GrunwaldTable& table, double h)
{
    return advanced(z, table.coeffs(), table, h, table.alpha());
}

double delta_plus(std::span<const double> z, const GrunwaldTable& table, double h)
{
    return advanced(z, table.coeffs(), table, h, table.alpha());
}

State delta_minus_squared(std::span<const State> z, const GrunwaldTable& table, double h)
{
    return retarded(z, table.squared(), table, h, 2.0 * table.alpha());
}

double delta_minus_squared(std::span<const double> z, const GrunwaldTable& table, double h)
{
    return retarded(z, table.squared(), table, h, 2.0 * table.alpha());
}

State delta_plus_squared(std::span<const State> z, const GrunwaldTable& table, double h)
{
    return advanced(z, table.squared(), table, h, 2.0 * table.alpha());
}

double delta_plus_squared(std::span<const double> z, const GrunwaldTable& table, double h)
{
    return advanced(z, table.squared(), table, h, 2.0 * table.alpha());
}

Eigen::MatrixXd operator_matrix(double beta, const Grid& grid)
{
    if (!(beta > 0.0 && beta <= 2.0)) {
        throw DomainError("operator order beta must lie in (0,2], got " + std::to_string(beta));
    }
    return operator_matrix(GrunwaldTable(beta / 2.0, grid.n_steps()), grid);
}

Eigen::MatrixXd operator_matrix(const GrunwaldTable& table, const Grid& grid)
{
    const std::size_t size = grid.size();
    if (table.n_max() + 1 < size) {
        throw LengthMismatch("table too short for grid of " + std::to_string(size) + " nodes");
    }
    const double scale = std::pow(grid.h(), -2.0 * table.alpha());
    const auto c = table.squared();
    const auto n = static_cast<Eigen::Index>(size);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            m(i, j) = scale * c[static_cast<std::size_t>(i - j)];
        }
    }
    return m;
}

} // namespace fracvi
