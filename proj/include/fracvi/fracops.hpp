#pragma once

// Discrete fractional calculus on uniform grids.
//
// The retarded operator uses the past of a sequence,
//   (D- z)_k = h^-a * sum_{n=0}^{k} a_n z_{k-n},
// the advanced operator its future,
//   (D+ z)_k = h^-a * sum_{n=0}^{N-k} a_n z_{k+n},
// with the Grunwald weights a_0 = 1, a_n = a_{n-1} (n-1-a)/n.
// Vector-valued states are handled componentwise.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fracvi {

using State = Eigen::VectorXd;
using Series = std::vector<State>;

/// Grunwald weights a_0..a_n and their discrete self-convolution c_0..c_n
/// for a single order. Immutable once built.
class GrunwaldTable {
public:
    GrunwaldTable(double alpha, std::size_t n_max);

    double alpha() const noexcept { return alpha_; }
    std::size_t n_max() const noexcept { return coeffs_.size() - 1; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    /// c_n = sum_{j=0}^{n} a_j a_{n-j}, truncated at n_max.
    std::span<const double> squared() const noexcept { return squared_; }

private:
    double alpha_;
    std::vector<double> coeffs_;
    std::vector<double> squared_;
};

/// Builds the table for `alpha` in [0,1]. Throws DomainError otherwise.
GrunwaldTable grunwald_coeffs(double alpha, long long n_max);

/// Uniform time grid t_k = a + h k, k = 0..n_steps.
class Grid {
public:
    enum class Direction { Forward, Reversed };

    Grid(double start, double h, std::size_t n_steps, Direction direction = Direction::Forward);

    double start() const noexcept { return start_; }
    double h() const noexcept { return h_; }
    std::size_t n_steps() const noexcept { return n_steps_; }
    std::size_t size() const noexcept { return n_steps_ + 1; }
    Direction direction() const noexcept { return direction_; }
    double t(std::size_t k) const noexcept { return start_ + h_ * static_cast<double>(k); }

    Grid reversed() const;

private:
    double start_;
    double h_;
    std::size_t n_steps_;
    Direction direction_;
};

/// (D- z)_k for z = z_0..z_k; k is z.size() - 1.
State delta_minus(std::span<const State> z, const GrunwaldTable& table, double h);
double delta_minus(std::span<const double> z, const GrunwaldTable& table, double h);

/// (D+ z)_k for z = z_k..z_N; N - k is z.size() - 1.
State delta_plus(std::span<const State> z, const GrunwaldTable& table, double h);
double delta_plus(std::span<const double> z, const GrunwaldTable& table, double h);

/// (D- D- z)_k evaluated through the convolution square.
State delta_minus_squared(std::span<const State> z, const GrunwaldTable& table, double h);
double delta_minus_squared(std::span<const double> z, const GrunwaldTable& table, double h);

/// (D+ D+ z)_k evaluated through the convolution square.
State delta_plus_squared(std::span<const State> z, const GrunwaldTable& table, double h);
double delta_plus_squared(std::span<const double> z, const GrunwaldTable& table, double h);

/// Lower-triangular Toeplitz matrix M with M(i,j) = h^-beta c_{i-j}, where c is
/// the convolution square of the order beta/2 weights, so that (M z)_k equals
/// delta_minus_squared of the prefix z_0..z_k. beta must lie in (0,2].
Eigen::MatrixXd operator_matrix(double beta, const Grid& grid);

/// Same as above from an existing table; the order is 2 * table.alpha().
Eigen::MatrixXd operator_matrix(const GrunwaldTable& table, const Grid& grid);

} // namespace fracvi
