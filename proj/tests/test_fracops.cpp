#include <cmath>
#include <vector>

#include <doctest.h>

#include "fracvi/error.hpp"
#include "fracvi/fracops.hpp"

using namespace fracvi;

namespace {

// a_n = prod_{j=1}^{n} (j - 1 - alpha) / j, accumulated in long double.
long double product_weight(double alpha, int n)
{
    long double w = 1.0L;
    for (int j = 1; j <= n; ++j) {
        w *= (static_cast<long double>(j) - 1.0L - alpha) / j;
    }
    return w;
}

double brute_minus(const std::vector<double>& z, std::size_t k, double alpha, double h)
{
    double s = 0.0;
    for (std::size_t n = 0; n <= k; ++n) {
        s += static_cast<double>(product_weight(alpha, static_cast<int>(n))) * z[k - n];
    }
    return s / std::pow(h, alpha);
}

double brute_plus(const std::vector<double>& z, std::size_t k, double alpha, double h)
{
    double s = 0.0;
    for (std::size_t n = 0; k + n < z.size(); ++n) {
        s += static_cast<double>(product_weight(alpha, static_cast<int>(n))) * z[k + n];
    }
    return s / std::pow(h, alpha);
}

std::span<const double> prefix(const std::vector<double>& z, std::size_t k)
{
    return std::span<const double>(z.data(), k + 1);
}

std::span<const double> suffix(const std::vector<double>& z, std::size_t k)
{
    return std::span<const double>(z.data() + k, z.size() - k);
}

} // namespace

TEST_CASE("grunwald weights for alpha = 1/2")
{
    const auto t = grunwald_coeffs(0.5, 3);
    const auto a = t.coeffs();
    REQUIRE(a.size() == 4);
    CHECK(a[0] == 1.0);
    CHECK(a[1] == -0.5);
    CHECK(a[2] == -0.125);
    CHECK(a[3] == -0.0625);
}

TEST_CASE("grunwald weights match the product formula")
{
    for (double alpha : {0.1, 0.3, 0.5, 0.75, 0.9}) {
        const auto t = grunwald_coeffs(alpha, 40);
        for (int n = 0; n <= 40; ++n) {
            const double ref = static_cast<double>(product_weight(alpha, n));
            CHECK(std::abs(t.coeffs()[n] - ref) <= 1e-15 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("grunwald edge orders")
{
    const auto one = grunwald_coeffs(1.0, 3);
    CHECK(std::vector<double>(one.coeffs().begin(), one.coeffs().end()) == std::vector<double>{1, -1, 0, 0});
    const auto zero = grunwald_coeffs(0.0, 2);
    CHECK(std::vector<double>(zero.coeffs().begin(), zero.coeffs().end()) == std::vector<double>{1, 0, 0});
}

TEST_CASE("convolution square")
{
    const auto half = grunwald_coeffs(0.5, 6);
    const auto c = half.squared();
    CHECK(c[0] == doctest::Approx(1.0));
    CHECK(c[1] == doctest::Approx(-1.0));
    for (std::size_t n = 2; n < c.size(); ++n) {
        CHECK(std::abs(c[n]) < 1e-16);
    }
    const auto t = grunwald_coeffs(0.3, 10);
    for (std::size_t n = 0; n <= 10; ++n) {
        double s = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            s += t.coeffs()[j] * t.coeffs()[n - j];
        }
        CHECK(t.squared()[n] == doctest::Approx(s).epsilon(1e-14));
    }
}

TEST_CASE("grunwald domain")
{
    CHECK_THROWS_AS(grunwald_coeffs(-0.1, 3), DomainError);
    CHECK_THROWS_AS(grunwald_coeffs(1.5, 3), DomainError);
    CHECK_THROWS_AS(grunwald_coeffs(0.5, -1), DomainError);
}

TEST_CASE("delta_minus against a brute-force double loop")
{
    const double alpha = 0.3, h = 0.1;
    const std::vector<double> z{0.2, -1.0, 3.5, 0.7, 2.2, -0.4};
    const auto t = grunwald_coeffs(alpha, 10);
    for (std::size_t k = 0; k < z.size(); ++k) {
        CHECK(delta_minus(prefix(z, k), t, h) == doctest::Approx(brute_minus(z, k, alpha, h)).epsilon(1e-14));
    }
}

TEST_CASE("delta_plus against a brute-force double loop")
{
    const double alpha = 0.7, h = 0.25;
    const std::vector<double> z{1.0, 0.5, -2.0, 4.0, 0.1};
    const auto t = grunwald_coeffs(alpha, 10);
    for (std::size_t k = 0; k < z.size(); ++k) {
        CHECK(delta_plus(suffix(z, k), t, h) == doctest::Approx(brute_plus(z, k, alpha, h)).epsilon(1e-14));
    }
}

TEST_CASE("delta operators on small hand examples")
{
    const auto t = grunwald_coeffs(0.4, 4);
    const std::vector<double> single{3.0};
    CHECK(delta_minus(single, t, 0.5) == doctest::Approx(3.0 / std::pow(0.5, 0.4)));

    const auto one = grunwald_coeffs(1.0, 4);
    const std::vector<double> z{2.0, 5.0};
    CHECK(delta_minus(z, one, 0.5) == doctest::Approx(6.0));
    CHECK(delta_plus(z, one, 0.5) == doctest::Approx(-6.0));
}

TEST_CASE("squared operators")
{
    const auto one = grunwald_coeffs(1.0, 4);
    const std::vector<double> z{1.0, 4.0, 9.0};
    CHECK(delta_minus_squared(z, one, 1.0) == doctest::Approx(2.0));
    CHECK(delta_plus_squared(std::vector<double>{9.0, 4.0, 1.0}, one, 1.0) == doctest::Approx(2.0));

    // Composition: apply delta_minus to the sequence of delta_minus values.
    const double alpha = 0.75, h = 0.2;
    const auto t = grunwald_coeffs(alpha, 10);
    const std::vector<double> x{0.3, 1.1, -0.6, 2.0, 0.9, 1.4, -1.2};
    std::vector<double> inner;
    for (std::size_t k = 0; k < x.size(); ++k) {
        inner.push_back(delta_minus(prefix(x, k), t, h));
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
        CHECK(delta_minus_squared(prefix(x, k), t, h) ==
              doctest::Approx(delta_minus(prefix(inner, k), t, h)).epsilon(1e-12));
    }
    std::vector<double> inner_plus(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        inner_plus[k] = delta_plus(suffix(x, k), t, h);
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
        CHECK(delta_plus_squared(suffix(x, k), t, h) ==
              doctest::Approx(delta_plus(suffix(inner_plus, k), t, h)).epsilon(1e-12));
    }

    // alpha = 1/2 collapses to a first backward difference.
    const auto half = grunwald_coeffs(0.5, 10);
    for (std::size_t k = 1; k < x.size(); ++k) {
        CHECK(delta_minus_squared(prefix(x, k), half, h) ==
              doctest::Approx((x[k] - x[k - 1]) / h).epsilon(1e-13));
    }
}

TEST_CASE("vector states are componentwise")
{
    const auto t = grunwald_coeffs(0.6, 5);
    Series z;
    std::vector<double> c0, c1;
    for (int k = 0; k < 5; ++k) {
        State s(2);
        s << std::sin(k), std::cos(2.0 * k);
        z.push_back(s);
        c0.push_back(s[0]);
        c1.push_back(s[1]);
    }
    const State r = delta_minus(std::span<const State>(z), t, 0.3);
    CHECK(r[0] == doctest::Approx(delta_minus(c0, t, 0.3)));
    CHECK(r[1] == doctest::Approx(delta_minus(c1, t, 0.3)));
    const State q = delta_plus_squared(std::span<const State>(z), t, 0.3);
    CHECK(q[1] == doctest::Approx(delta_plus_squared(c1, t, 0.3)));
}

TEST_CASE("operator matrix")
{
    const Eigen::MatrixXd m1 = operator_matrix(1.0, Grid(0.0, 1.0, 2));
    Eigen::MatrixXd e1(3, 3);
    e1 << 1, 0, 0, -1, 1, 0, 0, -1, 1;
    CHECK((m1 - e1).cwiseAbs().maxCoeff() < 1e-15);

    const Eigen::MatrixXd m2 = operator_matrix(2.0, Grid(0.0, 1.0, 2));
    Eigen::MatrixXd e2(3, 3);
    e2 << 1, 0, 0, -2, 1, 0, 1, -2, 1;
    CHECK((m2 - e2).cwiseAbs().maxCoeff() < 1e-15);

    const Grid g(0.0, 0.5, 4);
    const Eigen::MatrixXd m = operator_matrix(1.5, g);
    const std::vector<double> x{0.4, -0.2, 1.0, 0.8, 2.5};
    const Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(), 5);
    const Eigen::VectorXd mx = m * xv;
    const auto t = grunwald_coeffs(0.75, 4);
    for (std::size_t k = 0; k < x.size(); ++k) {
        CHECK(mx[static_cast<Eigen::Index>(k)] == doctest::Approx(delta_minus_squared(prefix(x, k), t, 0.5)));
    }

    CHECK_THROWS_AS(operator_matrix(0.0, g), DomainError);
    CHECK_THROWS_AS(operator_matrix(2.5, g), DomainError);
}

TEST_CASE("grid")
{
    const Grid g(1.0, 0.25, 4);
    CHECK(g.size() == 5);
    CHECK(g.t(4) == doctest::Approx(2.0));
    CHECK(g.reversed().direction() == Grid::Direction::Reversed);
    CHECK_THROWS_AS(Grid(0.0, 0.0, 4), DomainError);
    CHECK_THROWS_AS(Grid(0.0, 0.1, 1), DomainError);
}
