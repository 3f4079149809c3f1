#include <optional>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracvi/analysis.hpp"
#include "fracvi/cli.hpp"
#include "fracvi/error.hpp"
#include "fracvi/fracops.hpp"
#include "fracvi/oracles.hpp"

namespace py = pybind11;
using namespace fracvi;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const std::vector<double>& v)
{
    Array out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::vector<double> to_vector(const Array& a)
{
    if (a.ndim() != 1) {
        throw DomainError("expected a one-dimensional array");
    }
    return {a.data(), a.data() + a.size()};
}

// Applies a prefix (retarded) or suffix (advanced) operator at every index.
template <bool Retarded, typename Op>
Array sweep(const Array& z, double alpha, double h, Op op)
{
    const std::vector<double> v = to_vector(z);
    const GrunwaldTable table = grunwald_coeffs(alpha, static_cast<long long>(v.size()));
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        const std::span<const double> s = Retarded ? std::span<const double>(v.data(), k + 1)
                                                   : std::span<const double>(v.data() + k, v.size() - k);
        out[k] = op(s, table, h);
    }
    return to_array(out);
}

py::dict trajectory_dict(const Trajectory& traj)
{
    const std::size_t n = traj.size();
    std::vector<double> t(n), x(n), p, e = traj.energy;
    for (std::size_t k = 0; k < n; ++k) {
        t[k] = traj.grid.t(k);
        x[k] = traj.x[k][0];
    }
    for (const State& pk : traj.p) {
        p.push_back(pk[0]);
    }
    py::dict d;
    d["t"] = to_array(t);
    d["x"] = to_array(x);
    d["p"] = traj.has_momentum() ? py::object(to_array(p)) : py::object(py::none());
    d["E"] = e.empty() ? py::object(py::none()) : py::object(to_array(e));
    return d;
}

cli::RunSpec make_spec(const std::string& integrator, const std::string& model, std::optional<double> alpha,
                       std::optional<double> kappa, std::optional<double> rho, std::optional<double> c,
                       std::optional<double> mass, std::optional<double> h, std::optional<long long> steps,
                       std::optional<double> x0, std::optional<double> p0, std::optional<std::string> force,
                       double newton_tol, int newton_max_iter)
{
    cli::RunSpec s;
    s.integrator = cli::parse_integrator(integrator);
    s.model = cli::parse_model(model);
    s.alpha = alpha;
    s.kappa = kappa;
    s.rho = rho;
    s.c = c;
    s.mass = mass;
    s.h = h;
    s.steps = steps;
    s.x0 = x0;
    s.p0 = p0;
    s.force = std::move(force);
    s.newton_tol = newton_tol;
    s.newton_max_iter = newton_max_iter;
    return s;
}

#define FRACVI_RUN_ARGS                                                                              \
    py::arg("integrator") = "fvi", py::arg("model") = "oscillator", py::arg("alpha") = py::none(),     \
        py::arg("kappa") = py::none(), py::arg("rho") = py::none(), py::arg("c") = py::none(),         \
        py::arg("mass") = py::none(), py::arg("h") = py::none(), py::arg("steps") = py::none(),        \
        py::arg("x0") = py::none(), py::arg("p0") = py::none(), py::arg("force") = py::none(),         \
        py::arg("newton_tol") = 1e-12, py::arg("newton_max_iter") = 50

} // namespace

PYBIND11_MODULE(_fracvi, m)
{
    m.doc() = "Fractional variational integrators for damped mechanical systems";

    auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<LengthMismatch>(m, "LengthMismatch", PyExc_ValueError);
    py::register_exception<cli::UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<NewtonDiverged>(m, "NewtonDiverged", PyExc_RuntimeError);
    py::register_exception<SingularMatrix>(m, "SingularMatrix", PyExc_RuntimeError);
    (void)domain;

    m.def(
        "grunwald_coeffs",
        [](double alpha, long long n_max) {
            const GrunwaldTable t = grunwald_coeffs(alpha, n_max);
            return py::make_tuple(to_array({t.coeffs().begin(), t.coeffs().end()}),
                                  to_array({t.squared().begin(), t.squared().end()}));
        },
        py::arg("alpha"), py::arg("n_max"), "Weights a_0..a_n and their convolution square c_0..c_n.");

    m.def(
        "delta_minus",
        [](const Array& z, double alpha, double h) {
            return sweep<true>(z, alpha, h, [](auto s, const auto& t, double hh) { return delta_minus(s, t, hh); });
        },
        py::arg("z"), py::arg("alpha"), py::arg("h"), "Retarded difference at every index.");
    m.def(
        "delta_plus",
        [](const Array& z, double alpha, double h) {
            return sweep<false>(z, alpha, h, [](auto s, const auto& t, double hh) { return delta_plus(s, t, hh); });
        },
        py::arg("z"), py::arg("alpha"), py::arg("h"), "Advanced difference at every index.");
    m.def(
        "delta_minus_squared",
        [](const Array& z, double alpha, double h) {
            return sweep<true>(z, alpha, h,
                               [](auto s, const auto& t, double hh) { return delta_minus_squared(s, t, hh); });
        },
        py::arg("z"), py::arg("alpha"), py::arg("h"));
    m.def(
        "delta_plus_squared",
        [](const Array& z, double alpha, double h) {
            return sweep<false>(z, alpha, h,
                                [](auto s, const auto& t, double hh) { return delta_plus_squared(s, t, hh); });
        },
        py::arg("z"), py::arg("alpha"), py::arg("h"));

    m.def(
        "operator_matrix",
        [](double beta, double h, std::size_t n_steps) {
            const Eigen::MatrixXd a = operator_matrix(beta, Grid(0.0, h, n_steps));
            py::array_t<double> out({a.rows(), a.cols()});
            auto view = out.mutable_unchecked<2>();
            for (Eigen::Index i = 0; i < a.rows(); ++i) {
                for (Eigen::Index j = 0; j < a.cols(); ++j) {
                    view(i, j) = a(i, j);
                }
            }
            return out;
        },
        py::arg("beta"), py::arg("h"), py::arg("n_steps"));

    m.def(
        "run",
        [](const std::string& integrator, const std::string& model, std::optional<double> alpha,
           std::optional<double> kappa, std::optional<double> rho, std::optional<double> c,
           std::optional<double> mass, std::optional<double> h, std::optional<long long> steps,
           std::optional<double> x0, std::optional<double> p0, std::optional<std::string> force,
           double newton_tol, int newton_max_iter) {
            const cli::RunSpec spec = make_spec(integrator, model, alpha, kappa, rho, c, mass, h, steps, x0, p0,
                                                std::move(force), newton_tol, newton_max_iter);
            Trajectory traj = [&] {
                py::gil_scoped_release release;
                return cli::execute(cli::resolve(spec));
            }();
            return trajectory_dict(traj);
        },
        FRACVI_RUN_ARGS,
        "Integrate a scalar model; returns a dict with t, x, p and E arrays (p, E are None for the matrix "
        "oracle). Unset parameters take the model defaults.");

    m.def(
        "converge",
        [](const std::string& integrator, const std::string& model, std::optional<double> alpha,
           std::optional<double> kappa, std::optional<double> rho, std::optional<double> c,
           std::optional<double> mass, std::optional<double> h, std::optional<long long> steps,
           std::optional<double> x0, std::optional<double> p0, std::optional<std::string> force,
           double newton_tol, int newton_max_iter, std::vector<double> h_values, const std::string& reference,
           double horizon, double reference_h, const std::string& quantity) {
            const cli::RunSpec spec = make_spec(integrator, model, alpha, kappa, rho, c, mass, h, steps, x0, p0,
                                                std::move(force), newton_tol, newton_max_iter);
            cli::ConvergeOptions o;
            o.h_values = std::move(h_values);
            o.reference = cli::parse_reference(reference);
            o.horizon = horizon;
            o.reference_h = reference_h;
            o.quantity = cli::parse_quantity(quantity);
            ConvergenceReport r = [&] {
                py::gil_scoped_release release;
                return cli::converge(spec, o);
            }();
            py::dict d;
            d["h"] = to_array(r.h_values);
            d["error"] = to_array(r.errors);
            d["slope"] = r.slope;
            d["intercept"] = r.intercept;
            return d;
        },
        FRACVI_RUN_ARGS, py::arg("h_values") = std::vector<double>{0.4, 0.2, 0.1, 0.05, 0.025},
        py::arg("reference") = "exact", py::arg("horizon") = 30.0, py::arg("reference_h") = 5e-3,
        py::arg("quantity") = "x", "Global error against a reference for each h, with the fitted log-log slope.");

    m.def(
        "exact_oscillator",
        [](const Array& t, double m_, double c, double rho, double x0, double p0) {
            const OscillatorParams o{m_, c, rho, x0, p0};
            const std::vector<double> ts = to_vector(t);
            std::vector<double> x(ts.size()), p(ts.size());
            for (std::size_t i = 0; i < ts.size(); ++i) {
                std::tie(x[i], p[i]) = exact_oscillator(o, ts[i]);
            }
            return py::make_tuple(to_array(x), to_array(p));
        },
        py::arg("t"), py::arg("m") = 1.0, py::arg("c") = 1.0, py::arg("rho") = 0.2, py::arg("x0") = 1.0,
        py::arg("p0") = 0.5, "Closed-form underdamped oscillator (x(t), p(t)).");

    m.def(
        "matrix_oracle",
        [](double m_, double c, double rho, double beta, double h, std::size_t n_steps,
           std::optional<std::string> force) {
            std::optional<ExternalForce> f;
            if (force) {
                f = cli::parse_force_table(*force);
            }
            const MatrixOracleResult r = [&] {
                py::gil_scoped_release release;
                return matrix_oracle_solve(scalar_quadratic_model(m_, c, rho, f), Grid(0.0, h, n_steps), beta);
            }();
            py::dict d = trajectory_dict(r.trajectory);
            d["residual_norm"] = r.residual_norm;
            d["rhs_norm"] = r.rhs_norm;
            return d;
        },
        py::arg("m") = 1.0, py::arg("c") = 1.0, py::arg("rho") = 1.0, py::arg("beta") = 1.5,
        py::arg("h") = 5e-3, py::arg("n_steps") = 6000, py::arg("force") = "0:1:8",
        "Triangular-matrix benchmark for m x'' + rho D^beta x + c x = F with zero initial data.");

    m.def(
        "fit_slope",
        [](std::vector<double> h, std::vector<double> errors) {
            const ConvergenceReport r = fit_slope(std::move(h), std::move(errors));
            return py::make_tuple(r.slope, r.intercept);
        },
        py::arg("h"), py::arg("errors"), "Least-squares (slope, intercept) of log error against log h.");

    m.def("coefficient_table", &cli::coefficient_table, py::arg("alpha"), py::arg("n_max"));
}
