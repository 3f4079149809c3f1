// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Usage: fracvi_acceptance [criterion numbers...]   (all when none given)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fracvi/analysis.hpp"
#include "fracvi/cli.hpp"
#include "fracvi/fracops.hpp"
#include "fracvi/integrators.hpp"
#include "fracvi/oracles.hpp"

namespace {

using namespace fracvi;

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double time_limit_s;  // <= 0: no runtime bound
    std::function<Outcome()> check;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

// max_k |a_k - b_k| / max_k max(|a_k|, |b_k|)
double sequence_relative(const std::vector<double>& a, const std::vector<double>& b)
{
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        diff = std::max(diff, std::abs(a[k] - b[k]));
        scale = std::max({scale, std::abs(a[k]), std::abs(b[k])});
    }
    return scale > 0.0 ? diff / scale : diff;
}

std::vector<double> scalars(const Series& s)
{
    std::vector<double> out;
    for (const auto& v : s) {
        out.push_back(v[0]);
    }
    return out;
}

MechModel oscillator(double rho = 0.2)
{
    return scalar_quadratic_model(1.0, 1.0, rho);
}

IntegratorConfig oscillator_config(double h, std::size_t n, double kappa = 0.5)
{
    IntegratorConfig cfg;
    cfg.alpha = 0.5;
    cfg.kappa = kappa;
    cfg.h = h;
    cfg.n_steps = n;
    cfg.x0 = State::Constant(1, 1.0);
    cfg.p0 = State::Constant(1, 0.5);
    return cfg;
}

Outcome coefficient_collapse()
{
    const GrunwaldTable t = grunwald_coeffs(0.5, 2000);
    double worst = 0.0;
    for (std::size_t n = 0; n <= t.n_max(); ++n) {
        const double expected = n == 0 ? 1.0 : (n == 1 ? -1.0 : 0.0);
        worst = std::max(worst, std::abs(t.squared()[n] - expected));
    }
    return {worst <= 1e-14, fmt("max |c_n - [1,-1,0,...]| = %.3e (tol 1e-14)", worst)};
}

Outcome integration_by_parts()
{
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> step(0.01, 1.0);
    const std::size_t n = 64;
    double worst_b = 0.0;
    double worst_c = 0.0;
    for (const double alpha : {0.25, 0.5, 0.75}) {
        const GrunwaldTable table = grunwald_coeffs(alpha, static_cast<long long>(n));
        for (int trial = 0; trial < 100; ++trial) {
            const double h = step(rng);
            std::vector<double> f(n + 1), g(n + 1);
            for (std::size_t k = 1; k < n; ++k) {
                f[k] = unit(rng);
                g[k] = unit(rng);
            }
            const std::span<const double> fs(f), gs(g);
            double lhs_b = 0.0, rhs_b = 0.0, lhs_c = 0.0, rhs_c = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                lhs_b += delta_plus(gs.subspan(k), table, h) * f[k];
                lhs_c += g[k + 1] * delta_minus(fs.first(k + 2), table, h);
            }
            for (std::size_t k = 1; k <= n; ++k) {
                rhs_b += g[k] * delta_minus(fs.first(k + 1), table, h);
            }
            for (std::size_t k = 1; k < n; ++k) {
                rhs_c += delta_plus(gs.subspan(k), table, h) * f[k];
            }
            worst_b = std::max(worst_b, std::abs(lhs_b - rhs_b) / std::max(std::abs(lhs_b), std::abs(rhs_b)));
            worst_c = std::max(worst_c, std::abs(lhs_c - rhs_c) / std::max(std::abs(lhs_c), std::abs(rhs_c)));
        }
    }
    const bool ok = worst_b <= 1e-12 && worst_c <= 1e-12;
    return {ok, fmt("worst relative mismatch: identity b %.3e, identity c %.3e (tol 1e-12)", worst_b, worst_c)};
}

Outcome time_reversal()
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const std::size_t n = 128;
    const double h = 0.05;
    double worst = 0.0;
    for (const double alpha : {0.25, 0.5, 0.75}) {
        const GrunwaldTable table = grunwald_coeffs(alpha, static_cast<long long>(n));
        std::vector<double> x(n + 1);
        for (auto& v : x) {
            v = unit(rng);
        }
        std::vector<double> y(x.rbegin(), x.rend());
        // D+ D+ y by composing the advanced operator twice.
        std::vector<double> dy(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            dy[k] = delta_plus(std::span<const double>(y).subspan(k), table, h);
        }
        std::vector<double> lhs(n + 1), rhs(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            lhs[k] = delta_plus(std::span<const double>(dy).subspan(k), table, h);
            rhs[k] = delta_minus_squared(std::span<const double>(x).first(n - k + 1), table, h);
        }
        worst = std::max(worst, sequence_relative(lhs, rhs));
    }
    return {worst <= 1e-12, fmt("worst relative mismatch %.3e over alpha in {0.25,0.5,0.75} (tol 1e-12)", worst)};
}

Outcome fvi_lda_equivalence()
{
    const MechModel model = oscillator();
    const auto cfg = oscillator_config(0.2, 150);
    const double diff = compare(fvi_run(model, cfg), lda_run(model, cfg));
    return {diff <= 1e-10, fmt("max |x_fvi - x_lda| = %.3e (tol 1e-10)", diff)};
}

Outcome momentum_matching()
{
    const MechModel model = oscillator();
    const auto cfg = oscillator_config(0.2, 500, 0.0);
    const double rel = sequence_relative(scalars(ham_fvi_run(model, cfg).x), scalars(fvi_run(model, cfg).x));
    return {rel <= 1e-12, fmt("relative x mismatch ham-fvi vs fvi(kappa=0) = %.3e (tol 1e-12)", rel)};
}

Outcome convergence_half()
{
    cli::RunSpec spec;
    spec.integrator = cli::IntegratorKind::Fvi;
    spec.model = cli::ModelKind::Oscillator;
    cli::ConvergeOptions opts;
    opts.h_values = {0.4, 0.2, 0.1, 0.05, 0.025};
    opts.reference = cli::ReferenceKind::Exact;
    opts.horizon = 6.0;
    bool ok = true;
    std::string detail;
    for (const auto& [q, label] : {std::pair{Quantity::Position, "x"}, std::pair{Quantity::Momentum, "p"},
                                   std::pair{Quantity::Energy, "E"}}) {
        opts.quantity = q;
        const ConvergenceReport r = cli::converge(spec, opts);
        const bool in = r.slope >= 0.85 && r.slope <= 1.05;
        ok = ok && in;
        detail += std::string(label) + fmt(" slope %.3f ", r.slope) + (in ? "" : "(out) ");
    }
    return {ok, detail + "window [0.85, 1.05]"};
}

Outcome convergence_three_quarters()
{
    cli::RunSpec spec;
    spec.integrator = cli::IntegratorKind::Fvi;
    spec.model = cli::ModelKind::FractionalTest;
    cli::ConvergeOptions opts;
    opts.h_values = {0.2, 0.1, 0.05};
    opts.reference = cli::ReferenceKind::Matrix;
    opts.reference_h = 5e-3;
    opts.horizon = 30.0;
    const ConvergenceReport r = cli::converge(spec, opts);
    const bool ok = r.slope >= 0.8 && r.slope <= 1.1;
    return {ok, fmt("errors %.3e, %.3e, %.3e; slope %.3f (window [0.8, 1.1])", r.errors[0], r.errors[1],
                    r.errors[2], r.slope)};
}

double energy_error(const Trajectory& traj, const OscillatorParams& params)
{
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto [x, p] = exact_oscillator(params, traj.grid.t(k));
        const double exact = 0.5 * p * p / params.m + 0.5 * params.c * x * x;
        worst = std::max(worst, std::abs(traj.energy[k] - exact));
    }
    return worst;
}

Outcome energy_fidelity()
{
    const MechModel model = oscillator();
    const OscillatorParams params{};
    const double fvi = energy_error(fvi_run(model, oscillator_config(0.2, 150)), params);
    const double explicit_euler = energy_error(euler_explicit_run(model, oscillator_config(0.1, 300)), params);
    const double implicit_euler = energy_error(euler_implicit_run(model, oscillator_config(0.2, 150)), params);
    const bool ok = fvi < explicit_euler && fvi < implicit_euler;
    return {ok, fmt("max |E_k - E(t_k)|: fvi %.3e, explicit Euler %.3e, implicit Euler %.3e", fvi,
                    explicit_euler, implicit_euler)};
}

Outcome oracle_self_consistency()
{
    cli::RunSpec spec;
    spec.model = cli::ModelKind::FractionalTest;
    spec.integrator = cli::IntegratorKind::OracleMatrix;
    spec.h = 5e-3;
    spec.steps = 6000;
    const cli::ResolvedRun run = cli::resolve(spec);
    const MatrixOracleResult bench = matrix_oracle_solve(run.model, run.config.grid(), 1.5);
    const double bound = 1e-10 * (1.0 + bench.rhs_norm);

    const MechModel unforced = scalar_quadratic_model(1.0, 1.0, 1.0);
    const MatrixOracleResult zero = matrix_oracle_solve(unforced, Grid(0.0, 0.05, 600), 1.5);
    double max_abs = 0.0;
    for (const auto& v : zero.trajectory.x) {
        max_abs = std::max(max_abs, std::abs(v[0]));
    }
    const bool ok = bench.residual_norm <= bound && max_abs == 0.0;
    return {ok, fmt("residual %.3e (bound %.3e); unforced max |x| = %.1e", bench.residual_norm, bound, max_abs)};
}

Outcome conservative_limit()
{
    const MechModel model = oscillator(0.0);
    const Trajectory traj = fvi_run(model, oscillator_config(0.1, 10000));
    const double e0 = traj.energy[0];
    std::vector<double> rel(traj.size());
    double osc = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        rel[k] = (traj.energy[k] - e0) / e0;
        osc = std::max(osc, std::abs(rel[k]));
    }
    const double drift = linear_trend(rel).slope;
    const bool ok = osc <= 5e-2 && std::abs(drift) <= 1e-6;
    return {ok, fmt("max relative energy deviation %.3e (tol 5e-2); drift %.3e per step (tol 1e-6)", osc, drift)};
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria{
        {1, "coefficient collapse at alpha = 1/2", 1.0, coefficient_collapse},
        {2, "discrete integration by parts", 1.0, integration_by_parts},
        {3, "discrete time reversal", 0.0, time_reversal},
        {4, "FVI / Lagrange-d'Alembert equivalence", 1.0, fvi_lda_equivalence},
        {5, "momentum matching (ham-fvi vs fvi kappa=0)", 0.0, momentum_matching},
        {6, "convergence alpha = 1/2 vs exact solution", 10.0, convergence_half},
        {7, "convergence alpha = 3/4 vs matrix benchmark", 60.0, convergence_three_quarters},
        {8, "energy fidelity vs Euler schemes", 0.0, energy_fidelity},
        {9, "matrix oracle self-consistency", 0.0, oracle_self_consistency},
        {10, "conservative limit energy behaviour", 0.0, conservative_limit},
    };

    std::set<int> selected;
    for (int i = 1; i < argc; ++i) {
        selected.insert(std::atoi(argv[i]));
    }

    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.check();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0.0 && secs >= c.time_limit_s) {
            out.pass = false;
            out.detail += fmt("; runtime %.2f s exceeds %.0f s", secs, c.time_limit_s);
        }
        std::printf("[%s] C%-2d %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(),
                    secs);
        failures += out.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
