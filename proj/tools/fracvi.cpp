// fracvi: command-line front end for the fractional variational integrators.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fracvi/cli.hpp"
#include "fracvi/error.hpp"

namespace {

using namespace fracvi;
using namespace fracvi::cli;

struct Flags {
    std::string integrator = "fvi";
    std::string model = "oscillator";
    std::optional<double> alpha, kappa, rho, c, mass, h, x0, p0;
    std::optional<long long> steps;
    std::optional<std::string> force;
    std::optional<std::string> out;
    double newton_tol = 1e-12;
    int newton_max_iter = 50;

    // compare / converge / oracle
    std::string against = "lda";
    std::string reference = "exact";
    std::string h_list = "0.4,0.2,0.1,0.05,0.025";
    double horizon = 30.0;
    double reference_h = 5e-3;
    std::string quantity = "x";
    std::string oracle_kind = "matrix";

    long long n = 10;

    RunSpec spec() const
    {
        RunSpec s;
        s.integrator = parse_integrator(integrator);
        s.model = parse_model(model);
        s.alpha = alpha;
        s.kappa = kappa;
        s.rho = rho;
        s.c = c;
        s.mass = mass;
        s.h = h;
        s.steps = steps;
        s.x0 = x0;
        s.p0 = p0;
        s.force = force;
        s.newton_tol = newton_tol;
        s.newton_max_iter = newton_max_iter;
        return s;
    }
};

void emit(const std::optional<std::string>& path, const std::string& content)
{
    if (path) {
        write_file(*path, content);
    } else {
        std::cout << content;
    }
}

int run_main(int argc, char** argv)
{
    CLI::App app{"Fractional variational integrators for mechanically damped systems"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");
    app.require_subcommand(1);

    Flags f;
    app.add_option("--integrator", f.integrator,
                   "fvi | lda | vi | euler-exp | euler-imp | ham-fvi | oracle-matrix | oracle-exact");
    app.add_option("--model", f.model, "oscillator | fractional-test | custom");
    app.add_option("--alpha", f.alpha, "Fractional order in [0,1]");
    app.add_option("--kappa", f.kappa, "Quadrature weight in [0,1]");
    app.add_option("--rho", f.rho, "Damping coefficient");
    app.add_option("--c", f.c, "Stiffness of the quadratic potential");
    app.add_option("--mass", f.mass, "Mass");
    app.add_option("--h", f.h, "Time step");
    app.add_option("--steps", f.steps, "Number of steps N");
    app.add_option("--x0", f.x0, "Initial position");
    app.add_option("--p0", f.p0, "Initial momentum");
    app.add_option("--force", f.force, "Piecewise-constant force table t0:t1:value;...");
    app.add_option("--out", f.out, "Output CSV path (stdout when omitted)");
    app.add_option("--newton-tol", f.newton_tol, "Newton residual tolerance (infinity norm)");
    app.add_option("--newton-max-iter", f.newton_max_iter, "Newton iteration cap");
    app.add_option("--against", f.against, "Second integrator for compare");
    app.add_option("--reference", f.reference, "exact | matrix");
    app.add_option("--h-list", f.h_list, "Comma-separated step sizes");
    app.add_option("--horizon", f.horizon, "Final time T for converge");
    app.add_option("--reference-h", f.reference_h, "Step of the matrix reference");
    app.add_option("--quantity", f.quantity, "x | p | E");

    auto* coeffs = app.add_subcommand("coeffs", "Print n, alpha_n, c_n");
    coeffs->add_option("--n", f.n, "Largest index");
    auto* run = app.add_subcommand("run", "Integrate and write k,t,x,p,E");
    auto* compare_cmd = app.add_subcommand("compare", "Max |x^A - x^B| of --integrator vs --against");
    auto* converge_cmd = app.add_subcommand("converge", "Global error vs h with fitted log-log slope");
    auto* oracle = app.add_subcommand("oracle", "Reference solution (matrix or exact)");
    oracle->add_option("--kind", f.oracle_kind, "matrix | exact");
    for (auto* sub : {coeffs, run, compare_cmd, converge_cmd, oracle}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (coeffs->parsed()) {
            const double alpha = f.alpha.value_or(0.5);
            emit(f.out, coefficient_table(alpha, f.n));
        } else if (run->parsed()) {
            const Trajectory traj = execute(resolve(f.spec()));
            emit(f.out, trajectory_csv(traj));
        } else if (oracle->parsed()) {
            RunSpec s = f.spec();
            if (f.oracle_kind == "matrix") {
                s.integrator = IntegratorKind::OracleMatrix;
            } else if (f.oracle_kind == "exact") {
                s.integrator = IntegratorKind::OracleExact;
            } else {
                throw UsageError("unknown oracle kind '" + f.oracle_kind + "'");
            }
            emit(f.out, trajectory_csv(execute(resolve(s))));
        } else if (compare_cmd->parsed()) {
            RunSpec a = f.spec();
            RunSpec b = a;
            b.integrator = parse_integrator(f.against);
            if (b.integrator == IntegratorKind::HamFvi) {
                b.kappa.reset();
            }
            const double diff = compare(execute(resolve(a)), execute(resolve(b)));
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g\n", diff);
            std::cout << buf;
        } else if (converge_cmd->parsed()) {
            ConvergeOptions opts;
            opts.h_values = parse_h_list(f.h_list);
            opts.reference = parse_reference(f.reference);
            opts.horizon = f.horizon;
            opts.reference_h = f.reference_h;
            opts.quantity = parse_quantity(f.quantity);
            const ConvergenceReport report = converge(f.spec(), opts);
            if (f.out) {
                write_file(*f.out, convergence_csv(report));
            }
            for (std::size_t i = 0; i < report.h_values.size(); ++i) {
                std::printf("h = %-10g error = %.6e\n", report.h_values[i], report.errors[i]);
            }
            std::printf("fitted slope = %.4f (intercept %.4f)\n", report.slope, report.intercept);
        }
    } catch (const NewtonDiverged& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const SingularMatrix& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    return run_main(argc, argv);
}
