#include "fracvi/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "fracvi/error.hpp"

namespace fracvi::cli {

namespace {

struct ModelDefaults {
    double mass, c, rho, x0, p0, alpha, kappa, h;
    long long steps;
    std::optional<std::string> force;
};

ModelDefaults defaults_for(ModelKind kind)
{
    switch (kind) {
    case ModelKind::Oscillator:
        return {1.0, 1.0, 0.2, 1.0, 0.5, 0.5, 0.5, 0.2, 150, std::nullopt};
    case ModelKind::FractionalTest:
        return {1.0, 1.0, 1.0, 0.0, 0.0, 0.75, 0.5, 0.1, 300, std::string("0:1:8")};
    case ModelKind::Custom:
        return {1.0, 1.0, 0.0, 1.0, 0.0, 0.5, 0.5, 0.1, 100, std::nullopt};
    }
    throw UsageError("unknown model");
}

double parse_double(std::string_view s, std::string_view what)
{
    while (!s.empty() && s.front() == ' ') {
        s.remove_prefix(1);
    }
    while (!s.empty() && s.back() == ' ') {
        s.remove_suffix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw UsageError("cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t begin = 0;
    while (true) {
        const std::size_t end = s.find(sep, begin);
        parts.push_back(s.substr(begin, end == std::string_view::npos ? std::string_view::npos : end - begin));
        if (end == std::string_view::npos) {
            break;
        }
        begin = end + 1;
    }
    return parts;
}

void append_number(std::string& out, double v)
{
    if (std::isnan(v)) {
        out += "nan";
        return;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

} // namespace

IntegratorKind parse_integrator(std::string_view tag)
{
    if (tag == "fvi") return IntegratorKind::Fvi;
    if (tag == "lda") return IntegratorKind::Lda;
    if (tag == "vi") return IntegratorKind::Vi;
    if (tag == "euler-exp") return IntegratorKind::EulerExplicit;
    if (tag == "euler-imp") return IntegratorKind::EulerImplicit;
    if (tag == "ham-fvi") return IntegratorKind::HamFvi;
    if (tag == "oracle-matrix") return IntegratorKind::OracleMatrix;
    if (tag == "oracle-exact") return IntegratorKind::OracleExact;
    throw UsageError("unknown integrator '" + std::string(tag) + "'");
}

std::string_view to_string(IntegratorKind kind)
{
    switch (kind) {
    case IntegratorKind::Fvi: return "fvi";
    case IntegratorKind::Lda: return "lda";
    case IntegratorKind::Vi: return "vi";
    case IntegratorKind::EulerExplicit: return "euler-exp";
    case IntegratorKind::EulerImplicit: return "euler-imp";
    case IntegratorKind::HamFvi: return "ham-fvi";
    case IntegratorKind::OracleMatrix: return "oracle-matrix";
    case IntegratorKind::OracleExact: return "oracle-exact";
    }
    return "?";
}

ModelKind parse_model(std::string_view tag)
{
    if (tag == "oscillator") return ModelKind::Oscillator;
    if (tag == "fractional-test") return ModelKind::FractionalTest;
    if (tag == "custom") return ModelKind::Custom;
    throw UsageError("unknown model '" + std::string(tag) + "'");
}

ReferenceKind parse_reference(std::string_view tag)
{
    if (tag == "exact") return ReferenceKind::Exact;
    if (tag == "matrix") return ReferenceKind::Matrix;
    throw UsageError("unknown reference '" + std::string(tag) + "'");
}

Quantity parse_quantity(std::string_view tag)
{
    if (tag == "x") return Quantity::Position;
    if (tag == "p") return Quantity::Momentum;
    if (tag == "E") return Quantity::Energy;
    throw UsageError("unknown quantity '" + std::string(tag) + "' (expected x, p or E)");
}

ExternalForce parse_force_table(std::string_view table, Eigen::Index dim)
{
    std::vector<std::array<double, 3>> rows;
    for (const auto entry : split(table, ';')) {
        if (entry.find_first_not_of(' ') == std::string_view::npos) {
            continue;
        }
        const auto fields = split(entry, ':');
        if (fields.size() != 3) {
            throw UsageError("force entry '" + std::string(entry) + "' is not t0:t1:value");
        }
        rows.push_back({parse_double(fields[0], "force t0"), parse_double(fields[1], "force t1"),
                        parse_double(fields[2], "force value")});
    }
    return ExternalForce::scalar(rows, dim);
}

std::vector<double> parse_h_list(std::string_view list)
{
    std::vector<double> hs;
    for (const auto item : split(list, ',')) {
        hs.push_back(parse_double(item, "h"));
    }
    return hs;
}

ResolvedRun resolve(const RunSpec& spec)
{
    const ModelDefaults d = defaults_for(spec.model);
    if (spec.model == ModelKind::Custom && !spec.c) {
        throw UsageError("model 'custom' needs --c");
    }
    const bool hamiltonian = spec.integrator == IntegratorKind::HamFvi;
    if (hamiltonian && spec.kappa && *spec.kappa != 0.0) {
        throw UsageError("ham-fvi runs with kappa = 0");
    }

    IntegratorConfig config;
    config.alpha = spec.alpha.value_or(d.alpha);
    config.kappa = hamiltonian ? 0.0 : spec.kappa.value_or(d.kappa);
    config.h = spec.h.value_or(d.h);
    const long long steps = spec.steps.value_or(d.steps);
    if (steps < 2) {
        throw UsageError("--steps must be at least 2");
    }
    config.n_steps = static_cast<std::size_t>(steps);
    config.x0 = State::Constant(1, spec.x0.value_or(d.x0));
    config.p0 = State::Constant(1, spec.p0.value_or(d.p0));
    config.newton_tol = spec.newton_tol;
    config.newton_max_iter = spec.newton_max_iter;

    std::optional<ExternalForce> force;
    if (const auto table = spec.force ? spec.force : d.force) {
        force = parse_force_table(*table, 1);
    }
    MechModel model = scalar_quadratic_model(spec.mass.value_or(d.mass), spec.c.value_or(d.c),
                                             spec.rho.value_or(d.rho), std::move(force));

    switch (spec.integrator) {
    case IntegratorKind::EulerExplicit:
    case IntegratorKind::EulerImplicit:
        if (config.alpha != 0.5) {
            throw UsageError("euler integrators solve the linear-damping system and need --alpha 0.5");
        }
        break;
    case IntegratorKind::OracleMatrix:
        if (config.x0[0] != 0.0 || config.p0[0] != 0.0) {
            throw UsageError("oracle-matrix needs zero initial data (--x0 0 --p0 0)");
        }
        if (!(config.alpha > 0.0)) {
            throw UsageError("oracle-matrix needs alpha > 0");
        }
        break;
    case IntegratorKind::OracleExact:
        if (model.force()) {
            throw UsageError("oracle-exact has no closed form with external forcing");
        }
        if (config.alpha != 0.5) {
            throw UsageError("oracle-exact solves the linear-damping system and needs --alpha 0.5");
        }
        break;
    default:
        break;
    }
    ResolvedRun run{spec.integrator, std::move(model), std::move(config)};
    validate(run.model, run.config);
    if (spec.integrator == IntegratorKind::OracleExact) {
        exact_oscillator(oscillator_params(run), 0.0);  // rejects non-underdamped parameters
    }
    return run;
}

OscillatorParams oscillator_params(const ResolvedRun& run)
{
    const auto& c = run.model.potential().quadratic_coefficients();
    if (run.model.dim() != 1 || !c || run.model.force()) {
        throw UsageError("closed-form reference needs a scalar, unforced quadratic model");
    }
    return {run.model.mass()[0], (*c)[0], run.model.damping()[0], run.config.x0[0], run.config.p0[0]};
}

Trajectory execute(const ResolvedRun& run)
{
    switch (run.integrator) {
    case IntegratorKind::Fvi: return fvi_run(run.model, run.config);
    case IntegratorKind::Lda: return lda_run(run.model, run.config);
    case IntegratorKind::Vi: return vi_run(run.model, run.config);
    case IntegratorKind::EulerExplicit: return euler_explicit_run(run.model, run.config);
    case IntegratorKind::EulerImplicit: return euler_implicit_run(run.model, run.config);
    case IntegratorKind::HamFvi: return ham_fvi_run(run.model, run.config);
    case IntegratorKind::OracleMatrix:
        warn_if_alpha_above_half(run.config.alpha);
        return matrix_oracle_solve(run.model, run.config.grid(), 2.0 * run.config.alpha).trajectory;
    case IntegratorKind::OracleExact:
        return exact_oscillator_trajectory(oscillator_params(run), run.config.grid());
    }
    throw UsageError("unknown integrator");
}

std::string trajectory_csv(const Trajectory& traj)
{
    const Eigen::Index d = traj.x.empty() ? 1 : traj.x.front().size();
    std::string out = "k,t";
    const auto columns = [&](const char* name) {
        if (d == 1) {
            out += ',';
            out += name;
            return;
        }
        for (Eigen::Index i = 0; i < d; ++i) {
            out += ',';
            out += name;
            out += '_';
            out += std::to_string(i);
        }
    };
    columns("x");
    columns("p");
    out += ",E\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        append_number(out, traj.grid.t(k));
        for (Eigen::Index i = 0; i < d; ++i) {
            out += ',';
            append_number(out, traj.x[k][i]);
        }
        for (Eigen::Index i = 0; i < d; ++i) {
            out += ',';
            append_number(out, traj.has_momentum() ? traj.p[k][i] : std::nan(""));
        }
        out += ',';
        append_number(out, traj.energy.empty() ? std::nan("") : traj.energy[k]);
        out += '\n';
    }
    return out;
}

std::string convergence_csv(const ConvergenceReport& report)
{
    std::string out = "h,error,fitted_slope\n";
    for (std::size_t i = 0; i < report.h_values.size(); ++i) {
        append_number(out, report.h_values[i]);
        out += ',';
        append_number(out, report.errors[i]);
        out += ',';
        append_number(out, report.slope);
        out += '\n';
    }
    return out;
}

std::string coefficient_table(double alpha, long long n_max)
{
    const GrunwaldTable table = grunwald_coeffs(alpha, n_max);
    std::string out;
    for (std::size_t n = 0; n <= table.n_max(); ++n) {
        out += std::to_string(n);
        out += ", ";
        append_number(out, table.coeffs()[n]);
        out += ", ";
        append_number(out, table.squared()[n]);
        out += '\n';
    }
    return out;
}

std::size_t steps_for(double horizon, double h)
{
    if (!(horizon > 0.0) || !(h > 0.0)) {
        throw UsageError("horizon and h must be positive");
    }
    const double n = std::round(horizon / h);
    if (n < 2.0 || std::abs(n * h - horizon) > 1e-9 * horizon) {
        throw UsageError("h = " + std::to_string(h) + " does not divide the horizon "
                         + std::to_string(horizon) + " into at least 2 steps");
    }
    return static_cast<std::size_t>(n);
}

ConvergenceReport converge(const RunSpec& spec, const ConvergeOptions& options)
{
    if (options.h_values.size() < 3) {
        throw UsageError("convergence study needs at least 3 step sizes");
    }
    std::vector<ResolvedRun> runs;
    for (const double h : options.h_values) {
        RunSpec s = spec;
        s.h = h;
        s.steps = static_cast<long long>(steps_for(options.horizon, h));
        runs.push_back(resolve(s));
    }

    std::optional<Trajectory> matrix_reference;
    std::optional<OscillatorParams> exact_params;
    if (options.reference == ReferenceKind::Matrix) {
        if (options.quantity != Quantity::Position) {
            throw UsageError("the matrix reference provides positions only");
        }
        const ResolvedRun& first = runs.front();
        const Grid fine(0.0, options.reference_h, steps_for(options.horizon, options.reference_h));
        matrix_reference = matrix_oracle_solve(first.model, fine, 2.0 * first.config.alpha).trajectory;
    } else {
        exact_params = oscillator_params(runs.front());
        if (runs.front().config.alpha != 0.5) {
            throw UsageError("the exact reference solves the alpha = 1/2 system");
        }
    }

    std::vector<std::future<double>> jobs;
    for (const ResolvedRun& run : runs) {
        jobs.push_back(std::async(std::launch::async, [&run, &options, &matrix_reference, &exact_params] {
            const Trajectory traj = execute(run);
            if (matrix_reference) {
                return global_error(traj, *matrix_reference, options.quantity);
            }
            const OscillatorParams params = *exact_params;
            return global_error(
                traj,
                [&](double t) -> State {
                    const auto [x, p] = exact_oscillator(params, t);
                    switch (options.quantity) {
                    case Quantity::Position: return State::Constant(1, x);
                    case Quantity::Momentum: return State::Constant(1, p);
                    case Quantity::Energy: break;
                    }
                    return State::Constant(1, 0.5 * p * p / params.m + 0.5 * params.c * x * x);
                },
                options.quantity);
        }));
    }
    std::vector<double> errors;
    for (auto& job : jobs) {
        errors.push_back(job.get());
    }
    return fit_slope(options.h_values, std::move(errors));
}

void write_file(const std::string& path, std::string_view content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) {
            throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        }
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!os) {
            os.close();
            fs::remove(tmp);
            throw std::runtime_error("failed writing '" + path + "'");
        }
    }
    fs::rename(tmp, target);
}

} // namespace fracvi::cli
