#pragma once

// Run orchestration shared by the command-line tool and the Python module.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracvi/analysis.hpp"
#include "fracvi/integrators.hpp"
#include "fracvi/models.hpp"
#include "fracvi/oracles.hpp"

namespace fracvi::cli {

/// Bad flags, unknown tags, incompatible integrator/model choices.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class IntegratorKind { Fvi, Lda, Vi, EulerExplicit, EulerImplicit, HamFvi, OracleMatrix, OracleExact };
enum class ModelKind { Oscillator, FractionalTest, Custom };
enum class ReferenceKind { Exact, Matrix };

IntegratorKind parse_integrator(std::string_view tag);
ModelKind parse_model(std::string_view tag);
ReferenceKind parse_reference(std::string_view tag);
Quantity parse_quantity(std::string_view tag);
std::string_view to_string(IntegratorKind kind);

/// Flag values as given; unset fields take the model's defaults.
struct RunSpec {
    IntegratorKind integrator = IntegratorKind::Fvi;
    ModelKind model = ModelKind::Oscillator;
    std::optional<double> alpha;
    std::optional<double> kappa;
    std::optional<double> rho;
    std::optional<double> c;
    std::optional<double> mass;
    std::optional<double> h;
    std::optional<long long> steps;
    std::optional<double> x0;
    std::optional<double> p0;
    std::optional<std::string> force;  // "t0:t1:value;..."
    double newton_tol = 1e-12;
    int newton_max_iter = 50;
};

/// A spec with defaults filled in and compatibility checked.
struct ResolvedRun {
    IntegratorKind integrator;
    MechModel model;
    IntegratorConfig config;
};

ResolvedRun resolve(const RunSpec& spec);

/// Oscillator parameters of a resolved scalar, unforced quadratic model.
OscillatorParams oscillator_params(const ResolvedRun& run);

Trajectory execute(const ResolvedRun& run);

/// "t0:t1:value;t0:t1:value" with scalar values.
ExternalForce parse_force_table(std::string_view table, Eigen::Index dim = 1);
std::vector<double> parse_h_list(std::string_view list);

/// CSV `k,t,x,p,E` (x_i/p_i columns for vector states), 17 significant digits,
/// LF endings. Missing momenta and energies are written as nan.
std::string trajectory_csv(const Trajectory& traj);

/// CSV `h,error,fitted_slope`.
std::string convergence_csv(const ConvergenceReport& report);

/// Lines "n, alpha_n, c_n" for n = 0..n_max.
std::string coefficient_table(double alpha, long long n_max);

struct ConvergeOptions {
    std::vector<double> h_values{0.4, 0.2, 0.1, 0.05, 0.025};
    ReferenceKind reference = ReferenceKind::Exact;
    double horizon = 30.0;
    double reference_h = 5e-3;
    Quantity quantity = Quantity::Position;
};

/// Runs the spec once per h (concurrently) over [0, horizon] and fits the
/// log-log slope of the global error against the reference.
ConvergenceReport converge(const RunSpec& spec, const ConvergeOptions& options);

/// Number of steps covering `horizon` with step h; h must divide it.
std::size_t steps_for(double horizon, double h);

/// Writes through a temporary file and renames, so failures leave no partial output.
void write_file(const std::string& path, std::string_view content);

} // namespace fracvi::cli
