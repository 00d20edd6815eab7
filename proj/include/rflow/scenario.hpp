/// @file scenario.hpp
/// @brief Config-driven scenario runner behind the `riccati_flow` command line tool.
///
/// A scenario is one flat JSON object with dotted keys, e.g.
///
///     { "kind": "trkal", "physics.nu": 0.1, "trkal.beta": 1.0,
///       "grid.origin": [-1, -1, -1], "grid.h": 0.05, "grid.dims": [41, 41, 41],
///       "verify.times": [0.5], "tolerance.momentum": 5e-4 }
///
/// Every key is validated before anything runs; unknown keys are rejected so that typos do
/// not silently fall back to defaults.

#pragma once

#include "rflow/assembly.hpp"
#include "rflow/closed_forms.hpp"
#include "rflow/finite_difference.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rflow {

enum class ScenarioKind { RiccatiTrajectory, ClosedForm, Trkal, Assembled };

enum class Command { Simulate, ClosedForm, Verify, Convergence, Export };

enum class ClosedFormCase { Tangent, Circle };

struct Scenario {
    ScenarioKind kind = ScenarioKind::Trkal;

    // riccati-trajectory
    RiccatiState state0;
    double gamma = 1.0;
    double t0 = 0.0;
    double t1 = 1.0;
    double dt = 1e-3;
    double escape_bound = 1e12;
    /// w(t) = w_vector * exp(-w_decay t)
    Vec3 w_vector;
    double w_decay = 0.0;

    // closed-form
    ClosedFormCase closed_case = ClosedFormCase::Tangent;
    double alpha = 1.0;
    /// Tangent: w_y(t) = wbar exp(-decay t). Circle: w_z(t) = wbar exp(-decay t).
    double wbar = 1.0;
    double decay = 0.0;
    double phase0 = 0.0;
    TangentConvention convention = TangentConvention::Corrected;
    int samples = 101;
    bool check_rk4 = false;

    // trkal / assembled
    FlowSolution flow;
    Grid grid;
    std::vector<double> times{0.5};
    double dt_fd = 0.0;
    FdOrder order = FdOrder::Second;
    int levels = 3;
    double order_min = 1.8;
    double order_max = 2.2;
    std::vector<std::string> convergence_residuals{"momentum"};

    /// Gate name -> threshold. Names: continuity, momentum, heat, rotation, curl_free,
    /// radius_identity, closed_form.
    std::map<std::string, double> tolerances;

    bool write_csv = true;
    bool write_vtk = true;
    bool write_timeseries = true;
};

/// Parses and validates a scenario document. Throws ConfigError naming the offending key.
[[nodiscard]] Scenario parse_scenario(const std::string& json_text);
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

/// Throws ConfigError when the scenario kind does not fit the command, or the grid is too
/// small for the stencil the command needs.
void check_command(const Scenario& s, Command cmd);

struct RunOptions {
    std::filesystem::path out_dir = ".";
    double tolerance_scale = 1.0;
};

struct RunResult {
    int exit_code = 0;
    /// Ordered key/value summary, printed as `key=value` lines.
    std::vector<std::pair<std::string, std::string>> summary;
    std::vector<std::filesystem::path> artifacts;
};

/// Executes a validated scenario. Gate failures give exit code 1.
[[nodiscard]] RunResult run_scenario(const Scenario& s, Command cmd, const RunOptions& options);

/// Full command-line behaviour: load, validate, run, print `key=value` summary to `out`
/// and diagnostics to `err`. Returns 0 (success), 1 (gate failure) or 2 (config error).
int run_command(Command cmd, const std::filesystem::path& config, const RunOptions& options,
                std::ostream& out, std::ostream& err);

} // namespace rflow
