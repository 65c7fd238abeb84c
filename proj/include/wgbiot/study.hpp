#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wgbiot/mesh.hpp"
#include "wgbiot/norms.hpp"
#include "wgbiot/weakops.hpp"

namespace wgbiot {

struct RunConfig {
    std::string scenario = "manufactured";
    double nu = 0.25;   // Poisson ratio (both scenarios)
    double k0 = 1.0;    // band conductivity of the heterogeneous scenario
    int k = 1;
    RPolicy r_policy = RPolicy::Theory;
    std::vector<int> levels{3, 4, 5};
    CutStyle cut_style = CutStyle::Chevron;
    double dt = 1e-3;
    std::optional<int> n_steps;        // default 5 when final_time is absent
    std::optional<double> final_time;  // overrides n_steps: n = round(final_time / dt)
    std::string out_dir;               // empty: write nothing
    unsigned seed = 1;
    int samples = 101;                 // field dump grid is samples x samples

    int steps() const;
    /// Throws ConfigError on any inconsistency; called before assembly.
    void validate() const;
};

/// Flat "key = value" text; '#' starts a comment; unknown keys are errors.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig read_config_file(const std::string& path, RunConfig base = {});
/// Applies one key/value pair with the same rules as the config file.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

struct ConvergenceResult {
    std::vector<ConvergenceRecord> records;
    std::string table;
};

/// Per level: build the grid, assemble, march config.steps() steps of
/// config.dt from t = 0 and record errors. Writes convergence.csv (after
/// every level, so partial results survive a failure) and convergence.txt.
ConvergenceResult run_convergence(const RunConfig& config, std::ostream* log = nullptr);

struct FieldSample {
    double x, y, u1, u2, p;
};

struct SteadyResult {
    std::vector<FieldSample> samples;
    /// |u^n - u^{n-1}| / dt at the last step divided by its first-step value.
    double steadiness = 0.0;
    double final_time = 0.0;
    int level = 0;
};

/// Marches the heterogeneous scenario on the finest configured level and
/// samples the interior polynomials on a uniform grid. Writes
/// steady_fields.txt ("x y u1 u2 p" per line) and steady_summary.txt.
SteadyResult run_steady(const RunConfig& config, std::ostream* log = nullptr);

/// Evaluates u_0 and p_0 of the element containing each point.
std::vector<FieldSample> sample_fields(const Mesh& mesh, const GlobalDofMap& map, const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& p, int samples);

void write_field_dump(std::ostream& out, const std::vector<FieldSample>& samples);

}  // namespace wgbiot
