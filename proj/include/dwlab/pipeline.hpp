#pragma once

#include <functional>
#include <string>

#include "dwlab/analysis.hpp"
#include "dwlab/config.hpp"
#include "dwlab/io.hpp"

namespace dwlab {

/// Outcome of one simulation.
struct SimInfo {
    std::string outcome = "completed"; // completed | blowup | underflow-capped
    double s_reached = 0.0;
    double t_reached = 0.0;
    double blowup_t = 0.0;
    double blowup_amplitude = 0.0;
    double I0 = 0.0;     // ||(v0, w0)||^2 in H^{1,m} x H^{0,m}
    double alpha0 = 0.0; // initial mass
    int snapshots = 0;
    // per-snapshot series
    std::vector<double> s, t, B, l2_u, l2_ut, linf_u, mass_u, mass_ut;
};

/// Integrate the configured problem, invoking `on_snapshot` at every output
/// time s_k = k ds_out (including k = 0). Blow-up ends the run gracefully.
SimInfo simulate(const RunConfig& cfg,
                 const std::function<void(int, const PhysicalState&)>& on_snapshot = {});

struct RunResult {
    std::string dir;
    std::string outcome;
    int exit_code = 0; // 0 ok, 3 blow-up
};

/// Full run stage: validate, simulate, persist config/timeseries/snapshots and
/// an atomically written summary. Throws ValidationError on hard config
/// violations.
RunResult run_pipeline(const RunConfig& cfg, const std::string& out_root);

/// Staged post-processing over a persisted run directory.
void decompose_pipeline(const std::string& run_dir);
void energy_pipeline(const std::string& run_dir);
nlohmann::json rates_pipeline(const std::string& run_dir);

/// Rate constants for a configuration: {lambda0, lambda1, lambda, exponent}.
nlohmann::json rates_predict(const RunConfig& cfg);

/// Cartesian sweep driven by a sweep config {base, axes | runs}; aggregates
/// sweep.csv under out_root. Returns the number of runs that errored.
int sweep_pipeline(const nlohmann::json& sweep_config, const std::string& out_root, int jobs);

/// Built-in invariant suite; returns the number of failures.
int selftest(bool verbose);

/// Helpers shared by the stages.
std::string run_directory(const std::string& out_root, const std::string& id);
RunConfig load_run_config(const std::string& run_dir);
void merge_summary(const std::string& run_dir, const nlohmann::json& patch);
std::vector<Decomposition> load_decompositions(const std::string& run_dir);

} // namespace dwlab
