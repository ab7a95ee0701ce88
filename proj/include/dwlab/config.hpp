#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dwlab/dynamics.hpp"
#include "dwlab/energy.hpp"

namespace dwlab {

/// Everything one reproducible experiment needs. Parsed from the JSON config;
/// unspecified knobs take the documented defaults.
struct RunConfig {
    int schema_version = 1;
    std::string id = "run";
    int n = 1;
    Grid grid{1, 20.0, 512};
    CoefficientSet coeffs;
    NonlinearityModel nl = NonlinearityModel::none(1);
    InitialData data;
    double m = 1.0;
    // time block
    double s_end = 3.0;
    double ds_out = 0.1;
    StepControl step;
    // analysis block
    double delta = 0.5;
    double eta = 0.01;
    double eta_tilde = -1.0; // <= 0 means (m - n/2)/2
    double C0 = 64.0;
    double C1 = 16.0;
    double fit_lo = 20.0;
    double fit_hi = 500.0;

    nlohmann::json to_json() const;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_file(const std::string& path);

struct ConfigIssue {
    std::string path;
    std::string message;
    bool hard = true;
};

struct ConfigReport {
    std::vector<ConfigIssue> issues;
    bool runnable() const {
        for (const auto& i : issues)
            if (i.hard) return false;
        return true;
    }
    nlohmann::json to_json() const;
};

/// Aggregate validation across modules: hard violations refuse to run,
/// soft ones (growth conditions that only affect the predicted rates,
/// domain-size advice) warn.
ConfigReport validate_config(const RunConfig& cfg);

/// Rate constants for this configuration.
RateSet rates_of(const RunConfig& cfg);

/// Energy-ladder parameters for this configuration.
EnergyConfig energy_config_of(const RunConfig& cfg);

} // namespace dwlab
