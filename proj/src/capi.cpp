#include "dwlab.h"

#include <cstring>
#include <string>

#include "dwlab/pipeline.hpp"

using namespace dwlab;

struct dwlab_config {
    RunConfig cfg;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

dwlab_status record(dwlab_status st, const std::string& msg) {
    g_last_error = msg;
    return st;
}

template <typename Fn>
dwlab_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        return record(DWLAB_E_VALIDATION, e.what());
    } catch (const BlowUpError& e) {
        return record(DWLAB_E_BLOWUP, e.what());
    } catch (const std::exception& e) {
        return record(DWLAB_E_INTERNAL, e.what());
    } catch (...) {
        return record(DWLAB_E_INTERNAL, "unknown failure");
    }
}

} // namespace

extern "C" {

const char* dwlab_version(void) { return "dwlab 1.0.0"; }

dwlab_status dwlab_config_from_file(const char* path, dwlab_config** out) {
    if (!path || !out) return record(DWLAB_E_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto* handle = new dwlab_config{parse_config_file(path)};
        *out = handle;
        return DWLAB_OK;
    });
}

dwlab_status dwlab_config_from_json(const char* json_text, dwlab_config** out) {
    if (!json_text || !out) return record(DWLAB_E_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(json_text);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(std::string("config: JSON parse failure: ") + e.what());
        }
        auto* handle = new dwlab_config{parse_config(j)};
        *out = handle;
        return DWLAB_OK;
    });
}

void dwlab_config_free(dwlab_config* cfg) { delete cfg; }

dwlab_status dwlab_validate(const dwlab_config* cfg, char** report_json) {
    if (!cfg) return record(DWLAB_E_ARGUMENT, "null config");
    return guarded([&] {
        const ConfigReport rep = validate_config(cfg->cfg);
        if (report_json) *report_json = dup_string(rep.to_json().dump(2));
        if (!rep.runnable()) return record(DWLAB_E_VALIDATION, "configuration is not runnable");
        return DWLAB_OK;
    });
}

dwlab_status dwlab_run(const dwlab_config* cfg, const char* out_root, char** run_dir_out) {
    if (!cfg || !out_root) return record(DWLAB_E_ARGUMENT, "null argument");
    return guarded([&] {
        const RunResult rr = run_pipeline(cfg->cfg, out_root);
        if (run_dir_out) *run_dir_out = dup_string(rr.dir);
        if (rr.exit_code == 3) return record(DWLAB_E_BLOWUP, "run ended in blow-up at finite time");
        return DWLAB_OK;
    });
}

dwlab_status dwlab_decompose(const char* run_dir) {
    if (!run_dir) return record(DWLAB_E_ARGUMENT, "null run_dir");
    return guarded([&] {
        decompose_pipeline(run_dir);
        return DWLAB_OK;
    });
}

dwlab_status dwlab_energy(const char* run_dir) {
    if (!run_dir) return record(DWLAB_E_ARGUMENT, "null run_dir");
    return guarded([&] {
        energy_pipeline(run_dir);
        return DWLAB_OK;
    });
}

dwlab_status dwlab_rates(const char* run_dir, char** ratefit_json) {
    if (!run_dir) return record(DWLAB_E_ARGUMENT, "null run_dir");
    return guarded([&] {
        const nlohmann::json j = rates_pipeline(run_dir);
        if (ratefit_json) *ratefit_json = dup_string(j.dump(2));
        return DWLAB_OK;
    });
}

dwlab_status dwlab_rates_predict(const dwlab_config* cfg, char** json_out) {
    if (!cfg) return record(DWLAB_E_ARGUMENT, "null config");
    return guarded([&] {
        const nlohmann::json j = rates_predict(cfg->cfg);
        if (json_out) *json_out = dup_string(j.dump(2));
        return DWLAB_OK;
    });
}

dwlab_status dwlab_sweep(const char* sweep_config_path, const char* out_root, int jobs) {
    if (!sweep_config_path || !out_root) return record(DWLAB_E_ARGUMENT, "null argument");
    return guarded([&] {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_text(sweep_config_path));
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(std::string("sweep: JSON parse failure: ") + e.what());
        }
        const int errors = sweep_pipeline(j, out_root, jobs < 1 ? 1 : jobs);
        if (errors > 0)
            return record(DWLAB_E_INTERNAL, std::to_string(errors) + " sweep run(s) errored");
        return DWLAB_OK;
    });
}

dwlab_status dwlab_selftest(int verbose) {
    return guarded([&] {
        const int failures = selftest(verbose != 0);
        if (failures > 0)
            return record(DWLAB_E_INTERNAL, std::to_string(failures) + " selftest failure(s)");
        return DWLAB_OK;
    });
}

const char* dwlab_last_error(void) { return g_last_error.c_str(); }

void dwlab_string_free(char* s) { delete[] s; }

} // extern "C"
