// dwlab command-line driver. Talks to the core exclusively through the C API.

#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "dwlab.h"

namespace {

std::string output_root(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("DWLAB_OUT"); env && *env) return env;
    return ".";
}

int finish(dwlab_status st) {
    if (st != DWLAB_OK && st != DWLAB_E_BLOWUP)
        std::fprintf(stderr, "dwlab: %s\n", dwlab_last_error());
    return int(st);
}

struct ConfigHandle {
    dwlab_config* cfg = nullptr;
    ~ConfigHandle() { dwlab_config_free(cfg); }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dwlab — asymptotic-profile laboratory for damped wave equations"};
    app.require_subcommand(1);

    std::string config_path, out_dir, run_dir;
    int jobs = 1;
    bool quiet = false;

    auto* validate = app.add_subcommand("validate", "check a run configuration");
    validate->add_option("--config", config_path, "config JSON")->required();

    auto* run = app.add_subcommand("run", "simulate and persist a run");
    run->add_option("--config", config_path, "config JSON")->required();
    run->add_option("--out", out_dir, "output root (default $DWLAB_OUT or .)");

    auto* decompose = app.add_subcommand("decompose", "Gaussian-mode decomposition of a run");
    decompose->add_option("run_dir", run_dir, "run directory")->required();

    auto* energy = app.add_subcommand("energy", "energy ladder and identity residuals");
    energy->add_option("run_dir", run_dir, "run directory")->required();

    auto* rates = app.add_subcommand("rates", "decay-rate fit of a run");
    rates->add_option("run_dir", run_dir, "run directory");
    auto* predict = rates->add_subcommand("predict", "print predicted rate constants");
    predict->add_option("--config", config_path, "config JSON")->required();

    auto* sweep = app.add_subcommand("sweep", "cartesian parameter sweep");
    sweep->add_option("--config", config_path, "sweep config JSON")->required();
    sweep->add_option("--out", out_dir, "output root (default $DWLAB_OUT or .)");
    sweep->add_option("--jobs", jobs, "concurrent runs")->default_val(1);

    auto* selftest = app.add_subcommand("selftest", "run the built-in invariant suite");
    selftest->add_flag("--quiet", quiet, "print failures only");

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) {
        ConfigHandle h;
        if (dwlab_status st = dwlab_config_from_file(config_path.c_str(), &h.cfg); st != DWLAB_OK)
            return finish(st);
        char* report = nullptr;
        const dwlab_status st = dwlab_validate(h.cfg, &report);
        if (report) {
            std::printf("%s\n", report);
            dwlab_string_free(report);
        }
        return int(st);
    }
    if (run->parsed()) {
        ConfigHandle h;
        if (dwlab_status st = dwlab_config_from_file(config_path.c_str(), &h.cfg); st != DWLAB_OK)
            return finish(st);
        char* dir = nullptr;
        const dwlab_status st = dwlab_run(h.cfg, output_root(out_dir).c_str(), &dir);
        if (dir) {
            std::printf("%s\n", dir);
            dwlab_string_free(dir);
        }
        if (st == DWLAB_E_BLOWUP) std::fprintf(stderr, "dwlab: outcome blowup\n");
        return finish(st);
    }
    if (decompose->parsed()) return finish(dwlab_decompose(run_dir.c_str()));
    if (energy->parsed()) return finish(dwlab_energy(run_dir.c_str()));
    if (rates->parsed()) {
        if (predict->parsed()) {
            ConfigHandle h;
            if (dwlab_status st = dwlab_config_from_file(config_path.c_str(), &h.cfg);
                st != DWLAB_OK)
                return finish(st);
            char* out = nullptr;
            const dwlab_status st = dwlab_rates_predict(h.cfg, &out);
            if (out) {
                std::printf("%s\n", out);
                dwlab_string_free(out);
            }
            return finish(st);
        }
        if (run_dir.empty()) {
            std::fprintf(stderr, "dwlab: rates requires a run directory (or `rates predict`)\n");
            return int(DWLAB_E_ARGUMENT);
        }
        char* out = nullptr;
        const dwlab_status st = dwlab_rates(run_dir.c_str(), &out);
        if (out) {
            std::printf("%s\n", out);
            dwlab_string_free(out);
        }
        return finish(st);
    }
    if (sweep->parsed())
        return finish(dwlab_sweep(config_path.c_str(), output_root(out_dir).c_str(), jobs));
    if (selftest->parsed()) return finish(dwlab_selftest(quiet ? 0 : 1));
    return 0;
}
