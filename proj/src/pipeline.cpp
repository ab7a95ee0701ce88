#include "dwlab/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <thread>

namespace dwlab {

namespace fs = std::filesystem;
using nlohmann::json;

SimInfo simulate(const RunConfig& cfg, const std::function<void(int, const PhysicalState&)>& on_snapshot) {
    SimInfo info;
    PhysicalState st = make_initial_state(cfg.grid, cfg.data);

    // I0 from the exact s = 0 scaled data: v0 = u, w0 = b(0) u_t
    Field w0 = b_of_t(cfg.coeffs.damping, 0.0) * st.p;
    info.I0 = std::pow(weighted_norm(st.u, 1, cfg.m), 2) + std::pow(weighted_norm(w0, 0, cfg.m), 2);
    info.alpha0 = integrate(st.u);

    const int K = int(std::llround(cfg.s_end / cfg.ds_out));
    auto record = [&](int k) {
        const double s_k = k * cfg.ds_out;
        info.s.push_back(s_k);
        info.t.push_back(st.t);
        info.B.push_back(B_of_t(cfg.coeffs.damping, st.t));
        info.l2_u.push_back(l2_norm(st.u));
        info.l2_ut.push_back(l2_norm(st.p));
        info.linf_u.push_back(linf_norm(st.u));
        info.mass_u.push_back(integrate(st.u));
        info.mass_ut.push_back(integrate(st.p));
        if (on_snapshot) on_snapshot(k, st);
        ++info.snapshots;
        info.s_reached = s_k;
        info.t_reached = st.t;
    };

    record(0);
    // grows like exp(e^s) for beta = -1; cap the work per output interval
    constexpr double kMaxStepsPerInterval = 5e5;
    for (int k = 1; k <= K; ++k) {
        const double t_next = t_of_s(cfg.coeffs.damping, k * cfg.ds_out);
        const double dt_cap = stable_dt(cfg.coeffs, cfg.grid, st.t, t_next, cfg.step);
        if (dt_cap < 1e-8 || (t_next - st.t) / dt_cap > kMaxStepsPerInterval) {
            info.outcome = "underflow-capped";
            return info;
        }
        try {
            advance_to(st, t_next, cfg.coeffs, cfg.nl, cfg.step);
        } catch (const BlowUpError& e) {
            info.outcome = "blowup";
            info.blowup_t = e.t_blowup;
            info.blowup_amplitude = e.amplitude;
            return info;
        }
        record(k);
    }
    return info;
}

std::string run_directory(const std::string& out_root, const std::string& id) {
    return (fs::path(out_root) / "runs" / id).string();
}

RunConfig load_run_config(const std::string& run_dir) {
    return parse_config_file((fs::path(run_dir) / "config.json").string());
}

void merge_summary(const std::string& run_dir, const json& patch) {
    const std::string path = (fs::path(run_dir) / "summary.json").string();
    json summary = json::object();
    if (fs::exists(path)) summary = json::parse(read_text(path));
    summary.update(patch);
    atomic_write_text(path, summary.dump(2) + "\n");
}

RunResult run_pipeline(const RunConfig& cfg, const std::string& out_root) {
    const ConfigReport rep = validate_config(cfg);
    if (!rep.runnable()) {
        std::string msg = "config rejected:";
        for (const auto& i : rep.issues)
            if (i.hard) msg += " [" + i.path + "] " + i.message + ";";
        throw ValidationError(msg);
    }

    const auto t_start = std::chrono::steady_clock::now();
    const std::string dir = run_directory(out_root, cfg.id);
    fs::create_directories(fs::path(dir) / "snapshots");
    atomic_write_text((fs::path(dir) / "config.json").string(), cfg.to_json().dump(2) + "\n");

    CsvWriter ts({"s", "t", "B", "l2_u", "l2_ut", "linf_u", "mass_u", "mass_ut"});
    const SimInfo info = simulate(cfg, [&](int k, const PhysicalState& st) {
        SnapshotHeader h;
        h.n = cfg.grid.n;
        h.L = cfg.grid.L;
        h.N = cfg.grid.N;
        h.t = st.t;
        h.s = k * cfg.ds_out;
        h.kind = "physical_state";
        h.fields = {"u", "ut"};
        write_snapshot((fs::path(dir) / "snapshots" / (std::to_string(k) + ".bin")).string(), h,
                       {&st.u, &st.p});
    });
    for (std::size_t k = 0; k < info.s.size(); ++k)
        ts.add_row({info.s[k], info.t[k], info.B[k], info.l2_u[k], info.l2_ut[k], info.linf_u[k],
                    info.mass_u[k], info.mass_ut[k]});
    ts.write((fs::path(dir) / "timeseries.csv").string());

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    const RateSet rs = rates_of(cfg);
    json summary;
    summary["id"] = cfg.id;
    summary["outcome"] = info.outcome;
    summary["snapshots"] = info.snapshots;
    summary["s_reached"] = info.s_reached;
    summary["t_reached"] = info.t_reached;
    summary["I0"] = info.I0;
    summary["alpha0"] = info.alpha0;
    summary["predicted"] = {{"lambda0", rs.lambda0},
                            {"lambda1", rs.lambda1},
                            {"lambda", rs.lambda},
                            {"exponent", rs.exponent}};
    summary["wall_time_s"] = wall;
    summary["artifacts"] = {{"timeseries", "timeseries.csv"}, {"snapshots", "snapshots/"}};
    json warnings = json::array();
    for (const auto& i : rep.issues) warnings.push_back(i.path + ": " + i.message);
    summary["warnings"] = warnings;
    if (info.outcome == "blowup")
        summary["blowup"] = {{"t", info.blowup_t}, {"amplitude", info.blowup_amplitude}};
    merge_summary(dir, summary);

    RunResult res;
    res.dir = dir;
    res.outcome = info.outcome;
    res.exit_code = info.outcome == "blowup" ? 3 : 0;
    return res;
}

namespace {

std::vector<int> snapshot_indices(const std::string& run_dir, const char* subdir) {
    std::vector<int> ks;
    const fs::path p = fs::path(run_dir) / subdir;
    if (!fs::exists(p)) throw InternalError(std::string("missing directory ") + p.string());
    for (const auto& e : fs::directory_iterator(p)) {
        const std::string name = e.path().filename().string();
        if (name.size() > 4 && name.substr(name.size() - 4) == ".bin")
            ks.push_back(std::stoi(name.substr(0, name.size() - 4)));
    }
    std::sort(ks.begin(), ks.end());
    if (ks.empty()) throw InternalError("no snapshots found under " + p.string());
    return ks;
}

} // namespace

void decompose_pipeline(const std::string& run_dir) {
    const RunConfig cfg = load_run_config(run_dir);
    fs::create_directories(fs::path(run_dir) / "decomp");
    CsvWriter csv({"s", "t", "alpha", "dalpha", "int_r", "eps", "drag", "mean_f_raw", "mean_g_raw",
                   "mean_h", "l2_f", "l2_g", "l2_r", "l2_h", "f_h1m", "g_h0m", "r_h0m", "h_h0m",
                   "nl_norm"});
    double alpha_last = 0.0;
    int bandwidth_warnings = 0;
    for (int k : snapshot_indices(run_dir, "snapshots")) {
        auto [h, fields] =
            read_snapshot((fs::path(run_dir) / "snapshots" / (std::to_string(k) + ".bin")).string());
        PhysicalState st{h.t, std::move(fields.at(0)), std::move(fields.at(1))};
        ResampleInfo rinfo;
        const ScaledState ss = to_scaled(st, cfg.coeffs.damping, &rinfo);
        if (rinfo.bandwidth_warning) ++bandwidth_warnings;
        const Decomposition d = split(ss, cfg.coeffs, cfg.nl, cfg.m);
        alpha_last = d.alpha;

        SnapshotHeader oh;
        oh.n = cfg.grid.n;
        oh.L = cfg.grid.L;
        oh.N = cfg.grid.N;
        oh.t = h.t;
        oh.s = d.s;
        oh.kind = "decomposition";
        oh.fields = {"f", "g", "r", "h"};
        oh.scalars = {{"alpha", d.alpha},     {"dalpha", d.dalpha},
                      {"int_r", d.int_r},     {"mean_f_raw", d.mean_f_raw},
                      {"mean_g_raw", d.mean_g_raw}, {"mean_h", d.mean_h},
                      {"nl_norm", d.nl_norm}, {"eps", d.weights.eps},
                      {"drag", d.weights.drag}, {"underflow", d.underflow}};
        write_snapshot((fs::path(run_dir) / "decomp" / (std::to_string(k) + ".bin")).string(), oh,
                       {&d.f, &d.g, &d.r, &d.h});
        csv.add_row({d.s, h.t, d.alpha, d.dalpha, d.int_r, d.weights.eps, d.weights.drag,
                     d.mean_f_raw, d.mean_g_raw, d.mean_h, l2_norm(d.f), l2_norm(d.g),
                     l2_norm(d.r), l2_norm(d.h), weighted_norm(d.f, 1, cfg.m),
                     weighted_norm(d.g, 0, cfg.m), weighted_norm(d.r, 0, cfg.m),
                     weighted_norm(d.h, 0, cfg.m), d.nl_norm});
    }
    csv.write((fs::path(run_dir) / "decomp.csv").string());
    merge_summary(run_dir,
                  {{"alpha_last", alpha_last}, {"resample_warnings", bandwidth_warnings}});
}

std::vector<Decomposition> load_decompositions(const std::string& run_dir) {
    const RunConfig cfg = load_run_config(run_dir);
    std::vector<Decomposition> out;
    for (int k : snapshot_indices(run_dir, "decomp")) {
        auto [h, fields] =
            read_snapshot((fs::path(run_dir) / "decomp" / (std::to_string(k) + ".bin")).string());
        Decomposition d;
        d.s = h.s;
        d.f = std::move(fields.at(0));
        d.g = std::move(fields.at(1));
        d.r = std::move(fields.at(2));
        d.h = std::move(fields.at(3));
        d.alpha = h.scalars.at("alpha").get<double>();
        d.dalpha = h.scalars.at("dalpha").get<double>();
        d.int_r = h.scalars.at("int_r").get<double>();
        d.mean_f_raw = h.scalars.value("mean_f_raw", 0.0);
        d.mean_g_raw = h.scalars.value("mean_g_raw", 0.0);
        d.mean_h = h.scalars.value("mean_h", 0.0);
        d.nl_norm = h.scalars.value("nl_norm", 0.0);
        d.weights.eps = h.scalars.at("eps").get<double>();
        d.weights.drag = h.scalars.at("drag").get<double>();
        d.underflow = h.scalars.value("underflow", false);
        (void)cfg;
        out.push_back(std::move(d));
    }
    return out;
}

void energy_pipeline(const std::string& run_dir) {
    const RunConfig cfg = load_run_config(run_dir);
    const EnergyConfig ec = energy_config_of(cfg);
    const std::vector<Decomposition> decs = load_decompositions(run_dir);

    std::vector<EnergyReport> reports;
    reports.reserve(decs.size());
    for (const Decomposition& d : decs) reports.push_back(energies(d, cfg.coeffs, ec));

    IdentityResidualSeries res;
    const bool have_res = reports.size() >= 3;
    if (have_res) res = identity_residuals(reports, cfg.ds_out);

    CsvWriter csv({"s",  "E0", "E1", "E2", "E3", "E4", "E5", "L0", "L1", "L2", "L4",
                   "R0", "R1", "R2", "R3", "R4", "R5", "R5_tilde", "alpha", "dalpha", "int_r",
                   "eps", "drag", "equiv0", "equiv1", "equiv2",
                   "res_e0", "res_e1", "res_e2", "res_e3", "res_e4", "res_e5"});
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const EnergyReport& r = reports[k];
        csv.add_row({r.s,  r.E0, r.E1, r.E2, r.E3, r.E4, r.E5, r.L0, r.L1, r.L2, r.L4,
                     r.R0, r.R1, r.R2, r.R3, r.R4, r.R5, r.R5_tilde, r.alpha, r.dalpha, r.int_r,
                     r.weights.eps, r.weights.drag, r.equiv0, r.equiv1, r.equiv2,
                     have_res ? res.e0[k] : nan, have_res ? res.e1[k] : nan,
                     have_res ? res.e2[k] : nan, have_res ? res.e3[k] : nan,
                     have_res ? res.e4[k] : nan, have_res ? res.e5[k] : nan});
    }
    csv.write((fs::path(run_dir) / "energy.csv").string());

    const ThresholdReport th = detect_thresholds(reports);
    json eq = json::object();
    json l4fit = json::object();
    if (th.s1_index != SIZE_MAX) {
        auto ratio_range = [&](auto num, auto den) {
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (std::size_t k = th.s1_index; k < reports.size(); ++k) {
                const double d = den(reports[k]);
                if (d <= 0.0) continue;
                const double rr = num(reports[k]) / d;
                lo = std::min(lo, rr);
                hi = std::max(hi, rr);
            }
            return std::make_pair(lo, hi);
        };
        const auto [e0lo, e0hi] = ratio_range([](const EnergyReport& r) { return r.E0; },
                                              [](const EnergyReport& r) { return r.equiv0; });
        const auto [e1lo, e1hi] = ratio_range([](const EnergyReport& r) { return r.E1; },
                                              [](const EnergyReport& r) { return r.equiv1; });
        const auto [e2lo, e2hi] = ratio_range([](const EnergyReport& r) { return r.E2; },
                                              [](const EnergyReport& r) { return r.equiv2; });
        eq = {{"E0", {e0lo, e0hi}}, {"E1", {e1lo, e1hi}}, {"E2", {e2lo, e2hi}}};
    }
    if (th.s2_index != SIZE_MAX) {
        double c = std::numeric_limits<double>::infinity();
        for (std::size_t k = th.s2_index; k < reports.size(); ++k) {
            const EnergyReport& r = reports[k];
            const double den =
                r.f_h1m * r.f_h1m + r.g_h0m * r.g_h0m + r.dalpha * r.dalpha;
            if (den > 0.0) c = std::min(c, r.L4 / den);
        }
        l4fit = {{"c", std::isfinite(c) ? c : 0.0}};
    }

    json maxres = json::object();
    if (have_res) {
        maxres = {{"e0", IdentityResidualSeries::max_abs(res.e0)},
                  {"e1", IdentityResidualSeries::max_abs(res.e1)},
                  {"e2", IdentityResidualSeries::max_abs(res.e2)},
                  {"e3", IdentityResidualSeries::max_abs(res.e3)},
                  {"e4", IdentityResidualSeries::max_abs(res.e4)},
                  {"e5", IdentityResidualSeries::max_abs(res.e5)}};
    }
    bool finite = true;
    for (const EnergyReport& r : reports) finite = finite && r.all_finite();

    const double s0 = th.s2_index != SIZE_MAX ? th.s2 : reports.front().s;
    const AprioriReport ap = apriori_monitor(reports, s0);

    json summary;
    summary["s1"] = th.s1_index != SIZE_MAX ? json(th.s1) : json();
    summary["s2"] = th.s2_index != SIZE_MAX ? json(th.s2) : json();
    summary["equivalence"] = eq;
    summary["L4_coercivity"] = l4fit;
    summary["max_abs_residuals"] = maxres;
    summary["all_finite"] = finite;
    summary["apriori"] = {{"s0", ap.s0},
                          {"sup_E5", ap.sup_E5},
                          {"E5_at_s0", ap.E5_at_s0},
                          {"bounded", ap.bounded}};
    summary["params"] = {{"lambda", ec.lambda},
                         {"delta", ec.delta},
                         {"eta_tilde", ec.eta_for(cfg.n)},
                         {"C0", ec.C0},
                         {"C1", ec.C1}};
    atomic_write_text((fs::path(run_dir) / "energy_summary.json").string(),
                      summary.dump(2) + "\n");

    json patch;
    patch["sup_E5"] = ap.sup_E5;
    patch["apriori_bounded"] = ap.bounded;
    if (have_res) {
        double mr = 0.0;
        for (const auto& [k, v] : maxres.items()) mr = std::max(mr, v.get<double>());
        patch["max_identity_residual"] = mr;
    }
    merge_summary(run_dir, patch);
}

json rates_pipeline(const std::string& run_dir) {
    const RunConfig cfg = load_run_config(run_dir);
    const RateSet rs = rates_of(cfg);

    const auto table = read_csv((fs::path(run_dir) / "timeseries.csv").string());
    const std::vector<double> s = csv_column(table, "s");
    const std::vector<double> B = csv_column(table, "B");
    const std::vector<double> mass = csv_column(table, "mass_u");

    // alpha(s) = integral of v = physical mass; fit the tail
    AlphaFit af;
    {
        std::vector<double> st, at;
        const double s_tail = std::max(1.0, 0.4 * s.back());
        for (std::size_t k = 0; k < s.size(); ++k)
            if (s[k] >= s_tail) {
                st.push_back(s[k]);
                at.push_back(mass[k]);
            }
        if (st.size() < 20 && s.size() >= 20) {
            st.assign(s.end() - 20, s.end());
            at.assign(mass.end() - 20, mass.end());
        }
        if (st.size() >= 20) {
            af = alpha_star_fit(st, at);
        } else {
            af.alpha_star = mass.back();
            af.rate_defined = false;
            af.converged = false;
        }
    }

    std::vector<double> err, Bp1;
    for (int k : snapshot_indices(run_dir, "snapshots")) {
        auto [h, fields] =
            read_snapshot((fs::path(run_dir) / "snapshots" / (std::to_string(k) + ".bin")).string());
        err.push_back(profile_error(fields.at(0), h.t, cfg.coeffs.damping, af.alpha_star));
        Bp1.push_back(B_of_t(cfg.coeffs.damping, h.t) + 1.0);
    }

    RateFit fit = fit_decay(err, Bp1, rs.exponent, cfg.fit_lo, cfg.fit_hi);
    fit.alpha_star = af.alpha_star;
    fit.alpha_tail_rate = af.tail_rate;
    fit.tail_rate_defined = af.rate_defined;

    json out;
    out["alpha_star"] = fit.alpha_star;
    out["alpha_tail_rate"] = af.rate_defined ? json(af.tail_rate) : json();
    out["alpha_tail_converged"] = af.converged;
    out["slope"] = fit.slope;
    out["predicted_exponent"] = fit.predicted_exponent;
    out["margin"] = fit.margin;
    out["pass"] = fit.pass;
    out["window"] = {fit.window_lo, fit.window_hi};
    out["n_points"] = fit.n_points;
    out["fit_residual"] = fit.fit_residual;
    out["lambda"] = {{"lambda0", rs.lambda0},
                     {"lambda1", rs.lambda1},
                     {"lambda", rs.lambda},
                     {"exponent", rs.exponent}};
    {
        json series = json::array();
        for (std::size_t k = 0; k < err.size(); ++k)
            series.push_back({{"B_plus_1", Bp1[k]}, {"error", err[k]}});
        out["profile_error"] = series;
    }
    atomic_write_text((fs::path(run_dir) / "ratefit.json").string(), out.dump(2) + "\n");
    merge_summary(run_dir, {{"alpha_star", fit.alpha_star},
                            {"slope", fit.slope},
                            {"predicted_exponent", fit.predicted_exponent},
                            {"rate_pass", fit.pass}});
    return out;
}

json rates_predict(const RunConfig& cfg) {
    const RateSet rs = rates_of(cfg);
    return {{"lambda0", rs.lambda0},
            {"lambda1", rs.lambda1},
            {"lambda", rs.lambda},
            {"exponent", rs.exponent}};
}

namespace {

void json_patch_path(json& target, const std::string& dotted, const json& value) {
    json* cur = &target;
    std::size_t pos = 0;
    while (true) {
        const std::size_t dot = dotted.find('.', pos);
        const std::string key = dotted.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (dot == std::string::npos) {
            (*cur)[key] = value;
            return;
        }
        cur = &(*cur)[key];
        pos = dot + 1;
    }
}

} // namespace

int sweep_pipeline(const json& sweep_config, const std::string& out_root, int jobs) {
    if (!sweep_config.contains("base")) throw ValidationError("sweep: missing base config");
    const json base = sweep_config.at("base");

    std::vector<json> patches;
    if (sweep_config.contains("axes")) {
        patches.push_back(json::object());
        for (const auto& [path, values] : sweep_config.at("axes").items()) {
            std::vector<json> next;
            for (const json& patch : patches)
                for (const json& v : values) {
                    json p = patch;
                    p[path] = v;
                    next.push_back(p);
                }
            patches = std::move(next);
        }
    } else if (sweep_config.contains("runs")) {
        for (const json& p : sweep_config.at("runs")) patches.push_back(p);
    } else {
        patches.push_back(json::object());
    }

    struct Row {
        std::string id;
        double beta = 0, p = 0, predicted = 0, slope = 0;
        bool pass = false;
        std::string outcome;
    };
    std::vector<Row> rows(patches.size());
    std::atomic<std::size_t> next{0};
    std::atomic<int> errors{0};

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= patches.size()) return;
            json cj = base;
            for (const auto& [path, v] : patches[i].items()) json_patch_path(cj, path, v);
            const std::string base_id = cj.value("id", std::string("sweep"));
            cj["id"] = base_id + "-" + std::to_string(i);
            Row& row = rows[i];
            row.id = cj["id"];
            try {
                const RunConfig cfg = parse_config(cj);
                row.beta = cfg.coeffs.damping.beta;
                if (!cfg.nl.empty())
                    row.p = cfg.n == 1 ? cfg.nl.terms().front().p1 : cfg.nl.power();
                const RunResult rr = run_pipeline(cfg, out_root);
                row.outcome = rr.outcome;
                if (rr.outcome == "completed") {
                    const json rf = rates_pipeline(rr.dir);
                    row.predicted = rf.at("predicted_exponent").get<double>();
                    row.slope = rf.at("slope").get<double>();
                    row.pass = rf.at("pass").get<bool>();
                }
            } catch (const std::exception& e) {
                row.outcome = std::string("error: ") + e.what();
                errors.fetch_add(1);
            }
        }
    };
    const int nthreads = std::max(1, std::min<int>(jobs, int(patches.size())));
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    CsvWriter csv({"id", "beta", "p", "predicted_exponent", "fitted_slope", "pass", "outcome"});
    for (const Row& r : rows)
        csv.add_row_mixed({r.id, format_double(r.beta), format_double(r.p),
                           format_double(r.predicted), format_double(r.slope),
                           r.pass ? "1" : "0", r.outcome});
    fs::create_directories(out_root);
    csv.write((fs::path(out_root) / "sweep.csv").string());
    return errors.load();
}

} // namespace dwlab
