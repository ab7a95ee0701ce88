#include "dwlab/config.hpp"

#include <cmath>
#include <fstream>

namespace dwlab {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return j.at(key).get<T>();
}

NonlinearityModel parse_nonlinearity(const json& j, int n) {
    if (j.is_null() || j.empty()) return NonlinearityModel::none(n);
    if (j.contains("power")) {
        const json& p = j.at("power");
        return NonlinearityModel::power(n, get_or(p, "coeff", 1.0), get_or(p, "p", 3.0),
                                        get_or(p, "odd", true));
    }
    if (j.contains("terms")) {
        std::vector<NonlinearTerm1D> terms;
        for (const json& t : j.at("terms")) {
            NonlinearTerm1D term;
            term.coeff = get_or(t, "coeff", 1.0);
            term.p1 = get_or(t, "p1", 2.0);
            term.p2 = get_or(t, "p2", 0);
            term.p3 = get_or(t, "p3", 0);
            term.odd = get_or(t, "odd", true);
            terms.push_back(term);
        }
        if (n != 1) throw ValidationError("nonlinearity: monomial terms require n = 1");
        return NonlinearityModel::monomials(std::move(terms));
    }
    return NonlinearityModel::none(n);
}

json nonlinearity_to_json(const NonlinearityModel& nl) {
    json j = json::object();
    if (nl.empty()) return j;
    if (nl.dimension() == 1) {
        json terms = json::array();
        for (const NonlinearTerm1D& t : nl.terms())
            terms.push_back({{"coeff", t.coeff}, {"p1", t.p1}, {"p2", t.p2}, {"p3", t.p3}, {"odd", t.odd}});
        j["terms"] = terms;
    } else {
        j["power"] = {{"coeff", nl.power_coeff()}, {"p", nl.power()}, {"odd", nl.power_odd()}};
    }
    return j;
}

} // namespace

RunConfig parse_config(const json& j) {
    RunConfig c;
    c.schema_version = get_or(j, "schema_version", 1);
    if (c.schema_version != 1) throw ValidationError("config: unsupported schema_version");
    c.id = get_or<std::string>(j, "id", "run");
    c.n = get_or(j, "dimension", 1);
    if (c.n != 1 && c.n != 2) throw ValidationError("config: dimension must be 1 or 2");

    const json grid = j.value("grid", json::object());
    c.grid = Grid(c.n, get_or(grid, "L", 20.0), get_or(grid, "N", 512));

    const json co = j.value("coeffs", json::object());
    c.coeffs.damping.beta = get_or(co, "beta", 0.0);
    c.coeffs.damping.mu = get_or(co, "mu", 1.0);
    c.coeffs.pert.gamma = get_or(co, "gamma", 1.0);
    c.coeffs.pert.nu = get_or(co, "nu", 2.0);
    c.coeffs.pert.d_amp = get_or(co, "d_amp", 0.0);
    c.coeffs.pert.c_amp = get_or(co, "c_amp", std::vector<double>(std::size_t(c.n), 0.0));
    if (c.coeffs.pert.c_amp.empty())
        c.coeffs.pert.c_amp.assign(std::size_t(c.n), 0.0);
    if (int(c.coeffs.pert.c_amp.size()) != c.n)
        throw ValidationError("config: c_amp must have one component per dimension");

    c.nl = parse_nonlinearity(j.value("nonlinearity", json::object()), c.n);

    const json data = j.value("data", json::object());
    c.data.family = data_family_from_string(get_or<std::string>(data, "family", "gaussian_bump"));
    c.data.seed = get_or<std::uint64_t>(data, "seed", 1);
    c.data.epsilon = get_or(data, "epsilon", 0.1);
    c.m = get_or(data, "m", c.n == 1 ? 1.0 : 3.0);

    const json time = j.value("time", json::object());
    c.s_end = get_or(time, "s_end", 3.0);
    c.ds_out = get_or(time, "ds_out", 0.1);
    c.step.dt_max = get_or(time, "dt_max", 0.5);
    c.step.cfl = get_or(time, "cfl", 0.4);
    c.step.blowup_ceiling = get_or(time, "blowup_ceiling", 1e6);

    const json an = j.value("analysis", json::object());
    c.delta = get_or(an, "delta", 0.5);
    c.eta = get_or(an, "eta", 0.01);
    c.eta_tilde = get_or(an, "eta_tilde", -1.0);
    c.C0 = get_or(an, "C0", 64.0);
    c.C1 = get_or(an, "C1", 16.0);
    if (an.contains("fit_window") && !an.at("fit_window").is_null()) {
        const auto w = an.at("fit_window").get<std::vector<double>>();
        if (w.size() != 2) throw ValidationError("config: fit_window must be [lo, hi]");
        c.fit_lo = w[0];
        c.fit_hi = w[1];
    } else {
        c.fit_lo = c.n == 1 ? 20.0 : 10.0;
        c.fit_hi = c.n == 1 ? 500.0 : 100.0;
    }
    return c;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: JSON parse failure: ") + e.what());
    }
    return parse_config(j);
}

json RunConfig::to_json() const {
    json j;
    j["schema_version"] = schema_version;
    j["id"] = id;
    j["dimension"] = n;
    j["grid"] = {{"L", grid.L}, {"N", grid.N}};
    j["coeffs"] = {{"beta", coeffs.damping.beta}, {"mu", coeffs.damping.mu},
                   {"gamma", coeffs.pert.gamma}, {"nu", coeffs.pert.nu},
                   {"c_amp", coeffs.pert.c_amp}, {"d_amp", coeffs.pert.d_amp}};
    j["nonlinearity"] = nonlinearity_to_json(nl);
    j["data"] = {{"family", to_string(data.family)}, {"seed", data.seed},
                 {"epsilon", data.epsilon}, {"m", m}};
    j["time"] = {{"s_end", s_end},
                 {"ds_out", ds_out},
                 {"dt_max", step.dt_max},
                 {"cfl", step.cfl},
                 {"blowup_ceiling", step.blowup_ceiling}};
    j["analysis"] = {{"delta", delta}, {"eta", eta},      {"eta_tilde", eta_tilde},
                     {"C0", C0},       {"C1", C1},        {"fit_window", {fit_lo, fit_hi}}};
    return j;
}

json ConfigReport::to_json() const {
    json arr = json::array();
    for (const auto& i : issues)
        arr.push_back({{"path", i.path}, {"message", i.message}, {"hard", i.hard}});
    return {{"runnable", runnable()}, {"issues", arr}};
}

ConfigReport validate_config(const RunConfig& cfg) {
    ConfigReport rep;
    auto hard = [&](const std::string& path, const std::string& msg) {
        rep.issues.push_back({path, msg, true});
    };
    auto soft = [&](const std::string& path, const std::string& msg) {
        rep.issues.push_back({path, msg, false});
    };

    try {
        cfg.grid.validate();
    } catch (const ValidationError& e) {
        hard("grid", e.what());
    }
    try {
        cfg.coeffs.damping.validate();
    } catch (const ValidationError& e) {
        hard("coeffs", e.what()); // e.g. "beta must lie in [-1, 1)"
    }
    try {
        cfg.coeffs.pert.validate(cfg.coeffs.damping);
    } catch (const ValidationError& e) {
        hard("coeffs", e.what());
    }

    if (cfg.n == 1) {
        if (cfg.m != 1.0) hard("data.m", "m = 1 is required when n = 1");
    } else if (!(cfg.m > 0.5 * cfg.n + 1.0)) {
        hard("data.m", "m must exceed n/2 + 1 when n >= 2");
    }
    if (!(cfg.data.epsilon > 0.0)) hard("data.epsilon", "epsilon must be positive");

    if (!(cfg.s_end > 0.0)) hard("time.s_end", "s_end must be positive");
    if (!(cfg.ds_out > 0.0)) hard("time.ds_out", "ds_out must be positive");
    if (!(cfg.step.cfl > 0.0 && cfg.step.cfl <= 1.0)) hard("time.cfl", "cfl must lie in (0, 1]");
    if (!(cfg.step.dt_max > 0.0)) hard("time.dt_max", "dt_max must be positive");
    if (!(cfg.step.blowup_ceiling > 0.0)) hard("time.blowup_ceiling", "ceiling must be positive");

    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) hard("analysis.delta", "delta must lie in (0, 1)");
    if (!(cfg.eta > 0.0)) hard("analysis.eta", "eta must be positive");
    if (cfg.n >= 2 && cfg.eta_tilde > 0.0 && !(cfg.eta_tilde < cfg.m - 0.5 * cfg.n))
        hard("analysis.eta_tilde", "eta_tilde must lie in (0, m - n/2)");
    if (!(cfg.fit_lo < cfg.fit_hi)) hard("analysis.fit_window", "window must satisfy lo < hi");
    if (!(cfg.C1 > 8.0) || !(cfg.C0 > 2.0 * cfg.C1))
        soft("analysis.C0C1", "ladder constants outside C1 > 8, C0 > 2 C1; L4 positivity may fail");

    const NonlinearityReport nlrep = validate(cfg.nl, cfg.coeffs.damping, cfg.n, cfg.m);
    for (const auto& issue : nlrep.issues)
        rep.issues.push_back({"nonlinearity", issue.constraint + ": " + issue.message, issue.hard});

    // domain-size rule: the spreading Gaussian must stay inside the box
    const double needed = 8.4 * std::sqrt(std::exp(cfg.s_end));
    if (cfg.grid.L < needed)
        soft("grid.L", "L below the domain rule 8.4 sqrt(B(t_end)+1) = " + std::to_string(needed));

    if (cfg.s_end / cfg.ds_out < 3.0) soft("time", "fewer than 4 snapshots; residuals unavailable");

    if (rep.runnable()) {
        const RateSet rs = rates_of(cfg);
        if (cfg.n >= 2 && !(cfg.delta > 2.0 * rs.lambda))
            soft("analysis.delta", "delta <= 2 lambda; the L4 lower bound is not guaranteed");
    }
    return rep;
}

RateSet rates_of(const RunConfig& cfg) {
    const double l0 = rate_lambda0(cfg.coeffs.damping, cfg.coeffs.pert);
    const double l1 = rate_lambda1(cfg.n, cfg.nl, cfg.coeffs.damping.beta);
    return rate_lambda(cfg.n, cfg.m, cfg.eta, l0, l1);
}

EnergyConfig energy_config_of(const RunConfig& cfg) {
    EnergyConfig ec;
    ec.lambda = rates_of(cfg).lambda;
    ec.delta = cfg.delta;
    ec.eta_tilde = cfg.eta_tilde;
    ec.C0 = cfg.C0;
    ec.C1 = cfg.C1;
    ec.m = cfg.m;
    return ec;
}

} // namespace dwlab
