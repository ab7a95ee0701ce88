#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "dwlab/pipeline.hpp"

using namespace dwlab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("dwlab-test-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

RunConfig tiny_config(const std::string& id) {
    RunConfig cfg;
    cfg.id = id;
    cfg.grid = Grid(1, 16.0, 64);
    cfg.data.family = DataFamily::OffCenterBump;
    cfg.data.epsilon = 0.1;
    cfg.s_end = 1.0;
    cfg.ds_out = 0.05;
    cfg.fit_lo = 1.02; // the tiny run only reaches B+1 = e
    cfg.fit_hi = 2.72;
    return cfg;
}

} // namespace

TEST_CASE("config JSON round trip preserves every field") {
    RunConfig cfg = tiny_config("roundtrip");
    cfg.nl = NonlinearityModel::monomials({{-1.0, 4.0, 0, 0, true}});
    cfg.coeffs.pert.c_amp = {0.3};
    cfg.eta_tilde = 0.2;
    const nlohmann::json j = cfg.to_json();
    const RunConfig back = parse_config(j);
    CHECK(back.to_json() == j);
}

TEST_CASE("validation: boundary cases and severity split") {
    {
        RunConfig cfg = tiny_config("beta-bad");
        cfg.coeffs.damping.beta = 1.2;
        CHECK(!validate_config(cfg).runnable());
    }
    {
        RunConfig cfg = tiny_config("m-bad");
        cfg.m = 2.0; // n = 1 requires m = 1
        CHECK(!validate_config(cfg).runnable());
    }
    {
        RunConfig cfg;
        cfg.id = "2d-ok";
        cfg.n = 2;
        cfg.grid = Grid(2, 16.0, 32);
        cfg.m = 3.0;
        cfg.nl = NonlinearityModel::power(2, -1.0, 3.0, true);
        cfg.s_end = 1.0;
        CHECK(validate_config(cfg).runnable());
    }
    {
        // subcritical nonlinearity: runnable with a soft warning
        RunConfig cfg = tiny_config("fujita");
        cfg.nl = NonlinearityModel::monomials({{1.0, 2.0, 0, 0, false}});
        const ConfigReport rep = validate_config(cfg);
        CHECK(rep.runnable());
        CHECK(!rep.issues.empty());
    }
    {
        // structurally broken term: hard
        RunConfig cfg = tiny_config("structural");
        cfg.nl = NonlinearityModel::monomials({{1.0, 1.0, 1, 0, true}});
        CHECK(!validate_config(cfg).runnable());
    }
    {
        RunConfig cfg = tiny_config("pert-bad");
        cfg.coeffs.pert.c_amp = {1.0};
        cfg.coeffs.pert.gamma = 0.3; // must exceed (1+beta)/2 = 1/2
        CHECK(!validate_config(cfg).runnable());
    }
}

TEST_CASE("snapshot container round trips bit-exactly") {
    TempDir tmp;
    const Grid g(1, 16.0, 64);
    const Field a = Field::from_function(g, [](double x) { return std::sin(x) + 0.25 * x; });
    const Field b = Field::from_function(g, [](double x) { return std::exp(-x * x / 3.0); });
    SnapshotHeader h;
    h.n = 1;
    h.L = g.L;
    h.N = g.N;
    h.t = 1.5;
    h.s = 0.4;
    h.kind = "physical_state";
    h.fields = {"u", "ut"};
    h.scalars = {{"note", 7}};
    const std::string path = (tmp.path / "snap.bin").string();
    write_snapshot(path, h, {&a, &b});
    const auto [h2, fields] = read_snapshot(path);
    CHECK(h2.kind == "physical_state");
    CHECK(h2.t == 1.5);
    CHECK(h2.fields.size() == 2);
    REQUIRE(fields.size() == 2);
    for (int j = 0; j < g.N; ++j) {
        CHECK(fields[0][j] == a[j]);
        CHECK(fields[1][j] == b[j]);
    }
}

TEST_CASE("csv writer round trips doubles including nan") {
    TempDir tmp;
    CsvWriter csv({"a", "b"});
    csv.add_row({1.0 / 3.0, std::numeric_limits<double>::quiet_NaN()});
    csv.add_row({-2.5e-17, 4.0});
    const std::string path = (tmp.path / "t.csv").string();
    csv.write(path);
    const auto table = read_csv(path);
    const auto a = csv_column(table, "a");
    const auto b = csv_column(table, "b");
    CHECK(a[0] == 1.0 / 3.0);
    CHECK(std::isnan(b[0]));
    CHECK(a[1] == -2.5e-17);
    CHECK(b[1] == 4.0);
}

TEST_CASE("run pipeline persists artifacts; repeated runs are byte-identical") {
    TempDir tmp;
    const RunConfig cfg = tiny_config("det");
    const RunResult r1 = run_pipeline(cfg, (tmp.path / "a").string());
    const RunResult r2 = run_pipeline(cfg, (tmp.path / "b").string());
    CHECK(r1.outcome == "completed");
    CHECK(fs::exists(fs::path(r1.dir) / "config.json"));
    CHECK(fs::exists(fs::path(r1.dir) / "summary.json"));
    CHECK(fs::exists(fs::path(r1.dir) / "snapshots" / "0.bin"));
    CHECK(read_text(fs::path(r1.dir) / "timeseries.csv") ==
          read_text(fs::path(r2.dir) / "timeseries.csv"));

    const nlohmann::json summary = nlohmann::json::parse(read_text(fs::path(r1.dir) / "summary.json"));
    CHECK(summary.at("outcome") == "completed");
    CHECK(summary.at("I0").get<double>() > 0.0);
}

TEST_CASE("staged post-processing is resumable and reproducible") {
    TempDir tmp;
    const RunConfig cfg = tiny_config("stages");
    const RunResult rr = run_pipeline(cfg, tmp.path.string());
    decompose_pipeline(rr.dir);
    energy_pipeline(rr.dir);
    (void)rates_pipeline(rr.dir);
    CHECK(fs::exists(fs::path(rr.dir) / "decomp.csv"));
    CHECK(fs::exists(fs::path(rr.dir) / "energy.csv"));
    CHECK(fs::exists(fs::path(rr.dir) / "energy_summary.json"));
    CHECK(fs::exists(fs::path(rr.dir) / "ratefit.json"));

    const std::string first = read_text(fs::path(rr.dir) / "ratefit.json");
    decompose_pipeline(rr.dir);
    energy_pipeline(rr.dir);
    (void)rates_pipeline(rr.dir);
    CHECK(read_text(fs::path(rr.dir) / "ratefit.json") == first);

    // decomposed alpha agrees with the persisted mass series
    const auto table = read_csv((fs::path(rr.dir) / "decomp.csv").string());
    const auto alpha = csv_column(table, "alpha");
    const auto ts = read_csv((fs::path(rr.dir) / "timeseries.csv").string());
    const auto mass = csv_column(ts, "mass_u");
    REQUIRE(alpha.size() == mass.size());
    for (std::size_t k = 0; k < alpha.size(); ++k)
        CHECK(alpha[k] == doctest::Approx(mass[k]).epsilon(1e-6));
}

TEST_CASE("run pipeline refuses hard violations") {
    TempDir tmp;
    RunConfig cfg = tiny_config("invalid");
    cfg.coeffs.damping.beta = 1.5;
    CHECK_THROWS_AS(run_pipeline(cfg, tmp.path.string()), ValidationError);
}

TEST_CASE("blow-up runs exit with the dedicated outcome and keep their summary") {
    TempDir tmp;
    RunConfig cfg;
    cfg.id = "blow";
    cfg.grid = Grid(1, 64.0, 512);
    cfg.nl = NonlinearityModel::monomials({{1.0, 2.0, 0, 0, false}});
    cfg.data.epsilon = 0.5;
    cfg.s_end = std::log(101.0);
    cfg.ds_out = 0.2;
    cfg.fit_lo = 2.0;
    cfg.fit_hi = 90.0;
    const RunResult rr = run_pipeline(cfg, tmp.path.string());
    CHECK(rr.outcome == "blowup");
    CHECK(rr.exit_code == 3);
    const nlohmann::json summary = nlohmann::json::parse(read_text(fs::path(rr.dir) / "summary.json"));
    CHECK(summary.at("outcome") == "blowup");
    CHECK(summary.at("blowup").at("t").get<double>() < 100.0);
}

TEST_CASE("sweep aggregates one row per run") {
    TempDir tmp;
    nlohmann::json sweep;
    sweep["base"] = tiny_config("sw").to_json();
    sweep["axes"]["coeffs.beta"] = {-0.25, 0.0, 0.25};
    const int errors = sweep_pipeline(sweep, tmp.path.string(), 3);
    CHECK(errors == 0);
    const auto table = read_csv((tmp.path / "sweep.csv").string());
    CHECK(csv_column(table, "beta").size() == 3);
}

TEST_CASE("rates predict emits the four rate constants") {
    RunConfig cfg = tiny_config("pred");
    const nlohmann::json j = rates_predict(cfg);
    CHECK(j.at("lambda0").get<double>() == doctest::Approx(1.0));
    CHECK(j.at("lambda").get<double>() == doctest::Approx(0.24));
    CHECK(j.at("exponent").get<double>() == doctest::Approx(0.49));
}
