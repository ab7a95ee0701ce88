#include <doctest.h>

#include <cmath>
#include <random>

#include "dwlab/decompose.hpp"
#include "dwlab/pipeline.hpp"

using namespace dwlab;

TEST_CASE("alpha functionals: phi0, zero-mean input, even-odd splitting") {
    const Grid g(1, 20.0, 256);
    CHECK(alpha_of(gaussian_phi0(g)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(alpha_of(gaussian_psi0(g))) <= 1e-10);
    Field v = 2.0 * gaussian_phi0(g);
    const Field odd = Field::from_function(g, [](double y) { return y * std::exp(-y * y / 3.0); });
    v += odd;
    CHECK(alpha_of(v) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("split of the pure Gaussian mode: f = 0, g = -psi0, r = 0, h explicit") {
    const Grid g(1, 20.0, 256);
    CoefficientSet coeffs; // constant damping, no perturbations
    const double s = 1.2;
    const ScaledState ss{s, gaussian_phi0(g), Field(g)};
    const Decomposition d = split(ss, coeffs, NonlinearityModel::none(1), 1.0);

    CHECK(d.alpha == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(d.dalpha) <= 1e-14);
    CHECK(linf_norm(d.f) <= 1e-12);
    Field g_diff = d.g + gaussian_psi0(g);
    CHECK(linf_norm(g_diff) <= 1e-12);
    CHECK(linf_norm(d.r) == 0.0);

    const double eps = scaled_weights(coeffs.damping, s).eps;
    const Field dpsi = gaussian_psi0_gradient(g, 0);
    const Field psi0 = gaussian_psi0(g);
    double worst = 0.0;
    for (int j = 0; j < g.N; ++j) {
        const double expect = eps * (0.5 * g.coord(j) * dpsi[j] + 1.5 * psi0[j]);
        worst = std::max(worst, std::abs(d.h[j] - expect));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("all-zero state decomposes to all zeros") {
    const Grid g(1, 16.0, 64);
    CoefficientSet coeffs;
    const Decomposition d = split({0.7, Field(g), Field(g)}, coeffs, NonlinearityModel::none(1), 1.0);
    CHECK(d.alpha == 0.0);
    CHECK(d.dalpha == 0.0);
    CHECK(linf_norm(d.f) == 0.0);
    CHECK(linf_norm(d.g) == 0.0);
    CHECK(linf_norm(d.h) == 0.0);
}

TEST_CASE("zero means and exact reconstruction for random states") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const Grid g(1, 20.0, 256);
    CoefficientSet coeffs;
    coeffs.damping = DampingModel(0.3, 1.1);
    coeffs.pert.c_amp = {0.2};
    coeffs.pert.gamma = 1.0;
    coeffs.pert.d_amp = 0.1;
    coeffs.pert.nu = 2.0;
    const NonlinearityModel nl = NonlinearityModel::monomials({{-0.5, 4.0, 0, 0, true}});
    const Field phi0 = gaussian_phi0(g);
    const Field psi0 = gaussian_psi0(g);
    for (int it = 0; it < 50; ++it) {
        ScaledState ss;
        ss.s = 0.2 + 0.1 * it;
        ss.v = Field(g);
        ss.w = Field(g);
        for (int j = 0; j < g.N; ++j) {
            const double y = g.coord(j);
            ss.v[j] = unit(rng) * std::exp(-y * y / 12.0);
            ss.w[j] = unit(rng) * std::exp(-y * y / 12.0);
        }
        const Decomposition d = split(ss, coeffs, nl, 1.0);
        const double tol = 1e-8 * (l2_norm(d.f) + 1.0);
        CHECK(std::abs(integrate(d.f)) <= tol);
        CHECK(std::abs(integrate(d.g)) <= tol);
        CHECK(std::abs(d.mean_h) <= tol);

        Field v_rec = d.alpha * phi0 + d.f;
        v_rec -= ss.v;
        Field w_rec = d.dalpha * phi0 + d.alpha * psi0 + d.g;
        w_rec -= ss.w;
        CHECK(linf_norm(v_rec) <= 1e-11);
        CHECK(linf_norm(w_rec) <= 1e-11);
    }
}

TEST_CASE("scaled source r assembles drag, c, d and nonlinear pieces") {
    const Grid g(1, 16.0, 128);
    CoefficientSet coeffs;
    coeffs.damping = DampingModel(0.5, 1.0);
    coeffs.pert.c_amp = {0.7};
    coeffs.pert.gamma = 1.0;
    coeffs.pert.d_amp = -0.3;
    coeffs.pert.nu = 2.0;
    const double s = 0.9;
    const Field v = Field::from_function(g, [](double y) { return std::exp(-y * y / 5.0); });
    const Field w = Field::from_function(g, [](double y) { return 0.4 * std::exp(-y * y / 7.0); });
    const NonlinearityModel nl = NonlinearityModel::monomials({{2.0, 3.0, 0, 0, true}});

    const Field r = scaled_source_r(s, v, w, coeffs, nl);
    const ScaledWeights sw = scaled_weights(coeffs.damping, s);
    const double t = t_of_s(coeffs.damping, s);
    const Field vy = gradient(v)[0];
    const Field nlpart = eval_scaled(nl, coeffs.damping, s, v, {vy}, w);
    double worst = 0.0;
    for (int j = 0; j < g.N; ++j) {
        const double expect = sw.drag * w[j] +
                              std::exp(0.5 * s) * coeffs.c_of_t(t)[0] * vy[j] +
                              std::exp(s) * coeffs.d_of_t(t) * v[j] + nlpart[j];
        worst = std::max(worst, std::abs(r[j] - expect));
    }
    CHECK(worst <= 1e-13);
}

TEST_CASE("alpha ODE residual: manufactured balance and convergence on a real run") {
    // manufactured: alpha = e^{-s/2} with int r chosen to balance exactly
    {
        const DampingModel b0(0.0, 1.0);
        const double ds = 1e-3;
        std::vector<Decomposition> series;
        for (int k = 0; k < 41; ++k) {
            const double s = 1.0 + ds * k;
            Decomposition d;
            d.s = s;
            d.weights = scaled_weights(b0, s);
            d.alpha = std::exp(-0.5 * s);
            d.dalpha = -0.5 * std::exp(-0.5 * s);
            const double app = 0.25 * std::exp(-0.5 * s);
            d.int_r = d.weights.eps * (app - d.dalpha) + d.dalpha;
            series.push_back(std::move(d));
        }
        const std::vector<double> res = alpha_ode_residual(series, ds);
        for (std::size_t k = 1; k + 1 < res.size(); ++k) CHECK(std::abs(res[k]) <= 1e-6);
    }
    // linear constant-damping run: residual shrinks at second order in ds
    {
        RunConfig cfg;
        cfg.grid = Grid(1, 18.0, 128);
        cfg.data.family = DataFamily::OffCenterBump;
        cfg.data.epsilon = 0.1;
        cfg.s_end = 1.5;
        cfg.ds_out = 0.025;
        cfg.step.dt_max = 0.01;
        std::vector<Decomposition> fine;
        simulate(cfg, [&](int, const PhysicalState& st) {
            fine.push_back(split(to_scaled(st, cfg.coeffs.damping), cfg.coeffs, cfg.nl, cfg.m));
        });
        auto subsample = [&](int stride) {
            std::vector<Decomposition> out;
            for (std::size_t k = 0; k < fine.size(); k += stride) out.push_back(fine[k]);
            return out;
        };
        auto max_res = [&](const std::vector<Decomposition>& ser, double ds) {
            double m = 0.0;
            for (double rkv : alpha_ode_residual(ser, ds))
                if (std::isfinite(rkv)) m = std::max(m, std::abs(rkv));
            return m;
        };
        const double r1 = max_res(subsample(4), 0.1);
        const double r2 = max_res(subsample(2), 0.05);
        const double order = std::log2(r1 / r2);
        CHECK(order >= 1.8);
    }
    // stationary zero run: both sides vanish
    {
        const DampingModel b0(0.0, 1.0);
        std::vector<Decomposition> series;
        for (int k = 0; k < 5; ++k) {
            Decomposition d;
            d.s = 0.1 * k;
            d.weights = scaled_weights(b0, d.s);
            series.push_back(std::move(d));
        }
        for (double rv : alpha_ode_residual(series, 0.1))
            if (std::isfinite(rv)) CHECK(rv == 0.0);
    }
}

TEST_CASE("alpha ODE residual rejects nonuniform spacing") {
    std::vector<Decomposition> series(3);
    series[0].s = 0.0;
    series[1].s = 0.1;
    series[2].s = 0.25;
    CHECK_THROWS_AS(alpha_ode_residual(series, 0.1), ValidationError);
}

TEST_CASE("dalpha matches the central difference of alpha on a run") {
    RunConfig cfg;
    cfg.grid = Grid(1, 18.0, 128);
    cfg.data.family = DataFamily::OffCenterBump;
    cfg.data.epsilon = 0.15;
    cfg.s_end = 1.2;
    cfg.ds_out = 0.05;
    cfg.step.dt_max = 0.01;
    std::vector<double> alpha, dalpha;
    simulate(cfg, [&](int, const PhysicalState& st) {
        const Decomposition d = split(to_scaled(st, cfg.coeffs.damping), cfg.coeffs, cfg.nl, cfg.m);
        alpha.push_back(d.alpha);
        dalpha.push_back(d.dalpha);
    });
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < alpha.size(); ++k)
        worst = std::max(worst,
                         std::abs((alpha[k + 1] - alpha[k - 1]) / (2.0 * cfg.ds_out) - dalpha[k]));
    CHECK(worst <= 5e-4); // O(ds^2) at ds = 0.05
}
