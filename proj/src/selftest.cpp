#include <cmath>
#include <cstdio>
#include <random>

#include "dwlab/pipeline.hpp"

namespace dwlab {

namespace {

struct Harness {
    int failures = 0;
    bool verbose = true;

    void check(const std::string& name, bool ok, const std::string& detail = "") {
        if (!ok) ++failures;
        if (verbose || !ok)
            std::printf("%s — %s%s%s\n", ok ? "ok  " : "FAIL", name.c_str(),
                        detail.empty() ? "" : ": ", detail.c_str());
    }
};

Field random_smooth(const Grid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    SpectralField s(g);
    const int kmax = std::min(g.N / 4, 12);
    if (g.n == 1) {
        for (int k = 1; k <= kmax; ++k) {
            const std::complex<double> a(unit(rng), unit(rng));
            s[k] = a / double(k);
            s[g.N - k] = std::conj(s[k]);
        }
    } else {
        for (int k0 = -kmax; k0 <= kmax; ++k0)
            for (int k1 = 1; k1 <= kmax; ++k1) {
                const int i0 = k0 >= 0 ? k0 : k0 + g.N;
                const std::complex<double> a(unit(rng), unit(rng));
                s[std::size_t(i0) * g.N + k1] = a / double(1 + k0 * k0 + k1 * k1);
            }
        // hermitian completion via a round trip through physical space
        Field re = ifft(s);
        return re;
    }
    return ifft(s);
}

// smooth, decaying, exactly zero-integral field
Field random_zero_mean(const Grid& g, std::mt19937_64& rng) {
    Field f = random_smooth(g, rng);
    Field env(g);
    if (g.n == 1) {
        for (int j = 0; j < g.N; ++j) {
            const double y = g.coord(j);
            env[j] = std::exp(-y * y / 16.0);
        }
    } else {
        for (int i0 = 0; i0 < g.N; ++i0)
            for (int i1 = 0; i1 < g.N; ++i1) {
                const double r2 = g.coord(i0) * g.coord(i0) + g.coord(i1) * g.coord(i1);
                env[std::size_t(i0) * g.N + i1] = std::exp(-r2 / 16.0);
            }
    }
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= env[i];
    const Field phi0 = gaussian_phi0(g);
    f -= integrate(f) * phi0;
    SpectralField s = fft(f);
    s[0] = 0.0;
    return ifft(s);
}

} // namespace

int selftest(bool verbose) {
    Harness h;
    h.verbose = verbose;
    std::mt19937_64 rng(20240901);

    // fields: transforms and quadrature
    {
        const Grid g(1, 20.0, 256);
        double worst_rt = 0.0, worst_pv = 0.0;
        for (int it = 0; it < 100; ++it) {
            const Field f = random_smooth(g, rng);
            const SpectralField s = fft(f);
            const Field f2 = ifft(s);
            double diff = 0.0;
            for (int j = 0; j < g.N; ++j) diff = std::max(diff, std::abs(f[j] - f2[j]));
            worst_rt = std::max(worst_rt, diff);
            const double a = l2_norm(f), b = l2_norm(s);
            worst_pv = std::max(worst_pv, std::abs(a - b) / std::max(1e-30, a));
        }
        h.check("fft round trip (100 random fields)", worst_rt < 1e-12);
        h.check("Parseval (100 random fields)", worst_pv < 1e-12);

        const Field sinf = Field::from_function(g, [&](double x) { return std::sin(M_PI * x / g.L); });
        const Field lap = laplacian(sinf);
        double derr = 0.0;
        for (int j = 0; j < g.N; ++j)
            derr = std::max(derr, std::abs(lap[j] + std::pow(M_PI / g.L, 2) * sinf[j]));
        h.check("spectral derivative exact on sine mode", derr < 1e-12);
    }

    // Gaussian structure
    {
        const Grid g(1, 20.0, 512);
        const Field phi0 = gaussian_phi0(g);
        h.check("phi0 integral equals 1", std::abs(integrate(phi0) - 1.0) < 1e-10);
        const Field lhs = laplacian(phi0);
        const std::vector<Field> grad = gradient(phi0);
        double res = 0.0;
        for (int j = 0; j < g.N; ++j) {
            const double y = g.coord(j);
            res = std::max(res, std::abs(lhs[j] + 0.5 * y * grad[0][j] + 0.5 * phi0[j]));
        }
        h.check("phi0 eigen-identity residual <= 1e-8", res <= 1e-8);
        Field psi_diff = gaussian_psi0(g) - lhs;
        h.check("analytic psi0 matches spectral laplacian", linf_norm(psi_diff) <= 1e-8);
    }

    // Hardy inequality sweep
    {
        const Grid g(1, 20.0, 512);
        bool all_ok = true;
        for (int it = 0; it < 200; ++it) {
            const Field f = random_zero_mean(g, rng);
            const HardyCheck hc = hardy_1d(f);
            all_ok = all_ok && hc.ok;
        }
        h.check("Hardy inequality (200 random zero-mean fields)", all_ok);
        // analytic case: f = y e^{-y^2/2} gives lhs/rhs = 1/3
        const Field f = Field::from_function(g, [](double y) { return y * std::exp(-y * y / 2.0); });
        const HardyCheck hc = hardy_1d(f);
        h.check("Hardy analytic ratio 1/3", std::abs(hc.lhs / hc.rhs - 1.0 / 3.0) < 1e-6);
    }

    // fractional Hardy (n = 2)
    {
        const Grid g(2, 12.0, 64);
        double worst = 0.0;
        bool finite = true;
        for (int it = 0; it < 30; ++it) {
            const Field f = random_zero_mean(g, rng);
            const SpectralField F = fractional_primitive(f, 0.5);
            const double ratio = l2_norm(F) / weighted_norm(f, 0, 3.0);
            finite = finite && std::isfinite(ratio);
            worst = std::max(worst, ratio);
        }
        h.check("fractional Hardy ratio finite (30 random 2D fields)", finite,
                "sup ratio " + format_double(worst));
    }

    // coefficient clock round trip
    {
        bool ok = true;
        for (double beta : {-1.0, -0.5, 0.0, 0.5, 0.9}) {
            const DampingModel m(beta, 1.3);
            for (double s = 0.0; s <= 12.0; s += 0.5) {
                if (beta == -1.0 && s > 2.5) continue; // t(s) overflows by design
                const double t = t_of_s(m, s);
                ok = ok && std::abs(B_of_t(m, t) + 1.0 - std::exp(s)) <= 1e-10 * std::exp(s);
            }
        }
        h.check("B(t(s)) + 1 = e^s round trip", ok);

        // mu = 1/(1+beta) makes B(t)+1 = (1+t)^{1+beta} exactly, so the decay
        // law eps_s ~ e^{-(1-beta)s/(1+beta)} is exact rather than asymptotic
        const double beta = 0.5;
        const DampingModel m(beta, 1.0 / (1.0 + beta));
        std::vector<double> xs, ys;
        for (double s = 2.0; s <= 10.0; s += 0.25) {
            xs.push_back(s);
            ys.push_back(std::log(scaled_weights(m, s).eps));
        }
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= xs.size();
        my /= ys.size();
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
        }
        const double slope = sxy / sxx;
        const double expect = -(1.0 - beta) / (1.0 + beta);
        h.check("eps_s decay exponent matches -(1-beta)/(1+beta)",
                std::abs(slope - expect) < 1e-3, format_double(slope));
    }

    // per-mode oracle, short horizon
    {
        RunConfig cfg;
        cfg.id = "selftest-oracle";
        cfg.n = 1;
        cfg.grid = Grid(1, 20.0, 256);
        cfg.data.epsilon = 0.1;
        cfg.step.dt_max = 1e-3;
        PhysicalState st = make_initial_state(cfg.grid, cfg.data);
        const SpectralField u0 = fft(st.u);
        advance_to(st, 2.0, cfg.coeffs, cfg.nl, cfg.step);
        SpectralField exact(cfg.grid);
        for (int i = 0; i < cfg.grid.N; ++i) {
            const double xi = exact.xi(i);
            const std::complex<double> disc = std::sqrt(std::complex<double>(1.0 - 4.0 * xi * xi));
            const std::complex<double> rp = 0.5 * (-1.0 + disc), rm = 0.5 * (-1.0 - disc);
            const std::complex<double> A = -u0[i] * rm / (rp - rm);
            const std::complex<double> B = u0[i] * rp / (rp - rm);
            exact[i] = A * std::exp(rp * 2.0) + B * std::exp(rm * 2.0);
        }
        const Field ue = ifft(exact);
        Field diff = st.u - ue;
        const double rel = l2_norm(diff) / l2_norm(ue);
        h.check("per-mode oracle (b = 1, t = 2)", rel <= 1e-7, format_double(rel));
    }

    // decomposition invariants on random scaled states
    {
        const Grid g(1, 20.0, 256);
        CoefficientSet coeffs;
        coeffs.damping = DampingModel(0.3, 1.0);
        const NonlinearityModel nl =
            NonlinearityModel::monomials({{-1.0, 4.0, 0, 0, true}});
        bool zero_means = true, recon = true;
        for (int it = 0; it < 20; ++it) {
            ScaledState ss;
            ss.s = 0.5 + 0.1 * it;
            ss.v = random_smooth(g, rng);
            ss.w = random_smooth(g, rng);
            const Decomposition d = split(ss, coeffs, nl, 1.0);
            const double tol_f = 1e-8 * (l2_norm(d.f) + 1.0);
            zero_means = zero_means && std::abs(integrate(d.f)) <= tol_f &&
                         std::abs(integrate(d.g)) <= tol_f && std::abs(d.mean_h) <= tol_f;
            Field vr = d.alpha * gaussian_phi0(g) + d.f;
            Field wr = d.dalpha * gaussian_phi0(g) + d.alpha * gaussian_psi0(g) + d.g;
            vr -= ss.v;
            wr -= ss.w;
            recon = recon && linf_norm(vr) < 1e-11 && linf_norm(wr) < 1e-11;
        }
        h.check("decomposition zero means (20 random states)", zero_means);
        h.check("decomposition reconstruction exact", recon);
    }

    // frame transforms
    {
        const Grid g(1, 20.0, 256);
        const DampingModel damping(0.0, 1.0);
        InitialData data;
        data.epsilon = 0.2;
        PhysicalState st = make_initial_state(g, data);
        const ScaledState s0 = to_scaled(st, damping);
        Field dv = s0.v - st.u;
        Field dw = s0.w - st.p;
        h.check("to_scaled at t = 0 is the identity scaling",
                linf_norm(dv) < 1e-10 && linf_norm(dw) < 1e-10);

        const double t1 = 3.0;
        PhysicalState gs{t1, heat_gaussian(g, B_of_t(damping, t1) + 1.0), Field(g)};
        const ScaledState sg = to_scaled(gs, damping);
        Field dphi = sg.v - gaussian_phi0(g);
        h.check("scaled Gaussian maps to phi0", linf_norm(dphi) <= 1e-8,
                format_double(linf_norm(dphi)));

        const PhysicalState back = from_scaled(sg, damping);
        Field du = back.u - gs.u;
        h.check("from_scaled(to_scaled(.)) round trip", linf_norm(du) <= 1e-8);
    }

    // energy identities on a short constant-damping run
    {
        RunConfig cfg;
        cfg.id = "selftest-identities";
        cfg.grid = Grid(1, 32.0, 256);
        cfg.data.family = DataFamily::OffCenterBump;
        cfg.data.epsilon = 0.1;
        cfg.s_end = 1.0;
        cfg.ds_out = 0.05;
        cfg.step.dt_max = 0.02;
        const EnergyConfig ec = energy_config_of(cfg);
        std::vector<EnergyReport> fine;
        simulate(cfg, [&](int, const PhysicalState& st) {
            fine.push_back(energies(
                split(to_scaled(st, cfg.coeffs.damping), cfg.coeffs, cfg.nl, cfg.m), cfg.coeffs, ec));
        });
        auto level_max = [&](int stride, int which) {
            std::vector<EnergyReport> ser;
            for (std::size_t k = 0; k < fine.size(); k += stride) ser.push_back(fine[k]);
            const IdentityResidualSeries res = identity_residuals(ser, cfg.ds_out * stride);
            const std::vector<double>& v = which == 0 ? res.e0 : which == 1 ? res.e1 : res.e5;
            double m = 0.0;
            for (std::size_t k = 0; k < v.size(); ++k) {
                if (!std::isfinite(v[k])) continue;
                const double off = std::fmod(res.s[k] + 1e-12, 2.0 * cfg.ds_out);
                if (off > 1e-9 && off < 2.0 * cfg.ds_out - 1e-9) continue;
                if (res.s[k] < 0.09 || res.s[k] > 0.91) continue;
                m = std::max(m, std::abs(v[k]));
            }
            return m;
        };
        bool ok = true;
        for (int which : {0, 1, 2}) {
            const double coarse = level_max(2, which), fine_r = level_max(1, which);
            ok = ok && std::log2(coarse / fine_r) >= 1.5;
        }
        h.check("energy identities converge under ds refinement", ok);
    }

    // rate arithmetic
    {
        const DampingModel d0(0.0, 1.0);
        PerturbationModel p;
        p.c_amp = {1.0};
        p.gamma = 1.0;
        p.d_amp = 1.0;
        p.nu = 2.0;
        h.check("lambda0 example", std::abs(rate_lambda0(d0, p) - 0.5) < 1e-15);
        const RateSet rs = rate_lambda(1, 1.0, 0.01, 1.0, kRateCap);
        h.check("lambda example", std::abs(rs.lambda - 0.24) < 1e-15);
        const NonlinearityModel cubic = NonlinearityModel::power(2, -1.0, 3.0, true);
        h.check("lambda1 (n = 2, p = 3)", std::abs(rate_lambda1(2, cubic, 0.0) - 1.0) < 1e-15);
    }

    // manufactured decay fit
    {
        std::vector<double> err, Bp1;
        for (int k = 0; k < 40; ++k) {
            const double b = 5.0 * std::pow(1.25, k);
            Bp1.push_back(b);
            err.push_back(std::pow(b, -0.75));
        }
        const RateFit rf = fit_decay(err, Bp1, 0.75, 6.0, 4000.0);
        h.check("manufactured power-law slope recovered",
                std::abs(rf.slope + 0.75) < 1e-10, format_double(rf.slope));
    }

    if (verbose) std::printf("%s (%d failure%s)\n", h.failures == 0 ? "selftest passed" : "selftest FAILED",
                             h.failures, h.failures == 1 ? "" : "s");
    return h.failures;
}

} // namespace dwlab
