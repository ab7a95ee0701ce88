#include "dwlab/energy.hpp"

#include <cmath>
#include <limits>

namespace dwlab {

bool EnergyReport::all_finite() const {
    for (double x : {E0, E1, E2, E3, E4, E5, L0, L1, L2, L4, R0, R1, R2, R3, R4, R5})
        if (!std::isfinite(x)) return false;
    return true;
}

Field primitive_1d(const Field& f) {
    const Grid& g = f.grid();
    if (g.n != 1) throw ValidationError("primitive_1d: 1D fields only");
    const double mean = integrate(f);
    if (std::abs(mean) > 1e-8 * (l2_norm(f) + 1.0))
        throw ValidationError("primitive_1d: input mean exceeds tolerance");
    SpectralField s = fft(f);
    s[0] = 0.0;
    for (int i = 1; i < g.N; ++i) {
        if (i == g.N / 2) {
            s[i] = 0.0;
            continue;
        }
        s[i] /= std::complex<double>(0.0, s.xi(i));
    }
    Field F = ifft(s);
    const double offset = F[0]; // y = -L
    for (std::size_t i = 0; i < F.size(); ++i) F[i] -= offset;
    return F;
}

HardyCheck hardy_1d(const Field& f) {
    const Grid& g = f.grid();
    const Field F = primitive_1d(f);
    HardyCheck out;
    double lhs = 0.0, rhs = 0.0;
    for (int j = 0; j < g.N; ++j) {
        const double y = g.coord(j);
        lhs += F[j] * F[j];
        rhs += y * y * f[j] * f[j];
    }
    out.lhs = lhs * g.h();
    out.rhs = 4.0 * rhs * g.h();
    out.ok = out.lhs <= out.rhs * (1.0 + 1e-2);
    return out;
}

SpectralField fractional_primitive(const SpectralField& fhat, double delta) {
    const Grid& g = fhat.grid();
    if (g.n < 2) throw ValidationError("fractional_primitive: defined for n >= 2");
    if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("fractional_primitive: delta must lie in (0, 1)");
    SpectralField out(g);
    const double p = -0.5 * g.n - delta;
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        const double xi2 = fhat.xi_norm2(i);
        out[i] = xi2 == 0.0 ? 0.0 : std::pow(xi2, 0.5 * p) * fhat[i];
    }
    return out;
}

SpectralField fractional_primitive(const Field& f, double delta) {
    const double mean = integrate(f);
    if (std::abs(mean) > 1e-8 * (l2_norm(f) + 1.0))
        throw ValidationError("fractional_primitive: input mean exceeds tolerance");
    SpectralField fhat = fft(f);
    fhat[0] = 0.0;
    return fractional_primitive(fhat, delta);
}

namespace {

// integral over xi of |xi|^2 |Ahat|^2 in the series-coefficient convention
double xi2_energy(const SpectralField& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a.xi_norm2(i) * std::norm(a[i]);
    return acc * std::pow(2.0 * a.grid().L, a.grid().n);
}

double l2sq(const SpectralField& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i]);
    return acc * std::pow(2.0 * a.grid().L, a.grid().n);
}

double re_inner(const SpectralField& a, const SpectralField& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] * std::conj(b[i])).real();
    return acc * std::pow(2.0 * a.grid().L, a.grid().n);
}

double inner(const Field& a, const Field& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc * std::pow(a.grid().h(), a.grid().n);
}

// int weight(y) a b dy with weight |y|^{2q}
double winner(const Field& a, const Field& b, double q) {
    const Grid& g = a.grid();
    double acc = 0.0;
    if (g.n == 1) {
        for (int j = 0; j < g.N; ++j) {
            const double y2 = g.coord(j) * g.coord(j);
            acc += std::pow(y2, q) * a[j] * b[j];
        }
    } else {
        for (int i0 = 0; i0 < g.N; ++i0)
            for (int i1 = 0; i1 < g.N; ++i1) {
                const std::size_t idx = std::size_t(i0) * g.N + i1;
                const double y2 = g.coord(i0) * g.coord(i0) + g.coord(i1) * g.coord(i1);
                acc += (y2 == 0.0 && q != 0.0 ? 0.0 : std::pow(y2, q)) * a[idx] * b[idx];
            }
    }
    return acc * std::pow(g.h(), g.n);
}

// int |y|^{2q} (y . grad a) b dy
double wdrift_inner(const std::vector<Field>& grad_a, const Field& b, double q) {
    const Grid& g = b.grid();
    double acc = 0.0;
    if (g.n == 1) {
        for (int j = 0; j < g.N; ++j) {
            const double y = g.coord(j);
            const double y2 = y * y;
            acc += (y2 == 0.0 && q != 0.0 ? 0.0 : std::pow(y2, q)) * y * grad_a[0][j] * b[j];
        }
    } else {
        for (int i0 = 0; i0 < g.N; ++i0)
            for (int i1 = 0; i1 < g.N; ++i1) {
                const std::size_t idx = std::size_t(i0) * g.N + i1;
                const double y0 = g.coord(i0), y1 = g.coord(i1);
                const double y2 = y0 * y0 + y1 * y1;
                const double ydg = y0 * grad_a[0][idx] + y1 * grad_a[1][idx];
                acc += (y2 == 0.0 && q != 0.0 ? 0.0 : std::pow(y2, q)) * ydg * b[idx];
            }
    }
    return acc * std::pow(g.h(), g.n);
}

bool forms_pd(int n, double eps) {
    if (eps <= 0.0) return true;
    // E0/E2-type form: a = 1/2, b = eps, c = eps/2
    const bool pd02 = 4.0 * 0.5 * (0.5 * eps) > eps * eps;
    if (n == 1) {
        // E1: a = 1, b = 2 eps, c = eps/2
        return pd02 && 4.0 * 1.0 * (0.5 * eps) > 4.0 * eps * eps;
    }
    // E1 (n >= 2): a = (n/4+1)/2, b = (n/4+1) eps, c = eps/2
    const double q = 0.25 * n + 1.0;
    return pd02 && 4.0 * 0.5 * q * (0.5 * eps) > q * q * eps * eps;
}

} // namespace

std::vector<LowModeCheck> low_mode_interpolation(const Field& f, double delta,
                                                 const std::vector<double>& etas) {
    const Grid& g = f.grid();
    if (g.n < 2) throw ValidationError("low_mode_interpolation: defined for n >= 2");
    SpectralField fhat = fft(f);
    fhat[0] = 0.0;
    const SpectralField Fh = fractional_primitive(fhat, delta);
    const double mass = l2sq(fhat);
    const double grad = xi2_energy(fhat);
    const double frac_grad = xi2_energy(Fh);
    std::vector<LowModeCheck> out;
    for (double eta : etas) {
        LowModeCheck c;
        c.eta = eta;
        c.lhs = mass;
        c.rhs = eta * grad + std::pow(eta, 0.5 * (2.0 - g.n - 2.0 * delta)) * frac_grad;
        out.push_back(c);
    }
    return out;
}

EnergyReport energies(const Decomposition& dec, const CoefficientSet&, const EnergyConfig& cfg) {
    const Grid& g = dec.f.grid();
    const int n = g.n;
    EnergyReport rep;
    rep.s = dec.s;
    rep.weights = dec.weights;
    rep.alpha = dec.alpha;
    rep.dalpha = dec.dalpha;
    rep.int_r = dec.int_r;
    rep.lambda = cfg.lambda;
    const double eps = dec.weights.eps;
    const double drag = dec.weights.drag;
    const double lam = cfg.lambda;

    const std::vector<Field> grad_f = gradient(dec.f);

    if (n == 1) {
        const Field F = primitive_1d(dec.f);
        const Field G = primitive_1d(dec.g);
        const Field H = primitive_1d(dec.h);
        const Field& f = dec.f;
        const Field& gg = dec.g;
        const Field& h = dec.h;
        const Field& fy = grad_f[0];

        const double f2 = inner(f, f), g2 = inner(gg, gg), fg = inner(f, gg);
        const double fy2 = inner(fy, fy);
        const double F2 = inner(F, F), G2 = inner(G, G), FG = inner(F, G);

        // F_y = f by construction
        rep.E0 = 0.5 * (f2 + eps * G2) + 0.5 * F2 + eps * FG;
        rep.L0 = 0.5 * f2 + G2;
        rep.R0 = 1.5 * eps * G2 - drag * (G2 + 2.0 * FG) + inner(F + G, H);

        rep.E1 = 0.5 * (fy2 + eps * g2) + f2 + 2.0 * eps * fg;
        rep.L1 = fy2 + g2 - f2;
        rep.R1 = 3.0 * eps * g2 + 2.0 * eps * fg - drag * (g2 + 4.0 * fg) + inner(2.0 * f + gg, h);

        const double yf2 = winner(f, f, 1.0), yg2 = winner(gg, gg, 1.0), yfg = winner(f, gg, 1.0);
        const double yfy2 = winner(fy, fy, 1.0);
        rep.E2 = 0.5 * (yfy2 + eps * yg2) + 0.5 * yf2 + eps * yfg;
        rep.L2 = 0.5 * yfy2 + yg2 + 2.0 * wdrift_inner(grad_f, f + gg, 0.0);
        rep.R2 = 1.5 * eps * yg2 - drag * winner(2.0 * f + gg, gg, 1.0) + winner(f + gg, h, 1.0);

        rep.equiv0 = f2 + eps * G2 + F2;
        rep.equiv1 = fy2 + eps * g2 + f2;
        rep.equiv2 = yfy2 + eps * yg2 + yf2;
        rep.H_norm = weighted_norm(H, 0, 1.0);
        rep.decay01 = 0.5;
        rep.decay2 = 0.5;
    } else {
        const double delta = cfg.delta;
        const double eta = cfg.eta_for(n);
        const double m = cfg.m;
        const double tdelta = m - 0.5 * n;
        rep.delta = delta;
        rep.eta_tilde = eta;

        SpectralField fhat = fft(dec.f);
        fhat[0] = 0.0;
        SpectralField ghat = fft(dec.g);
        ghat[0] = 0.0;
        SpectralField hhat = fft(dec.h);
        hhat[0] = 0.0;
        const SpectralField Fh = fractional_primitive(fhat, delta);
        const SpectralField Gh = fractional_primitive(ghat, delta);
        const SpectralField Hh = fractional_primitive(hhat, delta);

        const double xiF2 = xi2_energy(Fh), F2 = l2sq(Fh), G2 = l2sq(Gh);
        const double FG = re_inner(Fh, Gh);
        rep.E0 = 0.5 * (xiF2 + eps * G2) + 0.5 * F2 + eps * FG;
        rep.L0 = 0.5 * xiF2 + G2;
        rep.R0 = 1.5 * eps * G2 - drag * (2.0 * FG + G2) + re_inner(Fh, Hh) + re_inner(Gh, Hh);

        const Field& f = dec.f;
        const Field& gg = dec.g;
        const Field& h = dec.h;
        double gradf2 = 0.0;
        for (const Field& d : grad_f) gradf2 += inner(d, d);
        const double f2 = inner(f, f), g2 = inner(gg, gg), fg = inner(f, gg);
        const double q = 0.25 * n + 1.0;
        rep.E1 = 0.5 * (gradf2 + eps * g2) + q * (0.5 * f2 + eps * fg);
        rep.L1 = 0.5 * (1.0 - delta) * gradf2 + g2 - (0.25 * n + 0.5 * delta) * q * f2;
        rep.R1 = (0.5 * n + delta) * q * eps * fg + 0.5 * (n + 3.0 + delta) * eps * g2 -
                 drag * (2.0 * q * fg + g2) + inner(q * f + gg, h);

        const double wf2 = winner(f, f, m), wg2 = winner(gg, gg, m), wfg = winner(f, gg, m);
        double wgradf2 = 0.0;
        for (const Field& d : grad_f) wgradf2 += winner(d, d, m);
        rep.E2 = 0.5 * (wgradf2 + eps * wg2) + 0.5 * wf2 + eps * wfg;
        rep.L2 = 0.5 * eta * wf2 + 0.5 * (eta + 1.0) * wgradf2 + wg2 +
                 2.0 * m * wdrift_inner(grad_f, f + gg, m - 1.0);
        rep.R2 = -eta * eps * wfg - 0.5 * (eta - 3.0) * eps * wg2 -
                 drag * winner(2.0 * f + gg, gg, m) + winner(f + gg, h, m);

        rep.equiv0 = xiF2 + eps * G2 + F2;
        rep.equiv1 = gradf2 + eps * g2 + f2;
        rep.equiv2 = wgradf2 + eps * wg2 + wf2;
        rep.H_norm = std::sqrt(l2sq(Hh));
        rep.decay01 = delta;
        rep.decay2 = tdelta - eta;
    }

    const double a = dec.alpha, da = dec.dalpha;
    rep.E3 = 0.5 * eps * da * da + std::exp(-2.0 * lam * rep.s) * a * a;
    rep.R3 = 0.5 * (2.0 * lam + 1.0) * eps * da * da - drag * da * da + da * dec.int_r +
             2.0 * std::exp(-2.0 * lam * rep.s) * a * da;

    rep.E4 = cfg.C0 * rep.E0 + cfg.C1 * rep.E1 + rep.E2 + rep.E3;
    if (n == 1) {
        rep.L4 = (0.5 - 2.0 * lam) * (cfg.C0 * rep.E0 + cfg.C1 * rep.E1 + rep.E2) +
                 cfg.C0 * rep.L0 + cfg.C1 * rep.L1 + rep.L2 + da * da;
    } else {
        const double tdelta = cfg.m - 0.5 * n;
        rep.L4 = cfg.C0 * (cfg.delta - 2.0 * lam) * rep.E0 +
                 cfg.C1 * (cfg.delta - 2.0 * lam) * rep.E1 +
                 (tdelta - cfg.eta_for(n) - 2.0 * lam) * rep.E2 + cfg.C0 * rep.L0 +
                 cfg.C1 * rep.L1 + rep.L2 + da * da;
    }
    rep.R4 = cfg.C0 * rep.R0 + cfg.C1 * rep.R1 + rep.R2 + rep.R3;

    rep.E5 = rep.E4 + 0.5 * a * a + eps * a * da;
    rep.R5_tilde = eps * da * da - 2.0 * drag * a * da + a * dec.int_r;
    rep.R5 = rep.R4 + rep.R5_tilde;

    rep.forms_pd = forms_pd(n, eps);
    rep.e5_compatible = rep.E5 >= 0.5 * rep.E4 + 0.25 * a * a;

    rep.f_h1m = weighted_norm(dec.f, 1, cfg.m);
    rep.g_h0m = weighted_norm(dec.g, 0, cfg.m);
    rep.f_h11 = n == 1 ? weighted_norm(dec.f, 1, 1.0) : rep.f_h1m;
    rep.g_h01 = n == 1 ? weighted_norm(dec.g, 0, 1.0) : rep.g_h0m;
    rep.r_h0m = weighted_norm(dec.r, 0, cfg.m);
    rep.h_h0m = weighted_norm(dec.h, 0, cfg.m);
    rep.nl_norm = dec.nl_norm;
    return rep;
}

double IdentityResidualSeries::max_abs(const std::vector<double>& r) {
    double m = 0.0;
    for (double x : r)
        if (std::isfinite(x)) m = std::max(m, std::abs(x));
    return m;
}

IdentityResidualSeries identity_residuals(const std::vector<EnergyReport>& series, double ds) {
    const std::size_t K = series.size();
    if (K < 3) throw ValidationError("identity_residuals: need at least 3 reports");
    for (std::size_t k = 1; k < K; ++k)
        if (std::abs(series[k].s - series[k - 1].s - ds) > 1e-9 * std::max(1.0, ds))
            throw ValidationError("identity_residuals: spacing is not uniform");

    IdentityResidualSeries out;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.s.resize(K);
    for (std::size_t k = 0; k < K; ++k) out.s[k] = series[k].s;
    out.e0.assign(K, nan);
    out.e1.assign(K, nan);
    out.e2.assign(K, nan);
    out.e3.assign(K, nan);
    out.e4.assign(K, nan);
    out.e5.assign(K, nan);

    for (std::size_t k = 1; k + 1 < K; ++k) {
        const EnergyReport& c = series[k];
        auto dds = [&](double lo, double hi) { return (hi - lo) / (2.0 * ds); };
        const double dE0 = dds(series[k - 1].E0, series[k + 1].E0);
        const double dE1 = dds(series[k - 1].E1, series[k + 1].E1);
        const double dE2 = dds(series[k - 1].E2, series[k + 1].E2);
        const double dE3 = dds(series[k - 1].E3, series[k + 1].E3);
        const double dE4 = dds(series[k - 1].E4, series[k + 1].E4);
        const double dE5 = dds(series[k - 1].E5, series[k + 1].E5);
        out.e0[k] = dE0 + c.decay01 * c.E0 + c.L0 - c.R0;
        out.e1[k] = dE1 + c.decay01 * c.E1 + c.L1 - c.R1;
        out.e2[k] = dE2 + c.decay2 * c.E2 + c.L2 - c.R2;
        out.e3[k] = dE3 + 2.0 * c.lambda * c.E3 + c.dalpha * c.dalpha - c.R3;
        out.e4[k] = dE4 + 2.0 * c.lambda * c.E4 + c.L4 - c.R4;
        out.e5[k] = dE5 + 2.0 * c.lambda * c.E4 + c.L4 - c.R5;
    }
    return out;
}

ThresholdReport detect_thresholds(const std::vector<EnergyReport>& series) {
    ThresholdReport out;
    const std::size_t K = series.size();
    // earliest index from which the property holds for the rest of the series
    auto persistent_from = [&](auto&& pred) {
        std::size_t idx = K;
        for (std::size_t k = K; k-- > 0;) {
            if (pred(series[k]))
                idx = k;
            else
                break;
        }
        return idx;
    };
    const std::size_t i1 = persistent_from([](const EnergyReport& r) { return r.forms_pd; });
    if (i1 < K) {
        out.s1_index = i1;
        out.s1 = series[i1].s;
        const std::size_t i2 = persistent_from(
            [](const EnergyReport& r) { return r.forms_pd && r.e5_compatible; });
        if (i2 < K) {
            out.s2_index = std::max(i1, i2);
            out.s2 = series[out.s2_index].s;
        }
    }
    return out;
}

} // namespace dwlab
