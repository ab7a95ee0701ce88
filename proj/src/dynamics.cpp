#include "dwlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dwlab/decompose.hpp"

namespace dwlab {

DataFamily data_family_from_string(const std::string& name) {
    if (name == "gaussian_bump") return DataFamily::GaussianBump;
    if (name == "off_center_bump") return DataFamily::OffCenterBump;
    if (name == "random_bandlimited") return DataFamily::RandomBandLimited;
    if (name == "dipole") return DataFamily::Dipole;
    throw ValidationError("unknown data family: " + name);
}

std::string to_string(DataFamily f) {
    switch (f) {
        case DataFamily::GaussianBump: return "gaussian_bump";
        case DataFamily::OffCenterBump: return "off_center_bump";
        case DataFamily::RandomBandLimited: return "random_bandlimited";
        case DataFamily::Dipole: return "dipole";
    }
    return "?";
}

namespace {

Field random_bandlimited(const Grid& g, std::mt19937_64& rng, double amplitude) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    const int modes = 6;
    Field out(g);
    if (g.n == 1) {
        for (int j = 1; j <= modes; ++j) {
            const double a = amplitude * unit(rng) / j;
            const double om = 0.5 * j;
            const double ph = phase(rng);
            for (int i = 0; i < g.N; ++i) out[i] += a * std::cos(om * g.coord(i) + ph);
        }
        for (int i = 0; i < g.N; ++i) {
            const double x = g.coord(i);
            out[i] *= std::exp(-x * x / 8.0);
        }
    } else {
        for (int j = 1; j <= modes; ++j) {
            const double a = amplitude * unit(rng) / j;
            const double om0 = 0.5 * j, om1 = 0.5 * ((j % modes) + 1);
            const double ph0 = phase(rng), ph1 = phase(rng);
            for (int i0 = 0; i0 < g.N; ++i0)
                for (int i1 = 0; i1 < g.N; ++i1)
                    out[std::size_t(i0) * g.N + i1] +=
                        a * std::cos(om0 * g.coord(i0) + ph0) * std::cos(om1 * g.coord(i1) + ph1);
        }
        for (int i0 = 0; i0 < g.N; ++i0)
            for (int i1 = 0; i1 < g.N; ++i1) {
                const double r2 = g.coord(i0) * g.coord(i0) + g.coord(i1) * g.coord(i1);
                out[std::size_t(i0) * g.N + i1] *= std::exp(-r2 / 8.0);
            }
    }
    return out;
}

Field bump(const Grid& g, double center0) {
    if (g.n == 1)
        return Field::from_function(g, [=](double x) {
            const double d = x - center0;
            return std::exp(-d * d / 2.0);
        });
    return Field::from_function(g, [=](double a, double b) {
        const double d = a - center0;
        return std::exp(-(d * d + b * b) / 2.0);
    });
}

Field dipole(const Grid& g) {
    if (g.n == 1)
        return Field::from_function(g, [](double x) { return x * std::exp(-x * x / 2.0); });
    return Field::from_function(
        g, [](double a, double b) { return a * std::exp(-(a * a + b * b) / 2.0); });
}

} // namespace

PhysicalState make_initial_state(const Grid& g, const InitialData& data) {
    PhysicalState st;
    st.t = 0.0;
    switch (data.family) {
        case DataFamily::GaussianBump:
            st.u = bump(g, 0.0);
            st.p = Field(g);
            break;
        case DataFamily::OffCenterBump:
            st.u = bump(g, 2.0);
            st.p = 0.5 * bump(g, 0.0);
            break;
        case DataFamily::RandomBandLimited: {
            std::mt19937_64 rng(data.seed);
            st.u = random_bandlimited(g, rng, 1.0);
            st.p = random_bandlimited(g, rng, 0.5);
            break;
        }
        case DataFamily::Dipole:
            st.u = dipole(g);
            st.p = 0.5 * dipole(g);
            break;
    }
    st.u *= data.epsilon;
    st.p *= data.epsilon;
    return st;
}

std::pair<Field, Field> rhs_physical(const PhysicalState& st, const CoefficientSet& coeffs,
                                     const NonlinearityModel& nl) {
    const Grid& g = st.u.grid();
    if (!st.u.all_finite() || !st.p.all_finite())
        throw BlowUpError(st.t, std::numeric_limits<double>::infinity());
    const SpectralField uhat = fft(st.u);

    SpectralField lap_hat = uhat;
    for (std::size_t i = 0; i < lap_hat.size(); ++i) lap_hat[i] *= -lap_hat.xi_norm2(i);
    Field dp = ifft(lap_hat);

    const std::vector<double> c = coeffs.c_of_t(st.t);
    const bool c_active = int(c.size()) == g.n &&
                          std::any_of(c.begin(), c.end(), [](double a) { return a != 0.0; });
    std::vector<Field> grad;
    if (c_active || nl.needs_gradient()) {
        for (int a = 0; a < g.n; ++a) grad.push_back(ifft(derivative(uhat, a)));
    }
    if (c_active)
        for (int a = 0; a < g.n; ++a)
            if (c[a] != 0.0) dp += c[a] * grad[a];

    const double d = coeffs.d_of_t(st.t);
    if (d != 0.0) dp += d * st.u;

    if (!nl.empty()) dp += dealias_two_thirds(eval_physical(nl, st.u, grad, st.p));

    const double b = b_of_t(coeffs.damping, st.t);
    dp += -b * st.p;
    return {st.p, std::move(dp)};
}

void rk4_step(PhysicalState& st, double dt, const CoefficientSet& coeffs,
              const NonlinearityModel& nl, double blowup_ceiling) {
    const double t0 = st.t;
    auto f = [&](double t, const Field& u, const Field& p) {
        PhysicalState tmp{t, u, p};
        return rhs_physical(tmp, coeffs, nl);
    };
    auto [k1u, k1p] = f(t0, st.u, st.p);
    auto [k2u, k2p] = f(t0 + 0.5 * dt, st.u + 0.5 * dt * k1u, st.p + 0.5 * dt * k1p);
    auto [k3u, k3p] = f(t0 + 0.5 * dt, st.u + 0.5 * dt * k2u, st.p + 0.5 * dt * k2p);
    auto [k4u, k4p] = f(t0 + dt, st.u + dt * k3u, st.p + dt * k3p);
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < st.u.size(); ++i) {
        st.u[i] += w * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
        st.p[i] += w * (k1p[i] + 2.0 * k2p[i] + 2.0 * k3p[i] + k4p[i]);
    }
    st.t = t0 + dt;
    const double amp = linf_norm(st.u);
    if (!std::isfinite(amp) || amp > blowup_ceiling || !st.p.all_finite())
        throw BlowUpError(st.t, amp);
}

double stable_dt(const CoefficientSet& coeffs, const Grid& g, double t0, double t1,
                 const StepControl& ctl) {
    const double b_max = std::max(b_of_t(coeffs.damping, t0), b_of_t(coeffs.damping, t1));
    return std::min({ctl.cfl * g.h(), 0.5 / b_max, ctl.dt_max});
}

void advance_to(PhysicalState& st, double t_target, const CoefficientSet& coeffs,
                const NonlinearityModel& nl, const StepControl& ctl) {
    if (t_target < st.t) throw InternalError("advance_to: target lies in the past");
    const double span = t_target - st.t;
    if (span == 0.0) return;
    const double dt_cap = stable_dt(coeffs, st.u.grid(), st.t, t_target, ctl);
    const long n = std::max(1L, long(std::ceil(span / dt_cap - 1e-12)));
    const double dt = span / double(n);
    for (long i = 0; i < n - 1; ++i) rk4_step(st, dt, coeffs, nl, ctl.blowup_ceiling);
    // land exactly on the target
    rk4_step(st, t_target - st.t, coeffs, nl, ctl.blowup_ceiling);
    st.t = t_target;
}

namespace {

std::vector<std::vector<double>> stretched_targets(const Grid& g, double factor) {
    std::vector<double> t(g.N);
    for (int j = 0; j < g.N; ++j) t[j] = factor * g.coord(j);
    return std::vector<std::vector<double>>(g.n, t);
}

// zero every point whose source coordinate left [-L, L)
double clip_outside(Field& f, const Grid& g, double factor) {
    long clipped = 0;
    if (g.n == 1) {
        for (int j = 0; j < g.N; ++j)
            if (std::abs(factor * g.coord(j)) >= g.L) {
                f[j] = 0.0;
                ++clipped;
            }
    } else {
        for (int i0 = 0; i0 < g.N; ++i0)
            for (int i1 = 0; i1 < g.N; ++i1)
                if (std::abs(factor * g.coord(i0)) >= g.L || std::abs(factor * g.coord(i1)) >= g.L) {
                    f[std::size_t(i0) * g.N + i1] = 0.0;
                    ++clipped;
                }
    }
    return double(clipped) / double(g.size());
}

double spectral_tail_fraction(const SpectralField& s, double xi_cut) {
    double tail = 0.0, total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double e = std::norm(s[i]);
        total += e;
        if (std::sqrt(s.xi_norm2(i)) > xi_cut) tail += e;
    }
    return total > 0.0 ? tail / total : 0.0;
}

} // namespace

ScaledState to_scaled(const PhysicalState& st, const DampingModel& damping, ResampleInfo* info) {
    if (st.t < 0.0) throw ValidationError("to_scaled: t must be nonnegative");
    const Grid& g = st.u.grid();
    const double s = s_of_t(damping, st.t);
    const double stretch = std::exp(0.5 * s); // sqrt(B(t)+1)
    const auto targets = stretched_targets(g, stretch);

    const SpectralField uhat = fft(st.u);
    const SpectralField phat = fft(st.p);
    if (info) {
        // sampling at spacing stretch*h resolves content up to pi/(stretch*h)
        const double xi_cap = M_PI / (stretch * g.h());
        info->tail_spectral_fraction = std::max(spectral_tail_fraction(uhat, xi_cap),
                                                spectral_tail_fraction(phat, xi_cap));
        info->bandwidth_warning = info->tail_spectral_fraction > 1e-10;
    }

    ScaledState out;
    out.s = s;
    out.v = evaluate_on_targets(uhat, g, targets);
    out.w = evaluate_on_targets(phat, g, targets);
    const double cf = clip_outside(out.v, g, stretch);
    clip_outside(out.w, g, stretch);
    if (info) info->clipped_fraction = cf;

    const double b = b_of_t(damping, st.t);
    out.v *= std::exp(0.5 * g.n * s);
    out.w *= b * std::exp(0.5 * (g.n + 2) * s);
    return out;
}

PhysicalState from_scaled(const ScaledState& st, const DampingModel& damping) {
    if (st.s < 0.0) throw ValidationError("from_scaled: s must be nonnegative");
    const Grid& g = st.v.grid();
    const double t = t_of_s(damping, st.s);
    const double shrink = std::exp(-0.5 * st.s);
    const auto targets = stretched_targets(g, shrink);

    PhysicalState out;
    out.t = t;
    out.u = evaluate_on_targets(fft(st.v), g, targets);
    out.p = evaluate_on_targets(fft(st.w), g, targets);
    const double b = b_of_t(damping, t);
    out.u *= std::exp(-0.5 * g.n * st.s);
    out.p *= std::exp(-0.5 * (g.n + 2) * st.s) / b;
    return out;
}

namespace {

// (y/2).grad f + a0 f, evaluated spectrally with pointwise coordinate weights
Field drift_term(const Field& f, double a0) {
    const Grid& g = f.grid();
    const std::vector<Field> grad_f = gradient(f);
    Field out(g);
    if (g.n == 1) {
        for (int j = 0; j < g.N; ++j) out[j] = 0.5 * g.coord(j) * grad_f[0][j] + a0 * f[j];
    } else {
        for (int i0 = 0; i0 < g.N; ++i0)
            for (int i1 = 0; i1 < g.N; ++i1) {
                const std::size_t idx = std::size_t(i0) * g.N + i1;
                out[idx] = 0.5 * (g.coord(i0) * grad_f[0][idx] + g.coord(i1) * grad_f[1][idx]) +
                           a0 * f[idx];
            }
    }
    return out;
}

} // namespace

std::pair<Field, Field> rhs_scaled(const ScaledState& st, const CoefficientSet& coeffs,
                                   const NonlinearityModel& nl) {
    const Grid& g = st.v.grid();
    const ScaledWeights sw = scaled_weights(coeffs.damping, st.s);
    if (sw.eps <= 0.0) throw InternalError("rhs_scaled: eps_s vanished; use the DAE limit");
    const Field r = scaled_source_r(st.s, st.v, st.w, coeffs, nl);
    Field dv = drift_term(st.v, 0.5 * g.n) + st.w;
    Field stiff = laplacian(st.v) + r - st.w;
    stiff *= 1.0 / sw.eps;
    Field dw = drift_term(st.w, 0.5 * g.n + 1.0) + stiff;
    return {std::move(dv), std::move(dw)};
}

ScaledRunInfo advance_scaled_to(ScaledState& st, double s_target, const CoefficientSet& coeffs,
                                const NonlinearityModel& nl, double stiffness_floor) {
    const Grid& g = st.v.grid();
    const double xi_max = M_PI * (g.N / 2) / g.L;
    ScaledRunInfo info;

    auto dae_velocity = [&](const ScaledState& cur) {
        // w = Lap v + r(v, w); r depends weakly on w, resolve by iteration
        Field w = cur.w;
        for (int it = 0; it < 3; ++it) {
            ScaledState probe{cur.s, cur.v, w};
            const Field r = scaled_source_r(probe.s, probe.v, probe.w, coeffs, nl);
            w = laplacian(cur.v) + r;
        }
        return w;
    };

    while (st.s < s_target - 1e-14) {
        const ScaledWeights sw = scaled_weights(coeffs.damping, st.s);
        double dt;
        if (sw.eps >= stiffness_floor) {
            const double lam = std::max(1.0 / sw.eps, xi_max / std::sqrt(sw.eps)) +
                               0.5 * g.L * xi_max + 0.5 * g.n + 1.0;
            dt = 2.0 / lam;
        } else {
            info.dae_used = true;
            dt = 2.0 / (xi_max * xi_max + 0.5 * g.L * xi_max + 0.5 * g.n + 1.0);
        }
        dt = std::min(dt, s_target - st.s);

        if (sw.eps >= stiffness_floor) {
            auto f = [&](double s, const Field& v, const Field& w) {
                ScaledState tmp{s, v, w};
                return rhs_scaled(tmp, coeffs, nl);
            };
            auto [k1v, k1w] = f(st.s, st.v, st.w);
            auto [k2v, k2w] = f(st.s + 0.5 * dt, st.v + 0.5 * dt * k1v, st.w + 0.5 * dt * k1w);
            auto [k3v, k3w] = f(st.s + 0.5 * dt, st.v + 0.5 * dt * k2v, st.w + 0.5 * dt * k2w);
            auto [k4v, k4w] = f(st.s + dt, st.v + dt * k3v, st.w + dt * k3w);
            const double c = dt / 6.0;
            for (std::size_t i = 0; i < st.v.size(); ++i) {
                st.v[i] += c * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
                st.w[i] += c * (k1w[i] + 2.0 * k2w[i] + 2.0 * k3w[i] + k4w[i]);
            }
        } else {
            // parabolic limit: v_s = (y/2).grad v + (n/2) v + Lap v + r
            auto f = [&](double s, const Field& v) {
                ScaledState tmp{s, v, dae_velocity({s, v, st.w})};
                return drift_term(tmp.v, 0.5 * g.n) + tmp.w;
            };
            const Field k1 = f(st.s, st.v);
            const Field k2 = f(st.s + 0.5 * dt, st.v + 0.5 * dt * k1);
            const Field k3 = f(st.s + 0.5 * dt, st.v + 0.5 * dt * k2);
            const Field k4 = f(st.s + dt, st.v + dt * k3);
            const double c = dt / 6.0;
            for (std::size_t i = 0; i < st.v.size(); ++i)
                st.v[i] += c * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            st.w = dae_velocity({st.s + dt, st.v, st.w});
        }
        st.s += dt;
        ++info.steps;
        if (!st.v.all_finite() || !st.w.all_finite())
            throw BlowUpError(st.s, std::numeric_limits<double>::infinity());
    }
    st.s = s_target;
    return info;
}

} // namespace dwlab
