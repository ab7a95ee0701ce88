#include "dwlab/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace dwlab {

namespace {

// least squares for alpha(s) ~ a + b e^{-rho s}; returns RMS residual
bool exp_ls(const std::vector<double>& s, const std::vector<double>& y, double rho, double* a,
            double* b, double* rms) {
    const std::size_t K = s.size();
    double s00 = double(K), s01 = 0, s11 = 0, r0 = 0, r1 = 0;
    for (std::size_t k = 0; k < K; ++k) {
        const double e = std::exp(-rho * s[k]);
        s01 += e;
        s11 += e * e;
        r0 += y[k];
        r1 += e * y[k];
    }
    const double det = s00 * s11 - s01 * s01;
    if (std::abs(det) < 1e-14 * std::max(1.0, s00 * s11)) return false;
    *a = (s11 * r0 - s01 * r1) / det;
    *b = (s00 * r1 - s01 * r0) / det;
    double sse = 0;
    for (std::size_t k = 0; k < K; ++k) {
        const double d = y[k] - (*a + *b * std::exp(-rho * s[k]));
        sse += d * d;
    }
    *rms = std::sqrt(sse / double(K));
    return true;
}

} // namespace

AlphaFit alpha_star_fit(const std::vector<double>& s, const std::vector<double>& alpha) {
    if (s.size() != alpha.size() || s.size() < 20)
        throw ValidationError("alpha_star_fit: need at least 20 tail points");
    AlphaFit out;
    const auto [mn, mx] = std::minmax_element(alpha.begin(), alpha.end());
    out.tail_variation = *mx - *mn;
    out.alpha_star = alpha.back();
    if (out.tail_variation <= 1e-12 * std::max(1.0, std::abs(alpha.back()))) {
        out.rate_defined = false; // constant tail: the rate is undefined
        return out;
    }
    double best_rho = 0, best_rms = std::numeric_limits<double>::infinity(), best_a = alpha.back();
    for (int i = 0; i <= 160; ++i) {
        const double rho = std::exp(std::log(1e-2) + i * (std::log(50.0) - std::log(1e-2)) / 160.0);
        double a, b, rms;
        if (!exp_ls(s, alpha, rho, &a, &b, &rms)) continue;
        if (rms < best_rms) {
            best_rms = rms;
            best_rho = rho;
            best_a = a;
        }
    }
    // golden-section refinement around the grid optimum
    double lo = best_rho / 1.4, hi = best_rho * 1.4;
    for (int it = 0; it < 60; ++it) {
        const double m1 = lo + 0.382 * (hi - lo), m2 = lo + 0.618 * (hi - lo);
        double a, b, r1 = std::numeric_limits<double>::infinity(),
                     r2 = std::numeric_limits<double>::infinity();
        exp_ls(s, alpha, m1, &a, &b, &r1);
        exp_ls(s, alpha, m2, &a, &b, &r2);
        if (r1 < r2)
            hi = m2;
        else
            lo = m1;
    }
    {
        const double rho = 0.5 * (lo + hi);
        double a, b, rms;
        if (exp_ls(s, alpha, rho, &a, &b, &rms) && rms <= best_rms) {
            best_rho = rho;
            best_rms = rms;
            best_a = a;
        }
    }
    out.alpha_star = best_a;
    out.tail_rate = best_rho;
    out.rate_defined = true;
    out.fit_residual = best_rms;
    out.converged = best_rms <= 0.1 * out.tail_variation;
    return out;
}

double profile_error(const Field& u, double t, const DampingModel& damping, double alpha_star) {
    const double tau = B_of_t(damping, t) + 1.0;
    Field diff = u - alpha_star * heat_gaussian(u.grid(), tau);
    return l2_norm(diff);
}

RateFit fit_decay(const std::vector<double>& err, const std::vector<double>& B_plus_1,
                  double predicted_exponent, double window_lo, double window_hi,
                  double slope_tol) {
    if (err.size() != B_plus_1.size()) throw ValidationError("fit_decay: series lengths differ");
    std::vector<double> x, y;
    for (std::size_t k = 0; k < err.size(); ++k) {
        if (B_plus_1[k] < window_lo || B_plus_1[k] > window_hi) continue;
        if (!(err[k] > 0.0)) continue;
        x.push_back(std::log(B_plus_1[k]));
        y.push_back(std::log(err[k]));
    }
    RateFit out;
    out.predicted_exponent = predicted_exponent;
    out.window_lo = window_lo;
    out.window_hi = window_hi;
    out.n_points = int(x.size());
    if (x.size() < 10) throw ValidationError("fit_decay: fewer than 10 points in the window");
    const std::size_t K = x.size();
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < K; ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= double(K);
    my /= double(K);
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < K; ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    if (sxx <= 0.0) throw ValidationError("fit_decay: degenerate window (zero variance)");
    out.slope = sxy / sxx;
    double sse = 0;
    const double icpt = my - out.slope * mx;
    for (std::size_t k = 0; k < K; ++k) {
        const double d = y[k] - (icpt + out.slope * x[k]);
        sse += d * d;
    }
    out.fit_residual = std::sqrt(sse / double(K));
    out.margin = out.slope + predicted_exponent;
    out.pass = out.slope <= -predicted_exponent + slope_tol;
    return out;
}

AprioriReport apriori_monitor(const std::vector<EnergyReport>& series, double s0) {
    AprioriReport out;
    out.s0 = s0;
    bool started = false;
    for (const EnergyReport& r : series) {
        if (r.s + 1e-12 < s0) continue;
        if (!started) {
            out.E5_at_s0 = r.E5;
            out.sup_E5 = r.E5;
            started = true;
        }
        out.sup_E5 = std::max(out.sup_E5, r.E5);
    }
    if (started) out.bounded = out.sup_E5 <= 4.0 * out.E5_at_s0;
    return out;
}

EnvelopeSeries::Stats EnvelopeSeries::stats(const std::vector<double>& ratios) {
    Stats st;
    std::vector<double> sorted;
    for (double v : ratios) {
        if (!std::isfinite(v)) {
            st.finite = false;
            continue;
        }
        st.sup = std::max(st.sup, v);
        sorted.push_back(v);
    }
    if (!sorted.empty()) {
        std::sort(sorted.begin(), sorted.end());
        st.median = sorted[sorted.size() / 2];
    }
    return st;
}

EnvelopeSeries remainder_envelopes(const std::vector<EnergyReport>& series, const RateSet& rates,
                                   const NonlinearityModel& nl, int n, double s_min) {
    EnvelopeSeries out;
    const double l0 = std::min(rates.lambda0, kRateCap);
    const double l1 = std::min(rates.lambda1, kRateCap);
    for (const EnergyReport& rep : series) {
        if (rep.s < s_min) continue;
        const double a = std::abs(rep.alpha), da = std::abs(rep.dalpha);
        const double linear_bound =
            std::exp(-2.0 * l0 * rep.s) *
            (rep.f_h1m * rep.f_h1m + rep.g_h0m * rep.g_h0m + a * a + da * da);
        double nl_bound = 0.0;
        if (!nl.empty()) {
            if (n == 1) {
                for (const NonlinearTerm1D& t : nl.terms()) {
                    const double base = rep.f_h11 + a;
                    const double vel = rep.g_h01 + a + da;
                    nl_bound += std::exp(-2.0 * l1 * rep.s) *
                                std::pow(base, 2.0 * (t.p1 + t.p2)) * std::pow(vel, 2.0 * t.p3);
                }
            } else {
                nl_bound = std::exp(-2.0 * l1 * rep.s) * std::pow(rep.f_h1m + a, 2.0 * nl.power());
            }
        }
        auto ratio = [](double lhs2, double bound) {
            if (bound > 0.0) return lhs2 / bound;
            return lhs2 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        };
        out.s.push_back(rep.s);
        out.nl.push_back(ratio(rep.nl_norm * rep.nl_norm, nl_bound));
        out.r.push_back(ratio(rep.r_h0m * rep.r_h0m, linear_bound + nl_bound));
        out.h.push_back(ratio(rep.h_h0m * rep.h_h0m, linear_bound + nl_bound));
        out.H.push_back(ratio(rep.H_norm * rep.H_norm, linear_bound + nl_bound));
    }
    return out;
}

} // namespace dwlab
