#pragma once

#include <vector>

#include "dwlab/energy.hpp"

namespace dwlab {

/// Tail fit alpha(s) = alpha_star + A e^{-rho s}.
struct AlphaFit {
    double alpha_star = 0.0;
    double tail_rate = std::numeric_limits<double>::quiet_NaN();
    bool rate_defined = false;
    bool converged = true;   // exponential model explains the tail
    double fit_residual = 0; // RMS misfit
    double tail_variation = 0;
};

/// Fit over the supplied tail points (>= 20 required).
AlphaFit alpha_star_fit(const std::vector<double>& s, const std::vector<double>& alpha);

/// || u - alpha_star G(B(t)+1, .) ||_{L2} on the physical grid.
double profile_error(const Field& u, double t, const DampingModel& damping, double alpha_star);

/// Decay-rate fit of one run.
struct RateFit {
    double alpha_star = 0.0;
    double alpha_tail_rate = std::numeric_limits<double>::quiet_NaN();
    bool tail_rate_defined = false;
    double slope = 0.0;               // d log err / d log(B+1)
    double predicted_exponent = 0.0;  // n/4 + lambda
    double window_lo = 0.0, window_hi = 0.0;
    double margin = 0.0;              // slope + predicted_exponent
    bool pass = false;                // slope <= -predicted + slope_tol
    double fit_residual = 0.0;
    int n_points = 0;
};

/// Least-squares slope of log(err) against log(B+1) inside the window.
/// One-sided: faster decay than predicted passes. Throws on a degenerate fit
/// or fewer than 10 points.
RateFit fit_decay(const std::vector<double>& err, const std::vector<double>& B_plus_1,
                  double predicted_exponent, double window_lo, double window_hi,
                  double slope_tol = 0.08);

struct AprioriReport {
    double sup_E5 = 0.0;
    double E5_at_s0 = 0.0;
    double s0 = 0.0;
    bool bounded = false; // sup E5 over [s0, end] <= 4 E5(s0)
};
/// Running-sup monitor of E5 from the detected threshold s0 onward.
AprioriReport apriori_monitor(const std::vector<EnergyReport>& series, double s0);

/// Measured-to-bound ratios for the remainder estimates, with C := 1 on the
/// right sides. Entries are 0 when both sides vanish.
struct EnvelopeSeries {
    std::vector<double> s;
    std::vector<double> nl;  // scaled nonlinearity vs its decay bound
    std::vector<double> r;   // ||r||^2_{H^{0,m}} vs the r-bound
    std::vector<double> h;   // ||h||^2 vs the h-bound
    std::vector<double> H;   // primitive/fractional version
    struct Stats {
        double sup = 0.0;
        double median = 0.0;
        bool finite = true;
    };
    static Stats stats(const std::vector<double>& ratios);
};

/// Envelope ratios over snapshots with s >= s_min. `powers` describes the
/// nonlinearity (per-term exponents for n = 1, the single power for n >= 2).
EnvelopeSeries remainder_envelopes(const std::vector<EnergyReport>& series,
                                   const RateSet& rates, const NonlinearityModel& nl, int n,
                                   double s_min = 1.0);

} // namespace dwlab
