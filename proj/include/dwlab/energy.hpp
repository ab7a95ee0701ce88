#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "dwlab/decompose.hpp"

namespace dwlab {

/// Parameters of the energy ladder for one run.
struct EnergyConfig {
    double lambda = 0.24;  // decay rate used in E3/E4, from the run's rate set
    double delta = 0.5;    // fractional order of the n >= 2 primitives, in (0, 1)
    double eta_tilde = -1; // weighted-identity parameter in (0, m - n/2); <= 0 picks (m - n/2)/2
    double C0 = 64.0;
    double C1 = 16.0;
    double m = 1.0;        // weight exponent of the run

    double eta_for(int n) const {
        if (n == 1) return 0.0;
        const double cap = m - 0.5 * n;
        return eta_tilde > 0.0 ? eta_tilde : 0.5 * cap;
    }
};

/// Every functional of the ladder at one scaled time, plus the norms the
/// remainder-envelope diagnostics need.
struct EnergyReport {
    double s = 0.0;
    double E0 = 0, E1 = 0, E2 = 0, E3 = 0, E4 = 0, E5 = 0;
    double L0 = 0, L1 = 0, L2 = 0, L4 = 0;
    double R0 = 0, R1 = 0, R2 = 0, R3 = 0, R4 = 0, R5 = 0, R5_tilde = 0;
    double alpha = 0, dalpha = 0, int_r = 0;
    ScaledWeights weights;
    double delta = 0;     // fractional order used (0 when n = 1)
    double eta_tilde = 0; // weighted-identity slack used (0 when n = 1)
    double lambda = 0;
    double decay01 = 0.5; // coefficient on E0/E1 in their identities (1/2 or delta)
    double decay2 = 0.5;  // coefficient on E2 (1/2 or m - n/2 - eta)
    // equivalence comparators (equi1/equi2 right sides)
    double equiv0 = 0, equiv1 = 0, equiv2 = 0;
    bool forms_pd = false; // all three quadratic forms positive definite at this eps
    bool e5_compatible = false; // E5 >= E4/2 + alpha^2/4
    // norms for the envelope diagnostics
    double f_h1m = 0, g_h0m = 0, f_h11 = 0, g_h01 = 0;
    double r_h0m = 0, h_h0m = 0, H_norm = 0, nl_norm = 0;

    bool all_finite() const;
};

/// Spectral antiderivative of a zero-mean 1D field, pinned to F(-L) = 0.
/// Throws when the input mean exceeds 1e-8 (||f|| + 1).
Field primitive_1d(const Field& f);

struct HardyCheck {
    double lhs = 0; // int F^2
    double rhs = 0; // 4 int y^2 f^2
    bool ok = false;
};
/// Hardy-type inequality int F^2 <= 4 int y^2 f^2 with 1% quadrature slack.
HardyCheck hardy_1d(const Field& f);

/// F-hat = |xi|^{-n/2-delta} f-hat with the zero mode removed (n >= 2).
SpectralField fractional_primitive(const Field& f, double delta);
SpectralField fractional_primitive(const SpectralField& fhat, double delta);

struct LowModeCheck {
    double eta = 0;
    double lhs = 0; // ||f||^2
    double rhs = 0; // eta ||grad f||^2 + eta^{(2-n-2 delta)/2} || |xi| F ||^2
};
/// The low/high frequency interpolation inequality, sampled at several eta.
std::vector<LowModeCheck> low_mode_interpolation(const Field& f, double delta,
                                                 const std::vector<double>& etas);

/// All functionals evaluated exactly as written for the run's dimension.
EnergyReport energies(const Decomposition& dec, const CoefficientSet& coeffs,
                      const EnergyConfig& cfg);

/// Residuals of the differential identities over a uniformly spaced series
/// (central differences in s; NaN at the endpoints).
struct IdentityResidualSeries {
    std::vector<double> s;
    std::vector<double> e0, e1, e2, e3, e4, e5;
    /// Largest finite |residual| of one identity.
    static double max_abs(const std::vector<double>& r);
};
IdentityResidualSeries identity_residuals(const std::vector<EnergyReport>& series, double ds);

/// First snapshot from which all quadratic forms are positive definite (s1)
/// and from which E5 >= E4/2 + alpha^2/4 holds onward (s2). NaN when never.
struct ThresholdReport {
    double s1 = std::numeric_limits<double>::quiet_NaN();
    double s2 = std::numeric_limits<double>::quiet_NaN();
    std::size_t s1_index = SIZE_MAX;
    std::size_t s2_index = SIZE_MAX;
};
ThresholdReport detect_thresholds(const std::vector<EnergyReport>& series);

} // namespace dwlab
