#pragma once

#include <vector>

#include "dwlab/dynamics.hpp"

namespace dwlab {

/// Gaussian-mode decomposition of one scaled snapshot:
///   v = alpha phi0 + f,   w = dalpha phi0 + alpha psi0 + g,
/// with the source fields r (scaled equation) and h (remainder equation).
struct Decomposition {
    double s = 0.0;
    double alpha = 0.0;
    double dalpha = 0.0;
    Field f;
    Field g;
    Field r;
    Field h;
    double int_r = 0.0;      // quadrature of r
    double mean_f_raw = 0.0; // integral of f before the zero-mode correction
    double mean_g_raw = 0.0;
    double mean_h = 0.0;     // integral of h (checked, not corrected)
    double nl_norm = 0.0;    // scaled nonlinearity in H^{0,m} (m per run; H^{0,1} when n=1)
    ScaledWeights weights;
    bool underflow = false;
};

/// alpha(s) = integral of v; dalpha/ds = integral of w (exact identity).
double alpha_of(const Field& v);
double dalpha_of(const Field& w);

/// The source r(s, y) of the scaled system: drag w + e^{s/2} c(t(s)).grad v
/// + e^s d(t(s)) v + scaled nonlinearity.
Field scaled_source_r(double s, const Field& v, const Field& w, const CoefficientSet& coeffs,
                      const NonlinearityModel& nl, bool* underflow = nullptr);

/// Full decomposition with zero-mean enforcement on f and g (the residual
/// quadrature mean is removed from the zero mode; magnitudes are recorded).
Decomposition split(const ScaledState& st, const CoefficientSet& coeffs,
                    const NonlinearityModel& nl, double m_weight);

/// Residual of eps alpha'' = eps alpha' - alpha' + int r with alpha'' from
/// central differences of the exact dalpha series. Endpoints carry NaN.
std::vector<double> alpha_ode_residual(const std::vector<Decomposition>& series, double ds);

} // namespace dwlab
