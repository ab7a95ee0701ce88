#pragma once

#include <functional>
#include <vector>

#include "dwlab/errors.hpp"

namespace dwlab {

/// Sentinel standing in for "arbitrary large number" in the rate formulas.
constexpr double kRateCap = 1e6;
/// Below this, scaled-frame weights for beta = -1 are flagged as underflowed.
constexpr double kWeightUnderflowFloor = 1e-15;

/// Damping coefficient b(t) = mu (1+t)^{-beta}, beta in [-1, 1), mu > 0.
struct DampingModel {
    double beta = 0.0;
    double mu = 1.0;

    DampingModel() = default;
    DampingModel(double beta_, double mu_) : beta(beta_), mu(mu_) { validate(); }
    void validate() const {
        if (!(beta >= -1.0 && beta < 1.0)) throw ValidationError("damping: beta must lie in [-1, 1)");
        if (!(mu > 0.0)) throw ValidationError("damping: mu must be positive");
    }
};

/// Lower-order perturbation coefficients c(t) = c_amp (1+t)^{-gamma} and
/// d(t) = d_amp (1+t)^{-nu}.
struct PerturbationModel {
    std::vector<double> c_amp; // one component per space dimension
    double gamma = 1.0;
    double d_amp = 0.0;
    double nu = 2.0;

    bool c_is_zero() const {
        for (double a : c_amp)
            if (a != 0.0) return false;
        return true;
    }
    /// Decay-exponent conditions against the paired damping; throws on violation
    /// when the corresponding amplitude is nonzero.
    void validate(const DampingModel& damping) const {
        if (!c_is_zero() && !(gamma > 0.5 * (1.0 + damping.beta)))
            throw ValidationError("perturbation: gamma must exceed (1+beta)/2");
        if (d_amp != 0.0 && !(nu > 1.0 + damping.beta))
            throw ValidationError("perturbation: nu must exceed 1+beta");
    }
};

struct CoefficientSet {
    DampingModel damping;
    PerturbationModel pert;

    std::vector<double> c_of_t(double t) const;
    double d_of_t(double t) const;
};

/// Predicted decay-rate constants for the Gaussian-profile convergence.
struct RateSet {
    double lambda0 = kRateCap;
    double lambda1 = kRateCap;
    double lambda = 0.0;
    double eta = 0.01;
    double exponent = 0.0; // predicted L2 decay exponent n/4 + lambda
    double cap_value = kRateCap;
};

/// Scaled-frame coefficients at scaled time s.
struct ScaledWeights {
    double eps = 0.0;  // e^{-s} / b(t(s))^2
    double drag = 0.0; // b(t(s))^{-2} (db/dt)(t(s))
    bool underflow = false;
};

double b_of_t(const DampingModel& m, double t);
double db_dt(const DampingModel& m, double t);
/// B(t) = int_0^t d tau / b(tau), in closed form for the power-law family.
double B_of_t(const DampingModel& m, double t);
/// Inverse of B(t) + 1 = e^s; exact closed form for the power-law family.
double t_of_s(const DampingModel& m, double s);
double s_of_t(const DampingModel& m, double t);
ScaledWeights scaled_weights(const DampingModel& m, double s);

class NonlinearityModel; // nonlinearity.hpp

double rate_lambda0(const DampingModel& damping, const PerturbationModel& pert);
double rate_lambda1(int n, const NonlinearityModel& nl, double beta);
/// lambda = min{1/2, m/2 - n/4, lambda0, lambda1} - eta, plus the predicted
/// exponent n/4 + lambda. Throws if m is outside the admissible range.
RateSet rate_lambda(int n, double m, double eta, double lambda0, double lambda1);

namespace quadrature {
/// Adaptive Simpson integral of f over [a, b] to relative tolerance rel_tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-10);
/// Bisection root of a monotone function g on [lo, hi] to relative tolerance.
double bisect(const std::function<double(double)>& g, double lo, double hi,
              double rel_tol = 1e-12);
} // namespace quadrature

} // namespace dwlab
