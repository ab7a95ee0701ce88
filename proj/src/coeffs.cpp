#include "dwlab/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dwlab/nonlinearity.hpp"

namespace dwlab {

namespace {

// log(1 + t(s)) computed without forming t(s); safe for beta = -1.
double log_1pt_of_s(const DampingModel& m, double s) {
    const double sigma = std::expm1(s); // B(t) = e^s - 1
    if (m.beta == -1.0) return m.mu * sigma;
    return std::log1p(m.mu * (1.0 + m.beta) * sigma) / (1.0 + m.beta);
}

double log_b_of_s(const DampingModel& m, double s) {
    return std::log(m.mu) - m.beta * log_1pt_of_s(m, s);
}

} // namespace

std::vector<double> CoefficientSet::c_of_t(double t) const {
    std::vector<double> out(pert.c_amp);
    const double decay = std::pow(1.0 + t, -pert.gamma);
    for (double& a : out) a *= decay;
    return out;
}

double CoefficientSet::d_of_t(double t) const {
    return pert.d_amp * std::pow(1.0 + t, -pert.nu);
}

double b_of_t(const DampingModel& m, double t) {
    if (t < 0.0) throw ValidationError("b_of_t: t must be nonnegative");
    return m.mu * std::pow(1.0 + t, -m.beta);
}

double db_dt(const DampingModel& m, double t) {
    if (t < 0.0) throw ValidationError("db_dt: t must be nonnegative");
    return -m.beta * m.mu * std::pow(1.0 + t, -m.beta - 1.0);
}

double B_of_t(const DampingModel& m, double t) {
    if (t < 0.0) throw ValidationError("B_of_t: t must be nonnegative");
    if (m.beta == -1.0) return std::log1p(t) / m.mu;
    return (std::pow(1.0 + t, 1.0 + m.beta) - 1.0) / (m.mu * (1.0 + m.beta));
}

double t_of_s(const DampingModel& m, double s) {
    if (s < 0.0) throw ValidationError("t_of_s: s must be nonnegative");
    const double sigma = std::expm1(s);
    if (m.beta == -1.0) return std::expm1(m.mu * sigma);
    return std::expm1(std::log1p(m.mu * (1.0 + m.beta) * sigma) / (1.0 + m.beta));
}

double s_of_t(const DampingModel& m, double t) {
    return std::log1p(B_of_t(m, t));
}

ScaledWeights scaled_weights(const DampingModel& m, double s) {
    if (s < 0.0) throw ValidationError("scaled_weights: s must be nonnegative");
    ScaledWeights w;
    const double log_b = log_b_of_s(m, s);
    const double log_eps = -s - 2.0 * log_b;
    w.eps = log_eps < -745.0 ? 0.0 : std::exp(log_eps);
    if (m.beta == 0.0) {
        w.drag = 0.0;
    } else {
        // (db/dt)/b^2 = -beta / (b (1+t))
        const double log_mag = std::log(std::abs(m.beta)) - log_b - log_1pt_of_s(m, s);
        const double mag = log_mag < -745.0 ? 0.0 : std::exp(log_mag);
        w.drag = m.beta > 0.0 ? -mag : mag;
    }
    if (m.beta == -1.0 && w.eps < kWeightUnderflowFloor) w.underflow = true;
    return w;
}

double rate_lambda0(const DampingModel& damping, const PerturbationModel& pert) {
    const double beta = damping.beta;
    const bool capped = beta == -1.0;
    double out = capped ? kRateCap : (1.0 - beta) / (1.0 + beta);
    if (!pert.c_is_zero())
        out = std::min(out, capped ? kRateCap : pert.gamma / (1.0 + beta) - 0.5);
    if (pert.d_amp != 0.0)
        out = std::min(out, capped ? kRateCap : pert.nu / (1.0 + beta) - 1.0);
    return std::min(out, kRateCap);
}

double rate_lambda1(int n, const NonlinearityModel& nl, double beta) {
    if (nl.empty()) return kRateCap;
    if (n == 1) {
        double worst = std::numeric_limits<double>::infinity();
        for (const NonlinearTerm1D& t : nl.terms()) {
            if (t.p3 != 0 && beta == -1.0) continue; // arbitrary large by convention
            const double p3_weight = 3.0 - 2.0 * beta / (1.0 + beta);
            worst = std::min(worst, t.p1 + 2.0 * t.p2 + p3_weight * t.p3 - 3.0);
        }
        if (!std::isfinite(worst)) return kRateCap;
        return std::min(0.5 * worst, kRateCap);
    }
    return std::min(0.5 * n * (nl.power() - 1.0 - 2.0 / n), kRateCap);
}

RateSet rate_lambda(int n, double m, double eta, double lambda0, double lambda1) {
    if (n == 1) {
        if (m != 1.0) throw ValidationError("rate_lambda: m must equal 1 when n = 1");
    } else {
        if (!(m > 0.5 * n + 1.0)) throw ValidationError("rate_lambda: m must exceed n/2 + 1 when n >= 2");
    }
    if (!(eta > 0.0)) throw ValidationError("rate_lambda: eta must be positive");
    RateSet r;
    r.lambda0 = lambda0;
    r.lambda1 = lambda1;
    r.eta = eta;
    r.lambda = std::min({0.5, 0.5 * m - 0.25 * n, lambda0, lambda1}) - eta;
    r.exponent = 0.25 * n + r.lambda;
    return r;
}

namespace quadrature {

namespace {
double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                double m, double fm, double whole, double eps, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth - 1);
}
} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    const double whole = simpson(a, fa, b, fb, fm);
    const double eps = rel_tol * std::max(std::abs(whole), 1e-30);
    return adaptive(f, a, fa, b, fb, m, fm, whole, eps, 48);
}

double bisect(const std::function<double(double)>& g, double lo, double hi, double rel_tol) {
    double glo = g(lo);
    if (glo == 0.0) return lo;
    if (g(hi) == 0.0) return hi;
    if (glo * g(hi) > 0.0) throw InternalError("bisect: endpoints do not bracket a root");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if (glo * gm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            glo = gm;
        }
        if (hi - lo <= rel_tol * std::max(1.0, std::abs(mid))) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace quadrature

} // namespace dwlab
