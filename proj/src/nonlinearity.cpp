#include "dwlab/nonlinearity.hpp"

#include <cmath>

namespace dwlab {

namespace {

inline double u_factor(double u, double p1, bool odd) {
    if (u == 0.0) return 0.0;
    const double mag = std::pow(std::abs(u), odd ? p1 - 1.0 : p1);
    return odd ? mag * u : mag;
}

} // namespace

double NonlinearityModel::at(double z1, double z2, double z3) const {
    if (n_ >= 2) {
        if (!has_power_) return 0.0;
        return coeff_ * u_factor(z1, p_, odd_);
    }
    double acc = 0.0;
    for (const NonlinearTerm1D& t : terms_) {
        double val = t.coeff * u_factor(z1, t.p1, t.odd);
        if (t.p2 == 1) val *= z2;
        if (t.p3 == 1) val *= z3;
        acc += val;
    }
    return acc;
}

NonlinearityReport validate(const NonlinearityModel& nl, const DampingModel& damping, int n,
                            double m) {
    NonlinearityReport rep;
    rep.margin = kRateCap;
    if (nl.empty()) return rep;
    if (nl.dimension() != n) {
        rep.issues.push_back({"dimension", "nonlinearity dimension does not match the run", true});
        return rep;
    }
    const double beta = damping.beta;
    if (n == 1) {
        int i = 0;
        for (const NonlinearTerm1D& t : nl.terms()) {
            const std::string tag = "term " + std::to_string(i++) + ": ";
            if (!(t.p1 > 1.0))
                rep.issues.push_back({"p1 > 1", tag + "u-exponent must exceed 1", true});
            if ((t.p2 != 0 && t.p2 != 1) || (t.p3 != 0 && t.p3 != 1))
                rep.issues.push_back({"p2, p3 in {0, 1}", tag + "derivative exponents must be 0 or 1", true});
            if (t.p2 + t.p3 > 1)
                rep.issues.push_back({"p2 + p3 <= 1", tag + "at most one derivative factor", true});
            double growth;
            if (t.p3 != 0 && beta == -1.0) {
                growth = kRateCap; // arbitrary large by convention
            } else {
                const double w3 = beta == -1.0 ? 3.0 : 3.0 - 2.0 * beta / (1.0 + beta);
                growth = t.p1 + 2.0 * t.p2 + w3 * t.p3 - 3.0;
            }
            if (!(growth > 0.0))
                rep.issues.push_back({"p1 + 2 p2 + (3 - 2 beta/(1+beta)) p3 > 3",
                                      tag + "growth condition fails (margin " + std::to_string(growth) + ")",
                                      false});
            rep.margin = std::min(rep.margin, growth);
        }
    } else {
        const double p = nl.power();
        if (!(p > 1.0))
            rep.issues.push_back({"p > 1", "power must exceed 1", true});
        if (n == 2 && !(p > 2.0))
            rep.issues.push_back({"2 < p", "supercritical power required for n = 2", false});
        if (n >= 3 && !(p > 1.0 + 2.0 / n && p <= double(n) / (n - 2)))
            rep.issues.push_back({"1 + 2/n < p <= n/(n-2)", "power outside the admissible range", false});
        rep.margin = std::min(rep.margin, 0.5 * n * (p - 1.0 - 2.0 / n) * 2.0);
        (void)m;
    }
    return rep;
}

Field eval_physical(const NonlinearityModel& nl, const Field& u, const std::vector<Field>& grad_u,
                    const Field& ut) {
    const Grid& g = u.grid();
    if (ut.grid() != g) throw ValidationError("eval_physical: grid mismatch");
    for (const Field& d : grad_u)
        if (d.grid() != g) throw ValidationError("eval_physical: grid mismatch");
    Field out(g);
    if (nl.empty()) return out;
    if (nl.dimension() >= 2) {
        const double c = nl.power_coeff();
        const double p = nl.power();
        const bool odd = nl.power_odd();
        for (std::size_t i = 0; i < u.size(); ++i) out[i] = c * u_factor(u[i], p, odd);
        return out;
    }
    if (nl.needs_gradient() && grad_u.empty())
        throw ValidationError("eval_physical: gradient required but not supplied");
    const Field* ux = grad_u.empty() ? nullptr : &grad_u[0];
    for (const NonlinearTerm1D& t : nl.terms()) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            double val = t.coeff * u_factor(u[i], t.p1, t.odd);
            if (t.p2 == 1) val *= (*ux)[i];
            if (t.p3 == 1) val *= ut[i];
            out[i] += val;
        }
    }
    return out;
}

Field eval_scaled(const NonlinearityModel& nl, const DampingModel& damping, double s,
                  const Field& v, const std::vector<Field>& grad_v, const Field& w,
                  bool* underflow) {
    if (s < 0.0) throw ValidationError("eval_scaled: s must be nonnegative");
    const Grid& g = v.grid();
    const int n = g.n;
    Field out(g);
    if (underflow) *underflow = false;
    if (nl.empty()) return out;

    // log b(t(s)), stable for beta = -1
    const double sigma = std::expm1(s);
    const double log_1pt = damping.beta == -1.0
                               ? damping.mu * sigma
                               : std::log1p(damping.mu * (1.0 + damping.beta) * sigma) / (1.0 + damping.beta);
    const double log_b = std::log(damping.mu) - damping.beta * log_1pt;

    auto scale_for = [&](double p1, int p2, int p3) {
        const double exps = 0.5 * s * ((n + 2) - n * p1 - (n + 1) * p2 - (n + 2) * p3);
        const double logS = exps - p3 * log_b;
        if (logS < -745.0) {
            if (underflow && p3 != 0 && damping.beta == -1.0) *underflow = true;
            return 0.0;
        }
        return std::exp(logS);
    };

    if (n >= 2) {
        const double S = scale_for(nl.power(), 0, 0);
        const double c = nl.power_coeff();
        const double p = nl.power();
        const bool odd = nl.power_odd();
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = S * c * u_factor(v[i], p, odd);
        return out;
    }
    if (nl.needs_gradient() && grad_v.empty())
        throw ValidationError("eval_scaled: gradient required but not supplied");
    const Field* vy = grad_v.empty() ? nullptr : &grad_v[0];
    for (const NonlinearTerm1D& t : nl.terms()) {
        const double S = scale_for(t.p1, t.p2, t.p3);
        if (S == 0.0) continue;
        for (std::size_t i = 0; i < v.size(); ++i) {
            double val = S * t.coeff * u_factor(v[i], t.p1, t.odd);
            if (t.p2 == 1) val *= (*vy)[i];
            if (t.p3 == 1) val *= w[i];
            out[i] += val;
        }
    }
    return out;
}

} // namespace dwlab
