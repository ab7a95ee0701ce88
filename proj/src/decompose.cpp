#include "dwlab/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dwlab {

double alpha_of(const Field& v) { return integrate(v); }
double dalpha_of(const Field& w) { return integrate(w); }

namespace {

void remove_mean(Field& f, double* raw_integral) {
    const double I = integrate(f);
    if (raw_integral) *raw_integral = I;
    const Grid& g = f.grid();
    const double c = I / std::pow(2.0 * g.L, g.n);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] -= c;
}

} // namespace

Field scaled_source_r(double s, const Field& v, const Field& w, const CoefficientSet& coeffs,
                      const NonlinearityModel& nl, bool* underflow) {
    const Grid& g = v.grid();
    const ScaledWeights sw = scaled_weights(coeffs.damping, s);
    if (underflow) *underflow = sw.underflow;

    Field r(g);
    if (sw.drag != 0.0) r += sw.drag * w;

    const double t = t_of_s(coeffs.damping, s);
    const std::vector<double> c = std::isinf(t) ? std::vector<double>(g.n, 0.0) : coeffs.c_of_t(t);
    const double d = std::isinf(t) ? 0.0 : coeffs.d_of_t(t);
    const bool c_active = int(c.size()) == g.n &&
                          std::any_of(c.begin(), c.end(), [](double a) { return a != 0.0; });

    std::vector<Field> grad_v;
    if (c_active || nl.needs_gradient()) grad_v = gradient(v);
    if (c_active) {
        const double e_half_s = std::exp(0.5 * s);
        for (int a = 0; a < g.n; ++a)
            if (c[a] != 0.0) r += (e_half_s * c[a]) * grad_v[a];
    }
    if (d != 0.0) r += (std::exp(s) * d) * v;

    if (!nl.empty()) {
        bool nl_underflow = false;
        r += eval_scaled(nl, coeffs.damping, s, v, grad_v, w, &nl_underflow);
        if (underflow) *underflow = *underflow || nl_underflow;
    }
    return r;
}

Decomposition split(const ScaledState& st, const CoefficientSet& coeffs,
                    const NonlinearityModel& nl, double m_weight) {
    const Grid& g = st.v.grid();
    Decomposition d;
    d.s = st.s;
    d.weights = scaled_weights(coeffs.damping, st.s);
    d.underflow = d.weights.underflow;
    d.alpha = alpha_of(st.v);
    d.dalpha = dalpha_of(st.w);

    const Field phi0 = gaussian_phi0(g);
    const Field psi0 = gaussian_psi0(g);

    d.f = st.v - d.alpha * phi0;
    remove_mean(d.f, &d.mean_f_raw);
    d.g = st.w - d.dalpha * phi0 - d.alpha * psi0;
    remove_mean(d.g, &d.mean_g_raw);

    bool r_underflow = false;
    d.r = scaled_source_r(st.s, st.v, st.w, coeffs, nl, &r_underflow);
    d.underflow = d.underflow || r_underflow;
    d.int_r = integrate(d.r);

    if (!nl.empty()) {
        std::vector<Field> grad_v;
        if (nl.needs_gradient()) grad_v = gradient(st.v);
        const Field nlterm = eval_scaled(nl, coeffs.damping, st.s, st.v, grad_v, st.w);
        d.nl_norm = weighted_norm(nlterm, 0, g.n == 1 ? 1.0 : m_weight);
    }

    // h = eps (-2 dalpha psi0 + alpha ((y/2).grad psi0 + (n/2+1) psi0)) + r - (int r) phi0
    Field mode_part(g);
    {
        std::vector<Field> grad_psi0;
        for (int a = 0; a < g.n; ++a) grad_psi0.push_back(gaussian_psi0_gradient(g, a));
        const double a0 = 0.5 * g.n + 1.0;
        if (g.n == 1) {
            for (int j = 0; j < g.N; ++j)
                mode_part[j] = -2.0 * d.dalpha * psi0[j] +
                               d.alpha * (0.5 * g.coord(j) * grad_psi0[0][j] + a0 * psi0[j]);
        } else {
            for (int i0 = 0; i0 < g.N; ++i0)
                for (int i1 = 0; i1 < g.N; ++i1) {
                    const std::size_t idx = std::size_t(i0) * g.N + i1;
                    const double ydg = 0.5 * (g.coord(i0) * grad_psi0[0][idx] +
                                              g.coord(i1) * grad_psi0[1][idx]);
                    mode_part[idx] = -2.0 * d.dalpha * psi0[idx] + d.alpha * (ydg + a0 * psi0[idx]);
                }
        }
    }
    d.h = d.weights.eps * mode_part + d.r - d.int_r * phi0;
    d.mean_h = integrate(d.h);
    return d;
}

std::vector<double> alpha_ode_residual(const std::vector<Decomposition>& series, double ds) {
    const std::size_t K = series.size();
    if (K < 3) throw ValidationError("alpha_ode_residual: need at least 3 snapshots");
    for (std::size_t k = 1; k < K; ++k) {
        const double gap = series[k].s - series[k - 1].s;
        if (std::abs(gap - ds) > 1e-9 * std::max(1.0, std::abs(ds)))
            throw ValidationError("alpha_ode_residual: snapshot spacing is not uniform");
    }
    std::vector<double> res(K, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 1; k + 1 < K; ++k) {
        const double ddalpha = (series[k + 1].dalpha - series[k - 1].dalpha) / (2.0 * ds);
        const double eps = series[k].weights.eps;
        res[k] = eps * ddalpha - (eps * series[k].dalpha - series[k].dalpha + series[k].int_r);
    }
    return res;
}

} // namespace dwlab
