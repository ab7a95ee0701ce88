#pragma once

#include <string>
#include <vector>

#include "dwlab/coeffs.hpp"
#include "dwlab/field.hpp"

namespace dwlab {

/// One monomial term for n = 1:
///   coeff * U(u) * (u_x)^{p2} * (u_t)^{p3},
/// where U(u) = |u|^{p1-1} u (odd = true) or |u|^{p1} (odd = false), and the
/// derivative factors enter signed. p2, p3 are 0 or 1 with p2 + p3 <= 1.
struct NonlinearTerm1D {
    double coeff = 0.0;
    double p1 = 2.0;
    int p2 = 0;
    int p3 = 0;
    bool odd = true;
};

/// Admissible nonlinearities: a sum of monomials (n = 1) or a single power
/// coeff * |u|^{p-1} u / coeff * |u|^p (n >= 2).
class NonlinearityModel {
public:
    static NonlinearityModel none(int n) { return NonlinearityModel(n); }
    static NonlinearityModel monomials(std::vector<NonlinearTerm1D> terms) {
        NonlinearityModel m(1);
        m.terms_ = std::move(terms);
        return m;
    }
    static NonlinearityModel power(int n, double coeff, double p, bool odd) {
        NonlinearityModel m(n);
        m.has_power_ = true;
        m.coeff_ = coeff;
        m.p_ = p;
        m.odd_ = odd;
        return m;
    }

    int dimension() const { return n_; }
    bool empty() const { return n_ == 1 ? terms_.empty() : !has_power_; }
    const std::vector<NonlinearTerm1D>& terms() const { return terms_; }
    double power() const { return p_; }
    double power_coeff() const { return coeff_; }
    bool power_odd() const { return odd_; }
    bool needs_gradient() const {
        for (const auto& t : terms_)
            if (t.p2 != 0) return true;
        return false;
    }
    bool needs_velocity() const {
        for (const auto& t : terms_)
            if (t.p3 != 0) return true;
        return false;
    }

    /// N(z1, z2, z3) at a single point (z2 ignored for n >= 2 models).
    double at(double z1, double z2, double z3) const;

private:
    explicit NonlinearityModel(int n) : n_(n) {}
    int n_ = 1;
    std::vector<NonlinearTerm1D> terms_;
    bool has_power_ = false;
    double coeff_ = 0.0;
    double p_ = 3.0;
    bool odd_ = true;
};

struct NonlinearityIssue {
    std::string constraint; // the violated inequality, e.g. "p1 > 1"
    std::string message;
    bool hard = false; // structural failure vs. growth-condition failure
};

struct NonlinearityReport {
    std::vector<NonlinearityIssue> issues;
    double margin = 0.0; // slack of the binding growth condition
    bool pass() const { return issues.empty(); }
    bool hard_fail() const {
        for (const auto& i : issues)
            if (i.hard) return true;
        return false;
    }
};

/// Check the admissibility conditions term by term. Growth-condition
/// violations are soft (deliberate blow-up experiments run anyway); structural
/// ones are hard.
NonlinearityReport validate(const NonlinearityModel& nl, const DampingModel& damping, int n,
                            double m);

/// Pointwise N(u, grad u, u_t) on a shared grid.
Field eval_physical(const NonlinearityModel& nl, const Field& u, const std::vector<Field>& grad_u,
                    const Field& ut);

/// Scaled-frame combination e^{(n+2)s/2} N(e^{-ns/2} v, e^{-(n+1)s/2} grad v,
/// b(t(s))^{-1} e^{-(n+2)s/2} w). Scale factors are folded per term so the
/// evaluation stays finite for large s. Sets *underflow when the beta = -1
/// velocity prefactor has collapsed to zero.
Field eval_scaled(const NonlinearityModel& nl, const DampingModel& damping, double s,
                  const Field& v, const std::vector<Field>& grad_v, const Field& w,
                  bool* underflow = nullptr);

} // namespace dwlab
