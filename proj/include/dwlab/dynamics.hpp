#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "dwlab/coeffs.hpp"
#include "dwlab/field.hpp"
#include "dwlab/nonlinearity.hpp"

namespace dwlab {

/// Physical-frame snapshot (t, u, u_t).
struct PhysicalState {
    double t = 0.0;
    Field u;
    Field p; // u_t
};

/// Scaled-frame snapshot (s, v, w).
struct ScaledState {
    double s = 0.0;
    Field v;
    Field w;
};

enum class DataFamily { GaussianBump, OffCenterBump, RandomBandLimited, Dipole };

DataFamily data_family_from_string(const std::string& name);
std::string to_string(DataFamily f);

/// Initial data (u, u_t)(0) = epsilon (u0, u1) from a named family; the family
/// and seed fully determine the generated fields.
struct InitialData {
    DataFamily family = DataFamily::GaussianBump;
    std::uint64_t seed = 1;
    double epsilon = 0.1;
};

PhysicalState make_initial_state(const Grid& g, const InitialData& data);

struct StepControl {
    double cfl = 0.4;          // against unit wave speed
    double dt_max = 0.5;
    double blowup_ceiling = 1e6;
};

/// Right side of the first-order system: du = p,
/// dp = Lap u + c(t).grad u + d(t) u + N(u, grad u, p) - b(t) p,
/// with 2/3-rule dealiasing on the nonlinear product.
std::pair<Field, Field> rhs_physical(const PhysicalState& st, const CoefficientSet& coeffs,
                                     const NonlinearityModel& nl);

/// One classical 4-stage step. Throws BlowUpError past the amplitude ceiling.
void rk4_step(PhysicalState& st, double dt, const CoefficientSet& coeffs,
              const NonlinearityModel& nl, double blowup_ceiling);

/// Step size respecting the CFL bound, the damping cap 0.5/b, and dt_max,
/// using the larger of b at the interval endpoints.
double stable_dt(const CoefficientSet& coeffs, const Grid& g, double t0, double t1,
                 const StepControl& ctl);

/// Advance to exactly t_target with uniform substeps of at most the stable dt.
void advance_to(PhysicalState& st, double t_target, const CoefficientSet& coeffs,
                const NonlinearityModel& nl, const StepControl& ctl);

struct ResampleInfo {
    bool bandwidth_warning = false; // stretched sampling under-resolves the source
    double tail_spectral_fraction = 0.0;
    double clipped_fraction = 0.0;  // targets outside the source domain, zero-filled
};

/// v(s, y) = e^{ns/2} u(t, e^{s/2} y), w = b(t) e^{(n+2)s/2} u_t(t, e^{s/2} y),
/// s = log(B(t)+1), by trigonometric interpolation onto the fixed y-grid.
ScaledState to_scaled(const PhysicalState& st, const DampingModel& damping,
                      ResampleInfo* info = nullptr);
PhysicalState from_scaled(const ScaledState& st, const DampingModel& damping);

/// Scaled-frame right side; valid when eps_s is above the stiffness floor.
/// dv = (y/2).grad v + (n/2) v + w,
/// dw = [Lap v + r - w]/eps_s + (y/2).grad w + (n/2+1) w.
std::pair<Field, Field> rhs_scaled(const ScaledState& st, const CoefficientSet& coeffs,
                                   const NonlinearityModel& nl);

struct ScaledRunInfo {
    bool dae_used = false; // parabolic-limit mode was entered
    long steps = 0;
};

/// Advance the scaled system to s_target. Below the stiffness floor the
/// velocity equation degenerates to the algebraic limit w = Lap v + r.
ScaledRunInfo advance_scaled_to(ScaledState& st, double s_target, const CoefficientSet& coeffs,
                                const NonlinearityModel& nl, double stiffness_floor = 1e-8);

} // namespace dwlab
