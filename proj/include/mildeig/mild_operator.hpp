#pragma once

#include <functional>

#include "mildeig/lattice.hpp"
#include "mildeig/semigroup.hpp"

namespace mildeig {

/// Two evaluation routes for the Duhamel quadrature. Both implement the same
/// endpoint-corrected composite trapezoid rule (weights 5/12, 13/12, 1, ...,
/// 1, 13/12, 5/12; plain trapezoid on a single interval); the recurrence
/// propagates partial sums with O(m) semigroup applications, the direct route
/// sums O(m^2) propagated terms and serves as the internal cross-check.
enum class QuadratureRoute { TrapezoidRecurrence, TrapezoidDirect };

const char* to_string(QuadratureRoute route);

struct MildConfig {
    QuadratureRoute quadrature = QuadratureRoute::TrapezoidRecurrence;
    int m = 64;  // time steps, must match the trajectories handled (m >= 2)
};

/// f(t, .) evaluated on a spatial profile.
using TimeSliceFn = std::function<GridFunction(double, const GridFunction&)>;
/// Nonlocal operator B applied to a whole trajectory.
using NonlocalFn = std::function<GridFunction(const Trajectory&)>;

/// Quadrature weight of sample i in the corrected-trapezoid rule over nodes
/// 0..j (exposed for tests and for the hypothesis checker).
double duhamel_weight(int i, int j);

/// Hy(t_j) = U(t_j) B(y); node 0 equals B(y) exactly.
Trajectory apply_h(const SemigroupHandle& u, const NonlocalFn& b, const Trajectory& y);

/// Gy(t_j) ~= integral_0^{t_j} U(t_j - s) f(s, y(s)) ds; node 0 is zero.
Trajectory apply_g(const SemigroupHandle& u, const TimeSliceFn& f, const Trajectory& y,
                   const MildConfig& cfg);

/// Ty = Hy + Gy, clamped to the cone nodewise (ConeViolation beyond tolerance).
Trajectory apply_t(const SemigroupHandle& u, const NonlocalFn& b, const TimeSliceFn& f,
                   const Trajectory& y, const MildConfig& cfg, const ConeTolerance& tol);

/// Discrete defect of the mild eigen-equation: ||y - lambda*T(y)||_C.
double mild_residual(const SemigroupHandle& u, const NonlocalFn& b, const TimeSliceFn& f,
                     const Trajectory& y, double lambda, const MildConfig& cfg,
                     const ConeTolerance& tol);

/// Max nodewise sup-distance between the two quadrature routes on the same
/// data. Throws QuadratureMismatch when a tolerance is given and exceeded.
double cross_validate_quadratures(const SemigroupHandle& u, const TimeSliceFn& f,
                                  const Trajectory& y, const MildConfig& cfg,
                                  double tol = -1.0);

}  // namespace mildeig
