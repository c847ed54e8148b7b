#pragma once

#include <memory>
#include <vector>

#include "mildeig/lattice.hpp"

namespace mildeig {

enum class SemigroupKind { SpectralHeat, MatrixExpOracle };

const char* to_string(SemigroupKind kind);

/// Diagnostics for the semigroup axioms on sampled data.
struct AxiomReport {
    double composition_defect = 0.0;   // worst ||U(t+s)v - U(t)U(s)v|| / max(1, ||v||)
    double positivity_violation = 0.0; // worst negative excursion of U(t)v, v >= 0
    double continuity_modulus = 0.0;   // worst ||U(t_min)v - v|| / ||v|| as t -> 0
    double continuity_time = 0.0;      // the t_min probed
    bool identity_exact = false;       // apply(0, v) == v bitwise
    double tolerance = 0.0;
    bool pass = false;
};

/// Evaluatable positive compact C0-semigroup for the Dirichlet Laplacian on
/// [0, L], restricted to the interior grid.
///
/// Two backends share one contract: SpectralHeat expands in discrete sine
/// modes and applies the exact per-mode decay exp(-(k*pi/L)^2 t);
/// MatrixExpOracle holds the dense Laplacian assembled in the sine basis and
/// evaluates U(t) = expm(t*A) by Pade-13 scaling-and-squaring, caching the
/// propagator per distinct t. Each backend serves as the other's oracle.
class SemigroupHandle {
public:
    static SemigroupHandle spectral_heat(double length, int n);
    static SemigroupHandle matrix_exp_oracle(double length, int n);
    static SemigroupHandle make(SemigroupKind kind, double length, int n);

    SemigroupKind kind() const;
    double length() const;
    int size() const;

    /// Growth-bound metadata ||U(t)|| <= growth_m * exp(growth_delta * t).
    double growth_m() const;
    double growth_delta() const;
    /// Current bound on sup_{t in [0,1]} ||U(t)||; estimate_d raises it if a
    /// larger sample is seen.
    double bound_d() const;

    /// Evaluate U(t)v. apply(0, v) returns v bitwise. Throws NegativeTime for
    /// t < 0 and DimensionMismatch when v does not match the lattice.
    GridFunction apply(double t, const GridFunction& v) const;

    /// Sample the (U1)-(U3) axioms and positivity; `samples` composition
    /// triples and 5*samples positivity draws at t in {0.01, 0.1, 1}.
    AxiomReport check_axioms(int samples, double tol, unsigned long seed = 20240601ul) const;

    /// Max of ||U(t)v||_sup over a deterministic t-grid on [0,1] (endpoints
    /// included) and random unit-sup-norm v. Raises bound_d when exceeded.
    double estimate_d(int samples, unsigned long seed = 20240602ul);

    /// Per-mode amplification factors of U(t) — the finite-dimensional proxy
    /// for compactness (H1): factors decay in the mode index. A proxy only;
    /// compactness proper is not testable on a finite grid.
    std::vector<double> amplification_factors(double t) const;

private:
    struct Impl;
    SemigroupHandle(std::shared_ptr<Impl> impl);
    std::shared_ptr<Impl> impl_;
};

}  // namespace mildeig
