#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mildeig/problem.hpp"

namespace mildeig {

enum class InitialGuessKind { SineProfile, RandomCone, UserSupplied };

const char* to_string(InitialGuessKind kind);

struct SolverConfig {
    double rho = 1.0;
    int max_iters = 500;
    double tol_rel = 1e-8;      // step-difference stop, relative to rho
    double damping = 1.0;       // theta in (0, 1]
    InitialGuessKind initial_guess = InitialGuessKind::SineProfile;
    unsigned long seed = 0;
    std::optional<Trajectory> user_guess;
};

struct IterationRecord {
    double step_diff;  // ||z_{k+1} - z_k||_C
    double t_norm;     // ||T(z_k)||_C
};

/// Residual-backed eigenpair certificate: the verifiable stand-in for the
/// existence statement the solver chases.
struct EigenpairCertificate {
    double lambda = 0.0;
    double rho = 0.0;
    Trajectory y;
    double residual_rel = 0.0;  // ||y - lambda T(y)||_C / rho
    int iterations = 0;
    bool converged = false;
    std::vector<IterationRecord> history;
    HypothesisReport hypothesis_report;
};

/// Called with every accepted iterate (including the initial guess); used by
/// tests to pin iterates to the cone boundary sphere.
using IterateObserver = std::function<void(int iteration, const Trajectory& z)>;

/// Normalized cone fixed-point (Picard) iteration for y = lambda T(y) on the
/// boundary sphere norm_C = rho:
///   w = T(z_k);  z' = rho w / ||w||_C;
///   z_{k+1} = rescale_to_rho((1 - theta) z_k + theta z').
/// Stops on step difference; lambda = rho / ||T(y)||_C at the final iterate;
/// convergence is certified only when the independently recomputed residual
/// also meets 10 * tol_rel. Throws NoMass when ||T(z)||_C <= 1e-14 rho.
EigenpairCertificate solve(const ProblemInstance& p, const SolverConfig& cfg,
                           const IterateObserver& observer = {});

struct SweepEntry {
    double rho = 0.0;
    std::optional<EigenpairCertificate> certificate;  // absent on hard errors
    std::string error;                                // NoMass / ConeViolation text
};

/// Independent solves per rho; never aborts early, per-entry errors recorded.
/// With warm_start the previous eigenfunction (rescaled) seeds the next solve.
std::vector<SweepEntry> sweep(const ProblemInstance& p, const std::vector<double>& rhos,
                              const SolverConfig& cfg, bool warm_start = false);

/// Recompute the residual over a fully independent path (TrapezoidDirect +
/// MatrixExpOracle) and re-assert cone membership and the norm pinning.
bool verify_certificate(const ProblemInstance& p, const EigenpairCertificate& cert,
                        double strict_tol);

}  // namespace mildeig
