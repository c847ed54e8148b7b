#include "mildeig/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mildeig {

namespace {

Trajectory rescale_to_rho(Trajectory z, double rho) {
    const double nz = norm_c(z);
    if (nz <= 0.0) throw NoMass("iterate has no mass to rescale");
    z *= rho / nz;
    return z;
}

Trajectory initial_guess(const ProblemInstance& p, const SolverConfig& cfg) {
    switch (cfg.initial_guess) {
        case InitialGuessKind::SineProfile: {
            GridFunction mode = GridFunction::sample(
                p.length, p.n,
                [&](double x) { return std::sin(std::numbers::pi * x / p.length); });
            return rescale_to_rho(Trajectory::constant(mode, p.m), cfg.rho);
        }
        case InitialGuessKind::RandomCone: {
            std::mt19937_64 rng(cfg.seed);
            return random_boundary_trajectory(p.length, p.n, p.m, cfg.rho, rng);
        }
        case InitialGuessKind::UserSupplied: {
            if (!cfg.user_guess) throw ValidationError("user-supplied guess is missing");
            const Trajectory& guess = *cfg.user_guess;
            if (guess.steps() != p.m || guess.space_size() != p.n || guess.length() != p.length)
                throw ValidationError("user-supplied guess does not match the lattice");
            if (is_in_cone(guess, p.cone_tol).status == ConeStatus::Outside)
                throw ValidationError("user-supplied guess is outside the cone");
            return rescale_to_rho(clamp_to_cone(guess, p.cone_tol), cfg.rho);
        }
    }
    throw Error("unreachable initial guess kind");
}

}  // namespace

const char* to_string(InitialGuessKind kind) {
    switch (kind) {
        case InitialGuessKind::SineProfile: return "SineProfile";
        case InitialGuessKind::RandomCone: return "RandomCone";
        case InitialGuessKind::UserSupplied: return "UserSupplied";
    }
    return "?";
}

EigenpairCertificate solve(const ProblemInstance& p, const SolverConfig& cfg,
                           const IterateObserver& observer) {
    if (!(cfg.rho > 0.0)) throw ValidationError("rho must be positive");
    if (!(cfg.damping > 0.0 && cfg.damping <= 1.0))
        throw ValidationError("damping must lie in (0, 1]");
    if (cfg.max_iters < 1) throw ValidationError("max_iters must be positive");

    const double rho = cfg.rho;
    ProblemInstance inst = p;
    inst.certificate.rho = rho;

    Trajectory z = initial_guess(inst, cfg);
    if (observer) observer(0, z);

    std::vector<IterationRecord> history;
    bool step_converged = false;
    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        Trajectory w = inst.apply_t_op(z, rho);
        const double nu = norm_c(w);
        if (nu <= 1e-14 * rho)
            throw NoMass("||T(z)||_C vanished: inf of the map on the boundary sphere is 0");

        Trajectory z_next = w;
        z_next *= rho / nu;  // z' on the boundary sphere
        if (cfg.damping < 1.0) {
            Trajectory mix = z;
            mix *= 1.0 - cfg.damping;
            z_next *= cfg.damping;
            z_next += mix;
            z_next = rescale_to_rho(std::move(z_next), rho);
        }

        Trajectory diff = z_next;
        diff -= z;
        const double step = norm_c(diff);
        history.push_back({step, nu});

        z = std::move(z_next);
        if (observer) observer(iter + 1, z);

        if (step <= cfg.tol_rel * rho) {
            step_converged = true;
            ++iter;
            break;
        }
    }

    // Pin lambda to the final iterate and certify with an independent residual.
    Trajectory w = inst.apply_t_op(z, rho);
    const double nu = norm_c(w);
    if (nu <= 1e-14 * rho) throw NoMass("||T(y)||_C vanished at the final iterate");

    const double lambda = rho / nu;
    const double residual_rel = inst.residual(z, lambda, rho) / rho;
    return EigenpairCertificate{
        .lambda = lambda,
        .rho = rho,
        .y = std::move(z),
        .residual_rel = residual_rel,
        .iterations = iter,
        .converged = step_converged && residual_rel <= 10.0 * cfg.tol_rel,
        .history = std::move(history),
        .hypothesis_report = inst.check_hypotheses(64, cfg.seed + 1),
    };
}

std::vector<SweepEntry> sweep(const ProblemInstance& p, const std::vector<double>& rhos,
                              const SolverConfig& cfg, bool warm_start) {
    if (rhos.empty()) throw ValidationError("sweep needs at least one rho");
    std::vector<SweepEntry> entries;
    entries.reserve(rhos.size());
    std::optional<Trajectory> previous;

    for (double rho : rhos) {
        SweepEntry entry;
        entry.rho = rho;
        SolverConfig local = cfg;
        local.rho = rho;
        if (warm_start && previous) {
            local.initial_guess = InitialGuessKind::UserSupplied;
            local.user_guess = previous;
        }
        try {
            entry.certificate = solve(p, local);
            previous = entry.certificate->y;
        } catch (const Error& e) {
            entry.error = e.what();
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

bool verify_certificate(const ProblemInstance& p, const EigenpairCertificate& cert,
                        double strict_tol) {
    if (!(strict_tol > 0.0)) throw ValidationError("strict_tol must be positive");

    // Norm pinning and cone membership come first: a certificate that fails
    // them is rejected before the residual (whose domain assumes them).
    if (std::abs(norm_c(cert.y) - cert.rho) > 1e-12 * cert.rho) return false;
    if (is_in_cone(cert.y, p.cone_tol).status == ConeStatus::Outside) return false;
    if (!(cert.lambda > 0.0)) return false;

    SemigroupHandle oracle = SemigroupHandle::matrix_exp_oracle(p.length, p.n);
    MildConfig direct{QuadratureRoute::TrapezoidDirect, p.m};
    ProblemInstance independent = p;
    independent.certificate.rho = cert.rho;

    const double res =
        mild_residual(oracle, independent.b_fn(cert.rho), independent.f_fn(cert.rho), cert.y,
                      cert.lambda, direct, p.cone_tol);
    return res <= strict_tol * cert.rho;
}

}  // namespace mildeig
