// Acceptance suite: runs each release criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit status is nonzero when any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mildeig/commands.hpp"
#include "mildeig/config.hpp"
#include "mildeig/io.hpp"
#include "oracle_utils.hpp"

using namespace mildeig;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvE = 0.36787944117144233;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Check {
    std::string label;
    std::function<Outcome()> run;
    double budget_seconds = 0.0;
};

fs::path work_dir() {
    fs::path dir = fs::temp_directory_path() / "mildeig_acceptance";
    fs::create_directories(dir);
    return dir;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

GridFunction mode(int k, int n) {
    return GridFunction::sample(kPi, n, [&](double x) { return std::sin(k * x); });
}

// --- criterion 1: golden 1/e bound via the check command on the preset -----
Outcome golden_h4() {
    ConfigDocument doc = parse_config(nlohmann::json{{"preset", "paper-example"}});
    const fs::path dir = work_dir() / "check";
    RunOptions opts;
    opts.out_dir = dir;
    opts.quiet = true;
    const int status = run_command(Command::Check, doc, opts);
    const nlohmann::json report = read_json_file(dir / "hypotheses.json");
    const double h4 = report.at("h4_value").get<double>();
    const double err = std::abs(h4 - kInvE);
    return {status == 0 && err <= 1e-6,
            "h4_value=" + fmt(h4) + " |err|=" + fmt(err) + " (tol 1e-6), exit=" +
                std::to_string(status)};
}

// --- criterion 2: semigroup axioms on the spectral backend ------------------
Outcome semigroup_axioms() {
    SemigroupHandle u = SemigroupHandle::spectral_heat(kPi, 63);
    AxiomReport report = u.check_axioms(200, 1e-10);  // 200 triples, 1000 cone draws
    const bool pass = report.composition_defect <= 1e-10 && report.identity_exact &&
                      report.positivity_violation <= 1e-10;
    return {pass, "composition=" + fmt(report.composition_defect) +
                      " positivity=" + fmt(report.positivity_violation) +
                      " identity=" + (report.identity_exact ? std::string("exact")
                                                            : std::string("BROKEN"))};
}

// --- criterion 3: cross-implementation semigroup oracle ---------------------
Outcome cross_implementation() {
    const int n = 64;
    SemigroupHandle spectral = SemigroupHandle::spectral_heat(kPi, n);
    SemigroupHandle oracle = SemigroupHandle::matrix_exp_oracle(kPi, n);
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);

    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        GridFunction v = GridFunction::zeros(kPi, n);
        for (int k = 1; k <= 16; ++k) v.axpy(sym(rng), mode(k, n));
        for (double t : {0.1, 0.5, 1.0}) {
            GridFunction a = spectral.apply(t, v);
            GridFunction b = oracle.apply(t, v);
            GridFunction d = a - b;
            worst = std::max(worst, norm_sup(d) / norm_sup(a));
        }
    }
    return {worst <= 1e-6, "worst rel sup delta=" + fmt(worst) + " (tol 1e-6)"};
}

// --- criterion 4: Duhamel closed form and convergence order -----------------
Outcome duhamel_closed_form() {
    const int n = 15;
    SemigroupHandle u = SemigroupHandle::spectral_heat(kPi, n);
    TimeSliceFn f = [](double, const GridFunction& v) { return v; };
    const double exact = 1.0 - std::exp(-1.0);

    std::vector<double> errors;
    for (int m : {16, 32, 64, 128}) {
        Trajectory y = Trajectory::constant(mode(1, n), m);
        MildConfig cfg{QuadratureRoute::TrapezoidRecurrence, m};
        Trajectory g = apply_g(u, f, y, cfg);
        errors.push_back(std::abs(norm_sup(g.node(m)) - exact));
    }
    double min_order = 1e9;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i)
        min_order = std::min(min_order, std::log2(errors[i] / errors[i + 1]));

    const bool pass = errors.back() <= 1e-6 && min_order >= 1.9;
    std::ostringstream detail;
    detail << "err(m=128)=" << fmt(errors.back()) << " (tol 1e-6), order=" << fmt(min_order)
           << " (>=1.9)";
    return {pass, detail.str()};
}

// --- criterion 5: linear instance vs dense eigen-oracle ---------------------
Outcome linear_eigen_oracle() {
    InstanceParams params{
        .length = kPi,
        .n = 15,
        .m = 16,
        .semigroup_kind = SemigroupKind::SpectralHeat,
        .g = Nonlinearity::linear(),
        .b = NonlocalOperator::integral_average(std::vector<double>(17, 1.0)),
        .delta_rho = std::nullopt,
        .eta_rho = std::nullopt,
        .t0 = 1.0,
        .rho = 1.0,
        .cone_tol = ConeTolerance{},
        .quadrature = QuadratureRoute::TrapezoidRecurrence,
    };
    ProblemInstance p = make_instance(params);
    SolverConfig cfg;
    EigenpairCertificate cert = solve(p, cfg);
    const double mu = testing::dominant_eigenvalue(testing::dense_t_matrix(p));
    const double rel = std::abs(cert.lambda - 1.0 / mu) / cert.lambda;
    return {cert.converged && rel <= 1e-4,
            "lambda=" + fmt(cert.lambda) + " 1/mu=" + fmt(1.0 / mu) + " rel=" + fmt(rel) +
                " (tol 1e-4)"};
}

// --- criterion 6: worked-example eigenpair certificates ---------------------
Outcome example_certificates() {
    ProblemInstance p = example_instance(63, 64, 1.0);
    SolverConfig cfg;
    std::vector<SweepEntry> entries = sweep(p, {0.1, 0.5, 1.0}, cfg);

    bool pass = true;
    std::ostringstream detail;
    for (const SweepEntry& entry : entries) {
        if (!entry.certificate) {
            pass = false;
            detail << "rho=" << entry.rho << " FAILED(" << entry.error << ") ";
            continue;
        }
        const EigenpairCertificate& cert = *entry.certificate;
        const bool cone_ok = is_in_cone(cert.y, p.cone_tol).status != ConeStatus::Outside;
        const bool pinned = std::abs(norm_c(cert.y) - entry.rho) <= 1e-12 * entry.rho;
        const bool verified = verify_certificate(p, cert, 1e-4);
        const bool entry_ok = cert.converged && cert.residual_rel <= 1e-6 && pinned &&
                              cone_ok && cert.lambda > 0.0 && verified;
        pass = pass && entry_ok;
        detail << "rho=" << entry.rho << ":lambda=" << fmt(cert.lambda)
               << ",res=" << fmt(cert.residual_rel) << (verified ? ",verified " : ",UNVERIFIED ");
    }

    // Lambda cross-check against the constrained-Newton oracle at the
    // oracle's discretization (n = 31, m = 32): both algorithms on the same
    // lattice, so the comparison isolates the iteration.
    ProblemInstance small = example_instance(31, 32, 1.0);
    EigenpairCertificate small_cert = solve(small, cfg);
    testing::NewtonResult newton = testing::constrained_newton_oracle(small, 1.0);
    const double rel = std::abs(small_cert.lambda - newton.lambda) / small_cert.lambda;
    pass = pass && newton.converged && small_cert.converged && rel <= 1e-4;
    detail << "newton(31,32):lambda=" << fmt(newton.lambda) << ",rel=" << fmt(rel)
           << " (tol 1e-4)";
    if (!entries.empty() && entries.back().certificate) {
        detail << " [sweep-vs-oracle rel="
               << fmt(std::abs(entries.back().certificate->lambda - newton.lambda) /
                      newton.lambda)
               << "]";
    }
    return {pass, detail.str()};
}

// --- criterion 7: hypothesis falsification through the check command --------
Outcome hypothesis_falsification() {
    // delta_rho = 10 breaks (H2).
    nlohmann::json j1 = preset_document("paper-example");
    j1["certificate"] = {{"delta_rho", "10"}, {"eta_rho", "auto-from-alpha"}, {"t0", 1.0}};
    const fs::path dir1 = work_dir() / "falsify_h2";
    RunOptions opts1;
    opts1.out_dir = dir1;
    opts1.quiet = true;
    const int status1 = run_command(Command::Check, parse_config(j1), opts1);
    const nlohmann::json r1 = read_json_file(dir1 / "hypotheses.json");
    const bool h2_detected = status1 == 1 && r1.at("pass_H2").get<bool>() == false;

    // eta_rho = 2 sin with beta = PointEval(0) breaks (H3).
    nlohmann::json j2 = preset_document("paper-example");
    j2["nonlocal"]["beta"] = {{"form", "PointEval"}, {"t1", 0.0}};
    j2["certificate"] = {{"delta_rho", "zero"}, {"eta_rho", "2*sin(x)"}, {"t0", 1.0}};
    const fs::path dir2 = work_dir() / "falsify_h3";
    RunOptions opts2;
    opts2.out_dir = dir2;
    opts2.quiet = true;
    const int status2 = run_command(Command::Check, parse_config(j2), opts2);
    const nlohmann::json r2 = read_json_file(dir2 / "hypotheses.json");
    const bool h3_detected = status2 == 1 && r2.at("pass_H3").get<bool>() == false;

    return {h2_detected && h3_detected,
            std::string("H2 falsified (exit ") + std::to_string(status1) + "), H3 falsified (exit " +
                std::to_string(status2) + ")"};
}

// --- criterion 8: randomized property suites --------------------------------
Outcome property_suites() {
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ConeTolerance tol;
    std::ostringstream detail;
    bool pass = true;

    // Cone axioms (C1)-(C3), 200 cases.
    {
        int failures = 0;
        for (int trial = 0; trial < 200; ++trial) {
            GridFunction u = GridFunction::zeros(kPi, 17);
            GridFunction v = GridFunction::zeros(kPi, 17);
            for (int i = 0; i < 17; ++i) {
                u[i] = unit(rng);
                v[i] = unit(rng);
            }
            const double a = 3.0 * unit(rng);
            if (is_in_cone(u + v, tol).status != ConeStatus::Inside) ++failures;
            if (is_in_cone(a * u, tol).status != ConeStatus::Inside) ++failures;
        }
        pass = pass && failures == 0;
        detail << "cone_axioms=" << failures << " ";
    }

    // Normality with c = 1, 200 cases.
    {
        int failures = 0;
        for (int trial = 0; trial < 200; ++trial) {
            GridFunction u = GridFunction::zeros(kPi, 23);
            GridFunction v = GridFunction::zeros(kPi, 23);
            for (int i = 0; i < 23; ++i) {
                u[i] = unit(rng);
                v[i] = u[i] + unit(rng);
            }
            if (!(norm_sup(u) <= norm_sup(v))) ++failures;
        }
        pass = pass && failures == 0;
        detail << "normality=" << failures << " ";
    }

    // Bochner-quadrature monotonicity, 200 cases.
    {
        SemigroupHandle u = SemigroupHandle::spectral_heat(kPi, 15);
        MildConfig cfg{QuadratureRoute::TrapezoidRecurrence, 8};
        int failures = 0;
        for (int trial = 0; trial < 200; ++trial) {
            Trajectory y = random_boundary_trajectory(kPi, 15, 8, 1.0, rng);
            const double bump = unit(rng);
            TimeSliceFn f1 = [](double, const GridFunction& v) { return v; };
            TimeSliceFn f2 = [bump](double, const GridFunction& v) {
                GridFunction out = v;
                for (int i = 0; i < out.size(); ++i) out[i] += bump;
                return out;
            };
            Trajectory g1 = apply_g(u, f1, y, cfg);
            Trajectory g2 = apply_g(u, f2, y, cfg);
            for (int j = 0; j <= 8; ++j)
                if (!order_leq(g1.node(j), g2.node(j), tol)) ++failures;
        }
        pass = pass && failures == 0;
        detail << "monotonicity=" << failures << " ";
    }

    // T = H + G additivity and cone preservation, 200 cases.
    {
        ProblemInstance p = example_instance(15, 8, 1.0);
        int failures = 0;
        for (int trial = 0; trial < 200; ++trial) {
            Trajectory y = random_boundary_trajectory(kPi, 15, 8, 1.0, rng);
            Trajectory whole = p.apply_t_op(y, 1.0);
            Trajectory split = apply_h(p.semigroup, p.b_fn(1.0), y);
            split += apply_g(p.semigroup, p.f_fn(1.0), y, p.mild_cfg);
            Trajectory d = whole;
            d -= split;
            if (norm_c(d) > 1e-14 * std::max(1.0, norm_c(split))) ++failures;
            if (is_in_cone(whole, tol).status == ConeStatus::Outside) ++failures;
        }
        pass = pass && failures == 0;
        detail << "additivity+cone=" << failures << " ";
    }

    // Solver iterates pinned to the boundary sphere, >= 200 iterate checks.
    {
        ProblemInstance p = example_instance(31, 16, 1.0);
        SolverConfig cfg;
        cfg.initial_guess = InitialGuessKind::RandomCone;
        int failures = 0;
        int checks = 0;
        for (unsigned long seed = 1; seed <= 24; ++seed) {
            cfg.seed = seed;
            IterateObserver observer = [&](int, const Trajectory& z) {
                ++checks;
                if (std::abs(norm_c(z) - 1.0) > 1e-12) ++failures;
                if (is_in_cone(z, p.cone_tol).status == ConeStatus::Outside) ++failures;
            };
            solve(p, cfg, observer);
        }
        pass = pass && failures == 0 && checks >= 200;
        detail << "pinning=" << failures << "/" << checks;
    }

    return {pass, detail.str()};
}

}  // namespace

int main() {
    std::vector<Check> checks = {
        {"golden 1/e bound (preset check)", golden_h4, 1.0},
        {"semigroup axioms (spectral, n=63)", semigroup_axioms, 5.0},
        {"cross-implementation semigroup oracle", cross_implementation, 10.0},
        {"Duhamel closed form + order", duhamel_closed_form, 10.0},
        {"linear instance vs dense eigen-oracle", linear_eigen_oracle, 30.0},
        {"worked-example eigenpair certificates", example_certificates, 60.0},
        {"hypothesis falsification", hypothesis_falsification, 10.0},
        {"randomized property suites", property_suites, 60.0},
    };

    int failed = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = checks[i].run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = checks[i].budget_seconds <= 0.0 || seconds <= checks[i].budget_seconds;
        const bool pass = outcome.pass && in_budget;
        if (!pass) ++failed;
        std::printf("[%s] criterion %zu: %s — %s (%.2fs%s)\n", pass ? "PASS" : "FAIL", i + 1,
                    checks[i].label.c_str(), outcome.detail.c_str(), seconds,
                    in_budget ? "" : ", OVER BUDGET");
    }
    if (failed) std::printf("%d criterion(s) failed\n", failed);
    else std::printf("all %zu criteria passed\n", checks.size());
    return failed == 0 ? 0 : 1;
}
