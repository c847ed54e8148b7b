#include "mildeig/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <vector>

#include "mildeig/io.hpp"

namespace mildeig {

namespace {

namespace fs = std::filesystem;

void note(const RunOptions& opts, const std::string& line) {
    if (!opts.quiet) std::cerr << line << '\n';
}

std::string rho_tag(std::size_t index) { return "rho" + std::to_string(index); }

struct OutputSpec {
    std::filesystem::path dir;
    bool json = true;
    bool csv = true;
};

int cmd_solve(const BuiltInstance& built, const RunOptions& opts, const OutputSpec& out) {
    try {
        EigenpairCertificate cert = solve(built.instance, built.solver);
        if (out.json) write_json_file(certificate_to_json(cert), out.dir / "certificate.json");
        if (out.csv) write_trajectory_csv(cert.y, out.dir / "trajectory.csv");
        note(opts, "solve: lambda = " + std::to_string(cert.lambda) +
                       ", residual_rel = " + std::to_string(cert.residual_rel) +
                       ", iterations = " + std::to_string(cert.iterations) +
                       (cert.converged ? ", converged" : ", NOT converged"));
        return cert.converged ? 0 : 1;
    } catch (const NoMass& e) {
        std::cerr << "solve failed (NoMass): " << e.what() << '\n';
        return 1;
    } catch (const ConeViolation& e) {
        std::cerr << "solve failed (ConeViolation): " << e.what() << '\n';
        return 1;
    }
}

int cmd_sweep(const BuiltInstance& built, const RunOptions& opts, const OutputSpec& out) {
    std::vector<SweepEntry> entries = sweep(built.instance, built.rhos, built.solver);
    if (out.csv) write_sweep_summary_csv(entries, out.dir / "sweep_summary.csv");
    bool all_converged = true;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const SweepEntry& entry = entries[i];
        if (entry.certificate) {
            if (out.json)
                write_json_file(certificate_to_json(*entry.certificate),
                                out.dir / ("certificate_" + rho_tag(i) + ".json"));
            if (out.csv)
                write_trajectory_csv(entry.certificate->y,
                                     out.dir / ("trajectory_" + rho_tag(i) + ".csv"));
            all_converged = all_converged && entry.certificate->converged;
            note(opts, "sweep rho = " + std::to_string(entry.rho) +
                           ": lambda = " + std::to_string(entry.certificate->lambda) +
                           (entry.certificate->converged ? ", converged" : ", NOT converged"));
        } else {
            all_converged = false;
            std::cerr << "sweep rho = " << entry.rho << " failed: " << entry.error << '\n';
        }
    }
    return all_converged ? 0 : 1;
}

int cmd_check(const BuiltInstance& built, const RunOptions& opts, unsigned long seed,
              const OutputSpec& out) {
    HypothesisReport report = built.instance.check_hypotheses(200, seed);
    write_json_file(hypothesis_report_to_json(report), out.dir / "hypotheses.json");
    note(opts, std::string("check: H2 ") + (report.pass_h2 ? "pass" : "FAIL") + ", H3 " +
                   (report.pass_h3 ? "pass" : "FAIL") + ", H4 " +
                   (report.pass_h4 ? "pass" : "FAIL") +
                   " (h4_value = " + std::to_string(report.h4_value) + ")");
    return (report.pass_h2 && report.pass_h3 && report.pass_h4) ? 0 : 1;
}

int cmd_verify(const BuiltInstance& built, const RunOptions& opts) {
    if (opts.certificate_path.empty() || opts.trajectory_path.empty())
        throw ValidationError("verify needs --certificate and --trajectory paths");
    const nlohmann::json cert_json = read_json_file(opts.certificate_path);
    Trajectory y = read_trajectory_csv(opts.trajectory_path, built.instance.length,
                                       built.instance.n, built.instance.m);
    EigenpairCertificate cert = certificate_from_json(cert_json, std::move(y));
    const bool ok = verify_certificate(built.instance, cert, 1e-4);
    note(opts, std::string("verify: ") + (ok ? "pass" : "FAIL"));
    return ok ? 0 : 1;
}

int cmd_oracle_compare(const BuiltInstance& built, const RunOptions& opts, unsigned long seed,
                       const OutputSpec& outspec) {
    const ProblemInstance& p = built.instance;
    SemigroupHandle spectral = SemigroupHandle::spectral_heat(p.length, p.n);
    SemigroupHandle oracle = SemigroupHandle::matrix_exp_oracle(p.length, p.n);

    std::ofstream out(outspec.dir / "oracle_compare.csv");
    if (!out) throw Error("cannot open oracle_compare.csv for writing");
    out << "kind,param,delta\n";

    // Semigroup backends on smooth profiles (modes <= min(16, n/4)).
    const int modes = std::min(16, std::max(1, p.n / 4));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    double worst_semigroup = 0.0;
    for (double t : {0.1, 0.5, 1.0}) {
        double worst = 0.0;
        for (int trial = 0; trial < 8; ++trial) {
            GridFunction v = GridFunction::zeros(p.length, p.n);
            for (int k = 1; k <= modes; ++k) {
                const double c = sym(rng);
                for (int i = 0; i < p.n; ++i)
                    v[i] += c * std::sin(k * std::numbers::pi * v.x(i) / p.length);
            }
            GridFunction a = spectral.apply(t, v);
            GridFunction b = oracle.apply(t, v);
            a -= b;
            worst = std::max(worst, norm_sup(a) / norm_sup(b));
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "semigroup,%g,%.17g\n", t, worst);
        out << buf;
        worst_semigroup = std::max(worst_semigroup, worst);
    }

    // Quadrature routes on the instance's own f over random cone trajectories.
    double worst_quad = 0.0;
    for (int trial = 0; trial < 4; ++trial) {
        const double rho = p.certificate.rho;
        Trajectory y = random_boundary_trajectory(p.length, p.n, p.m, rho, rng);
        const double delta =
            cross_validate_quadratures(p.semigroup, p.f_fn(rho), y, p.mild_cfg);
        char buf[64];
        std::snprintf(buf, sizeof buf, "quadrature,%d,%.17g\n", trial, delta);
        out << buf;
        worst_quad = std::max(worst_quad, delta);
    }

    note(opts, "oracle-compare: semigroup delta = " + std::to_string(worst_semigroup) +
                   ", quadrature delta = " + std::to_string(worst_quad));
    return (worst_semigroup <= 1e-6 && worst_quad <= 1e-10) ? 0 : 1;
}

}  // namespace

int run_command(Command cmd, const ConfigDocument& doc, const RunOptions& opts) {
    OutputSpec out{opts.out_dir.value_or(fs::path(doc.output.dir)), doc.output.json,
                   doc.output.csv};
    fs::create_directories(out.dir);
    BuiltInstance built = build_instance(doc);
    if (opts.seed) built.solver.seed = *opts.seed;

    switch (cmd) {
        case Command::Solve: return cmd_solve(built, opts, out);
        case Command::Sweep: return cmd_sweep(built, opts, out);
        case Command::Check:
            return cmd_check(built, opts, opts.seed.value_or(built.solver.seed), out);
        case Command::Verify: return cmd_verify(built, opts);
        case Command::OracleCompare:
            return cmd_oracle_compare(built, opts, opts.seed.value_or(20240603ul), out);
    }
    throw Error("unreachable command");
}

}  // namespace mildeig
