#include "mildeig/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mildeig {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

nlohmann::json hypothesis_report_to_json(const HypothesisReport& report) {
    return nlohmann::json{
        {"M_rho", report.m_rho},       {"N_rho", report.n_rho},
        {"h2_margin", report.h2_margin}, {"h3_margin", report.h3_margin},
        {"h4_value", report.h4_value}, {"pass_H2", report.pass_h2},
        {"pass_H3", report.pass_h3},   {"pass_H4", report.pass_h4},
        {"samples", report.samples},   {"seed", report.seed},
    };
}

HypothesisReport hypothesis_report_from_json(const nlohmann::json& j) {
    HypothesisReport report;
    report.m_rho = j.at("M_rho").get<double>();
    report.n_rho = j.at("N_rho").get<double>();
    report.h2_margin = j.at("h2_margin").get<double>();
    report.h3_margin = j.at("h3_margin").get<double>();
    report.h4_value = j.at("h4_value").get<double>();
    report.pass_h2 = j.at("pass_H2").get<bool>();
    report.pass_h3 = j.at("pass_H3").get<bool>();
    report.pass_h4 = j.at("pass_H4").get<bool>();
    report.samples = j.at("samples").get<int>();
    report.seed = j.at("seed").get<unsigned long>();
    return report;
}

nlohmann::json certificate_to_json(const EigenpairCertificate& cert) {
    nlohmann::json history = nlohmann::json::array();
    for (const IterationRecord& rec : cert.history)
        history.push_back({{"step_diff", rec.step_diff}, {"t_norm", rec.t_norm}});
    return nlohmann::json{
        {"lambda", cert.lambda},
        {"rho", cert.rho},
        {"residual_rel", cert.residual_rel},
        {"iterations", cert.iterations},
        {"converged", cert.converged},
        {"history", std::move(history)},
        {"hypothesis_report", hypothesis_report_to_json(cert.hypothesis_report)},
    };
}

EigenpairCertificate certificate_from_json(const nlohmann::json& j, Trajectory y) {
    std::vector<IterationRecord> history;
    for (const auto& rec : j.at("history"))
        history.push_back({rec.at("step_diff").get<double>(), rec.at("t_norm").get<double>()});
    return EigenpairCertificate{
        .lambda = j.at("lambda").get<double>(),
        .rho = j.at("rho").get<double>(),
        .y = std::move(y),
        .residual_rel = j.at("residual_rel").get<double>(),
        .iterations = j.at("iterations").get<int>(),
        .converged = j.at("converged").get<bool>(),
        .history = std::move(history),
        .hypothesis_report = hypothesis_report_from_json(j.at("hypothesis_report")),
    };
}

void write_trajectory_csv(const Trajectory& y, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << "t,x,value\n";
    for (int j = 0; j <= y.steps(); ++j)
        for (int i = 0; i < y.space_size(); ++i)
            out << fmt17(y.time(j)) << ',' << fmt17(y.node(j).x(i)) << ','
                << fmt17(y.node(j)[i]) << '\n';
    if (!out) throw Error("failed writing " + path.string());
}

Trajectory read_trajectory_csv(const std::filesystem::path& path, double length, int n, int m) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "t,x,value")
        throw Error("trajectory CSV is missing the 't,x,value' header");

    Trajectory y = Trajectory::zeros(length, n, m);
    int row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tf, xf, vf;
        if (!std::getline(ss, tf, ',') || !std::getline(ss, xf, ',') || !std::getline(ss, vf))
            throw Error("malformed trajectory CSV row: " + line);
        const double t = std::stod(tf);
        const double x = std::stod(xf);
        const double v = std::stod(vf);
        const int j = row / n;
        const int i = row % n;
        if (j > m) throw Error("trajectory CSV has more rows than the lattice");
        if (std::abs(t - y.time(j)) > 1e-12 || std::abs(x - y.node(j).x(i)) > 1e-12)
            throw Error("trajectory CSV lattice does not match the expected (L, n, m)");
        y.node(j)[i] = v;
        ++row;
    }
    if (row != (m + 1) * n) throw Error("trajectory CSV has too few rows");
    return y;
}

void write_sweep_summary_csv(const std::vector<SweepEntry>& entries,
                             const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << "rho,lambda,residual_rel,iterations,converged\n";
    for (const SweepEntry& entry : entries) {
        if (entry.certificate) {
            const EigenpairCertificate& c = *entry.certificate;
            out << fmt17(entry.rho) << ',' << fmt17(c.lambda) << ',' << fmt17(c.residual_rel)
                << ',' << c.iterations << ',' << (c.converged ? "true" : "false") << '\n';
        } else {
            out << fmt17(entry.rho) << ",nan,nan,0,false\n";
        }
    }
}

void write_json_file(const nlohmann::json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

}  // namespace mildeig
