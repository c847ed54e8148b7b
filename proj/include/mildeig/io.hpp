#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mildeig/eigensolver.hpp"

namespace mildeig {

nlohmann::json hypothesis_report_to_json(const HypothesisReport& report);
HypothesisReport hypothesis_report_from_json(const nlohmann::json& j);

nlohmann::json certificate_to_json(const EigenpairCertificate& cert);
/// Rebuilds everything except the eigenfunction, which travels in the
/// companion trajectory CSV; `y` supplies it.
EigenpairCertificate certificate_from_json(const nlohmann::json& j, Trajectory y);

/// Header "t,x,value"; rows ordered by (time node, space node); 17 significant
/// digits so values round-trip bitwise.
void write_trajectory_csv(const Trajectory& y, const std::filesystem::path& path);

/// Reads a trajectory written by write_trajectory_csv. The lattice (L, n, m)
/// is taken from the caller and cross-checked against the file's t/x columns
/// within 1e-12, so exact-composability with in-memory objects is preserved.
Trajectory read_trajectory_csv(const std::filesystem::path& path, double length, int n, int m);

/// Header "rho,lambda,residual_rel,iterations,converged".
void write_sweep_summary_csv(const std::vector<SweepEntry>& entries,
                             const std::filesystem::path& path);

void write_json_file(const nlohmann::json& j, const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace mildeig
