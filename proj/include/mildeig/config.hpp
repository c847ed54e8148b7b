#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mildeig/eigensolver.hpp"
#include "mildeig/problem.hpp"

namespace mildeig {

/// Validated configuration document. Parsing rejects unknown keys at every
/// level (SchemaError) and defers semantic checks (grid alignment, sign
/// constraints, expression sampling) to build_instance (ValidationError).
struct ConfigDocument {
    struct Nonlocal {
        std::string form;            // Pointwise | Multipoint | Periodic | IntegralAverage | Zero
        std::string alpha;           // Pointwise: expression over x
        std::string beta_form;       // ExpIntegral | PointEval | WeightedIntegral
        double beta_t1 = 0.0;        // PointEval
        std::string beta_weight;     // WeightedIntegral: expression over t
        double sensor_x = 0.0;       // Pointwise
        std::vector<double> times;   // Multipoint
        std::vector<double> coeffs;  // Multipoint
        std::string weight;          // IntegralAverage: expression over t
    };
    struct Certificate {
        std::string delta_rho = "zero";          // "zero" or expression over (t, x)
        std::string eta_rho = "zero";            // "zero", "auto-from-alpha", or expression over x
        double t0 = 1.0;
    };
    struct Solver {
        std::vector<double> rhos = {1.0};
        int max_iters = 500;
        double tol_rel = 1e-8;
        double damping = 1.0;
        std::string initial_guess = "SineProfile";
        unsigned long seed = 0;
    };

    struct Output {
        std::string dir = ".";
        bool json = true;  // certificate / report JSON artifacts
        bool csv = true;   // trajectory / summary CSV artifacts
    };

    std::optional<std::string> preset;
    double length = 0.0;
    int n = 63;
    int m = 64;
    SemigroupKind semigroup_kind = SemigroupKind::SpectralHeat;
    QuadratureRoute quadrature = QuadratureRoute::TrapezoidRecurrence;
    std::string g_preset;       // PowerLaw | Linear | Zero (empty when expression given)
    double g_c = 1.0;
    double g_p = 2.0;
    std::string g_expression;   // expression over (t, x, u)
    Nonlocal nonlocal;
    Certificate certificate;
    Solver solver;
    Output output;
};

ConfigDocument parse_config(const nlohmann::json& j);
ConfigDocument load_config(const std::filesystem::path& path);

/// The built-in "paper-example" document: L = pi, n = 63, m = 64,
/// SpectralHeat, g = "t*x*(pi-x)*u^2", alpha = "sin(x)", beta = ExpIntegral at
/// x* = pi/2, delta_rho = zero, eta_rho = auto-from-alpha, t0 = 1, rho = 1.
nlohmann::json preset_document(const std::string& name);

struct BuiltInstance {
    ProblemInstance instance;
    SolverConfig solver;
    std::vector<double> rhos;
};

/// Assemble and validate the problem instance and solver configuration.
BuiltInstance build_instance(const ConfigDocument& doc);

}  // namespace mildeig
