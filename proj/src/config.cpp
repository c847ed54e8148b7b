#include "mildeig/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <set>

#include "mildeig/io.hpp"

namespace mildeig {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw SchemaError(ctx + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* k) { return key == k; }) == allowed.end())
            throw SchemaError("unknown key '" + key + "' in " + ctx);
    }
}

double get_number(const json& obj, const std::string& ctx, const char* key) {
    if (!obj.contains(key)) throw SchemaError(ctx + " is missing required key '" + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number()) throw SchemaError(ctx + "." + key + " must be a number");
    return v.get<double>();
}

double get_number_or(const json& obj, const std::string& ctx, const char* key, double dflt) {
    return obj.contains(key) ? get_number(obj, ctx, key) : dflt;
}

int get_int(const json& obj, const std::string& ctx, const char* key) {
    if (!obj.contains(key)) throw SchemaError(ctx + " is missing required key '" + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw SchemaError(ctx + "." + key + " must be an integer");
    return v.get<int>();
}

std::string get_string(const json& obj, const std::string& ctx, const char* key) {
    if (!obj.contains(key)) throw SchemaError(ctx + " is missing required key '" + key + "'");
    const json& v = obj.at(key);
    if (!v.is_string()) throw SchemaError(ctx + "." + key + " must be a string");
    return v.get<std::string>();
}

std::string get_string_or(const json& obj, const std::string& ctx, const char* key,
                          const std::string& dflt) {
    return obj.contains(key) ? get_string(obj, ctx, key) : dflt;
}

std::vector<double> get_number_list(const json& obj, const std::string& ctx, const char* key) {
    if (!obj.contains(key)) throw SchemaError(ctx + " is missing required key '" + key + "'");
    const json& v = obj.at(key);
    if (!v.is_array()) throw SchemaError(ctx + "." + key + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw SchemaError(ctx + "." + key + " must hold only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

void parse_domain(const json& j, ConfigDocument& doc) {
    check_keys(j, "domain", {"L", "n"});
    doc.length = get_number(j, "domain", "L");
    doc.n = get_int(j, "domain", "n");
}

void parse_time(const json& j, ConfigDocument& doc) {
    check_keys(j, "time", {"m"});
    doc.m = get_int(j, "time", "m");
}

void parse_semigroup(const json& j, ConfigDocument& doc) {
    check_keys(j, "semigroup", {"kind"});
    const std::string kind = get_string(j, "semigroup", "kind");
    if (kind == "SpectralHeat") doc.semigroup_kind = SemigroupKind::SpectralHeat;
    else if (kind == "MatrixExpOracle") doc.semigroup_kind = SemigroupKind::MatrixExpOracle;
    else throw SchemaError("semigroup.kind must be SpectralHeat or MatrixExpOracle");
}

void parse_nonlinearity(const json& j, ConfigDocument& doc) {
    check_keys(j, "nonlinearity", {"preset", "c", "p", "expression"});
    doc.g_preset.clear();
    doc.g_expression.clear();
    if (j.contains("expression")) {
        if (j.contains("preset"))
            throw SchemaError("nonlinearity takes either a preset or an expression, not both");
        doc.g_expression = get_string(j, "nonlinearity", "expression");
        return;
    }
    doc.g_preset = get_string(j, "nonlinearity", "preset");
    if (doc.g_preset != "PowerLaw" && doc.g_preset != "Linear" && doc.g_preset != "Zero")
        throw SchemaError("nonlinearity.preset must be PowerLaw, Linear, or Zero");
    doc.g_c = get_number_or(j, "nonlinearity", "c", 1.0);
    doc.g_p = get_number_or(j, "nonlinearity", "p", 2.0);
}

void parse_nonlocal(const json& j, ConfigDocument& doc) {
    check_keys(j, "nonlocal",
               {"form", "alpha", "beta", "sensor_x", "times", "coeffs", "weight"});
    doc.nonlocal = ConfigDocument::Nonlocal{};
    doc.nonlocal.form = get_string(j, "nonlocal", "form");
    const std::string& form = doc.nonlocal.form;
    if (form == "Pointwise") {
        doc.nonlocal.alpha = get_string(j, "nonlocal", "alpha");
        doc.nonlocal.sensor_x = get_number(j, "nonlocal", "sensor_x");
        if (!j.contains("beta")) throw SchemaError("nonlocal.beta is required for Pointwise");
        const json& beta = j.at("beta");
        check_keys(beta, "nonlocal.beta", {"form", "t1", "weight"});
        doc.nonlocal.beta_form = get_string(beta, "nonlocal.beta", "form");
        if (doc.nonlocal.beta_form == "PointEval")
            doc.nonlocal.beta_t1 = get_number(beta, "nonlocal.beta", "t1");
        else if (doc.nonlocal.beta_form == "WeightedIntegral")
            doc.nonlocal.beta_weight = get_string(beta, "nonlocal.beta", "weight");
        else if (doc.nonlocal.beta_form != "ExpIntegral")
            throw SchemaError("nonlocal.beta.form must be ExpIntegral, PointEval, or WeightedIntegral");
    } else if (form == "Multipoint") {
        doc.nonlocal.times = get_number_list(j, "nonlocal", "times");
        doc.nonlocal.coeffs = get_number_list(j, "nonlocal", "coeffs");
    } else if (form == "IntegralAverage") {
        doc.nonlocal.weight = get_string_or(j, "nonlocal", "weight", "1");
    } else if (form != "Periodic" && form != "Zero") {
        throw SchemaError("nonlocal.form must be Pointwise, Multipoint, Periodic, "
                          "IntegralAverage, or Zero");
    }
}

void parse_certificate(const json& j, ConfigDocument& doc) {
    check_keys(j, "certificate", {"delta_rho", "eta_rho", "t0"});
    doc.certificate = ConfigDocument::Certificate{};
    doc.certificate.delta_rho = get_string_or(j, "certificate", "delta_rho", "zero");
    doc.certificate.eta_rho = get_string_or(j, "certificate", "eta_rho", "zero");
    doc.certificate.t0 = get_number_or(j, "certificate", "t0", 1.0);
}

void parse_solver(const json& j, ConfigDocument& doc) {
    check_keys(j, "solver",
               {"rho", "rho_list", "max_iters", "tol_rel", "damping", "initial_guess", "seed"});
    doc.solver = ConfigDocument::Solver{};
    if (j.contains("rho_list")) {
        if (j.contains("rho")) throw SchemaError("solver takes rho or rho_list, not both");
        doc.solver.rhos = get_number_list(j, "solver", "rho_list");
        if (doc.solver.rhos.empty()) throw SchemaError("solver.rho_list must be nonempty");
    } else {
        doc.solver.rhos = {get_number_or(j, "solver", "rho", 1.0)};
    }
    doc.solver.max_iters = j.contains("max_iters") ? get_int(j, "solver", "max_iters") : 500;
    doc.solver.tol_rel = get_number_or(j, "solver", "tol_rel", 1e-8);
    doc.solver.damping = get_number_or(j, "solver", "damping", 1.0);
    doc.solver.initial_guess = get_string_or(j, "solver", "initial_guess", "SineProfile");
    if (doc.solver.initial_guess != "SineProfile" && doc.solver.initial_guess != "RandomCone")
        throw SchemaError("solver.initial_guess must be SineProfile or RandomCone");
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (!s.is_number_integer()) throw SchemaError("solver.seed must be an integer");
        doc.solver.seed = s.get<unsigned long>();
    }
}

void parse_quadrature(const json& j, ConfigDocument& doc) {
    check_keys(j, "quadrature", {"route"});
    const std::string route = get_string(j, "quadrature", "route");
    if (route == "TrapezoidRecurrence") doc.quadrature = QuadratureRoute::TrapezoidRecurrence;
    else if (route == "TrapezoidDirect") doc.quadrature = QuadratureRoute::TrapezoidDirect;
    else throw SchemaError("quadrature.route must be TrapezoidRecurrence or TrapezoidDirect");
}

void parse_output(const json& j, ConfigDocument& doc) {
    check_keys(j, "output", {"dir", "formats"});
    doc.output = ConfigDocument::Output{};
    doc.output.dir = get_string_or(j, "output", "dir", ".");
    if (j.contains("formats")) {
        const json& formats = j.at("formats");
        if (!formats.is_array()) throw SchemaError("output.formats must be an array");
        doc.output.json = false;
        doc.output.csv = false;
        for (const auto& f : formats) {
            if (!f.is_string()) throw SchemaError("output.formats must hold strings");
            const std::string name = f.get<std::string>();
            if (name == "json") doc.output.json = true;
            else if (name == "csv") doc.output.csv = true;
            else throw SchemaError("output.formats entries must be 'json' or 'csv'");
        }
    }
}

}  // namespace

nlohmann::json preset_document(const std::string& name) {
    if (name != "paper-example") throw SchemaError("unknown preset '" + name + "'");
    return json{
        {"domain", {{"L", std::numbers::pi}, {"n", 63}}},
        {"time", {{"m", 64}}},
        {"semigroup", {{"kind", "SpectralHeat"}}},
        {"nonlinearity", {{"expression", "t*x*(pi-x)*u^2"}}},
        {"nonlocal",
         {{"form", "Pointwise"},
          {"alpha", "sin(x)"},
          {"beta", {{"form", "ExpIntegral"}}},
          {"sensor_x", std::numbers::pi / 2}}},
        {"certificate", {{"delta_rho", "zero"}, {"eta_rho", "auto-from-alpha"}, {"t0", 1.0}}},
        {"solver", {{"rho", 1.0}}},
    };
}

ConfigDocument parse_config(const nlohmann::json& input) {
    check_keys(input, "config",
               {"preset", "domain", "time", "semigroup", "quadrature", "nonlinearity",
                "nonlocal", "certificate", "solver", "output"});

    json j = input;
    ConfigDocument doc;
    if (j.contains("preset")) {
        if (!j.at("preset").is_string()) throw SchemaError("preset must be a string");
        doc.preset = j.at("preset").get<std::string>();
        // Preset fills section defaults; an explicitly given section replaces
        // that whole section.
        json base = preset_document(*doc.preset);
        for (const auto& [key, value] : j.items())
            if (key != "preset") base[key] = value;
        j = std::move(base);
    }

    for (const char* required : {"domain", "time", "semigroup", "nonlinearity", "nonlocal"})
        if (!j.contains(required))
            throw SchemaError(std::string("config is missing required section '") + required + "'");

    parse_domain(j.at("domain"), doc);
    parse_time(j.at("time"), doc);
    parse_semigroup(j.at("semigroup"), doc);
    parse_nonlinearity(j.at("nonlinearity"), doc);
    parse_nonlocal(j.at("nonlocal"), doc);
    if (j.contains("quadrature")) parse_quadrature(j.at("quadrature"), doc);
    if (j.contains("certificate")) parse_certificate(j.at("certificate"), doc);
    if (j.contains("solver")) parse_solver(j.at("solver"), doc);
    if (j.contains("output")) parse_output(j.at("output"), doc);

    // Every referenced expression must parse for the document to be valid.
    auto must_parse = [](const std::string& src, VarSet vars, const char* what) {
        if (src.empty()) return;
        try {
            Expression::parse(src, vars);
        } catch (const Error& e) {
            throw ValidationError(std::string(what) + ": " + e.what());
        }
    };
    must_parse(doc.g_expression, VarSet::of_txu(), "nonlinearity.expression");
    must_parse(doc.nonlocal.alpha, VarSet::of_x(), "nonlocal.alpha");
    must_parse(doc.nonlocal.beta_weight, VarSet::of_t(), "nonlocal.beta.weight");
    must_parse(doc.nonlocal.weight, VarSet::of_t(), "nonlocal.weight");
    if (doc.certificate.delta_rho != "zero")
        must_parse(doc.certificate.delta_rho, VarSet::of_tx(), "certificate.delta_rho");
    if (doc.certificate.eta_rho != "zero" && doc.certificate.eta_rho != "auto-from-alpha")
        must_parse(doc.certificate.eta_rho, VarSet::of_x(), "certificate.eta_rho");
    return doc;
}

ConfigDocument load_config(const std::filesystem::path& path) {
    return parse_config(read_json_file(path));
}

BuiltInstance build_instance(const ConfigDocument& doc) {
    if (!(doc.length > 0.0)) throw ValidationError("domain.L must be positive");
    if (doc.n < 1) throw ValidationError("domain.n must be positive");
    if (doc.m < 2) throw ValidationError("time.m must be at least 2");

    const double rho_max = *std::max_element(doc.solver.rhos.begin(), doc.solver.rhos.end());
    for (double rho : doc.solver.rhos)
        if (!(rho > 0.0)) throw ValidationError("every rho must be positive");

    // Nonlinearity.
    Nonlinearity g = Nonlinearity::zero();
    if (!doc.g_expression.empty()) {
        try {
            g = Nonlinearity::expression(Expression::parse(doc.g_expression, VarSet::of_txu()));
        } catch (const Error& e) {
            throw ValidationError("nonlinearity.expression: " + std::string(e.what()));
        }
    } else if (doc.g_preset == "PowerLaw") {
        g = Nonlinearity::power_law(doc.g_c, doc.g_p);
    } else if (doc.g_preset == "Linear") {
        g = Nonlinearity::linear();
    }

    // Nonlocal operator.
    std::optional<GridFunction> alpha;
    NonlocalOperator b = NonlocalOperator::zero();
    const auto& nl = doc.nonlocal;
    auto sample_time_weights = [&](const std::string& src, const char* what) {
        Expression w = Expression::parse(src, VarSet::of_t());
        std::vector<double> weights(static_cast<std::size_t>(doc.m) + 1);
        for (int j = 0; j <= doc.m; ++j) {
            weights[static_cast<std::size_t>(j)] = w.eval(static_cast<double>(j) / doc.m);
            if (weights[static_cast<std::size_t>(j)] < 0.0)
                throw ValidationError(std::string(what) + " weight is negative on the time grid");
        }
        return weights;
    };
    try {
        if (nl.form == "Pointwise") {
            Expression alpha_expr = Expression::parse(nl.alpha, VarSet::of_x());
            alpha = GridFunction::sample(doc.length, doc.n,
                                         [&](double x) { return alpha_expr.eval(0.0, x); });
            if (is_in_cone(*alpha, ConeTolerance{}).status == ConeStatus::Outside)
                throw ValidationError("alpha must be nonnegative on the grid");
            const int sensor = snap_to_space_grid(nl.sensor_x, doc.length, doc.n);
            BetaFunctional beta;
            if (nl.beta_form == "ExpIntegral") {
                beta.kind = BetaKind::ExpIntegral;
            } else if (nl.beta_form == "PointEval") {
                beta.kind = BetaKind::PointEval;
                beta.point_node = snap_to_time_grid(nl.beta_t1, doc.m, &beta.point_snap);
            } else {
                beta.kind = BetaKind::WeightedIntegral;
                beta.weights = sample_time_weights(nl.beta_weight, "beta");
            }
            b = NonlocalOperator::pointwise(*alpha, beta, sensor);
        } else if (nl.form == "Multipoint") {
            if (nl.times.size() != nl.coeffs.size())
                throw ValidationError("nonlocal.times and nonlocal.coeffs differ in length");
            std::vector<int> nodes;
            std::vector<double> snaps;
            for (double t : nl.times) {
                double snap = 0.0;
                nodes.push_back(snap_to_time_grid(t, doc.m, &snap));
                snaps.push_back(snap);
            }
            b = NonlocalOperator::multipoint(nodes, nl.coeffs, snaps);
        } else if (nl.form == "Periodic") {
            b = NonlocalOperator::periodic();
        } else if (nl.form == "IntegralAverage") {
            b = NonlocalOperator::integral_average(sample_time_weights(nl.weight, "average"));
        }
    } catch (const ExprSyntaxError& e) {
        throw ValidationError("nonlocal expression: " + std::string(e.what()));
    } catch (const UnknownVariable& e) {
        throw ValidationError("nonlocal expression: " + std::string(e.what()));
    } catch (const UnknownFunction& e) {
        throw ValidationError("nonlocal expression: " + std::string(e.what()));
    }

    // Certificate data.
    std::optional<Trajectory> delta;
    if (doc.certificate.delta_rho != "zero") {
        Expression d = Expression::parse(doc.certificate.delta_rho, VarSet::of_tx());
        Trajectory traj = Trajectory::zeros(doc.length, doc.n, doc.m);
        for (int j = 0; j <= doc.m; ++j) {
            const double t = static_cast<double>(j) / doc.m;
            for (int i = 0; i < doc.n; ++i) traj.node(j)[i] = d.eval(t, traj.node(j).x(i));
        }
        delta = std::move(traj);
    }
    std::optional<GridFunction> eta;
    if (doc.certificate.eta_rho == "auto-from-alpha") {
        if (!alpha)
            throw ValidationError("eta_rho = auto-from-alpha requires a Pointwise nonlocal form");
        eta = alpha;
    } else if (doc.certificate.eta_rho != "zero") {
        Expression e = Expression::parse(doc.certificate.eta_rho, VarSet::of_x());
        eta = GridFunction::sample(doc.length, doc.n, [&](double x) { return e.eval(0.0, x); });
    }

    InstanceParams params{
        .length = doc.length,
        .n = doc.n,
        .m = doc.m,
        .semigroup_kind = doc.semigroup_kind,
        .g = std::move(g),
        .b = std::move(b),
        .delta_rho = std::move(delta),
        .eta_rho = std::move(eta),
        .t0 = doc.certificate.t0,
        .rho = rho_max,
        .cone_tol = ConeTolerance{},
        .quadrature = doc.quadrature,
    };
    ProblemInstance instance = make_instance(params);
    instance.certificate.rho = doc.solver.rhos.front();

    SolverConfig solver;
    solver.rho = doc.solver.rhos.front();
    solver.max_iters = doc.solver.max_iters;
    solver.tol_rel = doc.solver.tol_rel;
    solver.damping = doc.solver.damping;
    solver.initial_guess = doc.solver.initial_guess == "RandomCone"
                               ? InitialGuessKind::RandomCone
                               : InitialGuessKind::SineProfile;
    solver.seed = doc.solver.seed;

    if (solver.max_iters < 1) throw ValidationError("solver.max_iters must be positive");
    if (!(solver.tol_rel > 0.0)) throw ValidationError("solver.tol_rel must be positive");
    if (!(solver.damping > 0.0 && solver.damping <= 1.0))
        throw ValidationError("solver.damping must lie in (0, 1]");

    return BuiltInstance{std::move(instance), std::move(solver), doc.solver.rhos};
}

}  // namespace mildeig
