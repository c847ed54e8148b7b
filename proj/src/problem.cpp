#include "mildeig/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace mildeig {

// ---------------------------------------------------------------------------
// Nonlinearity

Nonlinearity Nonlinearity::zero() { return Nonlinearity(); }

Nonlinearity Nonlinearity::linear() {
    Nonlinearity g;
    g.kind_ = Kind::Linear;
    return g;
}

Nonlinearity Nonlinearity::power_law(double c, double p) {
    if (c < 0.0) throw ValidationError("power-law coefficient must be nonnegative");
    if (p < 0.0) throw ValidationError("power-law exponent must be nonnegative");
    Nonlinearity g;
    g.kind_ = Kind::PowerLaw;
    g.c_ = c;
    g.p_ = p;
    return g;
}

Nonlinearity Nonlinearity::expression(Expression expr) {
    Nonlinearity g;
    g.kind_ = Kind::Expr;
    g.expr_ = std::move(expr);
    return g;
}

double Nonlinearity::eval(double t, double x, double u, double length) const {
    // Domain of g is u in [0, rho]; ClampedInside inputs may carry -1e-16
    // noise that would leave the domain of fractional powers.
    u = std::max(u, 0.0);
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Linear: return u;
        case Kind::PowerLaw: return c_ * t * x * (length - x) * std::pow(u, p_);
        case Kind::Expr: return expr_->eval(t, x, u);
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// BetaFunctional / NonlocalOperator

double BetaFunctional::eval(std::span<const double> phi) const {
    const int m = static_cast<int>(phi.size()) - 1;
    const double dt = 1.0 / m;
    if (kind == BetaKind::WeightedIntegral && static_cast<int>(weights.size()) != m + 1)
        throw DimensionMismatch("beta weights do not match the time grid");
    switch (kind) {
        case BetaKind::PointEval:
            if (point_node < 0 || point_node > m)
                throw DimensionMismatch("beta evaluation node outside the time grid");
            return phi[static_cast<std::size_t>(point_node)];
        case BetaKind::ExpIntegral: {
            double acc = 0.5 * (std::exp(phi[0]) + std::exp(phi[static_cast<std::size_t>(m)]));
            for (int j = 1; j < m; ++j) acc += std::exp(phi[static_cast<std::size_t>(j)]);
            return dt * acc;
        }
        case BetaKind::WeightedIntegral: {
            double acc = 0.5 * (weights[0] * phi[0] +
                                weights[static_cast<std::size_t>(m)] * phi[static_cast<std::size_t>(m)]);
            for (int j = 1; j < m; ++j)
                acc += weights[static_cast<std::size_t>(j)] * phi[static_cast<std::size_t>(j)];
            return dt * acc;
        }
    }
    return 0.0;
}

NonlocalOperator NonlocalOperator::zero() {
    NonlocalOperator b;
    b.form_ = Multipoint{};
    return b;
}

NonlocalOperator NonlocalOperator::pointwise(GridFunction alpha, BetaFunctional beta,
                                             int sensor_index) {
    if (sensor_index < 0 || sensor_index >= alpha.size())
        throw ValidationError("sensor index outside the grid");
    NonlocalOperator b;
    b.form_ = Pointwise{std::move(alpha), std::move(beta), sensor_index};
    return b;
}

NonlocalOperator NonlocalOperator::multipoint(std::vector<int> nodes, std::vector<double> coeffs,
                                              std::vector<double> snap_distances) {
    if (nodes.size() != coeffs.size())
        throw ValidationError("multipoint nodes and coefficients differ in length");
    for (double c : coeffs)
        if (c < 0.0) throw ValidationError("multipoint coefficients must be nonnegative");
    NonlocalOperator b;
    b.form_ = Multipoint{std::move(nodes), std::move(coeffs), std::move(snap_distances)};
    return b;
}

NonlocalOperator NonlocalOperator::periodic() {
    NonlocalOperator b;
    b.form_ = Periodic{};
    return b;
}

NonlocalOperator NonlocalOperator::integral_average(std::vector<double> weights) {
    for (double w : weights)
        if (w < 0.0) throw ValidationError("integral-average weight must be nonnegative");
    NonlocalOperator b;
    b.form_ = IntegralAverage{std::move(weights)};
    return b;
}

GridFunction NonlocalOperator::apply(const Trajectory& y) const {
    const int m = y.steps();
    if (const auto* f = std::get_if<Multipoint>(&form_)) {
        GridFunction out = GridFunction::zeros(y.length(), y.space_size());
        for (std::size_t k = 0; k < f->nodes.size(); ++k) {
            if (f->nodes[k] < 0 || f->nodes[k] > m)
                throw DimensionMismatch("multipoint node outside the time grid");
            out.axpy(f->coeffs[k], y.node(f->nodes[k]));
        }
        return out;
    }
    if (const auto* f = std::get_if<Pointwise>(&form_)) {
        std::vector<double> phi(static_cast<std::size_t>(m) + 1);
        for (int j = 0; j <= m; ++j) phi[static_cast<std::size_t>(j)] = y.node(j)[f->sensor_index];
        const double beta = f->beta.eval(phi);
        GridFunction out = f->alpha;
        out *= beta;
        return out;
    }
    if (std::holds_alternative<Periodic>(form_)) return y.node(m);

    const auto& f = std::get<IntegralAverage>(form_);
    if (static_cast<int>(f.weights.size()) != m + 1)
        throw DimensionMismatch("integral-average weights do not match the time grid");
    const double dt = 1.0 / m;
    GridFunction out = GridFunction::zeros(y.length(), y.space_size());
    for (int j = 0; j <= m; ++j) {
        const double w = (j == 0 || j == m) ? 0.5 : 1.0;
        out.axpy(dt * w * f.weights[static_cast<std::size_t>(j)], y.node(j));
    }
    return out;
}

bool NonlocalOperator::is_identically_zero() const {
    if (const auto* f = std::get_if<Multipoint>(&form_)) {
        for (double c : f->coeffs)
            if (c != 0.0) return false;
        return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// ProblemInstance operations

namespace {

void require_radius(double norm, double rho, const char* what) {
    if (norm > rho * (1.0 + 1e-12))
        throw DomainExceeded(std::string(what) + " exceeds the radius-rho domain: " +
                             std::to_string(norm) + " > " + std::to_string(rho));
}

}  // namespace

GridFunction ProblemInstance::eval_f(double t, const GridFunction& v) const {
    return eval_f(t, v, certificate.rho);
}

GridFunction ProblemInstance::eval_f(double t, const GridFunction& v, double rho_bound) const {
    if (is_in_cone(v, cone_tol).status == ConeStatus::Outside)
        throw ConeViolation("f argument is outside the cone");
    require_radius(norm_sup(v), rho_bound, "f argument");
    GridFunction out = GridFunction::zeros(v.length(), v.size());
    for (int i = 0; i < v.size(); ++i) out[i] = g.eval(t, v.x(i), v[i], length);
    return clamp_to_cone(out, cone_tol);
}

GridFunction ProblemInstance::eval_b(const Trajectory& y) const {
    return eval_b(y, certificate.rho);
}

GridFunction ProblemInstance::eval_b(const Trajectory& y, double rho_bound) const {
    if (is_in_cone(y, cone_tol).status == ConeStatus::Outside)
        throw ConeViolation("B argument is outside the cone");
    require_radius(norm_c(y), rho_bound, "B argument");
    return clamp_to_cone(b.apply(y), cone_tol);
}

TimeSliceFn ProblemInstance::f_fn(double rho_bound) const {
    return [this, rho_bound](double t, const GridFunction& v) {
        return eval_f(t, v, rho_bound);
    };
}

NonlocalFn ProblemInstance::b_fn(double rho_bound) const {
    return [this, rho_bound](const Trajectory& y) { return eval_b(y, rho_bound); };
}

Trajectory ProblemInstance::apply_t_op(const Trajectory& y, double rho_bound) const {
    return apply_t(semigroup, b_fn(rho_bound), f_fn(rho_bound), y, mild_cfg, cone_tol);
}

double ProblemInstance::residual(const Trajectory& y, double lambda, double rho_bound) const {
    return mild_residual(semigroup, b_fn(rho_bound), f_fn(rho_bound), y, lambda, mild_cfg,
                         cone_tol);
}

double ProblemInstance::compute_h4() const {
    const int j0 = certificate.t0_node;
    const double t0 = static_cast<double>(j0) / m;
    GridFunction acc = semigroup.apply(t0, certificate.eta_rho);

    // Duhamel part over [0, t0] with the same corrected-trapezoid weights as
    // apply_g, restricted to the first j0 intervals.
    if (j0 >= 1) {
        const double dt = 1.0 / m;
        GridFunction integral = GridFunction::zeros(length, n);
        for (int i = 0; i <= j0; ++i) {
            GridFunction term = semigroup.apply((j0 - i) * dt, certificate.delta_rho.node(i));
            integral.axpy(duhamel_weight(i, j0), term);
        }
        integral *= dt;
        acc += integral;
    }
    return norm_sup(acc);
}

Trajectory random_boundary_trajectory(double length, int n, int m, double rho,
                                      std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Trajectory y = Trajectory::zeros(length, n, m);
    double max_val = 0.0;
    for (int j = 0; j <= m; ++j)
        for (int i = 0; i < n; ++i) {
            const double v = unit(rng);
            y.node(j)[i] = v;
            max_val = std::max(max_val, v);
        }
    if (max_val == 0.0) {
        y.node(0)[0] = rho;  // degenerate draw; keep the contract
        return y;
    }
    y *= rho / max_val;
    return y;
}

HypothesisReport ProblemInstance::check_hypotheses(int samples, unsigned long seed) const {
    if (samples < 1) throw Error("check_hypotheses needs at least one sample");
    std::mt19937_64 rng(seed);
    const double rho = certificate.rho;

    HypothesisReport report;
    report.samples = samples;
    report.seed = seed;
    report.h2_margin = std::numeric_limits<double>::infinity();
    report.h3_margin = std::numeric_limits<double>::infinity();

    for (int s = 0; s < samples; ++s) {
        Trajectory y = random_boundary_trajectory(length, n, m, rho, rng);
        for (int j = 0; j <= m; ++j) {
            GridFunction fj = eval_f(y.time(j), y.node(j), rho);
            report.m_rho = std::max(report.m_rho, norm_sup(fj));
            const GridFunction& dj = certificate.delta_rho.node(j);
            for (int i = 0; i < n; ++i)
                report.h2_margin = std::min(report.h2_margin, fj[i] - dj[i]);
        }
        GridFunction by = eval_b(y, rho);
        report.n_rho = std::max(report.n_rho, norm_sup(by));
        for (int i = 0; i < n; ++i)
            report.h3_margin = std::min(report.h3_margin, by[i] - certificate.eta_rho[i]);
    }

    report.h4_value = compute_h4();
    report.pass_h2 = report.h2_margin >= -cone_tol.clamp_eps;
    report.pass_h3 = report.h3_margin >= -cone_tol.clamp_eps;
    report.pass_h4 = report.h4_value > 0.0;
    return report;
}

// ---------------------------------------------------------------------------
// Instance assembly

int snap_to_space_grid(double x, double length, int n, double tol) {
    const double h = length / (n + 1);
    const int i = static_cast<int>(std::lround(x / h)) - 1;
    if (i < 0 || i >= n || std::abs((i + 1) * h - x) > tol * std::max(1.0, length))
        throw ValidationError("coordinate " + std::to_string(x) +
                              " does not coincide with an interior grid point");
    return i;
}

int snap_to_time_grid(double t, int m, double* snap_distance) {
    int j = static_cast<int>(std::lround(t * m));
    j = std::clamp(j, 0, m);
    if (snap_distance) *snap_distance = std::abs(static_cast<double>(j) / m - t);
    return j;
}

ProblemInstance make_instance(const InstanceParams& params) {
    if (!(params.length > 0.0)) throw ValidationError("domain length must be positive");
    if (params.n < 1) throw ValidationError("interior point count must be positive");
    if (params.m < 2) throw ValidationError("time step count must be at least 2");
    if (!(params.rho > 0.0)) throw ValidationError("rho must be positive");

    ProblemInstance p{
        .length = params.length,
        .n = params.n,
        .m = params.m,
        .semigroup_kind = params.semigroup_kind,
        .semigroup = SemigroupHandle::make(params.semigroup_kind, params.length, params.n),
        .g = params.g,
        .b = params.b,
        .certificate =
            CertificateData{
                params.delta_rho.value_or(Trajectory::zeros(params.length, params.n, params.m)),
                params.eta_rho.value_or(GridFunction::zeros(params.length, params.n)),
                1,
                params.rho,
            },
        .cone_tol = params.cone_tol,
        .mild_cfg = MildConfig{params.quadrature, params.m},
    };

    if (p.cone_tol.clamp_eps < 0.0 || p.cone_tol.violation_eps < p.cone_tol.clamp_eps)
        throw ValidationError("cone tolerance needs 0 <= clamp_eps <= violation_eps");

    if (p.certificate.delta_rho.steps() != params.m ||
        p.certificate.delta_rho.space_size() != params.n ||
        p.certificate.delta_rho.length() != params.length)
        throw ValidationError("delta_rho does not match the space-time lattice");
    if (p.certificate.eta_rho.size() != params.n || p.certificate.eta_rho.length() != params.length)
        throw ValidationError("eta_rho does not match the spatial lattice");
    if (is_in_cone(p.certificate.delta_rho, p.cone_tol).status == ConeStatus::Outside)
        throw ValidationError("delta_rho must lie in the cone");
    if (is_in_cone(p.certificate.eta_rho, p.cone_tol).status == ConeStatus::Outside)
        throw ValidationError("eta_rho must lie in the cone");

    double snap = 0.0;
    p.certificate.t0_node = snap_to_time_grid(params.t0, params.m, &snap);
    if (snap > 1e-9) throw ValidationError("t0 does not coincide with a time node");
    if (p.certificate.t0_node < 1) throw ValidationError("t0 must be positive");

    // Nonnegativity of g sampled on a 20^3 lattice over [0,1] x [0,L] x [0,rho].
    constexpr int kRange = 20;
    for (int a = 0; a < kRange; ++a)
        for (int bb = 0; bb < kRange; ++bb)
            for (int c = 0; c < kRange; ++c) {
                const double t = a / double(kRange - 1);
                const double x = params.length * bb / double(kRange - 1);
                const double u = params.rho * c / double(kRange - 1);
                if (p.g.eval(t, x, u, params.length) < 0.0)
                    throw ValidationError("g takes a negative value on the sample lattice");
            }

    return p;
}

ProblemInstance example_instance(int n, int m, double rho, SemigroupKind kind) {
    const double length = std::numbers::pi;
    const int sensor = snap_to_space_grid(length / 2.0, length, n);
    GridFunction alpha = GridFunction::sample(length, n, [](double x) { return std::sin(x); });
    BetaFunctional beta;
    beta.kind = BetaKind::ExpIntegral;

    InstanceParams params{
        .length = length,
        .n = n,
        .m = m,
        .semigroup_kind = kind,
        .g = Nonlinearity::power_law(1.0, 2.0),
        .b = NonlocalOperator::pointwise(alpha, beta, sensor),
        .delta_rho = std::nullopt,  // mu_rho = 0
        .eta_rho = alpha,           // nu_rho = 1, eta = alpha * nu
        .t0 = 1.0,
        .rho = rho,
        .cone_tol = ConeTolerance{},
        .quadrature = QuadratureRoute::TrapezoidRecurrence,
    };
    return make_instance(params);
}

}  // namespace mildeig
