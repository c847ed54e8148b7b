#pragma once

#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "mildeig/expression.hpp"
#include "mildeig/lattice.hpp"
#include "mildeig/mild_operator.hpp"
#include "mildeig/semigroup.hpp"

namespace mildeig {

/// Scalar reaction term g(t, x, u) inducing f(t, v)(x) = g(t, x, v(x)).
/// g must be nonnegative for u >= 0; expression-backed instances are
/// range-checked by sampling at construction time (see make_instance).
class Nonlinearity {
public:
    enum class Kind { Zero, Linear, PowerLaw, Expr };

    static Nonlinearity zero();
    static Nonlinearity linear();
    /// g = c * t * x * (L - x) * u^p, c >= 0, p >= 0.
    static Nonlinearity power_law(double c, double p);
    static Nonlinearity expression(Expression g);

    double eval(double t, double x, double u, double length) const;
    Kind kind() const { return kind_; }
    bool is_identically_zero() const { return kind_ == Kind::Zero; }

private:
    Kind kind_ = Kind::Zero;
    double c_ = 0.0;
    double p_ = 1.0;
    std::optional<Expression> expr_;
};

enum class BetaKind { ExpIntegral, PointEval, WeightedIntegral };

/// Functional acting on the sensor trace phi(t) = y(t)(x*).
struct BetaFunctional {
    BetaKind kind = BetaKind::ExpIntegral;
    int point_node = 0;          // PointEval: snapped time node
    double point_snap = 0.0;     // PointEval: snapping distance
    std::vector<double> weights; // WeightedIntegral: w sampled on time nodes

    double eval(std::span<const double> phi) const;
};

/// Nonlocal initial-condition operator B mapping trajectories into profiles.
class NonlocalOperator {
public:
    struct Pointwise {
        GridFunction alpha;
        BetaFunctional beta;
        int sensor_index;
    };
    struct Multipoint {
        std::vector<int> nodes;
        std::vector<double> coeffs;
        std::vector<double> snap_distances;
    };
    struct Periodic {};
    struct IntegralAverage {
        std::vector<double> weights;  // w >= 0 sampled on time nodes
    };

    static NonlocalOperator zero();
    static NonlocalOperator pointwise(GridFunction alpha, BetaFunctional beta, int sensor_index);
    static NonlocalOperator multipoint(std::vector<int> nodes, std::vector<double> coeffs,
                                       std::vector<double> snap_distances);
    static NonlocalOperator periodic();
    static NonlocalOperator integral_average(std::vector<double> weights);

    /// Raw application, no domain checks (those live in ProblemInstance::eval_b).
    GridFunction apply(const Trajectory& y) const;
    bool is_identically_zero() const;
    const Pointwise* as_pointwise() const { return std::get_if<Pointwise>(&form_); }

private:
    std::variant<Multipoint, Pointwise, Periodic, IntegralAverage> form_;
};

/// Certificate data (delta_rho, eta_rho, t0) feeding the (H4) quantity.
struct CertificateData {
    Trajectory delta_rho;
    GridFunction eta_rho;
    int t0_node = 1;   // time node index of t0, must be >= 1
    double rho = 1.0;
};

struct HypothesisReport {
    double m_rho = 0.0;      // sup of ||f(t, y(t))|| over the sample
    double n_rho = 0.0;      // sup of ||B(y)|| over the sample
    double h2_margin = 0.0;  // min entrywise f(t, y(t)) - delta_rho(t)
    double h3_margin = 0.0;  // min entrywise B(y) - eta_rho
    double h4_value = 0.0;
    bool pass_h2 = false;
    bool pass_h3 = false;
    bool pass_h4 = false;
    int samples = 0;
    unsigned long seed = 0;
};

/// A fully assembled, validated problem: lattice, semigroup, f, B, and the
/// certificate data. Immutable after construction; all operations are const.
struct ProblemInstance {
    double length = 0.0;
    int n = 0;
    int m = 0;
    SemigroupKind semigroup_kind = SemigroupKind::SpectralHeat;
    SemigroupHandle semigroup;
    Nonlinearity g;
    NonlocalOperator b;
    CertificateData certificate;
    ConeTolerance cone_tol;
    MildConfig mild_cfg;

    /// f(t, v) with the (H2) domain checks: v in the cone, ||v|| <= rho.
    GridFunction eval_f(double t, const GridFunction& v) const;
    GridFunction eval_f(double t, const GridFunction& v, double rho_bound) const;

    /// B(y) with the (H3) domain checks.
    GridFunction eval_b(const Trajectory& y) const;
    GridFunction eval_b(const Trajectory& y, double rho_bound) const;

    /// Checked callables for the mild operator, bound to the given radius.
    TimeSliceFn f_fn(double rho_bound) const;
    NonlocalFn b_fn(double rho_bound) const;

    Trajectory apply_t_op(const Trajectory& y, double rho_bound) const;
    double residual(const Trajectory& y, double lambda, double rho_bound) const;

    /// || U(t0) eta_rho + integral_0^{t0} U(t0 - s) delta_rho(s) ds ||_sup,
    /// evaluated with the Duhamel quadrature of apply_g.
    double compute_h4() const;

    HypothesisReport check_hypotheses(int samples, unsigned long seed) const;
};

/// Random trajectory on the discrete cone boundary: nonnegative nodes,
/// rescaled so norm_C equals rho exactly (to one rounding).
Trajectory random_boundary_trajectory(double length, int n, int m, double rho,
                                      std::mt19937_64& rng);

struct InstanceParams {
    double length = 0.0;
    int n = 0;
    int m = 0;
    SemigroupKind semigroup_kind = SemigroupKind::SpectralHeat;
    Nonlinearity g = Nonlinearity::zero();
    NonlocalOperator b = NonlocalOperator::zero();
    std::optional<Trajectory> delta_rho;   // default: zero
    std::optional<GridFunction> eta_rho;   // default: zero
    double t0 = 1.0;
    double rho = 1.0;
    ConeTolerance cone_tol;
    QuadratureRoute quadrature = QuadratureRoute::TrapezoidRecurrence;
};

/// Validate and assemble a problem instance. Throws ValidationError on
/// inconsistent data (negative weights, off-grid t0, g negative on the sample
/// lattice, certificate data outside the cone, ...).
ProblemInstance make_instance(const InstanceParams& params);

/// The worked heat-flow instance: L = pi, g = t*x*(pi-x)*u^2, alpha = sin,
/// beta = ExpIntegral at the midpoint sensor, delta_rho = 0, eta_rho = sin,
/// t0 = 1.
ProblemInstance example_instance(int n, int m, double rho,
                                 SemigroupKind kind = SemigroupKind::SpectralHeat);

/// Snap a coordinate to the interior grid of [0, L]; ValidationError when no
/// node is within `tol`. Returns the node index.
int snap_to_space_grid(double x, double length, int n, double tol = 1e-9);
/// Snap a time to the uniform grid of [0, 1]; always succeeds, returns the
/// nearest node and writes the snapping distance.
int snap_to_time_grid(double t, int m, double* snap_distance = nullptr);

}  // namespace mildeig
