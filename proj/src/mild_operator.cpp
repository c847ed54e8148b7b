#include "mildeig/mild_operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace mildeig {

namespace {

void require_mild_config(const Trajectory& y, const MildConfig& cfg) {
    if (cfg.m < 2) throw Error("mild config needs m >= 2");
    if (y.steps() != cfg.m)
        throw DimensionMismatch("trajectory steps do not match the mild config");
}

std::vector<GridFunction> integrand_nodes(const TimeSliceFn& f, const Trajectory& y) {
    std::vector<GridFunction> nodes;
    nodes.reserve(static_cast<std::size_t>(y.steps()) + 1);
    for (int j = 0; j <= y.steps(); ++j) nodes.push_back(f(y.time(j), y.node(j)));
    return nodes;
}

Trajectory duhamel_direct(const SemigroupHandle& u, const std::vector<GridFunction>& f,
                          const Trajectory& y) {
    const int m = y.steps();
    const double dt = 1.0 / m;
    Trajectory g = Trajectory::zeros(y.length(), y.space_size(), m);
    for (int j = 1; j <= m; ++j) {
        GridFunction acc = GridFunction::zeros(y.length(), y.space_size());
        for (int i = 0; i <= j; ++i) {
            GridFunction term = u.apply((j - i) * dt, f[static_cast<std::size_t>(i)]);
            acc.axpy(duhamel_weight(i, j), term);
        }
        acc *= dt;
        g.node(j) = acc;
    }
    return g;
}

Trajectory duhamel_recurrence(const SemigroupHandle& u, const std::vector<GridFunction>& f,
                              const Trajectory& y) {
    const int m = y.steps();
    const double dt = 1.0 / m;
    Trajectory g = Trajectory::zeros(y.length(), y.space_size(), m);

    // Node 1: plain trapezoid over the single interval.
    {
        GridFunction acc = u.apply(dt, f[0]);
        acc += f[1];
        acc *= 0.5 * dt;
        g.node(1) = acc;
    }

    // Running left-weighted sum R_j = dt * [5/12 U(t_j)f_0 + 13/12 U(t_j - t_1)f_1
    // + sum_{i>=2} U(t_j - t_i) f_i]; the end correction turns it into the
    // corrected-trapezoid value at each node.
    GridFunction r = GridFunction::zeros(y.length(), y.space_size());
    r.axpy(5.0 / 12.0, f[0]);
    r = u.apply(dt, r);
    r.axpy(13.0 / 12.0, f[1]);
    for (int j = 2; j <= m; ++j) {
        r = u.apply(dt, r);
        r += f[static_cast<std::size_t>(j)];
        GridFunction node = r;
        node.axpy(1.0 / 12.0, u.apply(dt, f[static_cast<std::size_t>(j - 1)]));
        node.axpy(-7.0 / 12.0, f[static_cast<std::size_t>(j)]);
        node *= dt;
        g.node(j) = node;
    }
    return g;
}

}  // namespace

const char* to_string(QuadratureRoute route) {
    return route == QuadratureRoute::TrapezoidRecurrence ? "TrapezoidRecurrence"
                                                         : "TrapezoidDirect";
}

double duhamel_weight(int i, int j) {
    if (i < 0 || i > j || j < 1) throw Error("duhamel_weight index out of range");
    if (j == 1) return 0.5;
    const int d = std::min(i, j - i);  // distance to the nearer endpoint
    if (d == 0) return 5.0 / 12.0;
    if (d == 1) return j == 2 ? 7.0 / 6.0 : 13.0 / 12.0;
    return 1.0;
}

Trajectory apply_h(const SemigroupHandle& u, const NonlocalFn& b, const Trajectory& y) {
    GridFunction by = b(y);
    std::vector<GridFunction> nodes;
    nodes.reserve(static_cast<std::size_t>(y.steps()) + 1);
    for (int j = 0; j <= y.steps(); ++j) nodes.push_back(u.apply(y.time(j), by));
    return Trajectory(std::move(nodes));
}

Trajectory apply_g(const SemigroupHandle& u, const TimeSliceFn& f, const Trajectory& y,
                   const MildConfig& cfg) {
    require_mild_config(y, cfg);
    std::vector<GridFunction> nodes = integrand_nodes(f, y);
    return cfg.quadrature == QuadratureRoute::TrapezoidDirect
               ? duhamel_direct(u, nodes, y)
               : duhamel_recurrence(u, nodes, y);
}

Trajectory apply_t(const SemigroupHandle& u, const NonlocalFn& b, const TimeSliceFn& f,
                   const Trajectory& y, const MildConfig& cfg, const ConeTolerance& tol) {
    Trajectory t = apply_h(u, b, y);
    t += apply_g(u, f, y, cfg);
    return clamp_to_cone(t, tol);
}

double mild_residual(const SemigroupHandle& u, const NonlocalFn& b, const TimeSliceFn& f,
                     const Trajectory& y, double lambda, const MildConfig& cfg,
                     const ConeTolerance& tol) {
    Trajectory defect = y;
    Trajectory ty = apply_t(u, b, f, y, cfg, tol);
    ty *= lambda;
    defect -= ty;
    return norm_c(defect);
}

double cross_validate_quadratures(const SemigroupHandle& u, const TimeSliceFn& f,
                                  const Trajectory& y, const MildConfig& cfg,
                                  double tol) {
    require_mild_config(y, cfg);
    std::vector<GridFunction> nodes = integrand_nodes(f, y);
    Trajectory a = duhamel_recurrence(u, nodes, y);
    Trajectory b = duhamel_direct(u, nodes, y);
    a -= b;
    const double delta = norm_c(a);
    if (tol >= 0.0 && delta > tol) {
        throw QuadratureMismatch("quadrature routes disagree by " + std::to_string(delta));
    }
    return delta;
}

}  // namespace mildeig
