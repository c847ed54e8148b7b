#include "mildeig/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mildeig {

namespace {

void require_finite(std::span<const double> values) {
    for (double v : values) {
        if (!std::isfinite(v)) throw Error("grid function holds a non-finite value");
    }
}

}  // namespace

GridFunction::GridFunction(double length, std::vector<double> values)
    : length_(length), values_(std::move(values)) {
    if (!(length_ > 0.0)) throw Error("grid length must be positive");
    if (values_.empty()) throw Error("grid function needs at least one interior point");
    require_finite(values_);
}

GridFunction GridFunction::zeros(double length, int n) {
    if (n < 1) throw Error("interior point count must be positive");
    return GridFunction(length, std::vector<double>(static_cast<std::size_t>(n), 0.0));
}

GridFunction GridFunction::sample(double length, int n,
                                  const std::function<double(double)>& f) {
    GridFunction v = zeros(length, n);
    for (int i = 0; i < n; ++i) v[i] = f(v.x(i));
    require_finite(v.values());
    return v;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    require_composable(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    require_composable(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(double a) {
    for (double& v : values_) v *= a;
    return *this;
}

void GridFunction::axpy(double a, const GridFunction& v) {
    require_composable(*this, v);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += a * v.values_[i];
}

Trajectory::Trajectory(std::vector<GridFunction> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) throw Error("trajectory needs at least one time step");
    for (const GridFunction& v : nodes_) {
        if (!v.composable_with(nodes_.front()))
            throw DimensionMismatch("trajectory nodes disagree on the spatial lattice");
    }
}

Trajectory Trajectory::zeros(double length, int n, int m) {
    if (m < 1) throw Error("time step count must be positive");
    return Trajectory(std::vector<GridFunction>(static_cast<std::size_t>(m) + 1,
                                                GridFunction::zeros(length, n)));
}

Trajectory Trajectory::constant(const GridFunction& v, int m) {
    if (m < 1) throw Error("time step count must be positive");
    return Trajectory(std::vector<GridFunction>(static_cast<std::size_t>(m) + 1, v));
}

bool Trajectory::composable_with(const Trajectory& other) const {
    return steps() == other.steps() && nodes_.front().composable_with(other.nodes_.front());
}

Trajectory& Trajectory::operator+=(const Trajectory& other) {
    require_composable(*this, other);
    for (int j = 0; j <= steps(); ++j) node(j) += other.node(j);
    return *this;
}

Trajectory& Trajectory::operator-=(const Trajectory& other) {
    require_composable(*this, other);
    for (int j = 0; j <= steps(); ++j) node(j) -= other.node(j);
    return *this;
}

Trajectory& Trajectory::operator*=(double a) {
    for (int j = 0; j <= steps(); ++j) node(j) *= a;
    return *this;
}

void require_composable(const GridFunction& a, const GridFunction& b) {
    if (!a.composable_with(b))
        throw DimensionMismatch("grid functions disagree on L or n");
}

void require_composable(const Trajectory& a, const Trajectory& b) {
    if (!a.composable_with(b))
        throw DimensionMismatch("trajectories disagree on the space-time lattice");
}

double norm_sup(const GridFunction& v) {
    double m = 0.0;
    for (double x : v.values()) m = std::max(m, std::abs(x));
    return m;
}

double norm_c(const Trajectory& y) {
    double m = 0.0;
    for (int j = 0; j <= y.steps(); ++j) m = std::max(m, norm_sup(y.node(j)));
    return m;
}

ConeCheck is_in_cone(const GridFunction& v, const ConeTolerance& tol) {
    double min_val = 0.0;
    for (double x : v.values()) min_val = std::min(min_val, x);
    if (min_val >= 0.0) return {ConeStatus::Inside, 0.0};
    const double violation = -min_val;
    if (violation > tol.violation_eps) return {ConeStatus::Outside, violation};
    return {ConeStatus::ClampedInside, violation};
}

ConeCheck is_in_cone(const Trajectory& y, const ConeTolerance& tol) {
    ConeCheck worst;
    for (int j = 0; j <= y.steps(); ++j) {
        ConeCheck c = is_in_cone(y.node(j), tol);
        if (c.violation > worst.violation) worst.violation = c.violation;
        if (static_cast<int>(c.status) > static_cast<int>(worst.status)) worst.status = c.status;
    }
    return worst;
}

GridFunction clamp_to_cone(const GridFunction& v, const ConeTolerance& tol) {
    ConeCheck c = is_in_cone(v, tol);
    if (c.status == ConeStatus::Outside) {
        throw ConeViolation("positivity broken beyond tolerance: most negative entry -" +
                            std::to_string(c.violation));
    }
    GridFunction out = v;
    for (double& x : out.mutable_values()) x = std::max(x, 0.0);
    return out;
}

Trajectory clamp_to_cone(const Trajectory& y, const ConeTolerance& tol) {
    Trajectory out = y;
    for (int j = 0; j <= y.steps(); ++j) out.node(j) = clamp_to_cone(y.node(j), tol);
    return out;
}

bool order_leq(const GridFunction& u, const GridFunction& v, const ConeTolerance& tol) {
    require_composable(u, v);
    GridFunction d = v;
    d -= u;
    return is_in_cone(d, tol).status != ConeStatus::Outside;
}

}  // namespace mildeig
