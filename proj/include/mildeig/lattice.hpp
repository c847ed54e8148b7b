#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "mildeig/errors.hpp"

namespace mildeig {

/// Two-tier tolerance for membership in the discrete positive cone.
/// Entries in [-clamp_eps, 0) are treated as roundoff and silently repaired;
/// entries below -violation_eps are genuine positivity failures.
struct ConeTolerance {
    double clamp_eps = 1e-10;
    double violation_eps = 1e-8;
};

enum class ConeStatus { Inside, ClampedInside, Outside };

struct ConeCheck {
    ConeStatus status = ConeStatus::Inside;
    double violation = 0.0;  // magnitude of the most negative entry, 0 if none
};

/// Spatial profile on the uniform interior grid of [0, L].
///
/// Interior point i (0-based) sits at x_i = (i+1)*L/(n+1). The boundary values
/// are identically zero and never stored, matching homogeneous Dirichlet data.
class GridFunction {
public:
    GridFunction(double length, std::vector<double> values);

    static GridFunction zeros(double length, int n);
    static GridFunction sample(double length, int n, const std::function<double(double)>& f);

    double length() const { return length_; }
    int size() const { return static_cast<int>(values_.size()); }
    double x(int i) const { return (i + 1) * length_ / (size() + 1); }

    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return values_[static_cast<std::size_t>(i)]; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }

    bool composable_with(const GridFunction& other) const {
        return length_ == other.length_ && values_.size() == other.values_.size();
    }

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(double a);

    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(double a, GridFunction v) { return v *= a; }

    /// w += a*v
    void axpy(double a, const GridFunction& v);

private:
    double length_;
    std::vector<double> values_;
};

/// Time-indexed family of grid functions on the uniform grid of [0, 1];
/// node j sits at t_j = j/m.
class Trajectory {
public:
    explicit Trajectory(std::vector<GridFunction> nodes);

    static Trajectory zeros(double length, int n, int m);
    /// All m+1 nodes equal to v.
    static Trajectory constant(const GridFunction& v, int m);

    int steps() const { return static_cast<int>(nodes_.size()) - 1; }
    double time(int j) const { return static_cast<double>(j) / steps(); }
    double length() const { return nodes_.front().length(); }
    int space_size() const { return nodes_.front().size(); }

    const GridFunction& node(int j) const { return nodes_[static_cast<std::size_t>(j)]; }
    GridFunction& node(int j) { return nodes_[static_cast<std::size_t>(j)]; }

    bool composable_with(const Trajectory& other) const;

    Trajectory& operator+=(const Trajectory& other);
    Trajectory& operator-=(const Trajectory& other);
    Trajectory& operator*=(double a);
    friend Trajectory operator+(Trajectory a, const Trajectory& b) { return a += b; }
    friend Trajectory operator-(Trajectory a, const Trajectory& b) { return a -= b; }
    friend Trajectory operator*(double a, Trajectory y) { return y *= a; }

private:
    std::vector<GridFunction> nodes_;
};

void require_composable(const GridFunction& a, const GridFunction& b);
void require_composable(const Trajectory& a, const Trajectory& b);

/// Max over grid points of |v_i|.
double norm_sup(const GridFunction& v);

/// Max over time nodes of norm_sup.
double norm_c(const Trajectory& y);

ConeCheck is_in_cone(const GridFunction& v, const ConeTolerance& tol);
/// Worst node over the trajectory.
ConeCheck is_in_cone(const Trajectory& y, const ConeTolerance& tol);

/// Replace negative entries by 0. Throws ConeViolation when the input is
/// Outside — the discrete operator broke positivity beyond roundoff.
GridFunction clamp_to_cone(const GridFunction& v, const ConeTolerance& tol);
Trajectory clamp_to_cone(const Trajectory& y, const ConeTolerance& tol);

/// Partial order induced by the cone: u <= v iff v - u is (Clamped)Inside.
bool order_leq(const GridFunction& u, const GridFunction& v, const ConeTolerance& tol);

}  // namespace mildeig
