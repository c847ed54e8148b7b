#include "mildeig/semigroup.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>

namespace mildeig {

namespace {

// Pade-13 scaling-and-squaring matrix exponential (Higham's coefficients).
Eigen::MatrixXd expm_pade13(const Eigen::MatrixXd& a) {
    static const double b[14] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;

    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    Eigen::MatrixXd as = a;
    if (norm1 > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
        as /= std::pow(2.0, squarings);
    }

    const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(a.rows(), a.cols());
    const Eigen::MatrixXd a2 = as * as;
    const Eigen::MatrixXd a4 = a2 * a2;
    const Eigen::MatrixXd a6 = a2 * a4;
    Eigen::MatrixXd u =
        as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
              b[3] * a2 + b[1] * ident);
    Eigen::MatrixXd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                        b[4] * a4 + b[2] * a2 + b[0] * ident;
    Eigen::MatrixXd r = (v - u).partialPivLu().solve(v + u);
    for (int s = 0; s < squarings; ++s) r = r * r;
    return r;
}

}  // namespace

const char* to_string(SemigroupKind kind) {
    return kind == SemigroupKind::SpectralHeat ? "SpectralHeat" : "MatrixExpOracle";
}

struct SemigroupHandle::Impl {
    SemigroupKind kind;
    double length = 0.0;
    int n = 0;
    double growth_m = 1.0;
    double growth_delta = 0.0;
    std::atomic<double> bound_d{1.0};

    // sine_table[(k-1)*n + i] = sin(k*pi*(i+1)/(n+1)), k = 1..n
    std::vector<double> sine_table;

    // MatrixExpOracle state: dense Laplacian and per-t propagator cache.
    Eigen::MatrixXd laplacian;
    mutable std::mutex cache_mutex;
    mutable std::map<double, Eigen::MatrixXd> propagator_cache;

    double mode_eigenvalue(int k) const {
        const double w = k * std::numbers::pi / length;
        return -w * w;
    }

    void forward_dst(std::span<const double> v, std::vector<double>& coeffs) const {
        coeffs.assign(static_cast<std::size_t>(n), 0.0);
        const double scale = 2.0 / (n + 1);
        for (int k = 1; k <= n; ++k) {
            const double* row = sine_table.data() + static_cast<std::size_t>(k - 1) * n;
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += row[i] * v[static_cast<std::size_t>(i)];
            coeffs[static_cast<std::size_t>(k - 1)] = scale * acc;
        }
    }

    void synthesize(const std::vector<double>& coeffs, std::vector<double>& out) const {
        out.assign(static_cast<std::size_t>(n), 0.0);
        for (int k = 1; k <= n; ++k) {
            const double c = coeffs[static_cast<std::size_t>(k - 1)];
            if (c == 0.0) continue;
            const double* row = sine_table.data() + static_cast<std::size_t>(k - 1) * n;
            for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] += c * row[i];
        }
    }

    // Returns by value: the cache may be cleared by a concurrent insert, so
    // references into it must not escape the lock.
    Eigen::MatrixXd propagator(double t) const {
        std::scoped_lock lock(cache_mutex);
        auto it = propagator_cache.find(t);
        if (it != propagator_cache.end()) return it->second;
        if (propagator_cache.size() >= 256) propagator_cache.clear();
        Eigen::MatrixXd p = expm_pade13(t * laplacian);
        propagator_cache.emplace(t, p);
        return p;
    }
};

SemigroupHandle::SemigroupHandle(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

SemigroupHandle SemigroupHandle::spectral_heat(double length, int n) {
    if (!(length > 0.0)) throw Error("semigroup length must be positive");
    if (n < 1) throw Error("semigroup grid size must be positive");
    auto impl = std::make_shared<Impl>();
    impl->kind = SemigroupKind::SpectralHeat;
    impl->length = length;
    impl->n = n;
    impl->sine_table.resize(static_cast<std::size_t>(n) * n);
    for (int k = 1; k <= n; ++k)
        for (int i = 0; i < n; ++i)
            impl->sine_table[static_cast<std::size_t>(k - 1) * n + i] =
                std::sin(k * std::numbers::pi * (i + 1) / (n + 1));
    impl->growth_m = 1.0;
    impl->growth_delta = impl->mode_eigenvalue(1);
    impl->bound_d = 1.0;  // delta < 0, so sup over [0,1] of exp(delta t) is at t = 0
    return SemigroupHandle(std::move(impl));
}

SemigroupHandle SemigroupHandle::matrix_exp_oracle(double length, int n) {
    SemigroupHandle spectral = spectral_heat(length, n);
    auto impl = std::make_shared<Impl>();
    impl->kind = SemigroupKind::MatrixExpOracle;
    impl->length = length;
    impl->n = n;
    impl->growth_m = spectral.impl_->growth_m;
    impl->growth_delta = spectral.impl_->growth_delta;
    impl->bound_d = spectral.impl_->bound_d.load();
    impl->sine_table = spectral.impl_->sine_table;
    // Dense Dirichlet Laplacian in the sine basis: A = S^T diag(lambda) S * 2/(n+1).
    Eigen::MatrixXd s(n, n);
    for (int k = 1; k <= n; ++k)
        for (int i = 0; i < n; ++i)
            s(k - 1, i) = impl->sine_table[static_cast<std::size_t>(k - 1) * n + i];
    Eigen::VectorXd lambda(n);
    for (int k = 1; k <= n; ++k) lambda(k - 1) = impl->mode_eigenvalue(k);
    impl->laplacian = (2.0 / (n + 1)) * s.transpose() * lambda.asDiagonal() * s;
    return SemigroupHandle(std::move(impl));
}

SemigroupHandle SemigroupHandle::make(SemigroupKind kind, double length, int n) {
    return kind == SemigroupKind::SpectralHeat ? spectral_heat(length, n)
                                               : matrix_exp_oracle(length, n);
}

SemigroupKind SemigroupHandle::kind() const { return impl_->kind; }
double SemigroupHandle::length() const { return impl_->length; }
int SemigroupHandle::size() const { return impl_->n; }
double SemigroupHandle::growth_m() const { return impl_->growth_m; }
double SemigroupHandle::growth_delta() const { return impl_->growth_delta; }
double SemigroupHandle::bound_d() const { return impl_->bound_d.load(); }

GridFunction SemigroupHandle::apply(double t, const GridFunction& v) const {
    if (t < 0.0) throw NegativeTime("semigroup evaluated at t < 0");
    if (v.length() != impl_->length || v.size() != impl_->n)
        throw DimensionMismatch("profile does not match the semigroup lattice");
    if (t == 0.0) return v;  // (U1), bitwise

    if (impl_->kind == SemigroupKind::SpectralHeat) {
        std::vector<double> coeffs;
        impl_->forward_dst(v.values(), coeffs);
        for (int k = 1; k <= impl_->n; ++k)
            coeffs[static_cast<std::size_t>(k - 1)] *=
                std::exp(impl_->mode_eigenvalue(k) * t);
        std::vector<double> out;
        impl_->synthesize(coeffs, out);
        return GridFunction(impl_->length, std::move(out));
    }

    const Eigen::MatrixXd p = impl_->propagator(t);
    Eigen::Map<const Eigen::VectorXd> vin(v.values().data(), impl_->n);
    Eigen::VectorXd w = p * vin;
    return GridFunction(impl_->length, std::vector<double>(w.data(), w.data() + impl_->n));
}

AxiomReport SemigroupHandle::check_axioms(int samples, double tol, unsigned long seed) const {
    if (samples < 1) throw Error("check_axioms needs at least one sample");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    const int n = impl_->n;

    AxiomReport report;
    report.tolerance = tol;

    auto random_profile = [&](bool nonnegative) {
        GridFunction v = GridFunction::zeros(impl_->length, n);
        for (int i = 0; i < n; ++i) v[i] = nonnegative ? unit(rng) : sym(rng);
        return v;
    };

    // (U2) composition on random (t, s, v).
    for (int it = 0; it < samples; ++it) {
        const double t = unit(rng);
        const double s = unit(rng);
        GridFunction v = random_profile(false);
        GridFunction lhs = apply(t + s, v);
        GridFunction rhs = apply(t, apply(s, v));
        lhs -= rhs;
        const double defect = norm_sup(lhs) / std::max(1.0, norm_sup(v));
        report.composition_defect = std::max(report.composition_defect, defect);
    }

    // (U1) identity, bitwise.
    report.identity_exact = true;
    for (int it = 0; it < 8; ++it) {
        GridFunction v = random_profile(false);
        GridFunction w = apply(0.0, v);
        for (int i = 0; i < n; ++i)
            if (w[i] != v[i]) report.identity_exact = false;
    }

    // Positivity on random cone vectors at fixed times.
    const double positivity_times[3] = {0.01, 0.1, 1.0};
    for (int it = 0; it < 5 * samples; ++it) {
        GridFunction v = random_profile(true);
        GridFunction w = apply(positivity_times[it % 3], v);
        double min_val = 0.0;
        for (double x : w.values()) min_val = std::min(min_val, x);
        report.positivity_violation = std::max(report.positivity_violation, -min_val);
    }

    // (U3) strong continuity: probe t_min scaled so the stiffest mode moves by
    // about tol/10.
    const double lambda_max = -impl_->mode_eigenvalue(n);
    report.continuity_time = tol / (10.0 * lambda_max);
    for (int it = 0; it < 16; ++it) {
        GridFunction v = random_profile(false);
        GridFunction w = apply(report.continuity_time, v);
        w -= v;
        report.continuity_modulus =
            std::max(report.continuity_modulus, norm_sup(w) / norm_sup(v));
    }

    report.pass = report.identity_exact && report.composition_defect <= tol &&
                  report.positivity_violation <= tol && report.continuity_modulus <= tol;
    return report;
}

double SemigroupHandle::estimate_d(int samples, unsigned long seed) {
    if (samples < 1) throw Error("estimate_d needs at least one sample");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    const int n = impl_->n;

    double worst = 0.0;
    for (int it = 0; it < samples; ++it) {
        const double t = samples == 1 ? 0.0 : static_cast<double>(it) / (samples - 1);
        GridFunction v = GridFunction::zeros(impl_->length, n);
        for (int i = 0; i < n; ++i) v[i] = sym(rng);
        const double nv = norm_sup(v);
        if (nv == 0.0) continue;
        v *= 1.0 / nv;
        worst = std::max(worst, norm_sup(apply(t, v)));
    }

    double current = impl_->bound_d.load();
    while (worst > current && !impl_->bound_d.compare_exchange_weak(current, worst)) {
    }
    return worst;
}

std::vector<double> SemigroupHandle::amplification_factors(double t) const {
    std::vector<double> factors(static_cast<std::size_t>(impl_->n), 0.0);
    for (int k = 1; k <= impl_->n; ++k) {
        GridFunction mode = GridFunction::zeros(impl_->length, impl_->n);
        const double* row = impl_->sine_table.data() + static_cast<std::size_t>(k - 1) * impl_->n;
        for (int i = 0; i < impl_->n; ++i) mode[i] = row[i];
        GridFunction w = apply(t, mode);
        // Rayleigh-style coefficient extraction against the same mode.
        double num = 0.0;
        double den = 0.0;
        for (int i = 0; i < impl_->n; ++i) {
            num += row[i] * w[i];
            den += row[i] * row[i];
        }
        factors[static_cast<std::size_t>(k - 1)] = num / den;
    }
    return factors;
}

}  // namespace mildeig
