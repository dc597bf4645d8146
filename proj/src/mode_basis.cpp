#include "dvac/mode_basis.hpp"

#include "dvac/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dvac {

Branch branch_from_sign(int lambda) {
    if (lambda == 1) return Branch::Positive;
    if (lambda == -1) return Branch::Negative;
    throw ConfigError("energy sign lambda must be -1 or +1, got " + std::to_string(lambda));
}

cplx inner(const Spinor& a, const Spinor& b) {
    return std::conj(a.upper) * b.upper + std::conj(a.lower) * b.lower;
}

Spinor apply_free_hamiltonian(double p, double m, const Spinor& u) {
    return {p * u.lower + m * u.upper, p * u.upper - m * u.lower};
}

double momentum(int r, const PhysicalParams& params) { return 2.0 * pi * r / params.L; }

double energy(int r, const PhysicalParams& params) {
    return std::hypot(momentum(r, params), params.m);
}

FreeMode free_mode(ModeLabel label, const PhysicalParams& params) {
    if (!std::isfinite(params.L) || !std::isfinite(params.m) || !(params.L > 0.0) ||
        !(params.m > 0.0)) {
        throw ConfigError("free_mode needs finite, positive L and m");
    }
    FreeMode mode;
    mode.label = label;
    mode.p = momentum(label.r, params);
    mode.E = energy(label.r, params);
    mode.eps0 = sign(label.branch) * mode.E;

    const double p = mode.p;
    const double E = mode.E;
    const double m = params.m;
    const double L = params.L;
    if (label.branch == Branch::Positive) {
        const double n = std::sqrt((E + m) / (2.0 * L * E));
        mode.u = {n, n * p / (E + m)};
    } else if (label.r == 0) {
        mode.u = {0.0, 1.0 / std::sqrt(L)};
    } else {
        // E - m = p^2 / (E + m) avoids the cancellation at small |p|.
        const double upper = std::abs(p) / std::sqrt(2.0 * L * E * (E + m));
        const double lower = -std::copysign(std::sqrt((E + m) / (2.0 * L * E)), p);
        mode.u = {upper, lower};
    }
    return mode;
}

namespace {

// Pairs with r != s integrate to exactly zero over the box, so only the 2x2
// block of spinor overlaps at s = r can deviate.
double row_deviation(const PhysicalParams& params, int r) {
    const FreeMode modes[2] = {free_mode({Branch::Negative, r}, params),
                               free_mode({Branch::Positive, r}, params)};
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const cplx overlap = params.L * inner(modes[i].u, modes[j].u);
            const double target = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(overlap - target));
        }
    }
    return worst;
}

} // namespace

double check_orthonormality(const PhysicalParams& params, int r_max) {
    double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
    for (int r = -r_max; r <= r_max; ++r) {
        worst = std::max(worst, row_deviation(params, r));
    }
    return worst;
}

double check_eigen_relation(const PhysicalParams& params, int r_max) {
    double worst = 0.0;
    for (int r = -r_max; r <= r_max; ++r) {
        for (Branch b : {Branch::Negative, Branch::Positive}) {
            const FreeMode mode = free_mode({b, r}, params);
            const Spinor hu = apply_free_hamiltonian(mode.p, params.m, mode.u);
            const double residual =
                std::hypot(std::abs(hu.upper - mode.eps0 * mode.u.upper),
                           std::abs(hu.lower - mode.eps0 * mode.u.lower));
            const double scale = std::abs(mode.eps0) * std::sqrt(std::real(inner(mode.u, mode.u)));
            worst = std::max(worst, residual / scale);
        }
    }
    return worst;
}

namespace serial {

double check_orthonormality(const PhysicalParams& params, int r_max) {
    double worst = 0.0;
    for (int r = -r_max; r <= r_max; ++r) {
        worst = std::max(worst, row_deviation(params, r));
    }
    return worst;
}

} // namespace serial

} // namespace dvac
