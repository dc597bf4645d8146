#pragma once

#include "dvac/params.hpp"

#include <compare>
#include <complex>

namespace dvac {

using cplx = std::complex<double>;

/// Sign of the free-particle energy.
enum class Branch : int { Negative = -1, Positive = 1 };

[[nodiscard]] constexpr int sign(Branch b) { return static_cast<int>(b); }
[[nodiscard]] constexpr Branch flip(Branch b) {
    return b == Branch::Negative ? Branch::Positive : Branch::Negative;
}
/// Throws ConfigError unless lambda is -1 or +1.
[[nodiscard]] Branch branch_from_sign(int lambda);

struct ModeLabel {
    Branch branch = Branch::Negative;
    int r = 0;

    auto operator<=>(const ModeLabel&) const = default;
};

struct Spinor {
    cplx upper;
    cplx lower;

    bool operator==(const Spinor&) const = default;
};

/// conj(a) . b
[[nodiscard]] cplx inner(const Spinor& a, const Spinor& b);

/// Momentum-space free Hamiltonian h(p) = sigma_x p + sigma_z m applied to u.
[[nodiscard]] Spinor apply_free_hamiltonian(double p, double m, const Spinor& u);

/// One periodic plane-wave solution u exp(i p z - i eps0 t) of the free Dirac equation.
struct FreeMode {
    ModeLabel label;
    double p = 0.0;    ///< 2 pi r / L
    double E = 0.0;    ///< sqrt(p^2 + m^2) > 0
    double eps0 = 0.0; ///< lambda E
    Spinor u;          ///< normalized to u^dagger u = 1/L
};

[[nodiscard]] double momentum(int r, const PhysicalParams& params);
[[nodiscard]] double energy(int r, const PhysicalParams& params);

/// Builds the spinor with real, non-negative normalization. The (-1, 0) mode,
/// where the closed-form normalization is 0/0, uses the sigma_z eigenvector (0, 1)/sqrt(L).
[[nodiscard]] FreeMode free_mode(ModeLabel label, const PhysicalParams& params);

/// Largest deviation of the box overlaps of all labels with |r|, |s| <= r_max from
/// delta_{lambda lambda'} delta_{rs}. Plane waves with r != s are orthogonal exactly;
/// the spinor overlaps carry the rest. OpenMP-parallel over r.
[[nodiscard]] double check_orthonormality(const PhysicalParams& params, int r_max);

/// max over |r| <= r_max and both branches of |h(p)u - eps0 u| / (|eps0| |u|).
[[nodiscard]] double check_eigen_relation(const PhysicalParams& params, int r_max);

} // namespace dvac
