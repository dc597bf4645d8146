#pragma once

#include <numbers>

namespace dvac {

inline constexpr double pi = std::numbers::pi;

/// Physical inputs of the driven 1+1D Dirac problem in natural units (hbar = c = 1).
struct PhysicalParams {
    double L = 2.0 * pi; ///< periodic box length
    double m = 2.0;      ///< fermion mass
    double q = 0.01;     ///< coupling constant
    int w = 1;           ///< drive harmonic, k_w = 2 pi w / L

    [[nodiscard]] double k_w() const { return 2.0 * pi * w / L; }

    /// Throws ConfigError unless L > 0, m > 0, w >= 1, q finite and k_w < m.
    void validate() const;

    bool operator==(const PhysicalParams&) const = default;
};

} // namespace dvac
