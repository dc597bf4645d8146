#pragma once

#include "dvac/drive.hpp"
#include "dvac/mode_basis.hpp"
#include "dvac/params.hpp"

#include <vector>

namespace dvac {

/// Default fraction of m that first-hop gaps must keep from the bandlimit.
inline constexpr double default_edge_margin = 0.05;

/// First-order energy shift; identically zero because cos(k_w z) has no diagonal element.
[[nodiscard]] double delta_e1(ModeLabel label, const PhysicalParams& params);

/// Second-order energy shift per q^2:
///   2 pi^2 lambda k_w [g(r + w) - g(r - w)],  g(s) = p_s / E_s.
[[nodiscard]] double delta_e2(ModeLabel label, const PhysicalParams& params);

/// First-order final amplitude (per unit q) of each one-hop target:
///   c_a = -i M_{a,base} F(eps_a - eps_base),  F = profile_transform.
struct FirstOrderAmplitude {
    ModeLabel to;
    double gap = 0.0;
    cplx amplitude;
};
[[nodiscard]] std::vector<FirstOrderAmplitude>
first_order_amplitudes(ModeLabel base, const PhysicalParams& params,
                       double margin_fraction = default_edge_margin);

/// sum_a |c_a|^2 (eps_a - eps_base) built from first_order_amplitudes. Independent of
/// delta_e2's closed form; throws BandEdgeError near the bandlimit.
[[nodiscard]] double delta_e2_via_amplitudes(ModeLabel label, const PhysicalParams& params,
                                             double margin_fraction = default_edge_margin);

struct PerturbativeShift {
    ModeLabel label;
    double first_order = 0.0;
    double second_order = 0.0;
    double via_amplitudes = 0.0;
};
[[nodiscard]] PerturbativeShift perturbative_shift(ModeLabel label, const PhysicalParams& params);

/// sum_{r=-R}^{R} delta_e2((-1, r)) per q^2, evaluated through the telescoped
/// boundary terms. Requires R >= w.
[[nodiscard]] double partial_vacuum_sum(int R, const PhysicalParams& params);

/// Term-by-term version of partial_vacuum_sum; loses precision at large R.
[[nodiscard]] double partial_vacuum_sum_naive(int R, const PhysicalParams& params);

/// R -> infinity limit per q^2: -4 pi k_w^2 L (= -8 pi^2 k_w w).
[[nodiscard]] double analytic_limit(const PhysicalParams& params);

/// One row of the perturbation table for lambda = -1.
struct PerturbationRow {
    int r = 0;
    double delta_e2 = 0.0;
    double via_amplitudes = 0.0;
    double partial_sum = 0.0; ///< partial_vacuum_sum(|r|) for |r| >= w, else naive
};

/// Rows for r in [-r_max, r_max], OpenMP-parallel over r.
[[nodiscard]] std::vector<PerturbationRow> perturbation_table(const PhysicalParams& params,
                                                              int r_max);

} // namespace dvac
