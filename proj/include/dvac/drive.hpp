#pragma once

#include "dvac/mode_basis.hpp"
#include "dvac/params.hpp"

#include <vector>

namespace dvac {

/// Time factor sin(m t)/t of the drive, continuous through t = 0 where it equals m.
[[nodiscard]] double time_profile(double t, double m);

/// Integral of time_profile(t) exp(i omega t) over the whole real line:
/// pi inside the band |omega| < m, 0 outside, pi/2 on the edge.
[[nodiscard]] double profile_transform(double omega, double m);

/// V(z, t) = 4 cos(k_w z) sin(m t)/t.
[[nodiscard]] double sample_potential(double z, double t, const PhysicalParams& params);

/// Box matrix element of 4 cos(k_w z) between two free modes.
struct CouplingMatrixElement {
    ModeLabel from;
    ModeLabel to;
    cplx value;
};

/// 2 L u_to^dagger u_from when |to.r - from.r| = w, else zero.
[[nodiscard]] CouplingMatrixElement coupling(ModeLabel from, ModeLabel to,
                                             const PhysicalParams& params);

/// A first-order transition reachable from a base mode: one w-hop, either branch.
struct Transition {
    ModeLabel to;
    double gap = 0.0; ///< eps0(to) - eps0(base)
    cplx element;     ///< coupling(base, to)
};

/// The four one-hop targets (lambda', r +/- w) of base, ordered by (branch, r).
[[nodiscard]] std::vector<Transition> first_hop_transitions(ModeLabel base,
                                                            const PhysicalParams& params);

/// Throws BandEdgeError if some first-hop |gap| lies within margin_fraction * m of m.
void require_clear_of_band_edge(ModeLabel base, const PhysicalParams& params,
                                double margin_fraction);

} // namespace dvac
