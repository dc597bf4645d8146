#include "dvac/drive.hpp"

#include "dvac/errors.hpp"

#include <cmath>
#include <sstream>

namespace dvac {

double time_profile(double t, double m) {
    const double x = m * t;
    if (std::abs(x) < 1e-4) {
        // sin(x)/x = 1 - x^2/6 + x^4/120 - ...; the x^4 term is below 1e-17 here.
        return m * (1.0 - x * x / 6.0);
    }
    return std::sin(x) / t;
}

double profile_transform(double omega, double m) {
    const double a = std::abs(omega);
    if (a < m) return pi;
    if (a > m) return 0.0;
    return 0.5 * pi;
}

double sample_potential(double z, double t, const PhysicalParams& params) {
    return 4.0 * std::cos(params.k_w() * z) * time_profile(t, params.m);
}

CouplingMatrixElement coupling(ModeLabel from, ModeLabel to, const PhysicalParams& params) {
    CouplingMatrixElement element{from, to, cplx{0.0, 0.0}};
    const int hop = to.r - from.r;
    if (hop != params.w && hop != -params.w) return element;
    const FreeMode a = free_mode(from, params);
    const FreeMode b = free_mode(to, params);
    element.value = 2.0 * params.L * inner(b.u, a.u);
    return element;
}

std::vector<Transition> first_hop_transitions(ModeLabel base, const PhysicalParams& params) {
    const FreeMode from = free_mode(base, params);
    std::vector<Transition> out;
    out.reserve(4);
    for (Branch b : {Branch::Negative, Branch::Positive}) {
        for (int hop : {-params.w, params.w}) {
            const ModeLabel to{b, base.r + hop};
            const FreeMode dest = free_mode(to, params);
            // Same-branch gaps as (p'^2 - p^2)/(E' + E) with p' -/+ p formed from the
            // integer indices: subtracting nearly equal energies (or rounded momenta) at
            // large |r| loses most of the digits.
            const double unit = 2.0 * pi / params.L;
            const double gap =
                b == base.branch
                    ? sign(b) * (unit * hop) * (unit * (2 * base.r + hop)) / (dest.E + from.E)
                    : dest.eps0 - from.eps0;
            out.push_back({to, gap, coupling(base, to, params).value});
        }
    }
    return out;
}

void require_clear_of_band_edge(ModeLabel base, const PhysicalParams& params,
                                double margin_fraction) {
    const double margin = margin_fraction * params.m;
    for (const Transition& tr : first_hop_transitions(base, params)) {
        if (std::abs(std::abs(tr.gap) - params.m) < margin) {
            std::ostringstream os;
            os.precision(17);
            os << "transition (" << sign(base.branch) << "," << base.r << ") -> ("
               << sign(tr.to.branch) << "," << tr.to.r << ") has |gap| = " << std::abs(tr.gap)
               << ", within " << margin << " of the drive bandlimit m = " << params.m
               << "; change m, w or L";
            throw BandEdgeError(os.str());
        }
    }
}

} // namespace dvac
