#include "dvac/perturbation.hpp"

#include "dvac/errors.hpp"

#include <cmath>
#include <string>

namespace dvac {

namespace {

// Velocity p_s / E_s of mode s; odd in s and strictly increasing.
double velocity(int s, const PhysicalParams& params) {
    return momentum(s, params) / energy(s, params);
}

} // namespace

double delta_e1(ModeLabel /*label*/, const PhysicalParams& /*params*/) { return 0.0; }

double delta_e2(ModeLabel label, const PhysicalParams& params) {
    const int w = params.w;
    const double bracket = velocity(label.r + w, params) - velocity(label.r - w, params);
    return 2.0 * pi * pi * sign(label.branch) * params.k_w() * bracket;
}

std::vector<FirstOrderAmplitude> first_order_amplitudes(ModeLabel base,
                                                        const PhysicalParams& params,
                                                        double margin_fraction) {
    require_clear_of_band_edge(base, params, margin_fraction);
    std::vector<FirstOrderAmplitude> out;
    for (const Transition& tr : first_hop_transitions(base, params)) {
        const double f = profile_transform(tr.gap, params.m);
        out.push_back({tr.to, tr.gap, cplx{0.0, -1.0} * tr.element * f});
    }
    return out;
}

double delta_e2_via_amplitudes(ModeLabel label, const PhysicalParams& params,
                               double margin_fraction) {
    double total = 0.0;
    for (const FirstOrderAmplitude& a : first_order_amplitudes(label, params, margin_fraction)) {
        total += std::norm(a.amplitude) * a.gap;
    }
    return total;
}

PerturbativeShift perturbative_shift(ModeLabel label, const PhysicalParams& params) {
    return {label, delta_e1(label, params), delta_e2(label, params),
            delta_e2_via_amplitudes(label, params)};
}

double partial_vacuum_sum(int R, const PhysicalParams& params) {
    const int w = params.w;
    if (R < w) {
        throw ConfigError("telescoped partial sum needs R >= w (R = " + std::to_string(R) +
                          ", w = " + std::to_string(w) + ")");
    }
    // sum_{r=-R}^{R} [g(r+w) - g(r-w)] keeps 2w boundary terms at each end.
    double upper = 0.0;
    for (int s = R - w + 1; s <= R + w; ++s) upper += velocity(s, params);
    double lower = 0.0;
    for (int s = -R - w; s <= -R + w - 1; ++s) lower += velocity(s, params);
    return -2.0 * pi * pi * params.k_w() * (upper - lower);
}

double partial_vacuum_sum_naive(int R, const PhysicalParams& params) {
    double total = 0.0;
    for (int r = -R; r <= R; ++r) total += delta_e2({Branch::Negative, r}, params);
    return total;
}

double analytic_limit(const PhysicalParams& params) {
    const double k = params.k_w();
    return -4.0 * pi * k * k * params.L;
}

namespace {

PerturbationRow table_row(const PhysicalParams& params, int r) {
    const ModeLabel label{Branch::Negative, r};
    const int R = std::abs(r);
    return {r, delta_e2(label, params), delta_e2_via_amplitudes(label, params),
            R >= params.w ? partial_vacuum_sum(R, params) : partial_vacuum_sum_naive(R, params)};
}

} // namespace

std::vector<PerturbationRow> perturbation_table(const PhysicalParams& params, int r_max) {
    std::vector<PerturbationRow> rows(static_cast<std::size_t>(2 * r_max + 1));
    // Band-edge violations throw; surface them before entering the parallel region.
    for (int r = -r_max; r <= r_max; ++r) {
        require_clear_of_band_edge({Branch::Negative, r}, params, default_edge_margin);
    }
#pragma omp parallel for schedule(static)
    for (int r = -r_max; r <= r_max; ++r) {
        rows[static_cast<std::size_t>(r + r_max)] = table_row(params, r);
    }
    return rows;
}

namespace serial {

std::vector<PerturbationRow> perturbation_table(const PhysicalParams& params, int r_max) {
    std::vector<PerturbationRow> rows;
    rows.reserve(static_cast<std::size_t>(2 * r_max + 1));
    for (int r = -r_max; r <= r_max; ++r) rows.push_back(table_row(params, r));
    return rows;
}

} // namespace serial

} // namespace dvac
