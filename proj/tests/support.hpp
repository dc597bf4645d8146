#pragma once

#include "dvac/params.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace dvac::test {

/// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

/// Random physical parameters with k_w < m, for property tests.
class ParamGenerator {
public:
    explicit ParamGenerator(unsigned seed) : rng_(seed) {}

    PhysicalParams next() {
        std::uniform_real_distribution<double> length(2.0, 60.0);
        std::uniform_real_distribution<double> mass(0.2, 5.0);
        std::uniform_int_distribution<int> harmonic(1, 4);
        PhysicalParams p;
        do {
            p.L = length(rng_);
            p.m = mass(rng_);
            p.w = harmonic(rng_);
        } while (!(p.k_w() < 0.9 * p.m));
        p.q = 0.01;
        return p;
    }

    int index(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

private:
    std::mt19937 rng_;
};

} // namespace dvac::test
