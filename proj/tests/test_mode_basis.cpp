#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dvac/errors.hpp"
#include "dvac/mode_basis.hpp"
#include "dvac/serial_reference.hpp"
#include "support.hpp"

#include <cmath>
#include <limits>

using namespace dvac;

namespace {

// Closed-form spinor N (1, p/(lambda E + m)), N = sqrt((lambda E + m)/(2 L lambda E)),
// evaluated literally. Undefined at (-1, 0).
Spinor literal_spinor(ModeLabel l, const PhysicalParams& params) {
    const double lam = sign(l.branch);
    const double p = 2.0 * pi * l.r / params.L;
    const double E = std::sqrt(p * p + params.m * params.m);
    const double n = std::sqrt((lam * E + params.m) / (2.0 * params.L * lam * E));
    return {n, n * p / (lam * E + params.m)};
}

double distance(const Spinor& a, const Spinor& b) {
    return std::hypot(std::abs(a.upper - b.upper), std::abs(a.lower - b.lower));
}

} // namespace

TEST_CASE("momentum is 2 pi r / L") {
    PhysicalParams p;
    CHECK(momentum(0, p) == 0.0);
    CHECK(momentum(1, p) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(momentum(-3, p) == doctest::Approx(-3.0).epsilon(1e-15));
}

TEST_CASE("free_mode examples") {
    PhysicalParams p; // m = 2, L = 2 pi

    SUBCASE("(+1, 1)") {
        const FreeMode mode = free_mode({Branch::Positive, 1}, p);
        CHECK(mode.E == doctest::Approx(2.2360680).epsilon(1e-7));
        CHECK(mode.eps0 == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
    }
    SUBCASE("(-1, 0) uses the sigma_z eigenvector") {
        const FreeMode mode = free_mode({Branch::Negative, 0}, p);
        CHECK(mode.eps0 == -2.0);
        CHECK(mode.u.upper == cplx{0.0, 0.0});
        CHECK(mode.u.lower.real() == doctest::Approx(1.0 / std::sqrt(2.0 * pi)).epsilon(1e-15));
    }
    SUBCASE("(+1, 0) is (1, 0)/sqrt(L) for any m, L") {
        PhysicalParams q;
        q.L = 7.5;
        q.m = 0.3;
        const FreeMode mode = free_mode({Branch::Positive, 0}, q);
        CHECK(mode.eps0 == doctest::Approx(0.3));
        CHECK(mode.u.upper.real() == doctest::Approx(1.0 / std::sqrt(7.5)).epsilon(1e-15));
        CHECK(mode.u.lower == cplx{0.0, 0.0});
    }
    SUBCASE("non-finite parameters are rejected") {
        PhysicalParams bad;
        bad.m = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS((void)free_mode({Branch::Positive, 1}, bad), ConfigError);
    }
}

TEST_CASE("spinors match the literal closed form away from the degenerate point") {
    test::ParamGenerator gen(11);
    for (int trial = 0; trial < 200; ++trial) {
        const PhysicalParams p = gen.next();
        const int r = gen.index(-60, 60);
        for (Branch b : {Branch::Negative, Branch::Positive}) {
            if (b == Branch::Negative && r == 0) continue;
            const FreeMode mode = free_mode({b, r}, p);
            const Spinor lit = literal_spinor({b, r}, p);
            // The literal form cancels in E - m at small |p|; compare at its own accuracy.
            const double scale = std::abs(mode.p) > 1e-3 ? 1e-11 : 1e-6;
            CHECK(distance(mode.u, lit) * std::sqrt(p.L) <= scale);
        }
    }
}

TEST_CASE("inner product") {
    CHECK(inner({1.0, 0.0}, {0.0, 1.0}) == cplx{0.0, 0.0});
    const Spinor a{cplx{1.0, 2.0}, cplx{0.5, -1.0}};
    const Spinor b{cplx{-0.3, 0.1}, cplx{2.0, 0.7}};
    const cplx ab = inner(a, b);
    const cplx ba = inner(b, a);
    CHECK(ab.real() == doctest::Approx(ba.real()));
    CHECK(ab.imag() == doctest::Approx(-ba.imag()));

    PhysicalParams p;
    for (int r : {-4, 0, 3}) {
        for (Branch b : {Branch::Negative, Branch::Positive}) {
            const FreeMode mode = free_mode({b, r}, p);
            CHECK(std::real(inner(mode.u, mode.u)) == doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-14));
        }
        const cplx cross = inner(free_mode({Branch::Positive, r}, p).u,
                                 free_mode({Branch::Negative, r}, p).u);
        CHECK(std::abs(cross) < 1e-16);
    }
}

TEST_CASE("basis invariants over random parameters") {
    test::ParamGenerator gen(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const PhysicalParams p = gen.next();
        for (int r = -40; r <= 40; ++r) {
            const FreeMode neg = free_mode({Branch::Negative, r}, p);
            const FreeMode pos = free_mode({Branch::Positive, r}, p);

            // eigen-relation
            for (const FreeMode* mode : {&neg, &pos}) {
                const Spinor hu = apply_free_hamiltonian(mode->p, p.m, mode->u);
                const Spinor eu{mode->eps0 * mode->u.upper, mode->eps0 * mode->u.lower};
                const double unorm = std::sqrt(std::real(inner(mode->u, mode->u)));
                CHECK(distance(hu, eu) <= 1e-12 * std::abs(mode->eps0) * unorm);
                CHECK(std::abs(std::real(inner(mode->u, mode->u)) - 1.0 / p.L) <= 1e-14 / p.L);
            }
            // symmetry
            CHECK(energy(r, p) == energy(-r, p));
            CHECK(neg.eps0 == -pos.eps0);

            // completeness on the pair: sqrt(L) [u+, u-] is unitary
            const double s = std::sqrt(p.L);
            const cplx a11 = s * pos.u.upper, a21 = s * pos.u.lower;
            const cplx a12 = s * neg.u.upper, a22 = s * neg.u.lower;
            CHECK(std::abs(std::norm(a11) + std::norm(a12) - 1.0) < 1e-12);
            CHECK(std::abs(std::norm(a21) + std::norm(a22) - 1.0) < 1e-12);
            CHECK(std::abs(a11 * std::conj(a21) + a12 * std::conj(a22)) < 1e-12);
        }
    }
}

TEST_CASE("check_orthonormality and check_eigen_relation") {
    PhysicalParams p;
    CHECK(check_orthonormality(p, 10) < 1e-12);
    CHECK(check_orthonormality(p, 0) < 1e-15);
    CHECK(check_eigen_relation(p, 100) < 1e-12);

    PhysicalParams heavy;
    heavy.m = 40.0;
    heavy.L = 0.5;
    heavy.w = 1;
    const double dev = check_orthonormality(heavy, 50);
    CHECK(std::isfinite(dev));
    CHECK(dev < 1e-12);
}

TEST_CASE("parallel orthonormality scan is bitwise equal to the serial reference") {
    test::ParamGenerator gen(5);
    for (int trial = 0; trial < 10; ++trial) {
        const PhysicalParams p = gen.next();
        CHECK(check_orthonormality(p, 300) == serial::check_orthonormality(p, 300));
    }
}

TEST_CASE("branch_from_sign") {
    CHECK(branch_from_sign(-1) == Branch::Negative);
    CHECK(branch_from_sign(1) == Branch::Positive);
    CHECK_THROWS_AS((void)branch_from_sign(0), ConfigError);
    CHECK(flip(Branch::Negative) == Branch::Positive);
}

TEST_CASE("PhysicalParams validation") {
    PhysicalParams p;
    CHECK_NOTHROW(p.validate());
    p.w = 2; // k_w = 2 = m
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = PhysicalParams{};
    p.L = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = PhysicalParams{};
    p.w = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}
