#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pinnfem/elasticity.hpp"

using namespace pinnfem;

namespace {
Strain2D voigt(const Strain2D& s) { return s; }

double dot_voigt(const Stress2D& t, const Strain2D& s) {
    return t.sxx * s.exx + t.syy * s.eyy + t.sxy * s.gxy;
}
}  // namespace

TEST_CASE("stiffness matrix, plane stress") {
    const Material m{70.0, 0.3, PlaneMode::Stress};
    const Stiffness2D c = stiffness_matrix(m);
    const double f = 70.0 / (1.0 - 0.09);
    CHECK(c.c11 == Catch::Approx(f).epsilon(1e-14));             // 76.923076...
    CHECK(c.c12 == Catch::Approx(f * 0.3).epsilon(1e-14));       // 23.076923...
    CHECK(c.c33 == Catch::Approx(f * 0.35).epsilon(1e-14));      // 26.923076...
    CHECK(c.c11 == Catch::Approx(76.923076923076923).epsilon(1e-12));
}

TEST_CASE("stiffness matrix, plane strain") {
    const Material m{70.0, 0.3, PlaneMode::Strain};
    const Stiffness2D c = stiffness_matrix(m);
    const double f = 70.0 / (1.3 * 0.4);
    CHECK(c.c11 == Catch::Approx(f * 0.7).epsilon(1e-14));  // 94.230769...
    CHECK(c.c11 == Catch::Approx(94.230769230769226).epsilon(1e-12));
}

TEST_CASE("stiffness matrix, nu = 0 collapses to diagonal") {
    for (auto mode : {PlaneMode::Stress, PlaneMode::Strain}) {
        const Stiffness2D c = stiffness_matrix({70.0, 0.0, mode});
        CHECK(c.c11 == Catch::Approx(70.0));
        CHECK(c.c12 == 0.0);
        CHECK(c.c33 == Catch::Approx(35.0));
    }
}

TEST_CASE("stiffness matrix is SPD for valid materials") {
    // Eigenvalues of [[c11,c12],[c12,c11]] are c11 +- c12; the shear block is c33.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> Eu(0.1, 500.0), nuu(0.0, 0.49);
    for (int k = 0; k < 50; ++k) {
        const Material m{Eu(rng), nuu(rng),
                         k % 2 ? PlaneMode::Stress : PlaneMode::Strain};
        const Stiffness2D c = stiffness_matrix(m);
        CHECK(c.c11 + c.c12 > 0.0);
        CHECK(c.c11 - c.c12 > 0.0);
        CHECK(c.c33 > 0.0);
    }
}

TEST_CASE("strain from displacement gradient") {
    SECTION("identity gradient") {
        const Strain2D s = strain_from_gradient({{{1.0, 0.0}, {0.0, 1.0}}});
        CHECK(s.exx == 1.0);
        CHECK(s.eyy == 1.0);
        CHECK(s.gxy == 0.0);
    }
    SECTION("pure rotation has zero strain") {
        const double w = 0.37;
        const Strain2D s = strain_from_gradient({{{0.0, -w}, {w, 0.0}}});
        CHECK(s.exx == 0.0);
        CHECK(s.eyy == 0.0);
        CHECK(s.gxy == 0.0);
    }
    SECTION("general gradient") {
        const Strain2D s = strain_from_gradient({{{2.0, 3.0}, {5.0, 7.0}}});
        CHECK(s.exx == 2.0);
        CHECK(s.eyy == 7.0);
        CHECK(s.gxy == 8.0);
    }
}

TEST_CASE("energy density") {
    const Material m{70.0, 0.3, PlaneMode::Stress};
    SECTION("zero strain") { CHECK(energy_density({}, m) == 0.0); }
    SECTION("uniaxial strain value") {
        const Strain2D s{1.0 / 70.0, 0.0, 0.0};
        const double c11 = stiffness_matrix(m).c11;
        CHECK(energy_density(s, m) == Catch::Approx(0.5 * c11 / 4900.0).epsilon(1e-14));
        CHECK(energy_density(s, m) == Catch::Approx(7.849e-3).epsilon(1e-3));
    }
    SECTION("density equals half stress dot strain") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int k = 0; k < 50; ++k) {
            const Strain2D s{u(rng), u(rng), u(rng)};
            const double lhs = energy_density(s, m);
            const double rhs = 0.5 * dot_voigt(stress(s, m), voigt(s));
            CHECK(lhs == Catch::Approx(rhs).margin(1e-14));
        }
    }
    SECTION("positive unless strain is zero") {
        std::mt19937_64 rng(13);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int k = 0; k < 50; ++k) {
            const Strain2D s{u(rng), u(rng), u(rng)};
            if (s.exx != 0.0 || s.eyy != 0.0 || s.gxy != 0.0)
                CHECK(energy_density(s, m) > 0.0);
        }
    }
}

TEST_CASE("stress") {
    const Material m{70.0, 0.3, PlaneMode::Stress};
    SECTION("zero strain gives zero stress") {
        const Stress2D t = stress({}, m);
        CHECK(t.sxx == 0.0);
        CHECK(t.syy == 0.0);
        CHECK(t.sxy == 0.0);
    }
    SECTION("uniaxial stress state") {
        const double sigma = 1.0;
        const Strain2D s{sigma / 70.0, -0.3 * sigma / 70.0, 0.0};
        const Stress2D t = stress(s, m);
        CHECK(t.sxx == Catch::Approx(sigma).epsilon(1e-12));
        CHECK(t.syy == Catch::Approx(0.0).margin(1e-14));
    }
    SECTION("nu = 0 decouples components") {
        const Material m0{70.0, 0.0, PlaneMode::Stress};
        const Stress2D t = stress({0.01, 0.5, 0.0}, m0);
        CHECK(t.sxx == Catch::Approx(0.7).epsilon(1e-14));
    }
    SECTION("linearity") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int k = 0; k < 20; ++k) {
            const Strain2D s1{u(rng), u(rng), u(rng)}, s2{u(rng), u(rng), u(rng)};
            const double a = u(rng), b = u(rng);
            const Strain2D sc{a * s1.exx + b * s2.exx, a * s1.eyy + b * s2.eyy,
                              a * s1.gxy + b * s2.gxy};
            const Stress2D lhs = stress(sc, m);
            const Stress2D t1 = stress(s1, m), t2 = stress(s2, m);
            CHECK(lhs.sxx == Catch::Approx(a * t1.sxx + b * t2.sxx).margin(1e-12));
            CHECK(lhs.syy == Catch::Approx(a * t1.syy + b * t2.syy).margin(1e-12));
            CHECK(lhs.sxy == Catch::Approx(a * t1.sxy + b * t2.sxy).margin(1e-12));
        }
    }
}
