#pragma once

#include <array>
#include <cassert>

#include "pinnfem/geometry.hpp"

namespace pinnfem {

enum class PlaneMode { Stress, Strain };

// Units: E in MPa, lengths in mm, unit out-of-plane thickness.
struct Material {
    double E = 70.0;
    double nu = 0.3;
    PlaneMode mode = PlaneMode::Stress;
};

// Engineering shear convention: gxy = 2 * eps_xy, so energy = 1/2 e^T C e in
// Voigt form without extra factors.
struct Strain2D {
    double exx = 0.0;
    double eyy = 0.0;
    double gxy = 0.0;
};

struct Stress2D {
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
};

// Voigt stiffness, symmetric positive definite for E > 0, 0 <= nu < 0.5.
// Only the three independent entries are nonzero for isotropic plane problems.
struct Stiffness2D {
    double c11 = 0.0;  // = c22
    double c12 = 0.0;
    double c33 = 0.0;
};

inline Stiffness2D stiffness_matrix(const Material& m) {
    assert(m.E > 0.0 && m.nu >= 0.0 && m.nu < 0.5);
    Stiffness2D c;
    if (m.mode == PlaneMode::Stress) {
        const double f = m.E / (1.0 - m.nu * m.nu);
        c.c11 = f;
        c.c12 = f * m.nu;
        c.c33 = f * (1.0 - m.nu) / 2.0;
    } else {
        const double f = m.E / ((1.0 + m.nu) * (1.0 - 2.0 * m.nu));
        c.c11 = f * (1.0 - m.nu);
        c.c12 = f * m.nu;
        c.c33 = f * (1.0 - 2.0 * m.nu) / 2.0;
    }
    return c;
}

inline Strain2D strain_from_gradient(const Mat2& g) {
    return {g[0][0], g[1][1], g[0][1] + g[1][0]};
}

inline Stress2D stress(const Strain2D& s, const Material& m) {
    const Stiffness2D c = stiffness_matrix(m);
    return {c.c11 * s.exx + c.c12 * s.eyy,
            c.c12 * s.exx + c.c11 * s.eyy,
            c.c33 * s.gxy};
}

// Strain-energy density 1/2 e^T C e, in MPa (= mJ/mm^3 at unit thickness).
inline double energy_density(const Strain2D& s, const Material& m) {
    const Stiffness2D c = stiffness_matrix(m);
    return 0.5 * (c.c11 * (s.exx * s.exx + s.eyy * s.eyy) +
                  2.0 * c.c12 * s.exx * s.eyy + c.c33 * s.gxy * s.gxy);
}

}  // namespace pinnfem
