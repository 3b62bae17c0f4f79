#pragma once

#include <vector>

#include "tlbie/fields.hpp"
#include "tlbie/media.hpp"

namespace tlbie {

/// Concentric spheres centered at the origin: interface radius r0, core radius r1.
struct MieScene {
    enum class Core { PEC, Impedance };
    double r0 = 2.0;
    double r1 = 1.0;
    WaveNumbers media;
    Core core = Core::PEC;
    double lambda = 1.0;  // impedance constant of the core
    int L = 0;            // truncation degree; 0 picks ceil(|k0| r0) + 15

    int truncation() const;
    void check() const;
};

/// Spherical Bessel j_l and Hankel h_l of the first kind for l = 0..L.
/// j_l by downward recurrence seeded with the continued fraction of j_l / j_{l-1},
/// h_l by upward recurrence.
void spherical_bessel_j(int L, cplx x, std::vector<cplx>& j);
void spherical_hankel_h(int L, cplx x, std::vector<cplx>& h);

/// Series solution. Exterior scattered field
///   E = sum te_lm h_l(k0 r) U_lm + tm_lm (1/k0) curl (h_l(k0 r) U_lm),
/// U_lm = rhat x Grad Y_lm / sqrt(l(l+1)), with the same form in the layer using
/// j_l and h_l at k1.
struct MieSolution {
    MieScene scene;
    int L = 0;
    std::vector<cplx> te, tm;        // exterior coefficients, harmonic index (l >= 1)
    std::vector<cplx> inc_te, inc_tm;  // incident coefficients with j_l(k0 r)
    std::vector<cplx> transfer_te, transfer_tm;  // te = transfer * inc per degree
    double mode_residual = 0.0;      // largest relative boundary-condition residual
    double tail = 0.0;               // largest |coefficient| at degree L relative to the largest overall
};

/// Throws Error naming the degree if a per-mode system is singular.
MieSolution mie_solve(const MieScene& scene, const IncidentField& plane);

CVec3 mie_far_field(const MieSolution& sol, const Vec3& xhat);

}  // namespace tlbie
