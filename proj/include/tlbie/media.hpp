#pragma once

#include "tlbie/types.hpp"

namespace tlbie {

/// Physical constants of one homogeneous medium at angular frequency omega.
struct MediumParams {
    double epsilon = 1.0;
    double mu = 1.0;
    double sigma = 0.0;
    double omega = 1.0;
};

/// Wave numbers and transmission constants of the two-layer background.
struct WaveNumbers {
    cplx k0{1.0, 0.0};
    cplx k1{1.0, 0.0};
    cplx lambda_E{1.0, 0.0};
    cplx lambda_H{1.0, 0.0};
    double lambda_imp = 1.0;  ///< impedance constant on the impedance part of the obstacle

    cplx lambda_a() const { return lambda_E + lambda_H * k0 / k1; }
    cplx lambda_b() const { return -I * lambda_E * k0 - I * lambda_H * k1; }
    /// |lambda_E lambda_H - k0/k1| / |k0/k1|
    double identity_residual() const;
    /// |k0 lambda_E - k1 lambda_H|; zero for a transparent interface.
    double interface_contrast() const { return std::abs(k0 * lambda_E - k1 * lambda_H); }
};

/// Square root on the branch Re > 0, Im >= 0 used for wave numbers.
cplx wave_sqrt(cplx z);

/// Wave numbers from physical parameters; the outer medium must be lossless.
WaveNumbers derive_wavenumbers(const MediumParams& outer, const MediumParams& inner,
                               double lambda_imp = 1.0);

/// Wave numbers given directly; throws if the invariants do not hold.
WaveNumbers direct_wavenumbers(cplx k0, cplx k1, cplx lambda_E, cplx lambda_H,
                               double lambda_imp = 1.0);

/// Throws Error describing every violated invariant.
void check_wavenumbers(const WaveNumbers& w);

}  // namespace tlbie
