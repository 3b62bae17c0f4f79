#pragma once

#include <doctest.h>

#include "tlbie/checks.hpp"

namespace support {

using namespace tlbie;

inline SurfacePtr sphere(double r, int nt, Vec3 center = Vec3::Zero())
{
    SurfaceDescriptor d;
    d.radius = r;
    d.center = center;
    d.n_theta = nt;
    d.n_phi = 2 * nt;
    return make_surface(d);
}

inline SurfacePtr ellipsoid(const Vec3& axes, int nt)
{
    SurfaceDescriptor d;
    d.kind = SurfaceKind::Ellipsoid;
    d.semi_axes = axes;
    d.n_theta = nt;
    d.n_phi = 2 * nt;
    return make_surface(d);
}

inline cplx bdot(const CVec3& a, const CVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline WaveNumbers homogeneous() { return direct_wavenumbers(1.0, 1.0, 1.0, 1.0); }
inline WaveNumbers two_layer(double lambda_imp = 1.0) { return direct_wavenumbers(1.0, 2.0, 0.5, 1.0, lambda_imp); }


}  // namespace support
