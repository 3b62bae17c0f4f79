#pragma once

#include <vector>

#include "tlbie/scene.hpp"

namespace tlbie {

/// Helmholtz fundamental solution exp(ik|x-y|) / (4 pi |x-y|); k = 0 gives Laplace.
cplx phi(cplx k, const Vec3& x, const Vec3& y);
/// Gradient of phi with respect to x.
CVec3 grad_phi_x(cplx k, const Vec3& x, const Vec3& y);
/// Hessian of phi with respect to x.
Eigen::Matrix3cd hess_phi_x(cplx k, const Vec3& x, const Vec3& y);

struct EH {
    CVec3 E = CVec3::Zero();
    CVec3 H = CVec3::Zero();
};

/// E = i k (d x q) x d exp(i k x.d), H = d x E.
EH plane_wave(const Vec3& d, const CVec3& q, cplx k, const Vec3& x);
/// E = (i/k) curl curl (p Phi(x, z)), H = curl (p Phi(x, z)).
EH electric_dipole(cplx k, const Vec3& z, const CVec3& p, const Vec3& x);

struct IncidentField {
    enum class Type { Plane, Dipole } type = Type::Plane;
    Vec3 d = Vec3(0, 0, 1);
    CVec3 q = CVec3(1, 0, 0);
    Vec3 z = Vec3::Zero();
    CVec3 p = CVec3(1, 0, 0);
    int layer = 0;

    static IncidentField plane(const Vec3& d, const CVec3& q);
    static IncidentField dipole(const Vec3& z, const CVec3& p, int layer);

    cplx wavenumber(const WaveNumbers& m) const { return type == Type::Dipole && layer == 1 ? m.k1 : m.k0; }
    EH eval(const WaveNumbers& m, const Vec3& x) const;
    /// Scale the polarization / dipole moment.
    IncidentField scaled(cplx s) const;
    void check() const;
};

/// Incident traces at a point of the interface (T1, T2) or the obstacle (T3 on the
/// conducting part, T4 on the impedance part).
struct TracePoint {
    CVec3 T1 = CVec3::Zero(), T2 = CVec3::Zero(), T3 = CVec3::Zero(), T4 = CVec3::Zero();
};
TracePoint interface_trace(const WaveNumbers& m, const IncidentField& inc, const Vec3& x, const Vec3& nu);
TracePoint obstacle_trace(const WaveNumbers& m, const IncidentField& inc, const Vec3& x, const Vec3& nu);

/// Incident traces at the scene nodes. T3 and T4 are sampled on all obstacle nodes
/// and are zero outside their parts of the partition.
struct TraceData {
    std::vector<CVec3> T1, T2;  // interface nodes
    std::vector<CVec3> T3, T4;  // obstacle nodes
};
TraceData incident_traces(const Scene& scene, const IncidentField& inc);

/// Throws if a dipole sits in the wrong region or within 1e-6 of a node.
void check_incident(const Scene& scene, const IncidentField& inc);

}  // namespace tlbie
