#include "tlbie/fields.hpp"

#include <cmath>

namespace tlbie {

cplx phi(cplx k, const Vec3& x, const Vec3& y)
{
    const double R = (x - y).norm();
    if (R < 1e-14) throw Error("phi: coincident points");
    return std::exp(I * k * R) / (4.0 * pi * R);
}

CVec3 grad_phi_x(cplx k, const Vec3& x, const Vec3& y)
{
    const Vec3 r = x - y;
    const double R = r.norm();
    if (R < 1e-14) throw Error("grad_phi_x: coincident points");
    const cplx g = std::exp(I * k * R) / (4.0 * pi * R) * (I * k * R - 1.0) / (R * R);
    return g * to_c(r);
}

Eigen::Matrix3cd hess_phi_x(cplx k, const Vec3& x, const Vec3& y)
{
    const Vec3 r = x - y;
    const double R = r.norm();
    if (R < 1e-14) throw Error("hess_phi_x: coincident points");
    const cplx e = std::exp(I * k * R);
    const cplx g = e / (4.0 * pi * R) * (I * k * R - 1.0) / (R * R);
    const cplx h = e * (3.0 - 3.0 * I * k * R - k * k * R * R) / (4.0 * pi * R * R * R);
    const Vec3 rh = r / R;
    return g * Eigen::Matrix3cd::Identity() + h * (rh * rh.transpose()).cast<cplx>();
}

EH plane_wave(const Vec3& d, const CVec3& q, cplx k, const Vec3& x)
{
    if (std::abs(d.norm() - 1.0) > 1e-12) throw Error("plane_wave: direction must be a unit vector");
    const CVec3 dc = to_c(d);
    EH f;
    f.E = I * k * cross(cross(dc, q), dc) * std::exp(I * k * d.dot(x));
    f.H = cross(dc, f.E);
    return f;
}

EH electric_dipole(cplx k, const Vec3& z, const CVec3& p, const Vec3& x)
{
    EH f;
    f.E = (I / k) * (k * k * phi(k, x, z) * p + hess_phi_x(k, x, z) * p);
    f.H = cross(grad_phi_x(k, x, z), p);
    return f;
}

IncidentField IncidentField::plane(const Vec3& d, const CVec3& q)
{
    IncidentField f;
    f.type = Type::Plane;
    f.d = d;
    f.q = q;
    f.check();
    return f;
}

IncidentField IncidentField::dipole(const Vec3& z, const CVec3& p, int layer)
{
    IncidentField f;
    f.type = Type::Dipole;
    f.z = z;
    f.p = p;
    f.layer = layer;
    f.check();
    return f;
}

void IncidentField::check() const
{
    if (type == Type::Plane && std::abs(d.norm() - 1.0) > 1e-12)
        throw Error("incident: plane-wave direction must be a unit vector");
    if (type == Type::Dipole && layer != 0 && layer != 1) throw Error("incident: dipole layer must be 0 or 1");
}

EH IncidentField::eval(const WaveNumbers& m, const Vec3& x) const
{
    if (type == Type::Plane) return plane_wave(d, q, m.k0, x);
    return electric_dipole(wavenumber(m), z, p, x);
}

IncidentField IncidentField::scaled(cplx s) const
{
    IncidentField f = *this;
    f.q *= s;
    f.p *= s;
    return f;
}

TracePoint interface_trace(const WaveNumbers& m, const IncidentField& inc, const Vec3& x, const Vec3& nu)
{
    const EH f = inc.eval(m, x);
    const CVec3 n = to_c(nu);
    TracePoint t;
    if (inc.type == IncidentField::Type::Dipole && inc.layer == 1) {
        t.T1 = m.lambda_E * cross(n, f.E);
        t.T2 = m.lambda_H * cross(n, f.H);
    } else {
        t.T1 = -cross(n, f.E);
        t.T2 = -cross(n, f.H);
    }
    return t;
}

TracePoint obstacle_trace(const WaveNumbers& m, const IncidentField& inc, const Vec3& x, const Vec3& nu)
{
    TracePoint t;
    if (!(inc.type == IncidentField::Type::Dipole && inc.layer == 1)) return t;
    const EH f = inc.eval(m, x);
    const CVec3 n = to_c(nu);
    const CVec3 nE = cross(n, f.E);
    t.T3 = -nE;
    t.T4 = -cross(n, f.H) + (m.lambda_imp / m.k1) * cross(nE, n);
    return t;
}

void check_incident(const Scene& scene, const IncidentField& inc)
{
    inc.check();
    if (inc.type != IncidentField::Type::Dipole) return;
    for (const auto* s : {scene.s0.get(), scene.s1.get()})
        for (const auto& x : s->x)
            if ((x - inc.z).norm() < 1e-6) throw Error("incident: dipole within 1e-6 of a surface node");
    const bool outside0 = scene.s0->level(inc.z) > 0.0;
    const bool outside1 = scene.s1->level(inc.z) > 0.0;
    if (inc.layer == 0 && !outside0) throw Error("incident: layer-0 dipole must lie outside the interface");
    if (inc.layer == 1 && (outside0 || !outside1))
        throw Error("incident: layer-1 dipole must lie between the interface and the obstacle");
}

TraceData incident_traces(const Scene& scene, const IncidentField& inc)
{
    check_incident(scene, inc);
    TraceData t;
    const Surface& s0 = *scene.s0;
    const Surface& s1 = *scene.s1;
    t.T1.resize(s0.size());
    t.T2.resize(s0.size());
    for (int i = 0; i < s0.size(); ++i) {
        const TracePoint p = interface_trace(scene.media, inc, s0.x[i], s0.nu[i]);
        t.T1[i] = p.T1;
        t.T2[i] = p.T2;
    }
    t.T3.assign(s1.size(), CVec3::Zero());
    t.T4.assign(s1.size(), CVec3::Zero());
    for (int i = 0; i < s1.size(); ++i) {
        const TracePoint p = obstacle_trace(scene.media, inc, s1.x[i], s1.nu[i]);
        if (scene.partition.labels[i] == 1) t.T3[i] = p.T3;
        if (scene.partition.labels[i] == 2) t.T4[i] = p.T4;
    }
    return t;
}

}  // namespace tlbie
