#include "tlbie/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tlbie {

void check_rotation(const Mat3& Q)
{
    const double orth = (Q.transpose() * Q - Mat3::Identity()).norm();
    if (!(orth <= 1e-12)) throw Error("rotation is not orthogonal");
    if (std::abs(Q.determinant() - 1.0) > 1e-12) throw Error("rotation must have determinant 1");
}

static void check_descriptor(const SurfaceDescriptor& d)
{
    std::ostringstream err;
    if (d.n_theta < 4) err << "n_theta must be at least 4; ";
    if (d.n_phi < 2 * d.n_theta - 2 || d.n_phi % 2 != 0)
        err << "n_phi must be even and at least 2 n_theta - 2; ";
    switch (d.kind) {
    case SurfaceKind::Sphere:
        if (!(d.radius > 0.0)) err << "sphere radius must be positive; ";
        break;
    case SurfaceKind::Ellipsoid:
        if (!(d.semi_axes.minCoeff() > 0.0)) err << "ellipsoid semi-axes must be positive; ";
        break;
    case SurfaceKind::Perturbed:
        if (!(d.radius > 0.0)) err << "perturbed sphere radius must be positive; ";
        for (const auto& c : d.perturbation)
            if (c.l < 0 || std::abs(c.m) > c.l) err << "invalid harmonic index (" << c.l << "," << c.m << "); ";
        break;
    }
    if (!err.str().empty()) throw Error("surface: " + err.str());
    check_rotation(d.rotation);
}

Surface::Surface(const SurfaceDescriptor& d) : desc_(d)
{
    check_descriptor(d);
    if (d.kind == SurfaceKind::Perturbed) {
        int L = 0;
        for (const auto& c : d.perturbation) L = std::max(L, c.l);
        pert_table_ = std::make_shared<ShTable>(L);
        pert_coef_.assign(sh_count(L), 0.0);
        for (const auto& c : d.perturbation) pert_coef_[sh_index(c.l, c.m)] += c.value;
        // amplitude bound on a grid fine enough for the perturbation degree
        const SphereRule probe = product_rule(2 * L + 8, 4 * L + 16);
        double amp = 0.0;
        std::vector<double> Y(sh_count(L));
        for (const auto& u : probe.yhat) {
            pert_table_->eval(u, Y.data(), nullptr);
            double v = 0.0;
            for (int i = 0; i < sh_count(L); ++i) v += pert_coef_[i] * Y[i];
            amp = std::max(amp, std::abs(v));
        }
        if (!(amp < 0.3)) throw Error("surface: perturbation relative amplitude must stay below 0.3");
    }

    const SphereRule rule = product_rule(d.n_theta, d.n_phi);
    const std::size_t n = rule.size();
    yhat = rule.yhat;
    w = rule.w;
    ws.resize(n);
    x.resize(n);
    nu.resize(n);
    e1.resize(n);
    e2.resize(n);
    J.resize(n);
    Dq.resize(n);
    pull.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const SurfPoint p = at(yhat[i]);
        if (!(p.J > 0.0)) throw Error("surface: nonpositive Jacobian (self-intersecting parametrization)");
        x[i] = p.x;
        nu[i] = p.nu;
        J[i] = p.J;
        Dq[i] = p.Dq;
        pull[i] = p.pull;
        ws[i] = w[i] * p.J;
        tangent_frame(p, yhat[i], e1[i], e2[i]);
    }
}

double Surface::radial(const Vec3& u, Vec3* grad) const
{
    if (desc_.kind != SurfaceKind::Perturbed) {
        if (grad) grad->setZero();
        return desc_.radius;
    }
    const int L = pert_table_->degree();
    thread_local std::vector<double> Y;
    thread_local std::vector<Vec3> G;
    Y.resize(sh_count(L));
    G.resize(sh_count(L));
    pert_table_->eval(u, Y.data(), grad ? G.data() : nullptr);
    double v = 1.0;
    Vec3 g = Vec3::Zero();
    for (int i = 0; i < sh_count(L); ++i) {
        if (pert_coef_[i] == 0.0) continue;
        v += pert_coef_[i] * Y[i];
        if (grad) g += pert_coef_[i] * G[i];
    }
    if (grad) *grad = desc_.radius * g;
    return desc_.radius * v;
}

SurfPoint Surface::at(const Vec3& yh) const
{
    const Vec3 u = yh.normalized();
    const Mat3& Q = desc_.rotation;
    SurfPoint p;
    Vec3 q0, nu0;
    Mat3 D0, pull0;
    if (desc_.kind == SurfaceKind::Ellipsoid) {
        const Vec3& a = desc_.semi_axes;
        const Mat3 A = a.asDiagonal();
        const Vec3 ainv = a.cwiseInverse();
        q0 = A * u;
        const Vec3 m = ainv.cwiseProduct(u);
        nu0 = m.normalized();
        p.J = a.prod() * m.norm();
        D0 = A;
        pull0 = ainv.asDiagonal() * (Mat3::Identity() - nu0 * nu0.transpose());
    } else {
        Vec3 grho;
        const double rho = radial(u, &grho);
        q0 = rho * u;
        const Vec3 m = rho * u - grho;
        nu0 = m.normalized();
        p.J = rho * m.norm();
        D0 = rho * Mat3::Identity() + u * grho.transpose();
        pull0 = (Mat3::Identity() - u * u.transpose()) * (Mat3::Identity() - nu0 * nu0.transpose()) / rho;
    }
    p.x = desc_.center + Q * q0;
    p.nu = Q * nu0;
    p.Dq = Q * D0;
    p.pull = pull0 * Q.transpose();
    return p;
}

void tangent_frame(const SurfPoint& p, const Vec3& yh, Vec3& e1, Vec3& e2)
{
    const Vec3 u = yh.normalized();
    const double s = std::hypot(u.x(), u.y());
    Vec3 et;
    if (s > 1e-300)
        et = Vec3(u.z() * u.x() / s, u.z() * u.y() / s, -s);
    else
        et = Vec3(u.z(), 0.0, 0.0);
    Vec3 t = p.Dq * et;
    t -= p.nu * p.nu.dot(t);
    e1 = t.normalized();
    e2 = p.nu.cross(e1);
}

double Surface::area() const
{
    double a = 0.0;
    for (double v : ws) a += v;
    return a;
}

double Surface::level(const Vec3& pt) const
{
    const Vec3 v = desc_.rotation.transpose() * (pt - desc_.center);
    if (desc_.kind == SurfaceKind::Ellipsoid) return v.cwiseQuotient(desc_.semi_axes).norm() - 1.0;
    const double r = v.norm();
    if (r == 0.0) return -1.0;
    return r / radial(v / r, nullptr) - 1.0;
}

double Surface::mesh_spacing(int nt, int np) const
{
    const SphereRule r = product_rule(nt, np);
    double h = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) h = std::max(h, std::sqrt(r.w[i] * at(r.yhat[i]).J));
    return h;
}

bool Surface::axisymmetric() const
{
    switch (desc_.kind) {
    case SurfaceKind::Sphere:
        return true;
    case SurfaceKind::Ellipsoid:
        return desc_.semi_axes.x() == desc_.semi_axes.y();
    case SurfaceKind::Perturbed:
        for (const auto& c : desc_.perturbation)
            if (c.m != 0 && c.value != 0.0) return false;
        return true;
    }
    return false;
}

bool share_axis(const Surface& a, const Surface& b)
{
    if (!a.axisymmetric() || !b.axisymmetric()) return false;
    const Mat3& Ra = a.descriptor().rotation;
    const Mat3& Rb = b.descriptor().rotation;
    if ((Ra - Rb).cwiseAbs().maxCoeff() > 1e-14) return false;
    const Vec3 axis = Ra.col(2);
    const Vec3 dc = a.descriptor().center - b.descriptor().center;
    return dc.cross(axis).norm() <= 1e-14 * (1.0 + dc.norm());
}

SurfacePtr make_surface(const SurfaceDescriptor& d) { return std::make_shared<const Surface>(d); }

SurfacePtr rotate_surface(const Surface& s, const Mat3& Q)
{
    check_rotation(Q);
    SurfaceDescriptor d = s.descriptor();
    d.center = Q * d.center;
    d.rotation = Q * d.rotation;
    return make_surface(d);
}

std::vector<cplx> surface_divergence(const Surface& s, const std::vector<CVec3>& f)
{
    if (s.n_theta() < 8) throw Error("surface_divergence: order below 8");
    if (static_cast<int>(f.size()) != s.size()) throw Error("surface_divergence: size mismatch");
    const int L = s.degree();
    const ShTable table(L);
    const int nv = vsh_count(L);
    std::vector<Vec3> V(nv), G(sh_count(L));
    std::vector<double> dv(nv), Y(sh_count(L));
    VecC coef = VecC::Zero(nv);
    for (int i = 0; i < s.size(); ++i) {
        table.eval_vsh(s.yhat[i], V.data(), dv.data(), Y.data(), G.data());
        const CVec3 u = s.J[i] * (s.pull[i].cast<cplx>() * f[i]);
        for (int k = 0; k < nv; ++k) coef[k] += s.w[i] * V[k].cast<cplx>().dot(u);
    }
    std::vector<cplx> out(s.size());
    for (int i = 0; i < s.size(); ++i) {
        table.eval_vsh(s.yhat[i], V.data(), dv.data(), Y.data(), G.data());
        cplx v = 0.0;
        for (int k = 0; k < nv; ++k) v += coef[k] * dv[k];
        out[i] = v / s.J[i];
    }
    return out;
}

}  // namespace tlbie
