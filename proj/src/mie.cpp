#include "tlbie/mie.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tlbie/harmonics.hpp"

namespace tlbie {

int MieScene::truncation() const
{
    return L > 0 ? L : static_cast<int>(std::ceil(std::abs(media.k0) * r0)) + 15;
}

void MieScene::check() const
{
    check_wavenumbers(media);
    if (!(r1 > 0.0) || !(r1 < r0)) throw Error("mie: need 0 < r1 < r0");
    if (core == Core::Impedance && !(lambda > 0.0)) throw Error("mie: impedance constant must be positive");
    const int minL = static_cast<int>(std::ceil(std::abs(media.k0) * r0)) + 10;
    if (truncation() < minL) throw Error("mie: truncation degree below ceil(|k0| r0) + 10 = " + std::to_string(minL));
}

void spherical_bessel_j(int L, cplx x, std::vector<cplx>& j)
{
    if (std::abs(x) == 0.0) throw Error("spherical_bessel_j: zero argument");
    j.assign(L + 1, 0.0);
    // ratios R_l = j_l / j_{l-1} from the continued fraction, evaluated bottom-up
    const int top = L + 40 + static_cast<int>(std::ceil(std::abs(x)));
    std::vector<cplx> R(L + 2, 0.0);
    cplx r = 0.0;
    for (int l = top; l >= 1; --l) {
        r = 1.0 / (double(2 * l + 1) / x - r);
        if (l <= L + 1) R[l] = r;
    }
    const cplx j0 = std::sin(x) / x;
    const cplx j1 = std::sin(x) / (x * x) - std::cos(x) / x;
    if (std::abs(j0) >= std::abs(j1)) {
        j[0] = j0;
        for (int l = 1; l <= L; ++l) j[l] = R[l] * j[l - 1];
    } else {
        j[0] = j1 / R[1];
        if (L >= 1) j[1] = j1;
        for (int l = 2; l <= L; ++l) j[l] = R[l] * j[l - 1];
    }
}

void spherical_hankel_h(int L, cplx x, std::vector<cplx>& h)
{
    if (std::abs(x) == 0.0) throw Error("spherical_hankel_h: zero argument");
    h.assign(L + 1, 0.0);
    const cplx e = std::exp(I * x);
    h[0] = -I * e / x;
    if (L >= 1) h[1] = -e * (x + I) / (x * x);
    for (int l = 1; l < L; ++l) h[l + 1] = double(2 * l + 1) / x * h[l] - h[l - 1];
}

namespace {

// z_l and (x z_l)' / x at x
struct Radial {
    std::vector<cplx> j, h, pj, ph;
};

Radial radial(int L, cplx x)
{
    Radial r;
    spherical_bessel_j(L, x, r.j);
    spherical_hankel_h(L, x, r.h);
    r.pj.assign(L + 1, 0.0);
    r.ph.assign(L + 1, 0.0);
    for (int l = 1; l <= L; ++l) {
        r.pj[l] = r.j[l - 1] - double(l) * r.j[l] / x;
        r.ph[l] = r.h[l - 1] - double(l) * r.h[l] / x;
    }
    return r;
}

// Solves [a b; c d] [s; t] = [e; f]; returns the relative residual.
double solve2(cplx a, cplx b, cplx c, cplx d, cplx e, cplx f, cplx& s, cplx& t, int l, const char* family)
{
    const double scale = std::hypot(std::abs(a), std::abs(c)) * std::hypot(std::abs(b), std::abs(d));  // Hadamard bound
    const cplx det = a * d - b * c;
    if (!(std::abs(det) > 1e-14 * scale))
        throw Error(std::string("mie: singular ") + family + " system at degree " + std::to_string(l));
    s = (e * d - b * f) / det;
    t = (a * f - c * e) / det;
    const double r1 = std::abs(a * s + b * t - e) / (std::abs(a * s) + std::abs(b * t) + std::abs(e));
    const double r2 = std::abs(c * s + d * t - f) / (std::abs(c * s) + std::abs(d * t) + std::abs(f));
    return std::max(r1, r2);
}

}  // namespace

MieSolution mie_solve(const MieScene& scene, const IncidentField& plane)
{
    scene.check();
    plane.check();
    if (plane.type != IncidentField::Type::Plane) throw Error("mie: only plane-wave incidence is supported");
    MieSolution o;
    o.scene = scene;
    const int L = o.L = scene.truncation();
    const WaveNumbers& m = scene.media;
    const cplx k0 = m.k0, k1 = m.k1;

    const Radial e0 = radial(L, k0 * scene.r0);  // exterior at the interface
    const Radial l0 = radial(L, k1 * scene.r0);  // layer at the interface
    const Radial l1 = radial(L, k1 * scene.r1);  // layer at the core

    // incident coefficients from E and H traces on the interface sphere
    const int ns = sh_count(L);
    o.inc_te.assign(ns, 0.0);
    o.inc_tm.assign(ns, 0.0);
    {
        const int nt = L + static_cast<int>(std::ceil(2.0 * std::abs(k0) * scene.r0)) + 30;
        const SphereRule rule = product_rule(nt, 2 * nt);
        const ShTable table(L);
        std::vector<Vec3> V(vsh_count(L)), G(ns);
        std::vector<double> div(vsh_count(L)), Y(ns);
        std::vector<cplx> eU(ns, 0.0), eV(ns, 0.0), hU(ns, 0.0), hV(ns, 0.0);
        for (std::size_t p = 0; p < rule.size(); ++p) {
            const EH f = plane.eval(m, scene.r0 * rule.yhat[p]);
            table.eval_vsh(rule.yhat[p], V.data(), div.data(), Y.data(), G.data());
            for (int idx = 1; idx < ns; ++idx) {
                const Vec3& v1 = V[2 * (idx - 1)];
                const Vec3& u = V[2 * (idx - 1) + 1];
                eV[idx] += rule.w[p] * (f.E.x() * v1.x() + f.E.y() * v1.y() + f.E.z() * v1.z());
                eU[idx] += rule.w[p] * (f.E.x() * u.x() + f.E.y() * u.y() + f.E.z() * u.z());
                hV[idx] += rule.w[p] * (f.H.x() * v1.x() + f.H.y() * v1.y() + f.H.z() * v1.z());
                hU[idx] += rule.w[p] * (f.H.x() * u.x() + f.H.y() * u.y() + f.H.z() * u.z());
            }
        }
        for (int idx = 1; idx < ns; ++idx) {
            const int l = sh_degree(idx);
            const cplx z = e0.j[l], pz = e0.pj[l];
            const double nrm = std::norm(z) + std::norm(pz);
            // E_t = te z U + ..., H_t = i te pz V1; E_t = -tm pz V1, H_t = -i tm z U
            o.inc_te[idx] = (std::conj(z) * eU[idx] + std::conj(I * pz) * hV[idx]) / nrm;
            o.inc_tm[idx] = (std::conj(-pz) * eV[idx] + std::conj(-I * z) * hU[idx]) / nrm;
        }
    }

    o.transfer_te.assign(L + 1, 0.0);
    o.transfer_tm.assign(L + 1, 0.0);
    const cplx lam = scene.lambda;
    const bool pec = scene.core == MieScene::Core::PEC;
    for (int l = 1; l <= L; ++l) {
        // core condition alpha c_j + beta c_h = 0 on the layer coefficients
        cplx cj, ch;
        cplx s, t;
        // TE: F_t = (alpha j + beta h) U, G_t = i (alpha pj + beta ph) V1
        if (pec) {
            cj = l1.j[l];
            ch = l1.h[l];
        } else {
            cj = I * l1.pj[l] - lam / k1 * l1.j[l];
            ch = I * l1.ph[l] - lam / k1 * l1.h[l];
        }
        double sc = std::max(std::abs(cj), std::abs(ch));
        cplx zf = (ch * l0.j[l] - cj * l0.h[l]) / sc;
        cplx pf = (ch * l0.pj[l] - cj * l0.ph[l]) / sc;
        double res = solve2(e0.h[l], -m.lambda_E * zf, e0.ph[l], -m.lambda_H * pf, -e0.j[l], -e0.pj[l], s, t, l, "TE");
        o.transfer_te[l] = s;
        o.mode_residual = std::max(o.mode_residual, res);
        // TM: F_t = -(alpha pj + beta ph) V1, G_t = -i (alpha j + beta h) U
        if (pec) {
            cj = l1.pj[l];
            ch = l1.ph[l];
        } else {
            cj = I * l1.j[l] + lam / k1 * l1.pj[l];
            ch = I * l1.h[l] + lam / k1 * l1.ph[l];
        }
        sc = std::max(std::abs(cj), std::abs(ch));
        zf = (ch * l0.j[l] - cj * l0.h[l]) / sc;
        pf = (ch * l0.pj[l] - cj * l0.ph[l]) / sc;
        res = solve2(e0.ph[l], -m.lambda_E * pf, e0.h[l], -m.lambda_H * zf, -e0.pj[l], -e0.j[l], s, t, l, "TM");
        o.transfer_tm[l] = s;
        o.mode_residual = std::max(o.mode_residual, res);
    }

    o.te.assign(ns, 0.0);
    o.tm.assign(ns, 0.0);
    double top = 0.0, last = 0.0;
    for (int idx = 1; idx < ns; ++idx) {
        const int l = sh_degree(idx);
        o.te[idx] = o.transfer_te[l] * o.inc_te[idx];
        o.tm[idx] = o.transfer_tm[l] * o.inc_tm[idx];
        const double a = std::max(std::abs(o.te[idx]), std::abs(o.tm[idx]));
        top = std::max(top, a);
        if (l == L) last = std::max(last, a);
    }
    o.tail = top > 0.0 ? last / top : 0.0;
    return o;
}

CVec3 mie_far_field(const MieSolution& sol, const Vec3& xhat)
{
    if (std::abs(xhat.norm() - 1.0) > 1e-12) throw Error("mie_far_field: direction must be a unit vector");
    const int L = sol.L;
    const int ns = sh_count(L);
    const ShTable table(L);
    std::vector<Vec3> V(vsh_count(L)), G(ns);
    std::vector<double> div(vsh_count(L)), Y(ns);
    table.eval_vsh(xhat, V.data(), div.data(), Y.data(), G.data());
    const cplx k0 = sol.scene.media.k0;
    CVec3 e = CVec3::Zero();
    cplx f = -I / k0;  // (-i)^{l+1} / k0 at l = 0
    for (int l = 1; l <= L; ++l) {
        f *= -I;
        for (int mm = -l; mm <= l; ++mm) {
            const int idx = sh_index(l, mm);
            e += f * (sol.te[idx] * to_c(V[2 * (idx - 1) + 1]) - I * sol.tm[idx] * to_c(V[2 * (idx - 1)]));
        }
    }
    for (int c = 0; c < 3; ++c)
        if (!std::isfinite(e[c].real()) || !std::isfinite(e[c].imag())) throw Error("mie_far_field: non-finite value");
    return e;
}

}  // namespace tlbie
