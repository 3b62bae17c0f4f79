#include "tlbie/potentials.hpp"

#include <algorithm>
#include <cmath>

namespace tlbie {

namespace {

int vsh_degree_of(Eigen::Index nb)
{
    int L = 0;
    while (vsh_count(L) < nb) ++L;
    if (vsh_count(L) != nb) throw Error("vector density size does not match a harmonic degree");
    return L;
}

int sh_degree_of(Eigen::Index ns)
{
    int L = 0;
    while (sh_count(L) < ns) ++L;
    if (sh_count(L) != ns) throw Error("scalar density size does not match a harmonic degree");
    return L;
}

// Source samples: points and the weighted channel matrix. Vector basis column j owns
// channels 4j..4j+3 = w [Dq V_j, Div V_j]; scalar column j owns 4(nb + j).. =
// w J [Y_j, nu Y_j].
struct SourceChannels {
    std::vector<Vec3> y;
    MatR ch;
};

SourceChannels build_channels(const Surface& s, const SphereRule& rule, int Lv, int Ls)
{
    const int nb = Lv >= 1 ? vsh_count(Lv) : 0;
    const int ns = Ls >= 0 ? sh_count(Ls) : 0;
    const int Lt = std::max(Lv, Ls);
    const ShTable table(std::max(Lt, 0));
    std::vector<double> Y(sh_count(std::max(Lt, 0)));
    std::vector<Vec3> G(sh_count(std::max(Lt, 0)));
    SourceChannels out;
    const std::size_t n = rule.size();
    out.y.resize(n);
    out.ch.resize(static_cast<Eigen::Index>(n), 4 * (nb + ns));
    for (std::size_t p = 0; p < n; ++p) {
        const SurfPoint sp = s.at(rule.yhat[p]);
        out.y[p] = sp.x;
        const double w = rule.w[p];
        table.eval(rule.yhat[p], Y.data(), nb > 0 ? G.data() : nullptr);
        const Eigen::Index r = static_cast<Eigen::Index>(p);
        if (nb > 0) {
            const Vec3 un = rule.yhat[p].normalized();
            for (int l = 1; l <= Lv; ++l) {
                const double nl = std::sqrt(double(l) * (l + 1));
                for (int m = -l; m <= l; ++m) {
                    const int idx = sh_index(l, m);
                    const int j = 2 * (idx - 1);
                    const Vec3 v1 = sp.Dq * (G[idx] * (w / nl));
                    const Vec3 v2 = sp.Dq * (un.cross(G[idx]) * (w / nl));
                    out.ch(r, 4 * j) = v1.x();
                    out.ch(r, 4 * j + 1) = v1.y();
                    out.ch(r, 4 * j + 2) = v1.z();
                    out.ch(r, 4 * j + 3) = -nl * Y[idx] * w;
                    out.ch(r, 4 * j + 4) = v2.x();
                    out.ch(r, 4 * j + 5) = v2.y();
                    out.ch(r, 4 * j + 6) = v2.z();
                    out.ch(r, 4 * j + 7) = 0.0;
                }
            }
        }
        const double wj = w * sp.J;
        for (int j = 0; j < ns; ++j) {
            const double v = wj * Y[j];
            const Eigen::Index c = 4 * (nb + j);
            out.ch(r, c) = v;
            out.ch(r, c + 1) = v * sp.nu.x();
            out.ch(r, c + 2) = v * sp.nu.y();
            out.ch(r, c + 3) = v * sp.nu.z();
        }
    }
    return out;
}

// Kernel rows for targets xs and wave numbers ks: row ((t nk + kk) 8 + 2 r + part) holds the
// real (part 0) or imaginary (part 1) part of [Phi, g r_x, g r_y, g r_z] with r = x - y.
MatR kernel_rows(const std::vector<Vec3>& xs, const std::vector<cplx>& ks, const std::vector<Vec3>& y)
{
    const int nk = static_cast<int>(ks.size());
    MatR K(8 * nk * static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(y.size()));
    for (std::size_t t = 0; t < xs.size(); ++t) {
        for (std::size_t p = 0; p < y.size(); ++p) {
            const Vec3 r = xs[t] - y[p];
            const double R = r.norm();
            for (int kk = 0; kk < nk; ++kk) {
                const cplx k = ks[kk];
                const cplx ph = std::exp(I * k * R) / (4.0 * pi * R);
                const cplx g = ph * (I * k * R - 1.0) / (R * R);
                const Eigen::Index b = 8 * (static_cast<Eigen::Index>(t) * nk + kk);
                const Eigen::Index c = static_cast<Eigen::Index>(p);
                K(b, c) = ph.real();
                K(b + 1, c) = ph.imag();
                for (int d = 0; d < 3; ++d) {
                    const cplx v = g * r[d];
                    K(b + 2 + 2 * d, c) = v.real();
                    K(b + 3 + 2 * d, c) = v.imag();
                }
            }
        }
    }
    return K;
}

struct TargetGeom {
    Vec3 nu, e1, e2;
};

// Turns the moments of one target and wave number into the requested outputs, writing
// row t of each output matrix (frame outputs occupy rows 2t, 2t + 1).
void fill_outputs(const MatR& mom, Eigen::Index base, cplx k, const TargetGeom& tg, int nb, int ns,
                  unsigned outputs, NodalOps& ops, Eigen::Index t)
{
    auto m = [&](int r, Eigen::Index c) { return cplx(mom(base + 2 * r, c), mom(base + 2 * r + 1, c)); };
    const CVec3 nu = to_c(tg.nu), e1 = to_c(tg.e1), e2 = to_c(tg.e2);
    auto frame = [&](MatC& out, Eigen::Index j, const CVec3& v) {
        out(2 * t, j) = e1.dot(v);
        out(2 * t + 1, j) = e2.dot(v);
    };
    const cplx k2 = k * k;
    for (int j = 0; j < nb; ++j) {
        const Eigen::Index c = 4 * j;
        const CVec3 A(m(0, c), m(0, c + 1), m(0, c + 2));
        if (outputs & OutM) {
            const CVec3 curlA(m(2, c + 2) - m(3, c + 1), m(3, c) - m(1, c + 2), m(1, c + 1) - m(2, c));
            frame(ops.M, j, 2.0 * cross(nu, curlA));
        }
        if (outputs & OutC) {
            const CVec3 gd(m(1, c + 3), m(2, c + 3), m(3, c + 3));
            frame(ops.C, j, 2.0 * cross(nu, k2 * A + gd));
        }
        if (outputs & OutSV) frame(ops.SV, j, 2.0 * A);
        if (outputs & OutD) ops.D(t, j) = -2.0 * (m(1, c) + m(2, c + 1) + m(3, c + 2));
    }
    for (int j = 0; j < ns; ++j) {
        const Eigen::Index c = 4 * (nb + j);
        if (outputs & OutGS) {
            const CVec3 gS(m(1, c), m(2, c), m(3, c));
            frame(ops.GS, j, 2.0 * cross(nu, gS));
        }
        if (outputs & OutAN) frame(ops.AN, j, 2.0 * CVec3(m(0, c + 1), m(0, c + 2), m(0, c + 3)));
        if (outputs & OutCAN) {
            const CVec3 cAn(m(2, c + 3) - m(3, c + 2), m(3, c + 1) - m(1, c + 3), m(1, c + 2) - m(2, c + 1));
            frame(ops.CAN, j, 2.0 * cross(nu, cAn));
        }
        if (outputs & OutS) ops.S(t, j) = 2.0 * m(0, c);
        // d Phi / d nu(y) = -grad_x Phi . nu(y)
        if (outputs & OutK) ops.K(t, j) = -2.0 * (m(1, c + 1) + m(2, c + 2) + m(3, c + 3));
    }
}

void allocate(NodalOps& ops, Eigen::Index nt, int nb, int ns, unsigned outputs)
{
    auto frame = [&](MatC& x, unsigned bit, int cols) {
        if (outputs & bit) x = MatC::Zero(2 * nt, cols);
    };
    auto scalar = [&](MatC& x, unsigned bit, int cols) {
        if (outputs & bit) x = MatC::Zero(nt, cols);
    };
    frame(ops.M, OutM, nb);
    frame(ops.C, OutC, nb);
    frame(ops.SV, OutSV, nb);
    scalar(ops.D, OutD, nb);
    frame(ops.GS, OutGS, ns);
    frame(ops.AN, OutAN, ns);
    frame(ops.CAN, OutCAN, ns);
    scalar(ops.S, OutS, ns);
    scalar(ops.K, OutK, ns);
}

// Signed order m and the cosine/sine partner of each basis column.
void column_orders(int nb, int ns, std::vector<int>& mv, std::vector<int>& pv, std::vector<int>& ms,
                   std::vector<int>& ps)
{
    mv.resize(nb);
    pv.resize(nb);
    for (int j = 0; j < nb; ++j) {
        const int idx = j / 2 + 1;
        const int l = sh_degree(idx);
        const int m = idx - l * l - l;
        mv[j] = m;
        pv[j] = 2 * (sh_index(l, -m) - 1) + j % 2;
    }
    ms.resize(ns);
    ps.resize(ns);
    for (int j = 0; j < ns; ++j) {
        const int l = sh_degree(j);
        const int m = j - l * l - l;
        ms[j] = m;
        ps[j] = sh_index(l, -m);
    }
}

// Rotates ring-representative rows (one target per ring) to all nodes of the ring.
MatC expand_rings(const MatC& rep, int rows_per_node, int n_rings, int n_phi, const std::vector<int>& mcol,
                  const std::vector<int>& partner)
{
    if (rep.size() == 0) return rep;
    const Eigen::Index cols = rep.cols();
    MatC out(static_cast<Eigen::Index>(rows_per_node) * n_rings * n_phi, cols);
    for (int s = 0; s < n_phi; ++s) {
        const double alpha = 2.0 * pi * s / n_phi;
        for (Eigen::Index j = 0; j < cols; ++j) {
            const int m = mcol[j];
            const double c = std::cos(std::abs(m) * alpha), sn = std::sin(std::abs(m) * alpha);
            for (int i = 0; i < n_rings; ++i) {
                for (int q = 0; q < rows_per_node; ++q) {
                    const Eigen::Index src = static_cast<Eigen::Index>(rows_per_node) * i + q;
                    const Eigen::Index dst = static_cast<Eigen::Index>(rows_per_node) * (i * n_phi + s) + q;
                    if (m == 0)
                        out(dst, j) = rep(src, j);
                    else if (m > 0)
                        out(dst, j) = c * rep(src, j) - sn * rep(src, partner[j]);
                    else
                        out(dst, j) = sn * rep(src, partner[j]) + c * rep(src, j);
                }
            }
        }
    }
    return out;
}

}  // namespace

std::vector<NodalOps> assemble_nodal(const Surface& target, const Surface& source, const std::vector<cplx>& ks,
                                     unsigned outputs, int vec_degree, int sca_degree, const QuadratureOptions& opt)
{
    const bool self = &target == &source;
    const bool needV = (outputs & vector_outputs) != 0;
    const bool needS = (outputs & scalar_outputs) != 0;
    const int Lv = needV ? vec_degree : 0;
    const int Ls = needS ? sca_degree : -1;
    const int nb = needV ? vsh_count(Lv) : 0;
    const int ns = needS ? sh_count(Ls) : 0;
    const int nk = static_cast<int>(ks.size());
    if (self && source.n_theta() < 4) throw Error("singular rule needs n_theta >= 4");

    const int fine_theta = opt.upsample * source.n_theta();
    const int fine_phi = opt.upsample * source.n_phi();
    const bool fast = opt.fast_path && share_axis(target, source) &&
                      (self || fine_phi % target.n_phi() == 0);

    std::vector<int> tnodes;
    if (fast)
        for (int i = 0; i < target.n_theta(); ++i) tnodes.push_back(i * target.n_phi());
    else
        for (int i = 0; i < target.size(); ++i) tnodes.push_back(i);
    const Eigen::Index nt = static_cast<Eigen::Index>(tnodes.size());

    std::vector<NodalOps> rep(nk);
    for (auto& o : rep) allocate(o, nt, nb, ns, outputs);

    auto geom = [&](int node) { return TargetGeom{target.nu[node], target.e1[node], target.e2[node]}; };

    if (self) {
        const int np = opt.polar_order > 0 ? opt.polar_order : source.n_theta();
        for (Eigen::Index t = 0; t < nt; ++t) {
            const int node = tnodes[t];
            const SphereRule rule = polar_rule(source.yhat[node], np, 2 * np);
            const SourceChannels src = build_channels(source, rule, Lv, Ls);
            const MatR K = kernel_rows({target.x[node]}, ks, src.y);
            const MatR mom = K * src.ch;
            for (int kk = 0; kk < nk; ++kk) fill_outputs(mom, 8 * kk, ks[kk], geom(node), nb, ns, outputs, rep[kk], t);
        }
    } else {
        const SphereRule rule = product_rule(fine_theta, fine_phi);
        const SourceChannels src = build_channels(source, rule, Lv, Ls);
        const Eigen::Index chunk = 32;
        for (Eigen::Index t0 = 0; t0 < nt; t0 += chunk) {
            const Eigen::Index t1 = std::min(nt, t0 + chunk);
            std::vector<Vec3> xs;
            for (Eigen::Index t = t0; t < t1; ++t) xs.push_back(target.x[tnodes[t]]);
            const MatR K = kernel_rows(xs, ks, src.y);
            const MatR mom = K * src.ch;
            for (Eigen::Index t = t0; t < t1; ++t)
                for (int kk = 0; kk < nk; ++kk)
                    fill_outputs(mom, 8 * ((t - t0) * nk + kk), ks[kk], geom(tnodes[t]), nb, ns, outputs, rep[kk], t);
        }
    }
    if (!fast) return rep;

    std::vector<int> mv, pv, ms, ps;
    column_orders(nb, ns, mv, pv, ms, ps);
    const int nr = target.n_theta(), nph = target.n_phi();
    std::vector<NodalOps> full(nk);
    for (int kk = 0; kk < nk; ++kk) {
        const NodalOps& r = rep[kk];
        NodalOps& f = full[kk];
        f.M = expand_rings(r.M, 2, nr, nph, mv, pv);
        f.C = expand_rings(r.C, 2, nr, nph, mv, pv);
        f.SV = expand_rings(r.SV, 2, nr, nph, mv, pv);
        f.D = expand_rings(r.D, 1, nr, nph, mv, pv);
        f.GS = expand_rings(r.GS, 2, nr, nph, ms, ps);
        f.AN = expand_rings(r.AN, 2, nr, nph, ms, ps);
        f.CAN = expand_rings(r.CAN, 2, nr, nph, ms, ps);
        f.S = expand_rings(r.S, 1, nr, nph, ms, ps);
        f.K = expand_rings(r.K, 1, nr, nph, ms, ps);
    }
    return full;
}

MatC operator_matrix(Output op, const Surface& target, const Surface& source, cplx k, const QuadratureOptions& opt)
{
    const int L = source.degree();
    const bool vec = (op & vector_outputs) != 0;
    const NodalOps ops = assemble_nodal(target, source, {k}, op, L, L, opt)[0];
    const MatR proj = vec ? vsh_projector(source, L) : sh_projector(source, L);
    const MatC* m = nullptr;
    switch (op) {
    case OutM: m = &ops.M; break;
    case OutC: m = &ops.C; break;
    case OutSV: m = &ops.SV; break;
    case OutD: m = &ops.D; break;
    case OutGS: m = &ops.GS; break;
    case OutAN: m = &ops.AN; break;
    case OutCAN: m = &ops.CAN; break;
    case OutS: m = &ops.S; break;
    case OutK: m = &ops.K; break;
    }
    return complex_times_real(*m, proj);
}

MatR shat_matrix(const Surface& s, const std::vector<double>& indicator, const QuadratureOptions& opt)
{
    if (static_cast<int>(indicator.size()) != s.size()) throw Error("shat_matrix: indicator size mismatch");
    if (std::none_of(indicator.begin(), indicator.end(), [](double v) { return v != 0.0; }))
        throw Error("shat_matrix: empty patch");
    const int Ls = s.n_theta() - 1;
    const NodalOps ops = assemble_nodal(s, s, {cplx(0.0)}, OutS, 0, Ls, opt)[0];
    MatR hyp = sh_projector(s, Ls);
    for (int i = 0; i < s.size(); ++i) hyp.col(i) *= indicator[i];
    return ops.S.real() * hyp;
}

std::vector<CVec3> apply_shat_squared(const Surface& s, const std::vector<double>& indicator,
                                      const std::vector<CVec3>& c, const QuadratureOptions& opt)
{
    const MatR Sh = shat_matrix(s, indicator, opt);
    MatC v(s.size(), 3);
    for (int i = 0; i < s.size(); ++i) v.row(i) = c[i].transpose();
    const MatC r = real_times_complex(Sh, real_times_complex(Sh, v));
    std::vector<CVec3> out(s.size());
    for (int i = 0; i < s.size(); ++i) out[i] = r.row(i).transpose();
    return out;
}

SurfaceSampler::SurfaceSampler(const Surface& s, const SourceDensity& dens, int factor)
{
    const bool hasV = dens.vec.size() > 0;
    const bool hasS = dens.sca.size() > 0;
    const int Lv = hasV ? vsh_degree_of(dens.vec.size()) : 0;
    const int Ls = hasS ? sh_degree_of(dens.sca.size()) : 0;
    const int L = std::max(Lv, Ls);
    const ShTable table(L);
    std::vector<double> Y(sh_count(L));
    std::vector<Vec3> G(sh_count(L));
    const SphereRule rule = product_rule(factor * s.n_theta(), factor * s.n_phi());
    const std::size_t n = rule.size();
    y_.resize(n);
    a_.assign(n, CVec3::Zero());
    diva_.assign(n, 0.0);
    psi_.assign(n, 0.0);
    npsi_.assign(n, CVec3::Zero());
    for (std::size_t p = 0; p < n; ++p) {
        const SurfPoint sp = s.at(rule.yhat[p]);
        y_[p] = sp.x;
        spacing_ = std::max(spacing_, std::sqrt(rule.w[p] * sp.J));
        table.eval(rule.yhat[p], Y.data(), G.data());
        const double w = rule.w[p];
        if (hasV) {
            const Vec3 un = rule.yhat[p].normalized();
            CVec3 u = CVec3::Zero();
            cplx dv = 0.0;
            for (int l = 1; l <= Lv; ++l) {
                const double nl = std::sqrt(double(l) * (l + 1));
                for (int m = -l; m <= l; ++m) {
                    const int idx = sh_index(l, m);
                    const int j = 2 * (idx - 1);
                    u += dens.vec[j] * to_c(G[idx] / nl) + dens.vec[j + 1] * to_c(un.cross(G[idx]) / nl);
                    dv += -nl * Y[idx] * dens.vec[j];
                }
            }
            a_[p] = w * (sp.Dq.cast<cplx>() * u);
            diva_[p] = w * dv;
        }
        if (hasS) {
            cplx v = 0.0;
            for (int j = 0; j < sh_count(Ls); ++j) v += dens.sca[j] * Y[j];
            psi_[p] = w * sp.J * v;
            npsi_[p] = psi_[p] * to_c(sp.nu);
        }
    }
}

PointPotentials SurfaceSampler::eval(cplx k, const Vec3& x) const
{
    PointPotentials o;
    CVec3 gd = CVec3::Zero();
    for (std::size_t p = 0; p < y_.size(); ++p) {
        const Vec3 r = x - y_[p];
        const double R = r.norm();
        const cplx ph = std::exp(I * k * R) / (4.0 * pi * R);
        const CVec3 gr = (ph * (I * k * R - 1.0) / (R * R)) * to_c(r);
        o.A += ph * a_[p];
        o.curlA += cross(gr, a_[p]);
        gd += gr * diva_[p];
        o.S += ph * psi_[p];
        o.gradS += gr * psi_[p];
        o.An += ph * npsi_[p];
        o.curlAn += cross(gr, npsi_[p]);
    }
    o.ccA = k * k * o.A + gd;
    return o;
}

void SurfaceSampler::far(cplx k, const Vec3& xhat, CVec3& Ia, cplx& Ipsi, CVec3& Inupsi) const
{
    Ia.setZero();
    Ipsi = 0.0;
    Inupsi.setZero();
    for (std::size_t p = 0; p < y_.size(); ++p) {
        const cplx e = std::exp(-I * k * xhat.dot(y_[p]));
        Ia += e * a_[p];
        Ipsi += e * psi_[p];
        Inupsi += e * npsi_[p];
    }
}

double SurfaceSampler::distance(const Vec3& x) const
{
    double d = 1e300;
    for (const auto& y : y_) d = std::min(d, (x - y).norm());
    return d;
}

}  // namespace tlbie
