#include "tlbie/bie.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace tlbie {

namespace {

UnknownSpace vector_space(const Surface& s1, const Partition& part, int label, const MatR& proj1)
{
    UnknownSpace u;
    u.nodes = part.nodes(label);
    u.mask.assign(s1.size(), 0.0);
    for (int i : u.nodes) u.mask[i] = 1.0;
    if (u.nodes.empty()) return u;
    u.present = true;
    u.nodal = part.mixed();
    if (!u.nodal) {
        u.size = static_cast<int>(proj1.rows());
        u.coef = MatR::Identity(u.size, u.size);
        u.test = proj1;
        return u;
    }
    const int m = static_cast<int>(u.nodes.size());
    u.size = 2 * m;
    u.coef.resize(proj1.rows(), 2 * m);
    u.test = MatR::Zero(2 * m, 2 * s1.size());
    for (int k = 0; k < m; ++k)
        for (int c = 0; c < 2; ++c) {
            u.coef.col(2 * k + c) = proj1.col(2 * u.nodes[k] + c);
            u.test(2 * k + c, 2 * u.nodes[k] + c) = 1.0;
        }
    return u;
}

UnknownSpace scalar_space(const Surface& s1, const Partition& part, int label, const MatR& projY)
{
    UnknownSpace u;
    u.nodes = part.nodes(label);
    u.mask.assign(s1.size(), 0.0);
    for (int i : u.nodes) u.mask[i] = 1.0;
    if (u.nodes.empty()) return u;
    u.present = true;
    u.nodal = part.mixed();
    if (!u.nodal) {
        u.size = static_cast<int>(projY.rows());
        u.coef = MatR::Identity(u.size, u.size);
        u.test = projY;
        return u;
    }
    const int m = static_cast<int>(u.nodes.size());
    u.size = m;
    u.coef.resize(projY.rows(), m);
    u.test = MatR::Zero(m, s1.size());
    for (int k = 0; k < m; ++k) {
        u.coef.col(k) = projY.col(u.nodes[k]);
        u.test(k, u.nodes[k]) = 1.0;
    }
    return u;
}

// Cartesian values (3N x size) of the densities spanned by the unknowns of a space.
MatR space_cart(const Surface& s1, const UnknownSpace& u, int L)
{
    if (!u.nodal) return vsh_cart_eval(s1, L);
    MatR out = MatR::Zero(3 * s1.size(), u.size);
    for (std::size_t k = 0; k < u.nodes.size(); ++k) {
        const int i = u.nodes[k];
        out.block<3, 1>(3 * i, 2 * k) = s1.e1[i];
        out.block<3, 1>(3 * i, 2 * k + 1) = s1.e2[i];
    }
    return out;
}

// Shat^2 of the patch applied to each Cartesian component; frame data of the result,
// rotated by R and restricted to the patch (rotate) or only projected on the frame.
MatR shat2_frame(const Surface& s1, const MatR& Sh, const std::vector<double>& mask, const MatR& cart, bool rotate)
{
    const int N = s1.size();
    const Eigen::Index m = cart.cols();
    const MatR Sh2 = Sh * Sh;
    MatR comp[3];
    for (int c = 0; c < 3; ++c) {
        MatR x(N, m);
        for (int i = 0; i < N; ++i) x.row(i) = cart.row(3 * i + c);
        comp[c] = Sh2 * x;
    }
    MatR out(2 * N, m);
    for (int i = 0; i < N; ++i) {
        const Vec3& e1 = s1.e1[i];
        const Vec3& e2 = s1.e2[i];
        const auto v1 = e1.x() * comp[0].row(i) + e1.y() * comp[1].row(i) + e1.z() * comp[2].row(i);
        const auto v2 = e2.x() * comp[0].row(i) + e2.y() * comp[1].row(i) + e2.z() * comp[2].row(i);
        if (rotate) {
            out.row(2 * i) = mask[i] * v2;
            out.row(2 * i + 1) = -mask[i] * v1;
        } else {
            out.row(2 * i) = v1;
            out.row(2 * i + 1) = v2;
        }
    }
    return out;
}

MatC right(const MatC& x, const UnknownSpace& u) { return u.nodal ? complex_times_real(x, u.coef) : x; }

}  // namespace

BlockSystem assemble_system(const Scene& scene, const SolverOptions& opt)
{
    require_valid(scene);
    BlockSystem sys;
    sys.scene = scene;
    sys.opt = opt;
    const Surface& S0 = *scene.s0;
    const Surface& S1 = *scene.s1;
    const WaveNumbers& m = scene.media;
    const cplx k0 = m.k0, k1 = m.k1, lE = m.lambda_E, lH = m.lambda_H;
    const cplx lam = m.lambda_imp;
    const QuadratureOptions& q = opt.quad;

    sys.n0 = S0.degree();
    sys.n1 = S1.degree();
    sys.nb0 = vsh_count(sys.n0);
    sys.nb1 = vsh_count(sys.n1);
    sys.ns1 = sh_count(sys.n1);
    const MatR proj0 = vsh_projector(S0, sys.n0);
    const MatR proj1 = vsh_projector(S1, sys.n1);
    const MatR projY = sh_projector(S1, sys.n1);
    sys.eval0 = vsh_frame_eval(S0, sys.n0);
    sys.eval1 = vsh_frame_eval(S1, sys.n1);
    sys.sca1 = sh_eval(S1, sys.n1);

    sys.c = vector_space(S1, scene.partition, 1, proj1);
    sys.d = vector_space(S1, scene.partition, 2, proj1);
    sys.psi = scalar_space(S1, scene.partition, 2, projY);
    const UnknownSpace &C = sys.c, &D = sys.d, &P = sys.psi;
    sys.off[1] = sys.nb0;
    sys.off[2] = 2 * sys.nb0;
    sys.off[3] = sys.off[2] + C.size;
    sys.off[4] = sys.off[3] + D.size;
    sys.off[5] = sys.off[4] + P.size;
    sys.diag[0] = m.lambda_a();
    sys.diag[1] = m.lambda_b();
    sys.diag[2] = 1.0;
    sys.diag[3] = 1.0;
    sys.diag[4] = I * lam;

    MatR PS2;  // P Shat_2^2 d at the obstacle nodes
    if (C.present) {
        const MatR Sh = shat_matrix(S1, C.mask, q);
        sys.W1 = proj1 * shat2_frame(S1, Sh, C.mask, space_cart(S1, C, sys.n1), true);
    }
    if (D.present) {
        const MatR Sh = shat_matrix(S1, D.mask, q);
        const MatR cart = space_cart(S1, D, sys.n1);
        sys.W2 = proj1 * shat2_frame(S1, Sh, D.mask, cart, true);
        PS2 = shat2_frame(S1, Sh, D.mask, cart, false);
    }

    const unsigned vec01 = OutM | OutC | (D.present ? unsigned(OutSV) : 0u);
    const unsigned sca01 = D.present ? unsigned(OutGS | OutAN | OutCAN) : 0u;
    const unsigned vec11 = OutM | OutC | (D.present ? unsigned(OutSV | OutD) : 0u);
    const unsigned sca11 = D.present ? unsigned(OutGS | OutAN | OutCAN | OutS | OutK) : 0u;

    const int n = sys.size();
    sys.A = MatC::Zero(n, n);
    auto put = [&](int i, int j, const MatC& blk, const std::string& terms) {
        if (!blk.allFinite())
            throw Error("assembly: non-finite entries in block (T" + std::to_string(i + 1) + ", " + terms + ")");
        sys.A.block(sys.off[i], sys.off[j], blk.rows(), blk.cols()) += blk;
        static const char* rows[5] = {"T1", "T2", "T3", "T4", "T5"};
        static const char* cols[5] = {"a", "b", "c", "d", "psi"};
        sys.blocks.push_back({rows[i], cols[j], terms});
    };
    auto P0 = [&](const MatC& x) { return real_times_complex(proj0, x); };
    auto T = [&](const UnknownSpace& u, const MatC& x) { return real_times_complex(u.test, x); };
    auto Id = [](int k, cplx s) { return MatC(s * MatC::Identity(k, k)); };

    {
        auto g = assemble_nodal(S0, S0, {k0, k1}, OutM | OutC, sys.n0, 0, q);
        NodalOps& a0 = g[0];
        NodalOps& a1 = g[1];
        put(0, 0, Id(sys.nb0, sys.diag[0]) + P0(lH * k0 / k1 * a0.M - lE * a1.M),
            "lambda_a I + (lambda_H k0/k1) M00(k0) - lambda_E M00(k1)");
        const MatC dC = P0(a0.C - a1.C);
        put(0, 1, lE * dC, "lambda_E (N00(k0) - N00(k1)) R");
        put(1, 0, lH / (I * k1) * dC, "lambda_H/(i k1) (N00(k0) - N00(k1)) R");
        put(1, 1, Id(sys.nb0, sys.diag[1]) + P0(lE * k0 / I * a0.M - lH * k1 / I * a1.M),
            "lambda_b I + (lambda_E k0/i) M00(k0) - (lambda_H k1/i) M00(k1)");
        sys.M00 = std::move(a0.M);
        sys.C00 = std::move(a0.C);
    }
    {
        NodalOps g = assemble_nodal(S0, S1, {k1}, vec01 | sca01, sys.n1, sys.n1, q)[0];
        const MatC X = P0(g.M);
        const MatC Y = P0(g.C);
        if (C.present) {
            put(0, 2, -lE * right(X, C) + I * lE / (k1 * k1) * complex_times_real(Y, sys.W1),
                "-lambda_E M01 + (i lambda_E/k1^2) N01 P Shat1^2");
            put(1, 2, -lH / (I * k1) * right(Y, C) + lH / k1 * complex_times_real(X, sys.W1),
                "-lambda_H/(i k1) N01 R + (lambda_H/k1) M01 R Shat1^2");
        }
        if (D.present) {
            put(0, 3, lE * right(P0(frame_R(g.SV)), D) + I * lam * lE * complex_times_real(X, sys.W2),
                "lambda_E R S01 + i lambda lambda_E M01 R Shat2^2");
            put(1, 3, I * lH / k1 * right(X, D) + lam * lH / k1 * complex_times_real(Y, sys.W2),
                "(i lambda_H/k1) M01 + (lambda lambda_H/k1) N01 P Shat2^2");
            put(0, 4, right(P0(-lE * g.GS + I * lam * lE * frame_R(g.AN)), P),
                "-lambda_E grad S01 + i lambda lambda_E R S01 nu");
            put(1, 4, right(P0(-lam * lH / k1 * g.CAN), P), "-(lambda lambda_H/k1) M01 nu");
        }
    }
    if (C.present || D.present) {
        NodalOps g = assemble_nodal(S1, S0, {k1}, OutM | OutC, sys.n0, 0, q)[0];
        if (C.present) {
            put(2, 0, T(C, g.M), "M10");
            put(2, 1, T(C, g.C), "N10 R");
        }
        if (D.present) {
            put(3, 0, T(D, g.C - I * lam * frame_R(g.M)), "N10 R - i lambda R M10");
            put(3, 1, T(D, k1 * k1 * g.M - I * lam * frame_R(g.C)), "k1^2 M10 - i lambda R N10 R");
        }
    }
    if (C.present || D.present) {
        NodalOps g = assemble_nodal(S1, S1, {k1}, vec11 | sca11, sys.n1, sys.n1, q)[0];
        if (C.present) {
            put(2, 2, Id(C.size, 1.0) + T(C, right(g.M, C) - I / (k1 * k1) * complex_times_real(g.C, sys.W1)),
                "I + M11 - (i/k1^2) N11 P Shat1^2");
        }
        if (D.present) {
            const MatC RM = frame_R(g.M);
            const MatC RC = frame_R(g.C);
            if (C.present) {
                put(2, 3, T(C, -right(frame_R(g.SV), D) - I * lam * complex_times_real(g.M, sys.W2)),
                    "-R S11 - i lambda M11 R Shat2^2");
                put(2, 4, T(C, right(g.GS - I * lam * frame_R(g.AN), P)), "grad S11 - i lambda R S11 nu");
                put(3, 2, T(D, right(g.C - I * lam * RM, C) +
                                   complex_times_real(-I * g.M - lam / (k1 * k1) * RC, sys.W1)),
                    "(N11 R - i lambda R M11) + (-i M11 - (lambda/k1^2) R N11 R) R Shat1^2");
            }
            MatC dd = right(g.M - I * lam * g.SV, D) +
                      complex_times_real(-I * lam * g.C - lam * lam * RM, sys.W2) +
                      lam * lam * PS2.cast<cplx>();
            put(3, 3, Id(D.size, 1.0) + T(D, dd),
                "I + M11 - i lambda S11 + (-i lambda N11 P - lambda^2 R M11) R Shat2^2 + lambda^2 P Shat2^2");
            put(3, 4, T(D, right(I * lam * (g.CAN - frame_R(g.GS)) + lam * lam * g.AN, P)),
                "i lambda (M11 nu - R grad S11) + lambda^2 S11 nu");
            put(4, 3, T(P, right(g.D, D)), "D11");
            put(4, 4, Id(P.size, sys.diag[4]) + T(P, right(k1 * k1 * g.S + I * lam * g.K, P)),
                "i lambda I + k1^2 S11 + i lambda K11");
        }
    }
    return sys;
}

VecC system_rhs(const BlockSystem& sys, const IncidentField& inc)
{
    const Scene& sc = sys.scene;
    const WaveNumbers& m = sc.media;
    const Surface& S1 = *sc.s1;
    VecC r = VecC::Zero(sys.size());
    const int up = sys.opt.rhs_upsample;
    r.segment(sys.off[0], sys.nb0) = 2.0 * vsh_project_function(*sc.s0, sys.n0, up, [&](const SurfPoint& p) {
        return interface_trace(m, inc, p.x, p.nu).T1;
    });
    r.segment(sys.off[1], sys.nb0) = 2.0 * vsh_project_function(*sc.s0, sys.n0, up, [&](const SurfPoint& p) {
        return interface_trace(m, inc, p.x, p.nu).T2;
    });
    const bool inner = inc.type == IncidentField::Type::Dipole && inc.layer == 1;
    if (!inner) return r;
    auto obstacle_row = [&](const UnknownSpace& u, int row, cplx s, bool t3) {
        if (!u.present) return;
        if (!u.nodal) {
            r.segment(sys.off[row], u.size) = s * vsh_project_function(S1, sys.n1, up, [&](const SurfPoint& p) {
                const TracePoint t = obstacle_trace(m, inc, p.x, p.nu);
                return t3 ? t.T3 : t.T4;
            });
            return;
        }
        for (std::size_t k = 0; k < u.nodes.size(); ++k) {
            const int i = u.nodes[k];
            const TracePoint t = obstacle_trace(m, inc, S1.x[i], S1.nu[i]);
            const CVec3 v = t3 ? t.T3 : t.T4;
            r[sys.off[row] + 2 * k] = s * to_c(S1.e1[i]).dot(v);
            r[sys.off[row] + 2 * k + 1] = s * to_c(S1.e2[i]).dot(v);
        }
    };
    obstacle_row(sys.c, 2, 2.0, true);
    obstacle_row(sys.d, 3, 2.0 * I * m.k1, false);
    return r;
}

VecC system_rhs(const BlockSystem& sys, const TraceData& t)
{
    const Surface& S0 = *sys.scene.s0;
    const Surface& S1 = *sys.scene.s1;
    if (static_cast<int>(t.T1.size()) != S0.size() || static_cast<int>(t.T2.size()) != S0.size())
        throw Error("system_rhs: interface trace size mismatch");
    VecC r = VecC::Zero(sys.size());
    const MatR proj0 = vsh_projector(S0, sys.n0);
    r.segment(sys.off[0], sys.nb0) = 2.0 * real_times_complex(proj0, vectors_to_frame(S0, t.T1));
    r.segment(sys.off[1], sys.nb0) = 2.0 * real_times_complex(proj0, vectors_to_frame(S0, t.T2));
    auto obstacle_row = [&](const UnknownSpace& u, int row, cplx s, const std::vector<CVec3>& T) {
        if (!u.present) return;
        if (static_cast<int>(T.size()) != S1.size()) throw Error("system_rhs: obstacle trace size mismatch");
        r.segment(sys.off[row], u.size) = s * real_times_complex(u.test, vectors_to_frame(S1, T));
    };
    obstacle_row(sys.c, 2, 2.0, t.T3);
    obstacle_row(sys.d, 3, 2.0 * I * sys.scene.media.k1, t.T4);
    return r;
}

DenseSolver::DenseSolver(const MatC& A, double cond_warn) : A_(A), lu_(A), warn_(cond_warn)
{
    const lapack_int n = static_cast<lapack_int>(A.rows());
    if (A.rows() != A.cols() || n == 0) throw Error("DenseSolver: matrix must be square and non-empty");
    const double anorm = A.cwiseAbs().colwise().sum().maxCoeff();
    piv_.resize(n);
    const lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, lu_.data(), n, piv_.data());
    if (info < 0) throw Error("DenseSolver: invalid argument to LU factorization");
    if (info > 0) {
        cond_ = std::numeric_limits<double>::infinity();
        return;
    }
    double rcond = 0.0;
    LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', n, lu_.data(), n, anorm, &rcond);
    cond_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
}

VecC DenseSolver::solve(const VecC& b, SolveDiagnostics* diag) const
{
    const lapack_int n = static_cast<lapack_int>(A_.rows());
    if (b.size() != n) throw Error("DenseSolver: right-hand side size mismatch");
    if (!std::isfinite(cond_)) throw Error("DenseSolver: matrix is singular");
    VecC x = b;
    LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, 1, lu_.data(), n, piv_.data(), x.data(), n);
    if (diag) {
        const double nb = b.norm();
        const double res = (A_ * x - b).norm();
        diag->residual = nb > 0.0 ? res / nb : res;
        diag->condition = cond_;
        diag->warning = cond_ > warn_;
        if (diag->warning) {
            std::ostringstream os;
            os << "condition estimate " << cond_ << " exceeds " << warn_;
            diag->message = os.str();
        }
    }
    return x;
}

double DensitySet::norm() const
{
    double s = a.squaredNorm() + b.squaredNorm() + c.squaredNorm() + d.squaredNorm() + psi.squaredNorm();
    return std::sqrt(s);
}

DensitySet unpack(const BlockSystem& sys, const VecC& x)
{
    if (x.size() != sys.size()) throw Error("unpack: solution size mismatch");
    const Surface& S0 = *sys.scene.s0;
    const Surface& S1 = *sys.scene.s1;
    DensitySet o;
    o.a = x.segment(sys.off[0], sys.nb0);
    o.b = x.segment(sys.off[1], sys.nb0);
    o.a_nodes = frame_to_vectors(S0, real_times_complex(sys.eval0, o.a));
    o.b_nodes = frame_to_vectors(S0, real_times_complex(sys.eval0, o.b));
    auto vec_nodes = [&](const UnknownSpace& u, const VecC& xu, const VecC& coef) {
        VecC f = VecC::Zero(2 * S1.size());
        if (u.nodal) {
            for (std::size_t k = 0; k < u.nodes.size(); ++k) f.segment<2>(2 * u.nodes[k]) = xu.segment<2>(2 * k);
        } else {
            f = real_times_complex(sys.eval1, coef);
        }
        return frame_to_vectors(S1, f);
    };
    const std::vector<CVec3> zero(S1.size(), CVec3::Zero());
    o.c_nodes = o.d_nodes = zero;
    o.psi_nodes.assign(S1.size(), 0.0);
    if (sys.c.present) {
        const VecC xc = x.segment(sys.off[2], sys.c.size);
        o.c = sys.c.nodal ? VecC(real_times_complex(sys.c.coef, xc)) : xc;
        o.w1 = real_times_complex(sys.W1, xc);
        o.c_nodes = vec_nodes(sys.c, xc, o.c);
    }
    if (sys.d.present) {
        const VecC xd = x.segment(sys.off[3], sys.d.size);
        o.d = sys.d.nodal ? VecC(real_times_complex(sys.d.coef, xd)) : xd;
        o.w2 = real_times_complex(sys.W2, xd);
        o.d_nodes = vec_nodes(sys.d, xd, o.d);
        const VecC xp = x.segment(sys.off[4], sys.psi.size);
        o.psi = sys.psi.nodal ? VecC(real_times_complex(sys.psi.coef, xp)) : xp;
        if (sys.psi.nodal) {
            for (std::size_t k = 0; k < sys.psi.nodes.size(); ++k) o.psi_nodes[sys.psi.nodes[k]] = xp[k];
        } else {
            const VecC v = real_times_complex(sys.sca1, o.psi);
            for (int i = 0; i < S1.size(); ++i) o.psi_nodes[i] = v[i];
        }
    }
    return o;
}

Solution::Solution(std::shared_ptr<const BlockSystem> sys, DensitySet dens, IncidentField inc, SolveDiagnostics diag)
    : sys_(std::move(sys)), dens_(std::move(dens)), inc_(inc), diag_(std::move(diag))
{
    const int f = sys_->opt.quad.eval_upsample;
    const Surface& S0 = *sys_->scene.s0;
    const Surface& S1 = *sys_->scene.s1;
    s0_.emplace_back(S0, SourceDensity{dens_.a, {}}, f);
    s0_.emplace_back(S0, SourceDensity{dens_.b, {}}, f);
    s1_.resize(5);
    if (dens_.c.size()) {
        s1_[0].emplace(S1, SourceDensity{dens_.c, {}}, f);
        s1_[1].emplace(S1, SourceDensity{dens_.w1, {}}, f);
    }
    if (dens_.d.size()) {
        s1_[2].emplace(S1, SourceDensity{dens_.d, {}}, f);
        s1_[3].emplace(S1, SourceDensity{dens_.w2, {}}, f);
        s1_[4].emplace(S1, SourceDensity{{}, dens_.psi}, f);
    }
}

double Solution::min_distance() const
{
    double h = s0_[0].spacing();
    for (const auto& s : s1_)
        if (s) h = std::max(h, s->spacing());
    return 3.0 * h;
}

void Solution::check_point(const Vec3& x, int region) const
{
    const Surface& S0 = *sys_->scene.s0;
    const Surface& S1 = *sys_->scene.s1;
    const double h0 = 3.0 * s0_[0].spacing();
    const bool outside0 = S0.level(x) > 0.0;
    if (region == 0 && !outside0) throw Error("evaluation point is not outside the interface");
    if (region == 1 && (outside0 || S1.level(x) <= 0.0)) throw Error("evaluation point is not in the layer");
    if (s0_[0].distance(x) < h0) throw Error("evaluation point is closer to the interface than the admissible distance");
    if (region == 1) {
        const SurfaceSampler& any = s1_[0] ? *s1_[0] : *s1_[2];
        if (any.distance(x) < 3.0 * any.spacing())
            throw Error("evaluation point is closer to the obstacle than the admissible distance");
    }
}

bool Solution::admissible(const Vec3& x, int region) const
{
    try {
        check_point(x, region);
        return true;
    } catch (const Error&) {
        return false;
    }
}

EH Solution::exterior(const Vec3& x) const
{
    check_point(x, 0);
    const WaveNumbers& m = sys_->scene.media;
    const cplx k0 = m.k0, k1 = m.k1;
    const PointPotentials pa = s0_[0].eval(k0, x);
    const PointPotentials pb = s0_[1].eval(k0, x);
    EH o;
    o.E = (m.lambda_H * k0 / k1) * pa.curlA + m.lambda_E * pb.ccA;
    o.H = (m.lambda_H / (I * k1)) * pa.ccA + (m.lambda_E * k0 / I) * pb.curlA;
    return o;
}

EH Solution::layer(const Vec3& x) const
{
    check_point(x, 1);
    const WaveNumbers& m = sys_->scene.media;
    const cplx k1 = m.k1;
    const cplx lam = m.lambda_imp;
    const PointPotentials pa = s0_[0].eval(k1, x);
    const PointPotentials pb = s0_[1].eval(k1, x);
    CVec3 F = pa.curlA + pb.ccA;
    CVec3 G = pa.ccA + k1 * k1 * pb.curlA;  // i k1 G
    if (s1_[0]) {
        const PointPotentials pc = s1_[0]->eval(k1, x);
        const PointPotentials pw = s1_[1]->eval(k1, x);
        F += pc.curlA - I / (k1 * k1) * pw.ccA;
        G += pc.ccA - I * pw.curlA;
    }
    if (s1_[2]) {
        const PointPotentials pd = s1_[2]->eval(k1, x);
        const PointPotentials pw = s1_[3]->eval(k1, x);
        const PointPotentials pp = s1_[4]->eval(k1, x);
        F += pd.A - I * lam * pw.curlA + pp.gradS + I * lam * pp.An;
        G += pd.curlA - I * lam * pw.ccA + I * lam * pp.curlAn;
    }
    EH o{F, G / (I * k1)};
    if (inc_.type == IncidentField::Type::Dipole && inc_.layer == 1) {
        const EH e = inc_.eval(m, x);
        o.E += e.E;
        o.H += e.H;
    }
    return o;
}

CVec3 Solution::far_field(const Vec3& xhat) const
{
    if (std::abs(xhat.norm() - 1.0) > 1e-12) throw Error("far field direction must be a unit vector");
    const WaveNumbers& m = sys_->scene.media;
    const cplx k0 = m.k0, k1 = m.k1;
    CVec3 Ia, Ib, unused;
    cplx s;
    s0_[0].far(k0, xhat, Ia, s, unused);
    s0_[1].far(k0, xhat, Ib, s, unused);
    const CVec3 xh = to_c(xhat);
    const CVec3 e = (m.lambda_H * k0 / k1) * I * k0 * cross(xh, Ia) + m.lambda_E * k0 * k0 * cross(cross(xh, Ib), xh);
    return e / (4.0 * pi);
}

void Solution::exterior_traces(VecC& nxE, VecC& nxH) const
{
    const BlockSystem& sys = *sys_;
    const WaveNumbers& m = sys.scene.media;
    const Surface& S0 = *sys.scene.s0;
    const cplx k0 = m.k0, k1 = m.k1;
    const VecC an = real_times_complex(sys.eval0, dens_.a);
    const VecC bn = real_times_complex(sys.eval0, dens_.b);
    const VecC Ma = sys.M00 * dens_.a, Mb = sys.M00 * dens_.b;
    const VecC Ca = sys.C00 * dens_.a, Cb = sys.C00 * dens_.b;
    nxE = 0.5 * ((m.lambda_H * k0 / k1) * (Ma + an) + m.lambda_E * Cb);
    nxH = 0.5 * ((m.lambda_H / (I * k1)) * Ca + (m.lambda_E * k0 / I) * (Mb + bn));
    const bool outside = !(inc_.type == IncidentField::Type::Dipole && inc_.layer == 1);
    if (!outside) return;
    for (int i = 0; i < S0.size(); ++i) {
        const EH e = inc_.eval(m, S0.x[i]);
        const CVec3 nu = to_c(S0.nu[i]);
        const CVec3 ne = cross(nu, e.E), nh = cross(nu, e.H);
        nxE[2 * i] += to_c(S0.e1[i]).dot(ne);
        nxE[2 * i + 1] += to_c(S0.e2[i]).dot(ne);
        nxH[2 * i] += to_c(S0.e1[i]).dot(nh);
        nxH[2 * i + 1] += to_c(S0.e2[i]).dot(nh);
    }
}

DirectSolver::DirectSolver(const Scene& scene, const SolverOptions& opt)
{
    auto sys = std::make_shared<BlockSystem>(assemble_system(scene, opt));
    lu_ = std::make_unique<DenseSolver>(sys->A, opt.cond_warn);
    sys_ = std::move(sys);
}

Solution DirectSolver::solve(const IncidentField& inc) const
{
    inc.check();
    check_incident(sys_->scene, inc);
    const VecC rhs = system_rhs(*sys_, inc);
    SolveDiagnostics diag;
    const VecC x = lu_->solve(rhs, &diag);
    return Solution(sys_, unpack(*sys_, x), inc, diag);
}

Solution solve_direct(const Scene& scene, const IncidentField& inc, const SolverOptions& opt)
{
    return DirectSolver(scene, opt).solve(inc);
}

EnergyValue energy_functional(const Solution& sol)
{
    const IncidentField& inc = sol.incident();
    if (inc.type == IncidentField::Type::Dipole && inc.layer == 1)
        throw Error("energy functional requires a source outside the interface");
    VecC e, h;
    sol.exterior_traces(e, h);
    const Surface& S0 = *sol.system().scene.s0;
    EnergyValue o;
    double ne = 0.0, nh = 0.0;
    for (int i = 0; i < S0.size(); ++i) {
        const double w = S0.ws[i];
        const cplx v = e[2 * i] * std::conj(h[2 * i + 1]) - e[2 * i + 1] * std::conj(h[2 * i]);
        o.value += w * v.real();
        ne += w * (std::norm(e[2 * i]) + std::norm(e[2 * i + 1]));
        nh += w * (std::norm(h[2 * i]) + std::norm(h[2 * i + 1]));
    }
    o.scale = std::sqrt(ne) * std::sqrt(nh);
    return o;
}

}  // namespace tlbie
