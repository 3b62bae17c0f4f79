#include "tlbie/spaces.hpp"

namespace tlbie {

namespace {

struct VshWork {
    explicit VshWork(int L) : table(L), V(vsh_count(L)), div(vsh_count(L)), Y(sh_count(L)), G(sh_count(L)) {}
    void at(const Vec3& u) { table.eval_vsh(u, V.data(), div.data(), Y.data(), G.data()); }
    ShTable table;
    std::vector<Vec3> V;
    std::vector<double> div, Y;
    std::vector<Vec3> G;
};

}  // namespace

MatR vsh_frame_eval(const Surface& s, int L)
{
    const int nb = vsh_count(L);
    MatR out(2 * s.size(), nb);
    VshWork wk(L);
    for (int i = 0; i < s.size(); ++i) {
        wk.at(s.yhat[i]);
        for (int j = 0; j < nb; ++j) {
            const Vec3 a = s.Dq[i] * wk.V[j] / s.J[i];
            out(2 * i, j) = a.dot(s.e1[i]);
            out(2 * i + 1, j) = a.dot(s.e2[i]);
        }
    }
    return out;
}

MatR vsh_cart_eval(const Surface& s, int L)
{
    const int nb = vsh_count(L);
    MatR out(3 * s.size(), nb);
    VshWork wk(L);
    for (int i = 0; i < s.size(); ++i) {
        wk.at(s.yhat[i]);
        for (int j = 0; j < nb; ++j) out.block<3, 1>(3 * i, j) = s.Dq[i] * wk.V[j] / s.J[i];
    }
    return out;
}

MatR vsh_projector(const Surface& s, int L)
{
    const int nb = vsh_count(L);
    MatR out(nb, 2 * s.size());
    VshWork wk(L);
    for (int i = 0; i < s.size(); ++i) {
        wk.at(s.yhat[i]);
        const Vec3 u1 = s.w[i] * s.J[i] * (s.pull[i] * s.e1[i]);
        const Vec3 u2 = s.w[i] * s.J[i] * (s.pull[i] * s.e2[i]);
        for (int j = 0; j < nb; ++j) {
            out(j, 2 * i) = wk.V[j].dot(u1);
            out(j, 2 * i + 1) = wk.V[j].dot(u2);
        }
    }
    return out;
}

VecC vsh_project_function(const Surface& s, int L, int factor,
                          const std::function<CVec3(const SurfPoint&)>& f)
{
    const int nb = vsh_count(L);
    const SphereRule r = product_rule(factor * s.n_theta(), factor * s.n_phi());
    VecC out = VecC::Zero(nb);
    VshWork wk(L);
    for (std::size_t i = 0; i < r.size(); ++i) {
        const SurfPoint p = s.at(r.yhat[i]);
        const CVec3 u = (r.w[i] * p.J) * (p.pull.cast<cplx>() * f(p));
        wk.at(r.yhat[i]);
        for (int j = 0; j < nb; ++j) out[j] += wk.V[j].x() * u.x() + wk.V[j].y() * u.y() + wk.V[j].z() * u.z();
    }
    return out;
}

MatR sh_eval(const Surface& s, int L)
{
    const int ns = sh_count(L);
    MatR out(s.size(), ns);
    ShTable t(L);
    std::vector<double> Y(ns);
    for (int i = 0; i < s.size(); ++i) {
        t.eval(s.yhat[i], Y.data(), nullptr);
        for (int j = 0; j < ns; ++j) out(i, j) = Y[j];
    }
    return out;
}

MatR sh_projector(const Surface& s, int L)
{
    const int ns = sh_count(L);
    MatR out(ns, s.size());
    ShTable t(L);
    std::vector<double> Y(ns);
    for (int i = 0; i < s.size(); ++i) {
        t.eval(s.yhat[i], Y.data(), nullptr);
        for (int j = 0; j < ns; ++j) out(j, i) = s.w[i] * Y[j];
    }
    return out;
}

MatR frame_from_cart(const Surface& s)
{
    MatR out = MatR::Zero(2 * s.size(), 3 * s.size());
    for (int i = 0; i < s.size(); ++i) {
        out.block<1, 3>(2 * i, 3 * i) = s.e1[i].transpose();
        out.block<1, 3>(2 * i + 1, 3 * i) = s.e2[i].transpose();
    }
    return out;
}

MatR cart_from_frame(const Surface& s)
{
    MatR out = MatR::Zero(3 * s.size(), 2 * s.size());
    for (int i = 0; i < s.size(); ++i) {
        out.block<3, 1>(3 * i, 2 * i) = s.e1[i];
        out.block<3, 1>(3 * i, 2 * i + 1) = s.e2[i];
    }
    return out;
}

std::vector<CVec3> frame_to_vectors(const Surface& s, const VecC& f)
{
    std::vector<CVec3> out(s.size());
    for (int i = 0; i < s.size(); ++i) out[i] = f[2 * i] * to_c(s.e1[i]) + f[2 * i + 1] * to_c(s.e2[i]);
    return out;
}

VecC vectors_to_frame(const Surface& s, const std::vector<CVec3>& v)
{
    VecC out(2 * s.size());
    for (int i = 0; i < s.size(); ++i) {
        out[2 * i] = to_c(s.e1[i]).dot(v[i]);
        out[2 * i + 1] = to_c(s.e2[i]).dot(v[i]);
    }
    return out;
}

}  // namespace tlbie
