#include "tlbie/harmonics.hpp"

#include <algorithm>
#include <cmath>

namespace tlbie {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w)
{
    if (n < 1) throw Error("gauss_legendre: need at least one node");
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (z * p1 - p0) / (z * z - 1.0);
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

SphereRule product_rule(int n_theta, int n_phi)
{
    std::vector<double> x, w;
    gauss_legendre(n_theta, x, w);
    SphereRule r;
    r.yhat.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    r.w.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i) {
        const double z = x[n_theta - 1 - i];
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        for (int j = 0; j < n_phi; ++j) {
            const double ph = 2.0 * pi * j / n_phi;
            r.yhat.emplace_back(s * std::cos(ph), s * std::sin(ph), z);
            r.w.push_back(w[n_theta - 1 - i] * 2.0 * pi / n_phi);
        }
    }
    return r;
}

Mat3 pole_rotation(const Vec3& p)
{
    const Vec3 u = p.normalized();
    const double th = std::acos(std::clamp(u.z(), -1.0, 1.0));
    const double ph = std::atan2(u.y(), u.x());
    Mat3 rz, ry;
    rz << std::cos(ph), -std::sin(ph), 0, std::sin(ph), std::cos(ph), 0, 0, 0, 1;
    ry << std::cos(th), 0, std::sin(th), 0, 1, 0, -std::sin(th), 0, std::cos(th);
    return rz * ry;
}

SphereRule polar_rule(const Vec3& p, int n_polar, int n_azimuth)
{
    if (n_azimuth % 2 != 0) throw Error("polar_rule: azimuth count must be even");
    std::vector<double> x, w;
    gauss_legendre(n_polar, x, w);
    const Mat3 T = pole_rotation(p);
    SphereRule r;
    r.yhat.reserve(static_cast<std::size_t>(n_polar) * n_azimuth);
    r.w.reserve(static_cast<std::size_t>(n_polar) * n_azimuth);
    for (int i = 0; i < n_polar; ++i) {
        const double th = 0.5 * pi * (x[i] + 1.0);
        const double wt = 0.5 * pi * w[i] * std::sin(th) * 2.0 * pi / n_azimuth;
        for (int j = 0; j < n_azimuth; ++j) {
            const double ph = 2.0 * pi * j / n_azimuth;
            const Vec3 loc(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
            r.yhat.push_back(T * loc);
            r.w.push_back(wt);
        }
    }
    return r;
}

ShTable::ShTable(int L) : L_(L)
{
    if (L < 0) throw Error("ShTable: negative degree");
    const int np = (L + 1) * (L + 2) / 2;
    a_.assign(np, 0.0);
    b_.assign(np, 0.0);
    d_.assign(np, 0.0);
    mm_.assign(L + 2, 0.0);
    for (int m = 1; m <= L + 1; ++m) mm_[m] = std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    for (int m = 0; m <= L; ++m) {
        for (int l = m + 2; l <= L; ++l) {
            const double l2 = double(l) * l, m2 = double(m) * m;
            a_[packed(l, m)] = std::sqrt((4.0 * l2 - 1.0) / (l2 - m2));
            b_[packed(l, m)] = std::sqrt(((l - 1.0) * (l - 1.0) - m2) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
        }
        for (int l = std::max(m, 1); l <= L; ++l)
            d_[packed(l, m)] = std::sqrt((2.0 * l + 1.0) * (double(l) * l - double(m) * m) / (2.0 * l - 1.0));
    }
}

void ShTable::eval(const Vec3& u, double* Y, Vec3* grad) const
{
    const int L = L_;
    const double z = std::clamp(u.z(), -1.0, 1.0);
    const double s = std::hypot(u.x(), u.y());
    double cp = 1.0, sp = 0.0;
    if (s > 1e-300) {
        cp = u.x() / s;
        sp = u.y() / s;
    }
    const Vec3 et(z * cp, z * sp, -s);
    const Vec3 ep(-sp, cp, 0.0);

    thread_local std::vector<double> P, Q;
    const int np = (L + 2) * (L + 3) / 2;
    if (static_cast<int>(P.size()) < np) {
        P.resize(np);
        Q.resize(np);
    }
    // column by column in m; Q = P / sin(theta) for m >= 1
    double pmm = 1.0 / std::sqrt(4.0 * pi);
    double qmm = 0.0;
    for (int m = 0; m <= L; ++m) {
        if (m == 1) {
            qmm = mm_[1] / std::sqrt(4.0 * pi);
            pmm = qmm * s;
        } else if (m > 1) {
            qmm *= mm_[m] * s;
            pmm *= mm_[m] * s;
        }
        P[packed(m, m)] = pmm;
        Q[packed(m, m)] = qmm;
        if (m + 1 <= L) {
            const double f = std::sqrt(2.0 * m + 3.0) * z;
            P[packed(m + 1, m)] = f * pmm;
            Q[packed(m + 1, m)] = f * qmm;
        }
        for (int l = m + 2; l <= L; ++l) {
            const int k = packed(l, m);
            P[k] = a_[k] * (z * P[packed(l - 1, m)] - b_[k] * P[packed(l - 2, m)]);
            Q[k] = a_[k] * (z * Q[packed(l - 1, m)] - b_[k] * Q[packed(l - 2, m)]);
        }
    }

    const double r2 = std::sqrt(2.0);
    double cm = 1.0, sm = 0.0;
    for (int m = 0; m <= L; ++m) {
        if (m > 0) {
            const double c2 = cm * cp - sm * sp;
            sm = sm * cp + cm * sp;
            cm = c2;
        }
        for (int l = m; l <= L; ++l) {
            const int k = packed(l, m);
            if (m == 0) {
                Y[sh_index(l, 0)] = P[k];
                if (grad) {
                    const double dth = l >= 1 ? -std::sqrt(double(l) * (l + 1)) * P[packed(l, 1)] : 0.0;
                    grad[sh_index(l, 0)] = dth * et;
                }
            } else {
                Y[sh_index(l, m)] = r2 * P[k] * cm;
                Y[sh_index(l, -m)] = r2 * P[k] * sm;
                if (grad) {
                    const double dth = l * z * Q[k] - (l > m ? d_[k] * Q[packed(l - 1, m)] : 0.0);
                    const double qm = m * Q[k];
                    grad[sh_index(l, m)] = r2 * (dth * cm * et - qm * sm * ep);
                    grad[sh_index(l, -m)] = r2 * (dth * sm * et + qm * cm * ep);
                }
            }
        }
    }
}

void ShTable::eval_vsh(const Vec3& u, Vec3* V, double* div, double* Y, Vec3* grad) const
{
    eval(u, Y, grad);
    const Vec3 un = u.normalized();
    for (int l = 1; l <= L_; ++l) {
        const double nl = std::sqrt(double(l) * (l + 1));
        for (int m = -l; m <= l; ++m) {
            const int idx = sh_index(l, m);
            const int v = 2 * (idx - 1);
            V[v] = grad[idx] / nl;
            V[v + 1] = un.cross(grad[idx]) / nl;
            if (div) {
                div[v] = -nl * Y[idx];
                div[v + 1] = 0.0;
            }
        }
    }
}

}  // namespace tlbie
