#pragma once

#include <vector>

#include "tlbie/types.hpp"

namespace tlbie {

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

/// Points on the unit sphere with weights for the surface measure.
struct SphereRule {
    std::vector<Vec3> yhat;
    std::vector<double> w;
    std::size_t size() const { return yhat.size(); }
};

/// Gauss-Legendre in cos(theta) times trapezoid in phi. Node (i, j) is stored at
/// i * n_phi + j with theta ascending from the north pole and phi_j = 2 pi j / n_phi.
SphereRule product_rule(int n_theta, int n_phi);

/// Product rule in polar coordinates around the pole p: Gauss-Legendre in the polar
/// angle over (0, pi) and an even trapezoid in the azimuth. The measure sin(theta)
/// is folded into the weights, so the rule integrates kernels with a 1/|y - p|
/// singularity at p to spectral accuracy, and symmetric azimuth pairs cancel the
/// odd part of Cauchy-type kernels.
SphereRule polar_rule(const Vec3& p, int n_polar, int n_azimuth);

/// Rotation mapping the north pole to p: Rz(phi_p) * Ry(theta_p).
Mat3 pole_rotation(const Vec3& p);

inline int sh_count(int L) { return (L + 1) * (L + 1); }
/// Real harmonics are indexed l^2 + l + m; m > 0 is cos(m phi), m < 0 is sin(|m| phi).
inline int sh_index(int l, int m) { return l * l + l + m; }
/// Tangential vector harmonics (l >= 1): index 2 (sh_index - 1) + type,
/// type 0 = Grad Y / sqrt(l(l+1)), type 1 = yhat x Grad Y / sqrt(l(l+1)).
inline int vsh_count(int L) { return 2 * (sh_count(L) - 1); }

/// Precomputed recurrence coefficients for orthonormal real spherical harmonics.
class ShTable {
public:
    explicit ShTable(int L);
    int degree() const { return L_; }

    /// Y[idx] for all l <= L at the unit vector u; grad (optional) receives the
    /// Cartesian surface gradient.
    void eval(const Vec3& u, double* Y, Vec3* grad) const;

    /// Tangential harmonics V[vidx] and their surface divergence at u.
    void eval_vsh(const Vec3& u, Vec3* V, double* div, double* Y_work, Vec3* grad_work) const;

private:
    int L_;
    std::vector<double> a_, b_, d_;  // three-term and derivative coefficients, packed (l, m)
    std::vector<double> mm_;         // diagonal seed factors
    int packed(int l, int m) const { return l * (l + 1) / 2 + m; }
};

/// l of a real harmonic index.
inline int sh_degree(int idx)
{
    int l = 0;
    while ((l + 1) * (l + 1) <= idx) ++l;
    return l;
}

}  // namespace tlbie
