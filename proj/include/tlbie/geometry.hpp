#pragma once

#include <memory>
#include <vector>

#include "tlbie/harmonics.hpp"
#include "tlbie/types.hpp"

namespace tlbie {

enum class SurfaceKind { Sphere, Ellipsoid, Perturbed };

/// One real spherical-harmonic term of a radial perturbation, on the orthonormal
/// real basis (m > 0 cosine, m < 0 sine).
struct ShCoefficient {
    int l = 0;
    int m = 0;
    double value = 0.0;
};

struct SurfaceDescriptor {
    SurfaceKind kind = SurfaceKind::Sphere;
    Vec3 center = Vec3::Zero();
    double radius = 1.0;                   // sphere and perturbed sphere
    Vec3 semi_axes = Vec3::Ones();         // ellipsoid
    std::vector<ShCoefficient> perturbation;  // r = radius (1 + sum c Y_lm)
    Mat3 rotation = Mat3::Identity();      // applied about the center
    int n_theta = 16;
    int n_phi = 32;
};

/// Geometric data of the parametrization at one parameter point yhat on S^2.
/// Tangential densities are carried as a = (1/J) Dq u with u tangent to S^2, so that
/// a ds = Dq u dyhat and Div a = (1/J) Div_{S^2} u.
struct SurfPoint {
    Vec3 x;      // point on the surface
    Vec3 nu;     // outward unit normal
    double J;    // area element ds / dyhat
    Mat3 Dq;     // differential, applied to vectors tangent to S^2 at yhat
    Mat3 pull;   // inverse of Dq on surface tangent vectors (annihilates nu)
};

/// Smooth closed star-shaped surface with Gauss-Legendre x trapezoid nodes.
class Surface {
public:
    explicit Surface(const SurfaceDescriptor& d);

    const SurfaceDescriptor& descriptor() const { return desc_; }
    SurfPoint at(const Vec3& yhat) const;

    int n_theta() const { return desc_.n_theta; }
    int n_phi() const { return desc_.n_phi; }
    int size() const { return static_cast<int>(yhat.size()); }
    /// Harmonic degree of the density spaces on this surface.
    int degree() const { return desc_.n_theta - 2; }

    double area() const;
    /// Negative inside, positive outside; zero on the surface.
    double level(const Vec3& x) const;
    /// Largest node spacing of a product rule of the given order on this surface.
    double mesh_spacing(int n_theta, int n_phi) const;
    /// True if the surface is invariant under rotations about its own axis (rotation
    /// times e_z through the center) and its parametrization commutes with them.
    bool axisymmetric() const;

    // node data (node i = ring * n_phi + j)
    std::vector<Vec3> yhat;
    std::vector<double> w;   // S^2 weights
    std::vector<double> ws;  // surface weights w * J
    std::vector<Vec3> x, nu, e1, e2;
    std::vector<double> J;
    std::vector<Mat3> Dq, pull;

private:
    SurfaceDescriptor desc_;
    std::shared_ptr<ShTable> pert_table_;
    std::vector<double> pert_coef_;
    double radial(const Vec3& yhat, Vec3* grad) const;
};

using SurfacePtr = std::shared_ptr<const Surface>;

/// True if both surfaces are axisymmetric about one common axis, so that rotating
/// the parameter sphere about e_z moves both by the same rigid motion.
bool share_axis(const Surface& a, const Surface& b);

/// Validates the descriptor and builds the surface; throws Error on degenerate input.
SurfacePtr make_surface(const SurfaceDescriptor& d);

/// The same surface rotated by Q about the origin. Weights are unchanged.
SurfacePtr rotate_surface(const Surface& s, const Mat3& Q);

/// Throws unless Q is orthogonal with determinant one to 1e-12.
void check_rotation(const Mat3& Q);

/// Surface divergence of a tangential field given by Cartesian values at the nodes,
/// computed spectrally through the parameter sphere.
std::vector<cplx> surface_divergence(const Surface& s, const std::vector<CVec3>& f);

/// Tangential frame at a parameter point: e1 along Dq e_theta, e2 = nu x e1.
void tangent_frame(const SurfPoint& p, const Vec3& yhat, Vec3& e1, Vec3& e2);

}  // namespace tlbie
