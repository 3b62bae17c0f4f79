#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tlbie/bie.hpp"
#include "tlbie/farfield.hpp"
#include "tlbie/mie.hpp"

namespace tlbie {

/// Seeded points in region 0 (outside the interface, up to twice its radius) or
/// region 1 (the layer), all at an admissible distance from the surfaces.
std::vector<Vec3> probe_points(const Solution& sol, int region, int count, std::uint64_t seed);

/// Mixed reciprocity for a plane wave (d, q) and a dipole (z, p):
///   z outside the interface: 4 pi q . E_inf(-d; z, p) = p . E^s(z; d, q)
///   z in the layer:          4 pi q . E_inf(-d; z, p) = lambda_E lambda_H p . F(z; d, q)
/// Dot products are bilinear.
struct ReciprocityResult {
    Vec3 z = Vec3::Zero();
    int region = 0;
    cplx lhs = 0.0, rhs = 0.0;
    double residual = 0.0;  // |lhs - rhs| / max(|lhs|, |rhs|)
};

/// Reuses the factorization of solver; plane is its plane-wave solution.
ReciprocityResult mixed_reciprocity(const DirectSolver& solver, const Solution& plane, const Vec3& z, const CVec3& p);
ReciprocityResult check_mixed_reciprocity(const Scene& scene, const Vec3& d, const CVec3& q, const Vec3& z,
                                          const CVec3& p, const SolverOptions& opt = {});

/// Largest distance between two interface nodes.
double scene_diameter(const Scene& scene);

/// e_r = || r exp(-i k0 r) E^s(r xhat) - E_inf(xhat) || at each radius, the ratios
/// e_{2r} / e_r, and the Silver-Mueller residual || H^s x xhat - E^s || / ||E^s||.
struct RadiationResult {
    std::vector<double> radii, errors, ratios, silver_muller;
    double far_norm = 0.0;
};
/// Radii must double from one entry to the next and be at least 10 scene diameters.
RadiationResult check_radiation_asymptotics(const Solution& sol, const Vec3& xhat, const std::vector<double>& radii);

/// max over the grid of || g(Q xhat) - Q f(xhat) || / max || f ||, where f is the pattern
/// of the original problem and g that of the rotated one.
double equivariance_residual(const std::function<CVec3(const Vec3&)>& f, const std::function<CVec3(const Vec3&)>& g,
                             const Mat3& Q, int n_theta = 24, int n_phi = 48);

/// The scene rotated by Q about the origin, partition labels carried along.
Scene rotate_scene(const Scene& scene, const Mat3& Q);

/// True for two spheres centered at the origin.
bool concentric_spheres(const Scene& scene);

/// Two solves: the scene with (d, q) and the rotated scene with (Q d, Q q).
double check_rotation_equivariance(const Scene& scene, const Mat3& Q, const Vec3& d, const CVec3& q,
                                   int n_theta = 24, int n_phi = 48, const SolverOptions& opt = {});
double oracle_equivariance(const MieScene& scene, const Mat3& Q, const Vec3& d, const CVec3& q, int n_theta = 24,
                           int n_phi = 48);

/// Rotation drawn from a seeded generator (uniform axis, angle in (0, pi)).
Mat3 random_rotation(std::uint64_t seed);

/// Mie scene of two concentric spheres at the origin with a fully conducting or fully
/// impedance obstacle; nothing for other scenes.
std::optional<MieScene> mie_scene_of(const Scene& scene);

/// PEC obstacle alone in a medium of wave number k:
///   c + M c - (i/k^2) C R Shat^2 c = -2 nu x E^i,
/// far field of curl A[c] - (i/k^2) curl curl A[R Shat^2 c].
class SingleSurfacePec {
public:
    SingleSurfacePec(SurfacePtr s, cplx k, const QuadratureOptions& opt = {});
    /// Far field for a plane wave.
    std::function<CVec3(const Vec3&)> solve(const Vec3& d, const CVec3& q) const;

private:
    SurfacePtr s_;
    cplx k_;
    QuadratureOptions opt_;
    MatC A_;
    MatR W_;
};

/// One line of a verification report.
struct CheckRecord {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double runtime = 0.0;  // seconds
    int order = 0;
    std::string note;
};

struct VerificationReport {
    std::string scene;
    int order = 0;
    std::uint64_t seed = 0;
    std::vector<CheckRecord> checks;

    bool passed() const;
    /// JSON text with a fixed field order.
    std::string to_json() const;
};

/// Tolerances of the verification suite.
struct Tolerances {
    double oracle_farfield = 1e-3;
    double reciprocity = 1e-4;
    double reciprocity_refinement = 4.0;
    double energy = 1e-8;
    double uniqueness = 1e-10;
    double linearity = 1e-12;
    double solve_residual = 1e-10;
    double radiation_ratio_min = 0.3;
    double radiation_ratio_max = 0.7;
    double tangentiality = 1e-10;
    double equivariance = 1e-4;
    double oracle_equivariance = 1e-10;
    double discrimination_factor = 10.0;
    double homogeneous_crosscheck = 1e-6;
    double single_layer_constant = 1e-8;
    double rr_identity = 1e-12;
    double operator_difference = 1e-12;
};

/// Reads a JSON manifest of tolerances; unknown keys are rejected.
Tolerances load_tolerances(const std::string& path);

}  // namespace tlbie
