#pragma once

#include <vector>

#include "tlbie/geometry.hpp"
#include "tlbie/spaces.hpp"

namespace tlbie {

struct QuadratureOptions {
    int polar_order = 0;     // polar nodes of the singular rule; 0 uses n_theta of the source
    int upsample = 2;        // refinement of the smooth rule between distinct surfaces
    int eval_upsample = 3;   // refinement of the smooth rule for off-surface evaluation
    bool fast_path = true;   // reuse ring symmetry of axisymmetric surfaces
};

/// Boundary outputs requested from an assembly. Vector outputs act on the tangential
/// basis, scalar outputs on the scalar basis; the factor 2 of the boundary operators
/// is included.
enum Output : unsigned {
    OutM = 1u << 0,    // 2 nu x curl A[a]                      (frame)
    OutC = 1u << 1,    // 2 nu x curl curl A[a] (Maue form)      (frame)
    OutSV = 1u << 2,   // 2 A[a], tangential part                (frame)
    OutD = 1u << 3,    // -2 int grad_x Phi . a                  (scalar)
    OutGS = 1u << 4,   // 2 nu x grad S[psi]                     (frame)
    OutAN = 1u << 5,   // 2 A[nu psi], tangential part           (frame)
    OutCAN = 1u << 6,  // 2 nu x curl A[nu psi]                  (frame)
    OutS = 1u << 7,    // 2 S[psi]                               (scalar)
    OutK = 1u << 8,    // 2 int dPhi/dnu(y) psi                  (scalar)
};
inline constexpr unsigned vector_outputs = OutM | OutC | OutSV | OutD;
inline constexpr unsigned scalar_outputs = OutGS | OutAN | OutCAN | OutS | OutK;

/// Direct values of the boundary integrals at the target nodes (principal values
/// where the kernel is strongly singular); jump terms are not included.
struct NodalOps {
    MatC M, C, SV, D;        // vector sources: frame outputs 2Nt x nb, D is Nt x nb
    MatC GS, AN, CAN, S, K;  // scalar sources: frame outputs 2Nt x ns, S and K are Nt x ns
};

/// Assemble the requested outputs at the nodes of target for densities on source, for
/// each wave number in ks (k = 0 is the Laplace kernel). If target and source are the
/// same object the singular rule is used.
std::vector<NodalOps> assemble_nodal(const Surface& target, const Surface& source,
                                     const std::vector<cplx>& ks, unsigned outputs,
                                     int vec_degree, int sca_degree,
                                     const QuadratureOptions& opt = {});

/// Operator acting on nodal frame data of the source (2Nt x 2Ns): the nodal output
/// composed with the projection onto the source basis.
MatC operator_matrix(Output op, const Surface& target, const Surface& source, cplx k,
                     const QuadratureOptions& opt = {});

/// Laplace single layer (1/(2 pi)) int_patch f / |x - z| ds as a nodal matrix on s,
/// restricted to the patch given by a 0/1 indicator.
MatR shat_matrix(const Surface& s, const std::vector<double>& indicator,
                 const QuadratureOptions& opt = {});

/// Shat applied twice to each Cartesian component of a vector field on the patch.
std::vector<CVec3> apply_shat_squared(const Surface& s, const std::vector<double>& indicator,
                                      const std::vector<CVec3>& c, const QuadratureOptions& opt = {});

/// Densities on one surface, given by basis coefficients, for off-surface evaluation.
struct SourceDensity {
    VecC vec;  // tangential basis coefficients (may be empty)
    VecC sca;  // scalar basis coefficients (may be empty)
};

/// Potentials of a density at one point.
struct PointPotentials {
    CVec3 A = CVec3::Zero();        // int Phi a
    CVec3 curlA = CVec3::Zero();    // curl int Phi a
    CVec3 ccA = CVec3::Zero();      // curl curl int Phi a
    CVec3 gradS = CVec3::Zero();    // grad int Phi psi
    CVec3 An = CVec3::Zero();       // int Phi nu psi
    CVec3 curlAn = CVec3::Zero();   // curl int Phi nu psi
    cplx S = 0.0;                   // int Phi psi
};

/// Off-surface evaluator: samples densities on a refined rule of the source surface.
class SurfaceSampler {
public:
    SurfaceSampler(const Surface& s, const SourceDensity& dens, int factor);
    PointPotentials eval(cplx k, const Vec3& x) const;
    /// int exp(-i k xhat . y) a ds and the same for psi and nu psi.
    void far(cplx k, const Vec3& xhat, CVec3& Ia, cplx& Ipsi, CVec3& Inupsi) const;
    /// Smallest distance from x to the sampled points.
    double distance(const Vec3& x) const;
    double spacing() const { return spacing_; }

private:
    std::vector<Vec3> y_;
    std::vector<CVec3> a_;      // weighted Dq u
    std::vector<cplx> diva_;    // weighted surface divergence
    std::vector<cplx> psi_;     // weighted J psi
    std::vector<CVec3> npsi_;   // weighted J nu psi
    double spacing_ = 0.0;
};

}  // namespace tlbie
