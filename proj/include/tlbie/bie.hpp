#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tlbie/fields.hpp"
#include "tlbie/potentials.hpp"
#include "tlbie/scene.hpp"

namespace tlbie {

struct SolverOptions {
    QuadratureOptions quad;
    int rhs_upsample = 2;      // refinement of the rule projecting the incident traces
    double cond_warn = 1e12;   // condition estimate above which a warning is raised
};

/// Discrete space of one unknown on the obstacle. Spectral spaces use basis
/// coefficients on the whole obstacle; nodal spaces use frame components (or scalar
/// values) at the nodes of one part of the partition.
struct UnknownSpace {
    bool present = false;
    bool nodal = false;
    int size = 0;
    std::vector<int> nodes;      // obstacle nodes of the part (nodal spaces)
    std::vector<double> mask;    // 0/1 indicator of the part on all obstacle nodes
    MatR coef;                   // unknowns -> basis coefficients of the density
    MatR test;                   // nodal outputs on the obstacle -> equation rows
};

/// One block of the 5 x 5 operator matrix and the operators that fill it.
struct BlockInfo {
    std::string row, col, terms;
};

/// The assembled system with its bookkeeping.
struct BlockSystem {
    Scene scene;
    SolverOptions opt;
    int n0 = 0, n1 = 0;          // harmonic degrees on the interface and the obstacle
    int nb0 = 0, nb1 = 0, ns1 = 0;
    UnknownSpace c, d, psi;
    MatR W1, W2;                 // unknowns -> coefficients of R Shat_j^2 of the density
    // offsets of a, b, c, d, psi in the unknown vector
    int off[6] = {0, 0, 0, 0, 0, 0};
    MatC A;
    cplx diag[5];                // lambda_a, lambda_b, 1, 1, i lambda
    std::vector<BlockInfo> blocks;
    // interface outputs kept for surface traces of the exterior field (k0)
    MatC M00, C00;
    MatR eval0;                  // frame values of the interface basis at its nodes
    MatR eval1;                  // frame values of the obstacle basis at its nodes
    MatR sca1;                   // scalar obstacle basis at its nodes

    int size() const { return off[5]; }
    int block_rows(int i) const { return off[i + 1] - off[i]; }
    /// Block (i, j) of A (0-based, order a, b, c, d, psi).
    MatC block(int i, int j) const { return A.block(off[i], off[j], block_rows(i), block_rows(j)); }
};

BlockSystem assemble_system(const Scene& scene, const SolverOptions& opt = {});

/// Right-hand side (2T1, 2T2, 2T3, 2 i k1 T4, 0) for an incident field, projected on a
/// refined rule where the rows are spectral.
VecC system_rhs(const BlockSystem& sys, const IncidentField& inc);
/// Right-hand side from nodal trace data.
VecC system_rhs(const BlockSystem& sys, const TraceData& t);

struct SolveDiagnostics {
    double residual = 0.0;     // ||A x - b|| / ||b||
    double condition = 0.0;    // 1-norm condition estimate
    bool warning = false;      // condition above the warning threshold
    std::string message;
};

/// Dense LU factorization reused across right-hand sides.
class DenseSolver {
public:
    explicit DenseSolver(const MatC& A, double cond_warn = 1e12);
    VecC solve(const VecC& b, SolveDiagnostics* diag = nullptr) const;
    double condition() const { return cond_; }

private:
    MatC A_, lu_;
    std::vector<int> piv_;
    double cond_ = 0.0;
    double warn_;
};

/// Solved densities. Coefficient vectors are on the bases of their surfaces; nodal
/// samples are Cartesian values at the nodes (zero outside the part of the partition).
struct DensitySet {
    VecC a, b;              // interface coefficients
    VecC c, d, psi;         // obstacle coefficients (empty if the part is absent)
    VecC w1, w2;            // coefficients of R Shat^2 c and R Shat^2 d
    std::vector<CVec3> a_nodes, b_nodes, c_nodes, d_nodes;
    std::vector<cplx> psi_nodes;
    double norm() const;
};

DensitySet unpack(const BlockSystem& sys, const VecC& x);

/// Fields of a solved problem.
class Solution {
public:
    Solution(std::shared_ptr<const BlockSystem> sys, DensitySet dens, IncidentField inc, SolveDiagnostics diag);

    const DensitySet& densities() const { return dens_; }
    const SolveDiagnostics& diagnostics() const { return diag_; }
    const BlockSystem& system() const { return *sys_; }
    const IncidentField& incident() const { return inc_; }

    /// Scattered (E, H) outside the interface.
    EH exterior(const Vec3& x) const;
    /// (F, G) in the layer; for a dipole in the layer the incident field is added.
    EH layer(const Vec3& x) const;
    /// Electric far field pattern.
    CVec3 far_field(const Vec3& xhat) const;
    /// Closest admissible distance to the surfaces (three sample spacings).
    double min_distance() const;
    /// True if x lies in the region (0: outside the interface, 1: in the layer) at an
    /// admissible distance from the surfaces.
    bool admissible(const Vec3& x, int region) const;

    /// Tangential traces nu x E, nu x H of the total exterior field at the interface
    /// nodes (frame components).
    void exterior_traces(VecC& nxE, VecC& nxH) const;

private:
    std::shared_ptr<const BlockSystem> sys_;
    DensitySet dens_;
    IncidentField inc_;
    SolveDiagnostics diag_;
    std::vector<SurfaceSampler> s0_;                  // a, b
    std::vector<std::optional<SurfaceSampler>> s1_;   // c, w1, d, w2, psi
    void check_point(const Vec3& x, int region) const;
};

/// Convenience: assemble, factor, solve and wire the evaluators.
class DirectSolver {
public:
    explicit DirectSolver(const Scene& scene, const SolverOptions& opt = {});
    Solution solve(const IncidentField& inc) const;
    /// Unknown vector for an arbitrary right-hand side.
    VecC solve(const VecC& rhs, SolveDiagnostics* diag = nullptr) const { return lu_->solve(rhs, diag); }
    const BlockSystem& system() const { return *sys_; }
    double condition() const { return lu_->condition(); }

private:
    std::shared_ptr<const BlockSystem> sys_;
    std::unique_ptr<DenseSolver> lu_;
};

Solution solve_direct(const Scene& scene, const IncidentField& inc, const SolverOptions& opt = {});

/// Re int nu x E . conj(H) ds over the interface for the total exterior field, and the
/// normalization ||nu x E|| ||nu x H|| (surface L2 norms). Requires an incident field
/// with its source outside the interface.
struct EnergyValue {
    double value = 0.0;
    double scale = 0.0;
    double normalized() const { return scale > 0.0 ? value / scale : 0.0; }
};
EnergyValue energy_functional(const Solution& sol);

}  // namespace tlbie
