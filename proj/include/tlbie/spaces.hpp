#pragma once

#include <functional>

#include "tlbie/geometry.hpp"

namespace tlbie {

// Tangential densities are expanded as a = sum_j alpha_j (1/J) Dq V_j with V_j the
// tangential harmonics of degree <= L on the parameter sphere; scalar densities as
// psi = sum_j beta_j Y_j. Nodal tangential data are stored as frame components,
// row 2 i + c holding the component along e1 (c = 0) or e2 (c = 1) at node i.

/// Frame components at the nodes of the vector basis functions (2N x nb).
MatR vsh_frame_eval(const Surface& s, int L);
/// Cartesian components at the nodes (3N x nb), row 3 i + c.
MatR vsh_cart_eval(const Surface& s, int L);
/// Projection of nodal frame data onto the vector basis (nb x 2N); a left inverse
/// of vsh_frame_eval.
MatR vsh_projector(const Surface& s, int L);
/// Projection of a Cartesian tangential field sampled on a finer product rule.
VecC vsh_project_function(const Surface& s, int L, int factor,
                          const std::function<CVec3(const SurfPoint&)>& f);

/// Scalar basis at the nodes (N x ns) and its projector (ns x N).
MatR sh_eval(const Surface& s, int L);
MatR sh_projector(const Surface& s, int L);

/// Frame components (2N x 3N) of the tangential part of Cartesian nodal vectors.
MatR frame_from_cart(const Surface& s);
/// Cartesian vectors (3N x 2N) from frame components.
MatR cart_from_frame(const Surface& s);

/// R a = a x nu applied to every column of frame data: (t1, t2) -> (t2, -t1).
/// P is the identity on frame data.
template <class M>
M frame_R(const M& m)
{
    M out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows() / 2; ++i) {
        out.row(2 * i) = m.row(2 * i + 1);
        out.row(2 * i + 1) = -m.row(2 * i);
    }
    return out;
}
/// nu x a on frame data: (t1, t2) -> (-t2, t1).
template <class M>
M frame_ncross(const M& m)
{
    return -frame_R(m);
}

/// Frame data to Cartesian tangential vectors at the nodes.
std::vector<CVec3> frame_to_vectors(const Surface& s, const VecC& f);
VecC vectors_to_frame(const Surface& s, const std::vector<CVec3>& v);

}  // namespace tlbie
