#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "tlbie/types.hpp"

namespace tlbie {

/// Electric far field on a Gauss-Legendre x trapezoid grid of the unit sphere.
/// Direction (i, j) is stored at i * n_phi + j, theta ascending from the north pole.
struct FarFieldPattern {
    int n_theta = 0, n_phi = 0;
    std::vector<double> theta, phi, w;
    std::vector<Vec3> dirs;
    std::vector<CVec3> values;
    // metadata
    std::string scene_hash;
    std::string incidence;
    int order = 0;

    std::size_t size() const { return dirs.size(); }
};

/// Grid only (values zero).
FarFieldPattern farfield_grid(int n_theta = 24, int n_phi = 48);

/// Grid filled by evaluating f at every direction.
FarFieldPattern sample_pattern(const std::function<CVec3(const Vec3&)>& f, int n_theta = 24, int n_phi = 48);

/// Weighted relative L2 distance ||a - b|| / ||b||; throws on grid mismatch.
double farfield_distance(const FarFieldPattern& a, const FarFieldPattern& b);

/// Weighted L2 norm on the sphere.
double farfield_norm(const FarFieldPattern& a);

/// max |xhat . E| / max ||E|| over the grid.
double farfield_tangentiality(const FarFieldPattern& a);

/// CSV with '#' metadata lines and columns theta, phi, ReEx, ImEx, ReEy, ImEy, ReEz, ImEz.
/// Values are written with 17 significant digits so a read reproduces them exactly.
void write_farfield_csv(const FarFieldPattern& p, std::ostream& os);
FarFieldPattern read_farfield_csv(std::istream& is);

/// Stable short hash of a text (FNV-1a, hex).
std::string text_hash(const std::string& s);

}  // namespace tlbie
