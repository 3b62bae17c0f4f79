#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "tlbie/geometry.hpp"
#include "tlbie/media.hpp"

namespace tlbie {

/// Assignment of obstacle nodes to the conducting part (label 1) and the impedance
/// part (label 2). Built from a polar-angle threshold in the obstacle parametrization:
/// nodes with theta < theta_star are conducting, so theta_star = pi is fully
/// conducting and theta_star = 0 fully impedance.
struct Partition {
    double theta_star = pi;
    std::vector<int> labels;  // per obstacle node; 0 means unassigned

    static Partition cap(const Surface& s1, double theta_star);
    bool all_pec() const;
    bool all_impedance() const;
    bool mixed() const { return !all_pec() && !all_impedance(); }
    std::vector<int> nodes(int label) const;
};

struct Scene {
    WaveNumbers media;
    SurfacePtr s0;  // interface
    SurfacePtr s1;  // obstacle boundary
    Partition partition;
};

/// Build a scene with a cap partition on the obstacle.
Scene make_scene(const WaveNumbers& media, SurfacePtr s0, SurfacePtr s1, double theta_star);

struct SceneDiagnostics {
    bool nested = false;
    double nesting_margin = 0.0;  // smallest interface level value over obstacle nodes, negated
    bool covered = false;
    int unassigned = 0;
    double min_separation = 0.0;
    double identity_residual = 0.0;
    double interface_contrast = 0.0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

SceneDiagnostics validate_scene(const Scene& scene);

/// Throws Error listing every violated invariant.
void require_valid(const Scene& scene);

/// Polar angle of a parameter point.
inline double polar_angle(const Vec3& yhat) { return std::acos(std::clamp(yhat.normalized().z(), -1.0, 1.0)); }

}  // namespace tlbie
