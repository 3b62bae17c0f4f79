#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tlbie/bie.hpp"

namespace tlbie {

/// Contents of a scene file (JSON). Schema in README.md; unknown keys are rejected.
struct SceneFile {
    std::string name;
    Scene scene;
    std::optional<IncidentField> incident;
    SolverOptions solver;
    std::uint64_t seed = 1;
    std::string hash;  // hash of the file text
};

SceneFile parse_scene(const std::string& text, const std::string& source = "<string>");
SceneFile load_scene(const std::string& path);

/// Incident block on its own, e.g. {"type": "plane", "d": [0, 0, 1], "q": [1, 0, 0]}.
IncidentField parse_incident(const std::string& text);

/// Short text form of an incident field for metadata.
std::string describe(const IncidentField& inc);

/// The scene with both surfaces rebuilt at n_theta x 2 n_theta nodes and the partition
/// recomputed from its threshold.
Scene with_order(const Scene& scene, int n_theta);

}  // namespace tlbie
