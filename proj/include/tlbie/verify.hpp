#pragma once

#include <string>
#include <vector>

#include "tlbie/checks.hpp"
#include "tlbie/scene_io.hpp"

namespace tlbie {

/// Names of the checks run by run_verification, in report order.
const std::vector<std::string>& verification_check_names();

struct VerifyOptions {
    Tolerances tol;
    std::vector<std::string> only;  // empty runs every applicable check
    int probes = 3;                 // reciprocity probe points per region
};

/// Identity suite on one scene. Checks that do not apply to the scene (for instance
/// the oracle for non-spherical geometry) are left out of the report.
VerificationReport run_verification(const SceneFile& file, const VerifyOptions& opt = {});

/// One row of a convergence table.
struct ConvergenceRow {
    int order = 0;
    int unknowns = 0;
    double reciprocity_exterior = 0.0;
    double reciprocity_layer = 0.0;
    double oracle_distance = -1.0;  // negative when no oracle applies
    double tangentiality = 0.0;
    double condition = 0.0;
    double seconds = 0.0;
};

std::vector<ConvergenceRow> convergence_study(const SceneFile& file, const std::vector<int>& orders, int probes = 3);

/// Plane wave of the scene file, or d = e_z, q = e_x if the file has none (or a dipole).
IncidentField reference_plane_wave(const SceneFile& file);

}  // namespace tlbie
