#include "tlbie/scene.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tlbie {

Partition Partition::cap(const Surface& s1, double theta_star)
{
    if (!(theta_star >= 0.0 && theta_star <= pi)) throw Error("partition: theta_star must lie in [0, pi]");
    Partition p;
    p.theta_star = theta_star;
    p.labels.resize(s1.size());
    for (int i = 0; i < s1.size(); ++i) p.labels[i] = polar_angle(s1.yhat[i]) < theta_star ? 1 : 2;
    return p;
}

bool Partition::all_pec() const
{
    return std::all_of(labels.begin(), labels.end(), [](int l) { return l == 1; });
}

bool Partition::all_impedance() const
{
    return std::all_of(labels.begin(), labels.end(), [](int l) { return l == 2; });
}

std::vector<int> Partition::nodes(int label) const
{
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(labels.size()); ++i)
        if (labels[i] == label) out.push_back(i);
    return out;
}

Scene make_scene(const WaveNumbers& media, SurfacePtr s0, SurfacePtr s1, double theta_star)
{
    Scene sc;
    sc.media = media;
    sc.s0 = std::move(s0);
    sc.s1 = std::move(s1);
    sc.partition = Partition::cap(*sc.s1, theta_star);
    return sc;
}

SceneDiagnostics validate_scene(const Scene& scene)
{
    SceneDiagnostics d;
    if (!scene.s0 || !scene.s1) {
        d.violations.push_back("both surfaces must be present");
        return d;
    }
    const Surface& s0 = *scene.s0;
    const Surface& s1 = *scene.s1;

    double worst = -1e300;
    for (const auto& x : s1.x) worst = std::max(worst, s0.level(x));
    for (const auto& x : s0.x) worst = std::max(worst, -s1.level(x));
    d.nesting_margin = -worst;
    d.nested = worst < 0.0;
    if (!d.nested) d.violations.push_back("obstacle is not strictly inside the interface");

    d.unassigned = 0;
    if (static_cast<int>(scene.partition.labels.size()) != s1.size()) {
        d.unassigned = s1.size();
        d.violations.push_back("partition does not match the obstacle node count");
    } else {
        for (int l : scene.partition.labels)
            if (l != 1 && l != 2) ++d.unassigned;
        if (d.unassigned > 0)
            d.violations.push_back(std::to_string(d.unassigned) + " obstacle nodes carry no boundary label");
    }
    d.covered = d.unassigned == 0;

    double sep = 1e300;
    for (const auto& a : s0.x)
        for (const auto& b : s1.x) sep = std::min(sep, (a - b).norm());
    d.min_separation = sep;

    d.identity_residual = scene.media.identity_residual();
    d.interface_contrast = scene.media.interface_contrast();
    try {
        check_wavenumbers(scene.media);
    } catch (const Error& e) {
        d.violations.push_back(e.what());
    }
    return d;
}

void require_valid(const Scene& scene)
{
    const SceneDiagnostics d = validate_scene(scene);
    if (d.ok()) return;
    std::ostringstream err;
    err << "invalid scene:";
    for (const auto& v : d.violations) err << "\n  - " << v;
    throw Error(err.str());
}

}  // namespace tlbie
