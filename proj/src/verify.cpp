#include "tlbie/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace tlbie {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

bool homogeneous_pec(const Scene& s)
{
    const WaveNumbers& m = s.media;
    return std::abs(m.k0 - m.k1) < 1e-14 * std::abs(m.k0) && std::abs(m.lambda_E - 1.0) < 1e-14 &&
           std::abs(m.lambda_H - 1.0) < 1e-14 && s.partition.all_pec();
}

std::string sci(double v)
{
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

// Seeded probes of one region; empty if the region has no admissible points.
std::vector<Vec3> probes_or_none(const Solution& sol, int region, int count, std::uint64_t seed)
{
    try {
        return probe_points(sol, region, count, seed + region);
    } catch (const Error&) {
        return {};
    }
}

// Largest reciprocity residual over the points; negative if there are none.
double reciprocity_max(const DirectSolver& solver, const Solution& plane, const std::vector<Vec3>& zs)
{
    if (zs.empty()) return -1.0;
    const CVec3 p(0.3, cplx(0.0, 0.5), 1.0);
    double worst = 0.0;
    for (const Vec3& z : zs) worst = std::max(worst, mixed_reciprocity(solver, plane, z, p).residual);
    return worst;
}

}  // namespace

const std::vector<std::string>& verification_check_names()
{
    static const std::vector<std::string> names = {
        "solve_residual", "uniqueness", "linearity", "reciprocity_exterior", "reciprocity_layer",
        "energy", "radiation_ratio", "silver_muller", "tangentiality", "oracle_farfield",
        "oracle_equivariance", "equivariance", "homogeneous_crosscheck",
    };
    return names;
}

IncidentField reference_plane_wave(const SceneFile& file)
{
    if (file.incident && file.incident->type == IncidentField::Type::Plane) return *file.incident;
    return IncidentField::plane(Vec3(0, 0, 1), CVec3(1, 0, 0));
}

VerificationReport run_verification(const SceneFile& file, const VerifyOptions& opt)
{
    for (const std::string& n : opt.only)
        if (std::find(verification_check_names().begin(), verification_check_names().end(), n) ==
            verification_check_names().end())
            throw Error("unknown check '" + n + "'");
    auto wanted = [&](const std::string& n) {
        return opt.only.empty() || std::find(opt.only.begin(), opt.only.end(), n) != opt.only.end();
    };
    const Tolerances& tol = opt.tol;
    const Scene& scene = file.scene;
    const int order = scene.s0->n_theta();
    VerificationReport rep;
    rep.scene = file.name.empty() ? file.hash : file.name;
    rep.order = order;
    rep.seed = file.seed;
    auto add = [&](const std::string& name, double value, double tolerance, bool pass, double t,
                   const std::string& note = "") {
        rep.checks.push_back({name, value, tolerance, pass, t, order, note});
    };
    auto le = [](double v, double t) { return std::isfinite(v) && v <= t; };

    auto t0 = Clock::now();
    const DirectSolver solver(scene, file.solver);
    const IncidentField inc = reference_plane_wave(file);
    const Solution sol = solver.solve(inc);
    const double t_solve = seconds_since(t0);

    if (wanted("solve_residual")) {
        const SolveDiagnostics& d = sol.diagnostics();
        add("solve_residual", d.residual, tol.solve_residual, le(d.residual, tol.solve_residual), t_solve,
            "condition " + sci(d.condition) + (d.warning ? "; " + d.message : ""));
    }
    if (wanted("uniqueness")) {
        t0 = Clock::now();
        TraceData zero;
        zero.T1.assign(scene.s0->size(), CVec3::Zero());
        zero.T2 = zero.T1;
        zero.T3.assign(scene.s1->size(), CVec3::Zero());
        zero.T4 = zero.T3;
        const double n = unpack(solver.system(), solver.solve(system_rhs(solver.system(), zero))).norm();
        add("uniqueness", n, tol.uniqueness, le(n, tol.uniqueness), seconds_since(t0), "density norm for zero traces");
    }
    if (wanted("linearity")) {
        t0 = Clock::now();
        const VecC x1 = solver.solve(system_rhs(solver.system(), inc));
        const VecC x2 = solver.solve(system_rhs(solver.system(), inc.scaled(2.0)));
        const double r = (x2 - 2.0 * x1).norm() / (2.0 * x1.norm());
        add("linearity", r, tol.linearity, le(r, tol.linearity), seconds_since(t0), "doubling the incident field");
    }
    for (int region : {0, 1}) {
        const std::string name = region == 0 ? "reciprocity_exterior" : "reciprocity_layer";
        if (!wanted(name)) continue;
        t0 = Clock::now();
        const double r = reciprocity_max(solver, sol, probes_or_none(sol, region, opt.probes, file.seed));
        if (r < 0.0) continue;
        add(name, r, tol.reciprocity, le(r, tol.reciprocity), seconds_since(t0),
            "largest of " + std::to_string(opt.probes) + " seeded probes");
    }
    if (wanted("energy")) {
        t0 = Clock::now();
        const EnergyValue e = energy_functional(sol);
        const double v = e.normalized();
        add("energy", std::max(v, 0.0), tol.energy, le(v, tol.energy), seconds_since(t0),
            "normalized Re int nu x E . conj(H) = " + sci(v));
    }
    if (wanted("radiation_ratio") || wanted("silver_muller")) {
        t0 = Clock::now();
        const double D = scene_diameter(scene);
        const RadiationResult r = check_radiation_asymptotics(sol, Vec3(0.6, 0.0, 0.8), {50 * D, 100 * D, 200 * D});
        const double t = seconds_since(t0);
        if (wanted("radiation_ratio")) {
            double dev = 0.0;
            for (double x : r.ratios) dev = std::max(dev, std::abs(x - 0.5));
            const double half = 0.5 * (tol.radiation_ratio_max - tol.radiation_ratio_min);
            bool ok = true;
            for (double x : r.ratios) ok = ok && x >= tol.radiation_ratio_min && x <= tol.radiation_ratio_max;
            add("radiation_ratio", dev, half, ok, t,
                "|e_2r/e_r - 0.5| over r = 50, 100, 200 diameters; e_r at 50 diameters " + sci(r.errors[0]));
        }
        if (wanted("silver_muller")) {
            double worst = 0.0;
            for (std::size_t i = 1; i < r.silver_muller.size(); ++i)
                worst = std::max(worst, r.silver_muller[i] / r.silver_muller[i - 1]);
            add("silver_muller", worst, tol.radiation_ratio_max, le(worst, tol.radiation_ratio_max), t,
                "decay ratio of the Silver-Mueller residual; at 200 diameters " + sci(r.silver_muller.back()));
        }
    }
    const FarFieldPattern pattern = sample_pattern([&](const Vec3& x) { return sol.far_field(x); });
    if (wanted("tangentiality")) {
        const double t = farfield_tangentiality(pattern);
        add("tangentiality", t, tol.tangentiality, le(t, tol.tangentiality), 0.0);
    }
    const std::optional<MieScene> mie = mie_scene_of(scene);
    if (mie && wanted("oracle_farfield")) {
        t0 = Clock::now();
        const MieSolution ms = mie_solve(*mie, inc);
        const double d = farfield_distance(pattern, sample_pattern([&](const Vec3& x) { return mie_far_field(ms, x); }));
        add("oracle_farfield", d, tol.oracle_farfield, le(d, tol.oracle_farfield), seconds_since(t0),
            "series degree " + std::to_string(ms.L));
    }
    if (mie && wanted("oracle_equivariance")) {
        t0 = Clock::now();
        const double r = oracle_equivariance(*mie, random_rotation(file.seed), inc.d, inc.q);
        add("oracle_equivariance", r, tol.oracle_equivariance, le(r, tol.oracle_equivariance), seconds_since(t0));
    }
    if (concentric_spheres(scene) && wanted("equivariance")) {
        t0 = Clock::now();
        const Mat3 Q = random_rotation(file.seed);
        const Solution rot = solve_direct(rotate_scene(scene, Q), IncidentField::plane(Q * inc.d, Q.cast<cplx>() * inc.q),
                                          file.solver);
        const double r = equivariance_residual([&](const Vec3& x) { return sol.far_field(x); },
                                               [&](const Vec3& x) { return rot.far_field(x); }, Q);
        add("equivariance", r, tol.equivariance, le(r, tol.equivariance), seconds_since(t0));
    }
    if (homogeneous_pec(scene) && wanted("homogeneous_crosscheck")) {
        t0 = Clock::now();
        const SingleSurfacePec single(scene.s1, scene.media.k0, file.solver.quad);
        const double d = farfield_distance(pattern, sample_pattern(single.solve(inc.d, inc.q)));
        add("homogeneous_crosscheck", d, tol.homogeneous_crosscheck, le(d, tol.homogeneous_crosscheck),
            seconds_since(t0), "two-layer solver against the obstacle-only solver");
    }
    return rep;
}

std::vector<ConvergenceRow> convergence_study(const SceneFile& file, const std::vector<int>& orders, int probes)
{
    std::vector<ConvergenceRow> rows;
    const IncidentField inc = reference_plane_wave(file);
    const std::optional<MieScene> mie = mie_scene_of(file.scene);
    std::optional<FarFieldPattern> reference;
    if (mie) {
        const MieSolution ms = mie_solve(*mie, inc);
        reference = sample_pattern([&](const Vec3& x) { return mie_far_field(ms, x); });
    }
    std::vector<int> sorted = orders;
    std::sort(sorted.begin(), sorted.end());
    // probes drawn at the coarsest order stay admissible at the finer ones
    std::optional<std::vector<Vec3>> z0, z1;
    for (int n : sorted) {
        const auto t0 = Clock::now();
        ConvergenceRow r;
        r.order = n;
        const Scene sc = with_order(file.scene, n);
        const DirectSolver solver(sc, file.solver);
        const Solution sol = solver.solve(inc);
        r.unknowns = solver.system().size();
        r.condition = solver.condition();
        if (!z0) {
            z0 = probes_or_none(sol, 0, probes, file.seed);
            z1 = probes_or_none(sol, 1, probes, file.seed);
        }
        r.reciprocity_exterior = reciprocity_max(solver, sol, *z0);
        r.reciprocity_layer = reciprocity_max(solver, sol, *z1);
        const FarFieldPattern p = sample_pattern([&](const Vec3& x) { return sol.far_field(x); });
        r.tangentiality = farfield_tangentiality(p);
        if (reference) r.oracle_distance = farfield_distance(p, *reference);
        r.seconds = seconds_since(t0);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace tlbie
