#include "tlbie/checks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <utility>

#include <Eigen/Geometry>
#include <json.hpp>

namespace tlbie {

namespace {

cplx bdot(const CVec3& a, const CVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 node_centroid(const Surface& s)
{
    Vec3 c = Vec3::Zero();
    for (const Vec3& x : s.x) c += x;
    return c / s.size();
}

}  // namespace

std::vector<Vec3> probe_points(const Solution& sol, int region, int count, std::uint64_t seed)
{
    if (region != 0 && region != 1) throw Error("probe_points: region must be 0 or 1");
    const Surface& S0 = *sol.system().scene.s0;
    const Vec3 c = node_centroid(S0);
    double R = 0.0;
    for (const Vec3& x : S0.x) R = std::max(R, (x - c).norm());
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Vec3> out;
    for (int tries = 0; static_cast<int>(out.size()) < count; ++tries) {
        if (tries > 100000) throw Error("probe_points: no admissible points found in the region");
        Vec3 u(normal(gen), normal(gen), normal(gen));
        if (u.norm() < 1e-12) continue;
        u.normalize();
        const double r = region == 0 ? R * (1.0 + unif(gen)) : R * std::cbrt(unif(gen));
        const Vec3 x = c + r * u;
        if (sol.admissible(x, region)) out.push_back(x);
    }
    return out;
}

ReciprocityResult mixed_reciprocity(const DirectSolver& solver, const Solution& plane, const Vec3& z, const CVec3& p)
{
    const IncidentField& pw = plane.incident();
    if (pw.type != IncidentField::Type::Plane) throw Error("reciprocity: the reference solution must be a plane wave");
    const Scene& sc = solver.system().scene;
    ReciprocityResult r;
    r.z = z;
    r.region = sc.s0->level(z) > 0.0 ? 0 : 1;
    if (!plane.admissible(z, r.region))
        throw Error("reciprocity: dipole point is not at an admissible distance inside a region");
    const Solution dip = solver.solve(IncidentField::dipole(z, p, r.region));
    r.lhs = 4.0 * pi * bdot(pw.q, dip.far_field(-pw.d));
    if (r.region == 0) {
        r.rhs = bdot(p, plane.exterior(z).E);
    } else {
        const WaveNumbers& m = sc.media;
        r.rhs = m.lambda_E * m.lambda_H * bdot(p, plane.layer(z).E);
    }
    const double s = std::max(std::abs(r.lhs), std::abs(r.rhs));
    r.residual = s > 0.0 ? std::abs(r.lhs - r.rhs) / s : 0.0;
    return r;
}

ReciprocityResult check_mixed_reciprocity(const Scene& scene, const Vec3& d, const CVec3& q, const Vec3& z,
                                          const CVec3& p, const SolverOptions& opt)
{
    const DirectSolver solver(scene, opt);
    const Solution plane = solver.solve(IncidentField::plane(d, q));
    return mixed_reciprocity(solver, plane, z, p);
}

double scene_diameter(const Scene& scene)
{
    const Surface& s = *scene.s0;
    double d = 0.0;
    for (int i = 0; i < s.size(); ++i)
        for (int j = i + 1; j < s.size(); ++j) d = std::max(d, (s.x[i] - s.x[j]).squaredNorm());
    return std::sqrt(d);
}

RadiationResult check_radiation_asymptotics(const Solution& sol, const Vec3& xhat, const std::vector<double>& radii)
{
    if (std::abs(xhat.norm() - 1.0) > 1e-12) throw Error("radiation: direction must be a unit vector");
    if (radii.empty()) throw Error("radiation: no radii given");
    const double diam = scene_diameter(sol.system().scene);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < 10.0 * diam) throw Error("radiation: radii too small (below 10 scene diameters)");
        if (i > 0 && std::abs(radii[i] - 2.0 * radii[i - 1]) > 1e-12 * radii[i])
            throw Error("radiation: radii must double from one entry to the next");
    }
    const cplx k0 = sol.system().scene.media.k0;
    const CVec3 far = sol.far_field(xhat);
    const CVec3 xh = to_c(xhat);
    RadiationResult o;
    o.radii = radii;
    o.far_norm = far.norm();
    for (double r : radii) {
        const EH f = sol.exterior(r * xhat);
        o.errors.push_back((r * std::exp(-I * k0 * r) * f.E - far).norm());
        const double en = f.E.norm();
        o.silver_muller.push_back(en > 0.0 ? (cross(f.H, xh) - f.E).norm() / en : 0.0);
    }
    for (std::size_t i = 1; i < o.errors.size(); ++i)
        o.ratios.push_back(o.errors[i - 1] > 0.0 ? o.errors[i] / o.errors[i - 1] : 0.0);
    return o;
}

double equivariance_residual(const std::function<CVec3(const Vec3&)>& f, const std::function<CVec3(const Vec3&)>& g,
                             const Mat3& Q, int n_theta, int n_phi)
{
    check_rotation(Q);
    const FarFieldPattern grid = farfield_grid(n_theta, n_phi);
    const Eigen::Matrix3cd Qc = Q.cast<cplx>();
    double num = 0.0, den = 0.0;
    for (const Vec3& x : grid.dirs) {
        const CVec3 fx = f(x);
        num = std::max(num, (g(Q * x) - Qc * fx).norm());
        den = std::max(den, fx.norm());
    }
    return den > 0.0 ? num / den : num;
}

Scene rotate_scene(const Scene& scene, const Mat3& Q)
{
    Scene r = scene;
    r.s0 = rotate_surface(*scene.s0, Q);
    r.s1 = rotate_surface(*scene.s1, Q);
    return r;
}

bool concentric_spheres(const Scene& scene)
{
    for (const SurfacePtr& s : {scene.s0, scene.s1}) {
        const SurfaceDescriptor& d = s->descriptor();
        if (d.kind != SurfaceKind::Sphere || d.center.norm() > 1e-12) return false;
    }
    return true;
}

double check_rotation_equivariance(const Scene& scene, const Mat3& Q, const Vec3& d, const CVec3& q, int n_theta,
                                   int n_phi, const SolverOptions& opt)
{
    if (!concentric_spheres(scene)) throw Error("equivariance: the scene must be two spheres centered at the origin");
    check_rotation(Q);
    const Solution a = solve_direct(scene, IncidentField::plane(d, q), opt);
    const Solution b = solve_direct(rotate_scene(scene, Q), IncidentField::plane(Q * d, Q.cast<cplx>() * q), opt);
    return equivariance_residual([&](const Vec3& x) { return a.far_field(x); },
                                 [&](const Vec3& x) { return b.far_field(x); }, Q, n_theta, n_phi);
}

double oracle_equivariance(const MieScene& scene, const Mat3& Q, const Vec3& d, const CVec3& q, int n_theta, int n_phi)
{
    check_rotation(Q);
    const MieSolution a = mie_solve(scene, IncidentField::plane(d, q));
    const MieSolution b = mie_solve(scene, IncidentField::plane(Q * d, Q.cast<cplx>() * q));
    return equivariance_residual([&](const Vec3& x) { return mie_far_field(a, x); },
                                 [&](const Vec3& x) { return mie_far_field(b, x); }, Q, n_theta, n_phi);
}

Mat3 random_rotation(std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vec3 axis;
    do {
        axis = Vec3(normal(gen), normal(gen), normal(gen));
    } while (axis.norm() < 1e-6);
    const double angle = pi * (0.05 + 0.9 * unif(gen));
    return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

std::optional<MieScene> mie_scene_of(const Scene& scene)
{
    if (!concentric_spheres(scene)) return std::nullopt;
    if (!scene.partition.all_pec() && !scene.partition.all_impedance()) return std::nullopt;
    MieScene m;
    m.r0 = scene.s0->descriptor().radius;
    m.r1 = scene.s1->descriptor().radius;
    m.media = scene.media;
    m.core = scene.partition.all_pec() ? MieScene::Core::PEC : MieScene::Core::Impedance;
    m.lambda = scene.media.lambda_imp;
    return m;
}

SingleSurfacePec::SingleSurfacePec(SurfacePtr s, cplx k, const QuadratureOptions& opt)
    : s_(std::move(s)), k_(k), opt_(opt)
{
    const Surface& S = *s_;
    const int L = S.degree();
    const int N = S.size();
    const MatR proj = vsh_projector(S, L);
    const std::vector<NodalOps> ops = assemble_nodal(S, S, {k}, OutM | OutC, L, L, opt);

    // R Shat^2 of each basis function, component by component
    const MatR Sh = shat_matrix(S, std::vector<double>(N, 1.0), opt);
    const MatR Sh2 = Sh * Sh;
    const MatR cart = vsh_cart_eval(S, L);
    const Eigen::Index nb = cart.cols();
    MatR comp[3];
    for (int c = 0; c < 3; ++c) {
        MatR x(N, nb);
        for (int i = 0; i < N; ++i) x.row(i) = cart.row(3 * i + c);
        comp[c] = Sh2 * x;
    }
    MatR rot(2 * N, nb);
    for (int i = 0; i < N; ++i) {
        const auto v1 = S.e1[i].x() * comp[0].row(i) + S.e1[i].y() * comp[1].row(i) + S.e1[i].z() * comp[2].row(i);
        const auto v2 = S.e2[i].x() * comp[0].row(i) + S.e2[i].y() * comp[1].row(i) + S.e2[i].z() * comp[2].row(i);
        rot.row(2 * i) = v2;  // (t1, t2) x nu = (t2, -t1)
        rot.row(2 * i + 1) = -v1;
    }
    W_ = proj * rot;
    const MatC op = ops[0].M - (I / (k * k)) * complex_times_real(ops[0].C, W_);
    A_ = MatC::Identity(nb, nb) + real_times_complex(proj, op);
}

std::function<CVec3(const Vec3&)> SingleSurfacePec::solve(const Vec3& d, const CVec3& q) const
{
    const Surface& S = *s_;
    WaveNumbers m;
    m.k0 = m.k1 = k_;
    const IncidentField inc = IncidentField::plane(d, q);
    inc.check();
    const VecC rhs = vsh_project_function(S, S.degree(), 2, [&](const SurfPoint& p) {
        return CVec3(-2.0 * cross(to_c(p.nu), inc.eval(m, p.x).E));
    });
    const VecC c = A_.partialPivLu().solve(rhs);
    const VecC w = W_ * c;
    auto sc = std::make_shared<SurfaceSampler>(S, SourceDensity{c, {}}, opt_.eval_upsample);
    auto sw = std::make_shared<SurfaceSampler>(S, SourceDensity{w, {}}, opt_.eval_upsample);
    const cplx k = k_;
    return [sc, sw, k](const Vec3& xhat) {
        CVec3 Ic, Iw, unused;
        cplx s;
        sc->far(k, xhat, Ic, s, unused);
        sw->far(k, xhat, Iw, s, unused);
        const CVec3 xh = to_c(xhat);
        return CVec3((I * k * cross(xh, Ic) - I * cross(cross(xh, Iw), xh)) / (4.0 * pi));
    };
}

bool VerificationReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

std::string VerificationReport::to_json() const
{
    using nlohmann::ordered_json;
    auto num = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
    ordered_json j;
    j["scene"] = scene;
    j["order"] = order;
    j["seed"] = seed;
    j["passed"] = passed();
    j["checks"] = ordered_json::array();
    for (const CheckRecord& c : checks) {
        ordered_json e;
        e["name"] = c.name;
        e["value"] = num(c.value);
        e["tolerance"] = num(c.tolerance);
        e["pass"] = c.pass;
        e["runtime"] = num(c.runtime);
        e["order"] = c.order;
        e["note"] = c.note;
        j["checks"].push_back(std::move(e));
    }
    return j.dump(2);
}

Tolerances load_tolerances(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open tolerance manifest " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("tolerance manifest " + path + ": " + e.what());
    }
    if (!j.is_object()) throw Error("tolerance manifest " + path + ": expected an object");
    Tolerances t;
    const std::pair<const char*, double Tolerances::*> fields[] = {
        {"oracle_farfield", &Tolerances::oracle_farfield},
        {"reciprocity", &Tolerances::reciprocity},
        {"reciprocity_refinement", &Tolerances::reciprocity_refinement},
        {"energy", &Tolerances::energy},
        {"uniqueness", &Tolerances::uniqueness},
        {"linearity", &Tolerances::linearity},
        {"solve_residual", &Tolerances::solve_residual},
        {"radiation_ratio_min", &Tolerances::radiation_ratio_min},
        {"radiation_ratio_max", &Tolerances::radiation_ratio_max},
        {"tangentiality", &Tolerances::tangentiality},
        {"equivariance", &Tolerances::equivariance},
        {"oracle_equivariance", &Tolerances::oracle_equivariance},
        {"discrimination_factor", &Tolerances::discrimination_factor},
        {"homogeneous_crosscheck", &Tolerances::homogeneous_crosscheck},
        {"single_layer_constant", &Tolerances::single_layer_constant},
        {"rr_identity", &Tolerances::rr_identity},
        {"operator_difference", &Tolerances::operator_difference},
    };
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key().starts_with("_")) continue;  // comments
        const auto f = std::find_if(std::begin(fields), std::end(fields),
                                    [&](const auto& p) { return it.key() == p.first; });
        if (f == std::end(fields)) throw Error("tolerance manifest: unknown key '" + it.key() + "'");
        if (!it->is_number() || !(it->get<double>() > 0.0))
            throw Error("tolerance manifest: '" + it.key() + "' must be a positive number");
        t.*(f->second) = it->get<double>();
    }
    return t;
}

}  // namespace tlbie
