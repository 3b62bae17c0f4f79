#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <Eigen/Geometry>
#include <json.hpp>

#include "support.hpp"
#include "tlbie/verify.hpp"

using namespace support;

namespace {

std::string scene_path(const std::string& name) { return std::string(TLBIE_SCENE_DIR) + "/" + name + ".json"; }

std::string write_temp(const std::string& name, const std::string& text)
{
    const std::string path = "/tmp/tlbie_test_" + name;
    std::ofstream(path) << text;
    return path;
}

FarFieldPattern bie_pattern(const Solution& s)
{
    return sample_pattern([&](const Vec3& x) { return s.far_field(x); });
}

FarFieldPattern oracle_pattern(const Scene& sc, const IncidentField& inc)
{
    const MieSolution ms = mie_solve(*mie_scene_of(sc), inc);
    return sample_pattern([&](const Vec3& x) { return mie_far_field(ms, x); });
}

const char* minimal_scene = R"({
  "media": {"k0": 1, "k1": [1.2, 0.3], "lambda_E": 1, "lambda_H": [0.78431372549019607, -0.19607843137254902]},
  "s0": {"kind": "sphere", "radius": 2, "n_theta": 10},
  "s1": {"kind": "ellipsoid", "semi_axes": [0.8, 0.9, 1.1], "n_theta": 10}
})";

}  // namespace

TEST_CASE("far-field CSV round trip is exact")
{
    FarFieldPattern p = sample_pattern([](const Vec3& x) {
        return CVec3(cplx(x.x() / 3.0, std::sqrt(2.0) * x.y()), cplx(std::exp(x.z()), -1e-300), cplx(pi, 1.0 / 7.0));
    }, 8, 16);
    p.scene_hash = "abc123";
    p.incidence = "plane d=(0,0,1)";
    p.order = 17;
    std::stringstream ss;
    write_farfield_csv(p, ss);
    const FarFieldPattern q = read_farfield_csv(ss);
    REQUIRE(q.size() == p.size());
    CHECK(q.scene_hash == p.scene_hash);
    CHECK(q.incidence == p.incidence);
    CHECK(q.order == p.order);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(q.values[i] == p.values[i]);
    CHECK(farfield_distance(q, p) == 0.0);

    std::stringstream bad("theta,phi\n0,0\n");
    CHECK_THROWS_AS(read_farfield_csv(bad), Error);
}

TEST_CASE("far-field metrics")
{
    const FarFieldPattern a = sample_pattern([](const Vec3& x) { return to_c(Vec3(-x.y(), x.x(), 0.0)); });
    const FarFieldPattern b = sample_pattern([](const Vec3& x) { return CVec3(2.0 * to_c(Vec3(-x.y(), x.x(), 0.0))); });
    CHECK(std::abs(farfield_distance(a, b) - 0.5) <= 1e-14);
    CHECK(farfield_tangentiality(a) <= 1e-15);
    // int |(-y, x, 0)|^2 = int sin^2 theta = 8 pi / 3
    CHECK(std::abs(farfield_norm(a) - std::sqrt(8.0 * pi / 3.0)) <= 1e-12);
    CHECK_THROWS_AS(farfield_distance(a, sample_pattern([](const Vec3&) { return CVec3(CVec3::Zero()); }, 12, 48)),
                    Error);
    CHECK_THROWS_AS(farfield_grid(1, 4), Error);
}

TEST_CASE("tolerance manifest")
{
    const Tolerances d;
    const Tolerances t = load_tolerances(std::string(TLBIE_DATA_DIR) + "/tolerances.json");
    CHECK(t.oracle_farfield == d.oracle_farfield);
    CHECK(t.reciprocity == d.reciprocity);
    CHECK(t.reciprocity_refinement == d.reciprocity_refinement);
    CHECK(t.energy == d.energy);
    CHECK(t.uniqueness == d.uniqueness);
    CHECK(t.linearity == d.linearity);
    CHECK(t.solve_residual == d.solve_residual);
    CHECK(t.radiation_ratio_min == d.radiation_ratio_min);
    CHECK(t.radiation_ratio_max == d.radiation_ratio_max);
    CHECK(t.tangentiality == d.tangentiality);
    CHECK(t.equivariance == d.equivariance);
    CHECK(t.oracle_equivariance == d.oracle_equivariance);
    CHECK(t.discrimination_factor == d.discrimination_factor);
    CHECK(t.homogeneous_crosscheck == d.homogeneous_crosscheck);
    CHECK(t.single_layer_constant == d.single_layer_constant);
    CHECK(t.rr_identity == d.rr_identity);
    CHECK(t.operator_difference == d.operator_difference);

    CHECK(load_tolerances(write_temp("tol1.json", R"({"energy": 1e-6})")).energy == 1e-6);
    CHECK_THROWS_AS(load_tolerances(write_temp("tol2.json", R"({"enrgy": 1e-6})")), Error);
    CHECK_THROWS_AS(load_tolerances(write_temp("tol3.json", R"({"energy": -1})")), Error);
    CHECK_THROWS_AS(load_tolerances(write_temp("tol4.json", R"({"energy": )")), Error);
    CHECK_THROWS_AS(load_tolerances("/nonexistent/tolerances.json"), Error);
}

TEST_CASE("scene files")
{
    SUBCASE("shipped scenes parse and validate")
    {
        for (const char* n : {"homogeneous_pec", "two_layer_pec", "two_layer_impedance", "lossy_pec",
                              "spheroid_impedance", "perturbed_interface", "mixed_cap"}) {
            CAPTURE(n);
            const SceneFile f = load_scene(scene_path(n));
            CHECK(validate_scene(f.scene).ok());
            CHECK(f.seed == 2024);
            CHECK(f.incident.has_value());
            CHECK(f.hash.size() > 0);
        }
        const SceneFile f = load_scene(scene_path("two_layer_pec"));
        CHECK(std::abs(f.scene.media.k1 - 2.0) <= 1e-15);
        CHECK(f.scene.partition.all_pec());
        CHECK(load_scene(scene_path("two_layer_impedance")).scene.partition.all_impedance());
        CHECK(load_scene(scene_path("mixed_cap")).scene.partition.mixed());
    }
    SUBCASE("complex values, defaults and order override")
    {
        const SceneFile f = parse_scene(minimal_scene);
        CHECK(f.scene.media.k1 == cplx(1.2, 0.3));
        CHECK(std::abs(f.scene.media.lambda_H - 1.0 / cplx(1.2, 0.3)) <= 1e-15);
        CHECK(f.scene.s0->n_phi() == 20);
        CHECK(f.scene.partition.all_pec());
        CHECK_FALSE(f.incident.has_value());
        CHECK(f.seed == 1);
        const Scene g = with_order(f.scene, 14);
        CHECK(g.s0->n_theta() == 14);
        CHECK(g.s1->n_phi() == 28);
        CHECK(g.partition.labels.size() == std::size_t(g.s1->size()));
        CHECK(parse_scene(minimal_scene).hash == f.hash);
    }
    SUBCASE("malformed input names the source and the problem")
    {
        auto message = [](const std::string& text) {
            try {
                parse_scene(text, "bad.json");
            } catch (const Error& e) {
                return std::string(e.what());
            }
            return std::string();
        };
        std::string s = minimal_scene;
        CHECK(message(s.substr(0, 40)).rfind("bad.json", 0) == 0);
        std::string u = s;
        u.insert(u.find("\"s0\""), "\"color\": 1, ");
        CHECK(message(u).find("unknown key 'color'") != std::string::npos);
        std::string r = s;
        r.replace(r.find("\"radius\": 2"), 11, "\"radius\": -2");
        CHECK_FALSE(message(r).empty());
        std::string m = s;
        m.replace(m.find("\"k0\": 1"), 7, "\"k0\": \"one\"");
        CHECK_FALSE(message(m).empty());
        std::string nest = s;
        nest.replace(nest.find("\"radius\": 2"), 11, "\"radius\": 1");
        CHECK_FALSE(message(nest).empty());
    }
    SUBCASE("incident blocks")
    {
        const IncidentField p = parse_incident(R"({"type": "plane", "d": [0, 0, 1], "q": [[1, 0], [0, 1], 0]})");
        CHECK(p.type == IncidentField::Type::Plane);
        CHECK(p.q[1] == cplx(0.0, 1.0));
        const IncidentField d = parse_incident(R"({"type": "dipole", "z": [0, 0, 3], "p": [1, 0, 0], "layer": 0})");
        CHECK(d.type == IncidentField::Type::Dipole);
        CHECK_THROWS_AS(parse_incident(R"({"type": "plane", "d": [0, 0, 1], "q": [1, 0, 0], "z": [0, 0, 0]})"),
                        Error);
        CHECK_THROWS_AS(parse_incident(R"({"type": "beam"})"), Error);
        CHECK_THROWS_AS(parse_incident(R"({"type": "plane", "d": [0, 0, 2], "q": [1, 0, 0]})"), Error);
    }
}

TEST_CASE("equivariance metric")
{
    const Mat3 Q = random_rotation(3);
    CHECK(std::abs((Q.transpose() * Q - Mat3::Identity()).norm()) <= 1e-14);
    CHECK(Q.determinant() > 0.0);
    CHECK(random_rotation(3) == Q);
    auto f = [](const Vec3& x) { return CVec3(cplx(x.x(), x.z()), cplx(x.y() * x.y(), 0.0), cplx(1.0, x.x())); };
    CHECK(equivariance_residual(f, f, Mat3::Identity()) == 0.0);
    // g = Q f Q^T is exactly equivariant; f itself is not
    auto g = [&](const Vec3& x) { return CVec3(Q.cast<cplx>() * f(Q.transpose() * x)); };
    CHECK(equivariance_residual(f, g, Q) <= 1e-14);
    CHECK(equivariance_residual(f, f, Q) >= 1e-2);
    // a constant offset e shows up as |e| / max |f|
    double fmax = 0.0;
    for (const Vec3& x : farfield_grid().dirs) fmax = std::max(fmax, f(x).norm());
    auto h = [&](const Vec3& x) { return CVec3(g(x) + CVec3(0, 1e-3, 0)); };
    CHECK(std::abs(equivariance_residual(f, h, Q) - 1e-3 / fmax) <= 1e-14);
}

TEST_CASE("checks on a solved scene")
{
    const WaveNumbers m = two_layer();
    const Scene sc = make_scene(m, sphere(2.0, 12), sphere(1.0, 12), pi);
    const IncidentField inc = IncidentField::plane(Vec3(0, 0, 1), CVec3(1, 0, 0));
    const DirectSolver solver(sc);
    const Solution sol = solver.solve(inc);

    SUBCASE("probe points are seeded, admissible and in their region")
    {
        const auto a = probe_points(sol, 0, 4, 7), b = probe_points(sol, 0, 4, 7);
        REQUIRE(a.size() == 4);
        for (int i = 0; i < 4; ++i) {
            CHECK(a[i] == b[i]);
            CHECK(a[i].norm() > 2.0);
            CHECK(sol.admissible(a[i], 0));
        }
        for (const Vec3& z : probe_points(sol, 1, 4, 7)) {
            CHECK(z.norm() > 1.0);
            CHECK(z.norm() < 2.0);
        }
        CHECK_THROWS_AS(probe_points(sol, 2, 1, 7), Error);
    }
    SUBCASE("reciprocity rejects points near the surfaces")
    {
        CHECK_THROWS_AS(mixed_reciprocity(solver, sol, Vec3(0, 0, 2.0 + 1e-3), CVec3(1, 0, 0)), Error);
        CHECK_THROWS_AS(mixed_reciprocity(solver, sol, Vec3(0, 0, 0.5), CVec3(1, 0, 0)), Error);
    }
    SUBCASE("radiation asymptotics")
    {
        const double D = scene_diameter(sc);
        CHECK(std::abs(D - 4.0) <= 1e-2);
        const RadiationResult r = check_radiation_asymptotics(sol, Vec3(0.6, 0, 0.8), {50 * D, 100 * D, 200 * D});
        REQUIRE(r.ratios.size() == 2);
        for (double x : r.ratios) {
            CHECK(x >= 0.3);
            CHECK(x <= 0.7);
        }
        for (std::size_t i = 1; i < r.silver_muller.size(); ++i) CHECK(r.silver_muller[i] < r.silver_muller[i - 1]);
        CHECK_THROWS_AS(check_radiation_asymptotics(sol, Vec3(0, 0, 1), {5 * D, 10 * D}), Error);
        CHECK_THROWS_AS(check_radiation_asymptotics(sol, Vec3(0, 0, 1), {50 * D, 90 * D}), Error);
    }
    SUBCASE("equivariance needs concentric spheres")
    {
        const Scene off = make_scene(m, sphere(2.0, 12), sphere(1.0, 12, Vec3(0.1, 0, 0)), pi);
        CHECK_FALSE(concentric_spheres(off));
        CHECK_FALSE(mie_scene_of(off).has_value());
        CHECK_THROWS_AS(check_rotation_equivariance(off, random_rotation(1), Vec3(0, 0, 1), CVec3(1, 0, 0)), Error);
        const Scene rot = rotate_scene(sc, random_rotation(1));
        CHECK(rot.partition.labels == sc.partition.labels);
    }
}

TEST_CASE("obstacle-only solver agrees with the two-layer solver in a homogeneous background")
{
    const Scene sc = make_scene(homogeneous(), sphere(2.0, 12), sphere(1.0, 12), pi);
    const Solution s = solve_direct(sc, IncidentField::plane(Vec3(0.6, 0, 0.8), CVec3(0, 1, 0)));
    const SingleSurfacePec single(sc.s1, 1.0);
    const double d = farfield_distance(bie_pattern(s), sample_pattern(single.solve(Vec3(0.6, 0, 0.8), CVec3(0, 1, 0))));
    CHECK(d <= 1e-6);
}

TEST_CASE("discrimination: wrong geometry is detected against the oracle")
{
    const WaveNumbers m = two_layer();
    const IncidentField inc = IncidentField::plane(Vec3(0, 0, 1), CVec3(1, 0, 0));
    const Scene truth = make_scene(m, sphere(2.0, 12), sphere(1.0, 12), pi);
    const FarFieldPattern oracle = oracle_pattern(truth, inc);
    const double floor = farfield_distance(bie_pattern(solve_direct(truth, inc)), oracle);
    CHECK(floor <= 1e-3);

    const Scene bigger = make_scene(m, sphere(2.0, 12), sphere(1.1, 12), pi);
    CHECK(farfield_distance(bie_pattern(solve_direct(bigger, inc)), oracle) >= 10.0 * floor);

    SurfaceDescriptor d;
    d.kind = SurfaceKind::Perturbed;
    d.radius = 2.0;
    d.perturbation = {{2, 0, 0.05}};
    d.n_theta = 12;
    d.n_phi = 24;
    const Scene bumpy = make_scene(m, make_surface(d), sphere(1.0, 12), pi);
    CHECK(farfield_distance(bie_pattern(solve_direct(bumpy, inc)), oracle) >= 10.0 * floor);
}

TEST_CASE("verification suite and report")
{
    // at the shipped order 24; lower orders put the probes within reach of the near-surface error
    const SceneFile f = load_scene(scene_path("homogeneous_pec"));
    VerifyOptions opt;
    opt.probes = 2;
    const VerificationReport rep = run_verification(f, opt);
    std::vector<std::string> names;
    for (const CheckRecord& c : rep.checks) {
        CAPTURE(c.name);
        CAPTURE(c.value);
        CHECK(c.pass);
        names.push_back(c.name);
    }
    CHECK(rep.passed());
    // every check applies to this scene, in report order
    CHECK(names == verification_check_names());

    const nlohmann::json j = nlohmann::json::parse(rep.to_json());
    CHECK(j["scene"] == "homogeneous-pec-sphere");
    CHECK(j["order"] == 24);
    CHECK(j["passed"] == true);
    CHECK(j["checks"].size() == rep.checks.size());

    VerificationReport nan;
    nan.checks.push_back({"x", std::nan(""), 1.0, false, 0.0, 8, ""});
    CHECK(nlohmann::json::parse(nan.to_json())["checks"][0]["value"].is_null());
    CHECK_FALSE(nan.passed());

    opt.only = {"no_such_check"};
    CHECK_THROWS_AS(run_verification(f, opt), Error);
}

TEST_CASE("convergence study: residuals fall with the order")
{
    const SceneFile f = load_scene(scene_path("two_layer_pec"));
    const auto rows = convergence_study(f, {16, 12}, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].order == 12);
    CHECK(rows[1].order == 16);
    CHECK(rows[1].oracle_distance < rows[0].oracle_distance);
    CHECK(rows[1].reciprocity_exterior < rows[0].reciprocity_exterior);
    CHECK(rows[1].reciprocity_layer < rows[0].reciprocity_layer);
    CHECK(rows[1].unknowns > rows[0].unknowns);
}
