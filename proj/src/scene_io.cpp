#include "tlbie/scene_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <Eigen/Geometry>
#include <json.hpp>

#include "tlbie/farfield.hpp"

namespace tlbie {

namespace {

using json = nlohmann::json;

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys)
{
    if (!j.is_object()) throw Error(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys) known = known || it.key() == k;
        if (!known) throw Error(where + ": unknown key '" + it.key() + "'");
    }
}

double real_of(const json& j, const std::string& where)
{
    if (!j.is_number()) throw Error(where + ": expected a number");
    return j.get<double>();
}

int int_of(const json& j, const std::string& where)
{
    if (!j.is_number_integer()) throw Error(where + ": expected an integer");
    return j.get<int>();
}

cplx complex_of(const json& j, const std::string& where)
{
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw Error(where + ": expected a number or [re, im]");
}

Vec3 vec_of(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 3) throw Error(where + ": expected an array of 3 numbers");
    return Vec3(real_of(j[0], where), real_of(j[1], where), real_of(j[2], where));
}

CVec3 cvec_of(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 3) throw Error(where + ": expected an array of 3 (complex) numbers");
    return CVec3(complex_of(j[0], where), complex_of(j[1], where), complex_of(j[2], where));
}

MediumParams medium_of(const json& j, const std::string& where)
{
    only_keys(j, where, {"epsilon", "mu", "sigma", "omega"});
    MediumParams m;
    if (j.contains("epsilon")) m.epsilon = real_of(j["epsilon"], where + ".epsilon");
    if (j.contains("mu")) m.mu = real_of(j["mu"], where + ".mu");
    if (j.contains("sigma")) m.sigma = real_of(j["sigma"], where + ".sigma");
    if (j.contains("omega")) m.omega = real_of(j["omega"], where + ".omega");
    return m;
}

WaveNumbers media_of(const json& j)
{
    only_keys(j, "media", {"outer", "inner", "k0", "k1", "lambda_E", "lambda_H", "lambda_imp"});
    const double lam = j.contains("lambda_imp") ? real_of(j["lambda_imp"], "media.lambda_imp") : 1.0;
    const bool physical = j.contains("outer") || j.contains("inner");
    const bool direct = j.contains("k0") || j.contains("k1") || j.contains("lambda_E") || j.contains("lambda_H");
    if (physical && direct) throw Error("media: give either outer/inner or k0, k1, lambda_E, lambda_H, not both");
    if (physical) {
        if (!j.contains("outer") || !j.contains("inner")) throw Error("media: both outer and inner are required");
        return derive_wavenumbers(medium_of(j["outer"], "media.outer"), medium_of(j["inner"], "media.inner"), lam);
    }
    for (const char* k : {"k0", "k1", "lambda_E", "lambda_H"})
        if (!j.contains(k)) throw Error(std::string("media: missing '") + k + "'");
    return direct_wavenumbers(complex_of(j["k0"], "media.k0"), complex_of(j["k1"], "media.k1"),
                              complex_of(j["lambda_E"], "media.lambda_E"),
                              complex_of(j["lambda_H"], "media.lambda_H"), lam);
}

Mat3 rotation_of(const json& j, const std::string& where)
{
    if (j.is_object()) {
        only_keys(j, where, {"axis", "angle"});
        if (!j.contains("axis") || !j.contains("angle")) throw Error(where + ": needs axis and angle");
        const Vec3 axis = vec_of(j["axis"], where + ".axis");
        if (axis.norm() == 0.0) throw Error(where + ".axis: zero vector");
        return Eigen::AngleAxisd(real_of(j["angle"], where + ".angle"), axis.normalized()).toRotationMatrix();
    }
    if (!j.is_array() || j.size() != 3) throw Error(where + ": expected {axis, angle} or a 3x3 matrix");
    Mat3 Q;
    for (int r = 0; r < 3; ++r) Q.row(r) = vec_of(j[r], where).transpose();
    check_rotation(Q);
    return Q;
}

SurfaceDescriptor surface_of(const json& j, const std::string& where)
{
    only_keys(j, where, {"kind", "center", "radius", "semi_axes", "perturbation", "rotation", "n_theta", "n_phi"});
    SurfaceDescriptor d;
    if (!j.contains("kind") || !j["kind"].is_string()) throw Error(where + ": missing kind");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "sphere")
        d.kind = SurfaceKind::Sphere;
    else if (kind == "ellipsoid")
        d.kind = SurfaceKind::Ellipsoid;
    else if (kind == "perturbed")
        d.kind = SurfaceKind::Perturbed;
    else
        throw Error(where + ".kind: expected sphere, ellipsoid or perturbed");
    if (j.contains("center")) d.center = vec_of(j["center"], where + ".center");
    if (j.contains("radius")) d.radius = real_of(j["radius"], where + ".radius");
    if (j.contains("semi_axes")) d.semi_axes = vec_of(j["semi_axes"], where + ".semi_axes");
    if (d.kind == SurfaceKind::Ellipsoid && !j.contains("semi_axes")) throw Error(where + ": ellipsoid needs semi_axes");
    if (d.kind != SurfaceKind::Ellipsoid && j.contains("semi_axes"))
        throw Error(where + ": semi_axes only applies to ellipsoids");
    if (j.contains("perturbation")) {
        if (d.kind != SurfaceKind::Perturbed) throw Error(where + ": perturbation only applies to kind perturbed");
        const json& p = j["perturbation"];
        if (!p.is_array()) throw Error(where + ".perturbation: expected an array");
        for (const json& t : p) {
            only_keys(t, where + ".perturbation[]", {"l", "m", "value"});
            if (!t.contains("l") || !t.contains("m") || !t.contains("value"))
                throw Error(where + ".perturbation[]: needs l, m and value");
            d.perturbation.push_back({int_of(t["l"], where + ".perturbation.l"), int_of(t["m"], where + ".perturbation.m"),
                                      real_of(t["value"], where + ".perturbation.value")});
        }
    }
    if (j.contains("rotation")) d.rotation = rotation_of(j["rotation"], where + ".rotation");
    if (j.contains("n_theta")) d.n_theta = int_of(j["n_theta"], where + ".n_theta");
    d.n_phi = j.contains("n_phi") ? int_of(j["n_phi"], where + ".n_phi") : 2 * d.n_theta;
    return d;
}

IncidentField incident_of(const json& j)
{
    only_keys(j, "incident", {"type", "d", "q", "z", "p", "layer"});
    if (!j.contains("type") || !j["type"].is_string()) throw Error("incident: missing type");
    const std::string type = j["type"].get<std::string>();
    if (type == "plane") {
        for (const char* k : {"z", "p", "layer"})
            if (j.contains(k)) throw Error(std::string("incident: '") + k + "' does not apply to a plane wave");
        if (!j.contains("d") || !j.contains("q")) throw Error("incident: plane wave needs d and q");
        return IncidentField::plane(vec_of(j["d"], "incident.d"), cvec_of(j["q"], "incident.q"));
    }
    if (type == "dipole") {
        for (const char* k : {"d", "q"})
            if (j.contains(k)) throw Error(std::string("incident: '") + k + "' does not apply to a dipole");
        if (!j.contains("z") || !j.contains("p")) throw Error("incident: dipole needs z and p");
        const int layer = j.contains("layer") ? int_of(j["layer"], "incident.layer") : 0;
        return IncidentField::dipole(vec_of(j["z"], "incident.z"), cvec_of(j["p"], "incident.p"), layer);
    }
    throw Error("incident.type: expected plane or dipole");
}

SolverOptions solver_of(const json& j)
{
    only_keys(j, "solver", {"polar_order", "upsample", "eval_upsample", "rhs_upsample", "fast_path", "cond_warn"});
    SolverOptions o;
    if (j.contains("polar_order")) o.quad.polar_order = int_of(j["polar_order"], "solver.polar_order");
    if (j.contains("upsample")) o.quad.upsample = int_of(j["upsample"], "solver.upsample");
    if (j.contains("eval_upsample")) o.quad.eval_upsample = int_of(j["eval_upsample"], "solver.eval_upsample");
    if (j.contains("rhs_upsample")) o.rhs_upsample = int_of(j["rhs_upsample"], "solver.rhs_upsample");
    if (j.contains("fast_path")) {
        if (!j["fast_path"].is_boolean()) throw Error("solver.fast_path: expected true or false");
        o.quad.fast_path = j["fast_path"].get<bool>();
    }
    if (j.contains("cond_warn")) o.cond_warn = real_of(j["cond_warn"], "solver.cond_warn");
    if (o.quad.polar_order < 0 || o.quad.upsample < 1 || o.quad.eval_upsample < 1 || o.rhs_upsample < 1)
        throw Error("solver: polar_order must be >= 0 and upsampling factors >= 1");
    return o;
}

json parse_json(const std::string& text, const std::string& source)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(source + ": " + e.what());
    }
}

}  // namespace

SceneFile parse_scene(const std::string& text, const std::string& source)
{
    const json j = parse_json(text, source);
    try {
        only_keys(j, "scene", {"name", "media", "s0", "s1", "partition", "incident", "solver", "seed"});
        for (const char* k : {"media", "s0", "s1"})
            if (!j.contains(k)) throw Error(std::string("scene: missing '") + k + "'");
        SceneFile f;
        f.hash = text_hash(text);
        if (j.contains("name")) {
            if (!j["name"].is_string()) throw Error("name: expected a string");
            f.name = j["name"].get<std::string>();
        }
        const WaveNumbers media = media_of(j["media"]);
        double theta_star = pi;
        if (j.contains("partition")) {
            only_keys(j["partition"], "partition", {"theta_star"});
            if (j["partition"].contains("theta_star"))
                theta_star = real_of(j["partition"]["theta_star"], "partition.theta_star");
        }
        f.scene = make_scene(media, make_surface(surface_of(j["s0"], "s0")), make_surface(surface_of(j["s1"], "s1")),
                             theta_star);
        require_valid(f.scene);
        if (j.contains("incident")) f.incident = incident_of(j["incident"]);
        if (j.contains("solver")) f.solver = solver_of(j["solver"]);
        if (j.contains("seed")) {
            if (!j["seed"].is_number_unsigned()) throw Error("seed: expected a nonnegative integer");
            f.seed = j["seed"].get<std::uint64_t>();
        }
        if (f.incident) check_incident(f.scene, *f.incident);
        return f;
    } catch (const json::exception& e) {
        throw Error(source + ": " + e.what());
    } catch (const Error& e) {
        throw Error(source + ": " + e.what());
    }
}

SceneFile load_scene(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open scene file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scene(ss.str(), path);
}

IncidentField parse_incident(const std::string& text)
{
    const json j = parse_json(text, "incident");
    try {
        return incident_of(j);
    } catch (const json::exception& e) {
        throw Error(std::string("incident: ") + e.what());
    }
}

std::string describe(const IncidentField& inc)
{
    std::ostringstream os;
    os.precision(17);
    auto cv = [&](const CVec3& v) {
        os << "[";
        for (int c = 0; c < 3; ++c) os << (c ? "," : "") << v[c].real() << (v[c].imag() < 0 ? "" : "+") << v[c].imag() << "i";
        os << "]";
    };
    auto rv = [&](const Vec3& v) { os << "[" << v.x() << "," << v.y() << "," << v.z() << "]"; };
    if (inc.type == IncidentField::Type::Plane) {
        os << "plane d=";
        rv(inc.d);
        os << " q=";
        cv(inc.q);
    } else {
        os << "dipole layer=" << inc.layer << " z=";
        rv(inc.z);
        os << " p=";
        cv(inc.p);
    }
    return os.str();
}

Scene with_order(const Scene& scene, int n_theta)
{
    SurfaceDescriptor d0 = scene.s0->descriptor(), d1 = scene.s1->descriptor();
    d0.n_theta = d1.n_theta = n_theta;
    d0.n_phi = d1.n_phi = 2 * n_theta;
    return make_scene(scene.media, make_surface(d0), make_surface(d1), scene.partition.theta_star);
}

}  // namespace tlbie
