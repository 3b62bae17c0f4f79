// Command-line front end: solve, oracle, verify, converge, geometry-dump, compare.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tlbie/verify.hpp"

#ifndef TLBIE_DATA_DIR
#define TLBIE_DATA_DIR "data"
#endif

using namespace tlbie;

namespace {

struct Common {
    std::string scene;
    std::string incident;
    int order = 0;
    std::string out = "-";
    int grid_theta = 24;
    int grid_phi = 48;
};

SceneFile load(const Common& c)
{
    SceneFile f = load_scene(c.scene);
    if (c.order > 0) f.scene = with_order(f.scene, c.order);
    if (!c.incident.empty()) {
        f.incident = parse_incident(c.incident);
        check_incident(f.scene, *f.incident);
    }
    return f;
}

// Writes to the file named by path, or stdout for "-".
void emit(const std::string& path, const std::string& text)
{
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

std::string pattern_csv(FarFieldPattern p, const SceneFile& f, const IncidentField& inc, int order)
{
    p.scene_hash = f.hash;
    p.incidence = describe(inc);
    p.order = order;
    std::ostringstream os;
    write_farfield_csv(p, os);
    return os.str();
}

IncidentField incident_for_solve(const SceneFile& f)
{
    if (!f.incident) throw Error("the scene has no incident block; pass --incident");
    return *f.incident;
}

int cmd_solve(const Common& c)
{
    const SceneFile f = load(c);
    const IncidentField inc = incident_for_solve(f);
    const Solution sol = solve_direct(f.scene, inc, f.solver);
    const SolveDiagnostics& d = sol.diagnostics();
    std::fprintf(stderr, "unknowns %d, residual %.3e, condition %.3e\n", sol.system().size(), d.residual, d.condition);
    if (d.warning) std::fprintf(stderr, "warning: %s\n", d.message.c_str());
    const FarFieldPattern p =
        sample_pattern([&](const Vec3& x) { return sol.far_field(x); }, c.grid_theta, c.grid_phi);
    emit(c.out, pattern_csv(p, f, inc, f.scene.s0->n_theta()));
    return 0;
}

int cmd_oracle(const Common& c, int degree)
{
    const SceneFile f = load(c);
    const IncidentField inc = incident_for_solve(f);
    std::optional<MieScene> m = mie_scene_of(f.scene);
    if (!m)
        throw Error("the series oracle needs two spheres centered at the origin and a fully conducting or fully "
                    "impedance obstacle");
    if (degree > 0) m->L = degree;
    const MieSolution ms = mie_solve(*m, inc);
    std::fprintf(stderr, "series degree %d, tail %.3e, mode residual %.3e\n", ms.L, ms.tail, ms.mode_residual);
    const FarFieldPattern p =
        sample_pattern([&](const Vec3& x) { return mie_far_field(ms, x); }, c.grid_theta, c.grid_phi);
    emit(c.out, pattern_csv(p, f, inc, ms.L));
    return 0;
}

std::vector<std::string> split(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int cmd_verify(const Common& c, const std::string& checks, const std::string& tol_path)
{
    const SceneFile f = load(c);
    VerifyOptions opt;
    opt.tol = load_tolerances(tol_path);
    opt.only = split(checks);
    const VerificationReport rep = run_verification(f, opt);
    emit(c.out, rep.to_json() + "\n");
    for (const CheckRecord& r : rep.checks)
        std::fprintf(stderr, "%-24s %s  %.3e (tol %.1e)\n", r.name.c_str(), r.pass ? "PASS" : "FAIL", r.value,
                     r.tolerance);
    return rep.passed() ? 0 : 1;
}

int cmd_converge(const Common& c, const std::string& orders)
{
    const SceneFile f = load(c);
    std::vector<int> ns;
    for (const std::string& s : split(orders)) {
        try {
            std::size_t used = 0;
            ns.push_back(std::stoi(s, &used));
            if (used != s.size()) throw std::invalid_argument(s);
        } catch (const std::exception&) {
            throw Error("--orders: '" + s + "' is not an integer");
        }
    }
    if (ns.empty()) throw Error("--orders: no orders given");
    std::ostringstream os;
    os << "order,unknowns,reciprocity_exterior,reciprocity_layer,oracle_distance,tangentiality,condition,seconds\n";
    char line[256];
    for (const ConvergenceRow& r : convergence_study(f, ns)) {
        std::snprintf(line, sizeof line, "%d,%d,%.3e,%.3e,%.3e,%.3e,%.3e,%.1f\n", r.order, r.unknowns,
                      r.reciprocity_exterior, r.reciprocity_layer, r.oracle_distance, r.tangentiality, r.condition,
                      r.seconds);
        os << line;
    }
    emit(c.out, os.str());
    return 0;
}

int cmd_geometry(const Common& c)
{
    const SceneFile f = load(c);
    std::ostringstream os;
    os.precision(17);
    os << "surface,index,x,y,z,nx,ny,nz,w,label\n";
    const Surface* surfaces[2] = {f.scene.s0.get(), f.scene.s1.get()};
    for (int k = 0; k < 2; ++k) {
        const Surface& s = *surfaces[k];
        for (int i = 0; i < s.size(); ++i) {
            os << "s" << k << "," << i << "," << s.x[i].x() << "," << s.x[i].y() << "," << s.x[i].z() << ","
               << s.nu[i].x() << "," << s.nu[i].y() << "," << s.nu[i].z() << "," << s.ws[i] << ","
               << (k == 1 ? f.scene.partition.labels[i] : 0) << "\n";
        }
    }
    emit(c.out, os.str());
    return 0;
}

FarFieldPattern read_pattern(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    try {
        return read_farfield_csv(in);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

int cmd_compare(const std::string& a, const std::string& b, double tol)
{
    const double d = farfield_distance(read_pattern(a), read_pattern(b));
    std::printf("%.6e\n", d);
    return tol > 0.0 && !(d <= tol) ? 1 : 0;
}

void add_common(CLI::App* sub, Common& c, bool grid)
{
    sub->add_option("scene", c.scene, "scene file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--order", c.order, "rebuild both surfaces with n_theta = ORDER, n_phi = 2 ORDER")
        ->check(CLI::Range(8, 200));
    sub->add_option("--out,-o", c.out, "output file, '-' for stdout");
    if (grid) {
        sub->add_option("--incident", c.incident, "incident field as JSON, overrides the scene file");
        sub->add_option("--grid-theta", c.grid_theta, "far-field grid polar nodes")->check(CLI::Range(2, 1000));
        sub->add_option("--grid-phi", c.grid_phi, "far-field grid azimuth nodes")->check(CLI::Range(2, 2000));
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Two-layer Maxwell boundary-integral solver"};
    app.require_subcommand(1);
    Common c;
    int degree = 0;
    std::string checks, orders = "12,16,24", tol_path = std::string(TLBIE_DATA_DIR) + "/tolerances.json";

    CLI::App* solve = app.add_subcommand("solve", "far field of the boundary-integral solution (CSV)");
    add_common(solve, c, true);
    CLI::App* oracle = app.add_subcommand("oracle", "far field of the series solution (CSV)");
    add_common(oracle, c, true);
    oracle->add_option("--degree", degree, "series truncation degree (default ceil(k0 r0) + 15)");
    CLI::App* verify = app.add_subcommand("verify", "identity suite, JSON report; exit 1 on failure");
    add_common(verify, c, false);
    verify->add_option("--incident", c.incident, "plane wave used by the checks, as JSON");
    verify->add_option("--checks", checks, "comma-separated subset of checks");
    verify->add_option("--tolerances", tol_path, "tolerance manifest")->check(CLI::ExistingFile);
    CLI::App* converge = app.add_subcommand("converge", "residual table over quadrature orders (CSV)");
    add_common(converge, c, false);
    converge->add_option("--incident", c.incident, "plane wave used by the study, as JSON");
    converge->add_option("--orders", orders, "comma-separated orders");
    CLI::App* geom = app.add_subcommand("geometry-dump", "surface nodes, normals and weights (CSV)");
    add_common(geom, c, false);
    std::string cmp_a, cmp_b;
    double cmp_tol = 0.0;
    CLI::App* compare = app.add_subcommand("compare", "relative L2 distance ||A - B|| / ||B|| of two far-field CSVs");
    compare->add_option("a", cmp_a, "far-field CSV")->required()->check(CLI::ExistingFile);
    compare->add_option("b", cmp_b, "reference far-field CSV")->required()->check(CLI::ExistingFile);
    compare->add_option("--tol", cmp_tol, "exit 1 if the distance exceeds this value")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    try {
        if (*solve) return cmd_solve(c);
        if (*oracle) return cmd_oracle(c, degree);
        if (*verify) return cmd_verify(c, checks, tol_path);
        if (*converge) return cmd_converge(c, orders);
        if (*geom) return cmd_geometry(c);
        if (*compare) return cmd_compare(cmp_a, cmp_b, cmp_tol);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
