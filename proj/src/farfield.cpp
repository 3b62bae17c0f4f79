#include "tlbie/farfield.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "tlbie/harmonics.hpp"

namespace tlbie {

FarFieldPattern farfield_grid(int n_theta, int n_phi)
{
    if (n_theta < 2 || n_phi < 2) throw Error("far-field grid needs at least 2 x 2 directions");
    std::vector<double> x, w;
    gauss_legendre(n_theta, x, w);
    FarFieldPattern p;
    p.n_theta = n_theta;
    p.n_phi = n_phi;
    for (int i = 0; i < n_theta; ++i) {
        const double th = std::acos(x[n_theta - 1 - i]);
        for (int j = 0; j < n_phi; ++j) {
            const double ph = 2.0 * pi * j / n_phi;
            p.theta.push_back(th);
            p.phi.push_back(ph);
            p.w.push_back(w[n_theta - 1 - i] * 2.0 * pi / n_phi);
            p.dirs.emplace_back(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
        }
    }
    p.values.assign(p.dirs.size(), CVec3::Zero());
    return p;
}

FarFieldPattern sample_pattern(const std::function<CVec3(const Vec3&)>& f, int n_theta, int n_phi)
{
    FarFieldPattern p = farfield_grid(n_theta, n_phi);
    for (std::size_t i = 0; i < p.size(); ++i) p.values[i] = f(p.dirs[i]);
    return p;
}

double farfield_norm(const FarFieldPattern& a)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.w[i] * a.values[i].squaredNorm();
    return std::sqrt(s);
}

double farfield_distance(const FarFieldPattern& a, const FarFieldPattern& b)
{
    if (a.n_theta != b.n_theta || a.n_phi != b.n_phi || a.size() != b.size())
        throw Error("farfield_distance: direction grids differ");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a.dirs[i] - b.dirs[i]).norm() > 1e-14) throw Error("farfield_distance: direction grids differ");
        num += a.w[i] * (a.values[i] - b.values[i]).squaredNorm();
        den += a.w[i] * b.values[i].squaredNorm();
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

double farfield_tangentiality(const FarFieldPattern& a)
{
    double radial = 0.0, top = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        radial = std::max(radial, std::abs(to_c(a.dirs[i]).dot(a.values[i])));
        top = std::max(top, a.values[i].norm());
    }
    return top > 0.0 ? radial / top : 0.0;
}

namespace {

std::string g17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_farfield_csv(const FarFieldPattern& p, std::ostream& os)
{
    os << "# n_theta: " << p.n_theta << "\n";
    os << "# n_phi: " << p.n_phi << "\n";
    os << "# order: " << p.order << "\n";
    os << "# scene_hash: " << p.scene_hash << "\n";
    os << "# incidence: " << p.incidence << "\n";
    os << "theta,phi,ReEx,ImEx,ReEy,ImEy,ReEz,ImEz\n";
    for (std::size_t i = 0; i < p.size(); ++i) {
        os << g17(p.theta[i]) << ',' << g17(p.phi[i]);
        for (int c = 0; c < 3; ++c) os << ',' << g17(p.values[i][c].real()) << ',' << g17(p.values[i][c].imag());
        os << '\n';
    }
}

FarFieldPattern read_farfield_csv(std::istream& is)
{
    std::string line;
    int nt = 0, np = 0, order = 0;
    std::string hash, incidence;
    bool header = false;
    std::vector<std::array<double, 8>> rows;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            if (colon == std::string::npos) continue;
            std::string key = line.substr(1, colon - 1);
            std::string val = line.substr(colon + 1);
            auto trim = [](std::string& s) {
                s.erase(0, s.find_first_not_of(' '));
                s.erase(s.find_last_not_of(" \r") + 1);
            };
            trim(key);
            trim(val);
            if (key == "n_theta") nt = std::atoi(val.c_str());
            else if (key == "n_phi") np = std::atoi(val.c_str());
            else if (key == "order") order = std::atoi(val.c_str());
            else if (key == "scene_hash") hash = val;
            else if (key == "incidence") incidence = val;
            continue;
        }
        if (!header) {
            if (line.rfind("theta,phi,ReEx,ImEx,ReEy,ImEy,ReEz,ImEz", 0) != 0)
                throw Error("far-field CSV: missing column header at line " + std::to_string(lineno));
            header = true;
            continue;
        }
        std::array<double, 8> r{};
        std::istringstream ss(line);
        std::string cell;
        for (int c = 0; c < 8; ++c) {
            if (!std::getline(ss, cell, ',')) throw Error("far-field CSV: short row at line " + std::to_string(lineno));
            char* end = nullptr;
            r[c] = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) throw Error("far-field CSV: bad number at line " + std::to_string(lineno));
        }
        rows.push_back(r);
    }
    if (nt <= 0 || np <= 0) throw Error("far-field CSV: missing grid metadata");
    FarFieldPattern p = farfield_grid(nt, np);
    if (rows.size() != p.size()) throw Error("far-field CSV: row count does not match the grid");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (std::abs(rows[i][0] - p.theta[i]) > 1e-15 || std::abs(rows[i][1] - p.phi[i]) > 1e-15)
            throw Error("far-field CSV: directions do not match the grid");
        for (int c = 0; c < 3; ++c) p.values[i][c] = cplx(rows[i][2 + 2 * c], rows[i][3 + 2 * c]);
    }
    p.order = order;
    p.scene_hash = hash;
    p.incidence = incidence;
    return p;
}

std::string text_hash(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace tlbie
