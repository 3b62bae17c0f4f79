#include <cmath>
#include <random>

#include "support.hpp"

using namespace support;

namespace {

// Central-difference curl of a field given as a function of position.
template <class F>
CVec3 fd_curl(F f, const Vec3& x, double h)
{
    Eigen::Matrix3cd J;  // J(i, j) = d f_i / d x_j
    for (int j = 0; j < 3; ++j) {
        Vec3 dx = Vec3::Zero();
        dx[j] = h;
        J.col(j) = (f(x + dx) - f(x - dx)) / (2.0 * h);
    }
    return CVec3(J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1));
}

Vec3 random_unit(std::mt19937_64& g)
{
    std::normal_distribution<double> n;
    return Vec3(n(g), n(g), n(g)).normalized();
}

}  // namespace

TEST_CASE("fundamental solution values")
{
    const cplx k(1.3, 0.2);
    const Vec3 x(0.1, 0.2, 0.3), y = x + Vec3(0.6, 0.0, 0.8);
    CHECK(std::abs(phi(k, x, y) - std::exp(I * k) / (4.0 * pi)) <= 1e-15);
    CHECK(std::abs(phi(0.0, x, x + Vec3(0, 2, 0)) - 1.0 / (8.0 * pi)) <= 1e-16);
    CHECK(phi(k, x, y) == phi(k, y, x));
    CHECK_THROWS_AS(phi(k, x, x), Error);
}

TEST_CASE("Helmholtz equation and gradient by finite differences")
{
    const cplx k(1.7, 0.0);
    const Vec3 y(0.2, -0.1, 0.4), x = y + Vec3(0.36, 0.48, 0.8);  // |x - y| = 1
    const double h = 1e-4;
    cplx lap = 0.0;
    CVec3 g;
    for (int j = 0; j < 3; ++j) {
        Vec3 dx = Vec3::Zero();
        dx[j] = h;
        lap += (phi(k, x + dx, y) - 2.0 * phi(k, x, y) + phi(k, x - dx, y)) / (h * h);
        g[j] = (phi(k, x + dx, y) - phi(k, x - dx, y)) / (2.0 * h);
    }
    CHECK(std::abs(lap + k * k * phi(k, x, y)) <= 1e-6);
    CHECK((g - grad_phi_x(k, x, y)).norm() <= 1e-8);
}

TEST_CASE("plane wave properties")
{
    std::mt19937_64 gen(11);
    std::normal_distribution<double> n;
    for (int t = 0; t < 20; ++t) {
        const Vec3 d = random_unit(gen);
        const CVec3 q(cplx(n(gen), n(gen)), cplx(n(gen), n(gen)), cplx(n(gen), n(gen)));
        const Vec3 x(n(gen), n(gen), n(gen));
        const EH f = plane_wave(d, q, 1.5, x);
        const CVec3 amp = 1.5 * cross(cross(to_c(d), q), to_c(d));
        CHECK(std::abs(bdot(to_c(d), f.E)) <= 1e-12 * f.E.norm());
        CHECK(std::abs(f.E.norm() - amp.norm()) <= 1e-12 * amp.norm());
        CHECK((f.H - cross(to_c(d), f.E)).norm() <= 1e-14 * (1.0 + f.E.norm()));
    }
    const Vec3 d(0, 0, 1);
    const EH z = plane_wave(d, to_c(d) * cplx(2.0, 1.0), 1.0, Vec3(1, 2, 3));
    CHECK(z.E.norm() == 0.0);
    CHECK(z.H.norm() == 0.0);
    CHECK_THROWS_AS(IncidentField::plane(Vec3(0, 0, 2), CVec3(1, 0, 0)), Error);
}

TEST_CASE("Maxwell pairs by finite differences")
{
    const double h = 1e-4;
    std::mt19937_64 gen(5);
    std::normal_distribution<double> n;
    const WaveNumbers m = direct_wavenumbers(1.0, cplx(1.272019649514069, 0.7861513777574233),
                                             1.0 / cplx(1.272019649514069, 0.7861513777574233), 1.0);
    const IncidentField fields[3] = {IncidentField::plane(Vec3(0.6, 0.0, 0.8), CVec3(0, 1, I)),
                                     IncidentField::dipole(Vec3(0.1, 0.2, 0.3), CVec3(1, I, 0.5), 0),
                                     IncidentField::dipole(Vec3(-0.2, 0.1, 0.0), CVec3(0.3, 1, -I), 1)};
    for (const IncidentField& inc : fields) {
        const cplx k = inc.wavenumber(m);
        for (int t = 0; t < 100; ++t) {
            const Vec3 x = inc.z + (1.0 + 0.5 * std::abs(n(gen))) * random_unit(gen);
            const EH f = inc.eval(m, x);
            const CVec3 cE = fd_curl([&](const Vec3& p) { return inc.eval(m, p).E; }, x, h);
            const CVec3 cH = fd_curl([&](const Vec3& p) { return inc.eval(m, p).H; }, x, h);
            const double s = f.E.norm() + f.H.norm();
            CHECK((cE - I * k * f.H).norm() <= 1e-6 * s);
            CHECK((cH + I * k * f.E).norm() <= 1e-6 * s);
        }
    }
}

TEST_CASE("dipole: decay, zero moment and the vector identity")
{
    const cplx k(1.2, 0.0);
    const Vec3 z(0.3, -0.2, 0.1);
    const CVec3 p(1.0, cplx(0.0, 0.4), -0.5);
    const Vec3 xh = Vec3(1, 2, 2).normalized();
    double prev = 0.0;
    for (double r : {10.0, 100.0, 1000.0}) {
        const double v = r * electric_dipole(k, z, p, r * xh).E.norm();
        if (prev > 0.0) CHECK(std::abs(v / prev - 1.0) <= 0.1);
        prev = v;
    }
    CHECK(electric_dipole(k, z, CVec3::Zero(), Vec3(1, 1, 1)).E.norm() == 0.0);
    CHECK_THROWS_AS(electric_dipole(k, z, p, z), Error);

    // p . curl_z curl_z (a Phi(z, y)) = a . curl_y curl_y (p Phi(y, z))
    std::mt19937_64 gen(3);
    std::normal_distribution<double> n;
    for (int t = 0; t < 20; ++t) {
        const Vec3 zz(n(gen), n(gen), n(gen)), y(n(gen), n(gen), n(gen));
        const CVec3 a(cplx(n(gen), n(gen)), cplx(n(gen), n(gen)), cplx(n(gen), n(gen)));
        const cplx lhs = bdot(p, electric_dipole(k, y, a, zz).E);
        const cplx rhs = bdot(a, electric_dipole(k, zz, p, y).E);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));
    }
}

TEST_CASE("incident traces")
{
    const WaveNumbers m = two_layer();
    const Scene sc = make_scene(m, sphere(2, 10), sphere(1, 10), pi / 2);
    SUBCASE("plane wave: obstacle traces vanish, interface traces tangential")
    {
        const TraceData t = incident_traces(sc, IncidentField::plane(Vec3(0, 0, 1), CVec3(1, 0, 0)));
        for (const CVec3& v : t.T3) CHECK(v.norm() == 0.0);
        for (const CVec3& v : t.T4) CHECK(v.norm() == 0.0);
        for (int i = 0; i < sc.s0->size(); ++i) {
            const CVec3 n = to_c(sc.s0->nu[i]);
            CHECK(std::abs(bdot(n, t.T1[i])) <= 1e-10);
            CHECK(std::abs(bdot(n, t.T2[i])) <= 1e-10);
            const EH f = plane_wave(Vec3(0, 0, 1), CVec3(1, 0, 0), m.k0, sc.s0->x[i]);
            CHECK((t.T1[i] + cross(n, f.E)).norm() <= 1e-14);
        }
    }
    SUBCASE("layer dipole: T1 = +lambda_E nu x E, T3 and T4 on their parts")
    {
        const IncidentField inc = IncidentField::dipole(Vec3(0.2, 0.1, 1.5), CVec3(0, 1, 0), 1);
        const TraceData t = incident_traces(sc, inc);
        for (int i = 0; i < sc.s0->size(); ++i) {
            const CVec3 n = to_c(sc.s0->nu[i]);
            const EH f = inc.eval(m, sc.s0->x[i]);
            CHECK((t.T1[i] - m.lambda_E * cross(n, f.E)).norm() <= 1e-12 * (1.0 + f.E.norm()));
            CHECK((t.T2[i] - m.lambda_H * cross(n, f.H)).norm() <= 1e-12 * (1.0 + f.H.norm()));
        }
        for (int i = 0; i < sc.s1->size(); ++i) {
            const CVec3 n = to_c(sc.s1->nu[i]);
            const EH f = inc.eval(m, sc.s1->x[i]);
            const int label = sc.partition.labels[i];
            const CVec3 t3 = label == 1 ? CVec3(-cross(n, f.E)) : CVec3(CVec3::Zero());
            const CVec3 t4 = label == 2 ? CVec3(-cross(n, f.H) + (m.lambda_imp / m.k1) * cross(cross(n, f.E), n))
                                        : CVec3(CVec3::Zero());
            CHECK((t.T3[i] - t3).norm() <= 1e-12 * (1.0 + f.E.norm()));
            CHECK((t.T4[i] - t4).norm() <= 1e-12 * (1.0 + f.E.norm() + f.H.norm()));
            CHECK(std::abs(bdot(n, t.T3[i])) <= 1e-10);
            CHECK(std::abs(bdot(n, t.T4[i])) <= 1e-10);
        }
    }
    SUBCASE("dipoles in the wrong region or on a node are rejected")
    {
        CHECK_THROWS_AS(check_incident(sc, IncidentField::dipole(Vec3(0, 0, 1.5), CVec3(1, 0, 0), 0)), Error);
        CHECK_THROWS_AS(check_incident(sc, IncidentField::dipole(Vec3(0, 0, 3.0), CVec3(1, 0, 0), 1)), Error);
        CHECK_THROWS_AS(check_incident(sc, IncidentField::dipole(sc.s0->x[5], CVec3(1, 0, 0), 0)), Error);
        CHECK_NOTHROW(check_incident(sc, IncidentField::dipole(Vec3(0, 0, 3.0), CVec3(1, 0, 0), 0)));
    }
}
