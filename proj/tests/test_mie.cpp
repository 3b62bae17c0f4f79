#include <cmath>

#include <Eigen/Geometry>

#include "support.hpp"

using namespace support;

namespace {

// j_l(z) = (1 / (2 i^l)) int_{-1}^{1} exp(i z t) P_l(t) dt, composite Simpson.
cplx j_integral(int l, cplx z, int n = 8000)
{
    const double h = 2.0 / n;
    cplx s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = -1.0 + i * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * std::exp(I * z * t) * std::legendre(l, t);
    }
    return s * h / 3.0 / (2.0 * std::pow(I, l));
}

// h_l(z) = (-i)^{l+1} exp(i z)/z sum_k (l+k)! / (k! (l-k)!) (i / (2z))^k
cplx h_closed(int l, cplx z)
{
    cplx sum = 0.0, term = 1.0;
    for (int k = 0; k <= l; ++k) {
        if (k > 0) term *= double(l + k) * double(l - k + 1) / double(k) * (I / (2.0 * z));
        sum += term;
    }
    return std::pow(-I, l + 1) * std::exp(I * z) / z * sum;
}

MieScene pec_scene(const WaveNumbers& m)
{
    MieScene s;
    s.media = m;
    return s;
}

double power(const MieSolution& ms)
{
    const FarFieldPattern p = sample_pattern([&](const Vec3& x) { return mie_far_field(ms, x); }, 40, 80);
    const double n = farfield_norm(p);
    return n * n;
}

// (4 pi / k) Im(conj(p) . E_inf(d)) with p = E^i(0) the incident amplitude.
double extinction(const MieSolution& ms, const Vec3& d, const CVec3& q)
{
    const double k = ms.scene.media.k0.real();
    const CVec3 amp = plane_wave(d, q, k, Vec3::Zero()).E;
    return 4.0 * pi / k * (amp.conjugate().transpose() * mie_far_field(ms, d))(0, 0).imag();
}

}  // namespace

TEST_CASE("spherical Bessel functions, real argument")
{
    std::vector<cplx> j, h;
    for (double x : {0.1, 1.0, 7.3, 30.0}) {
        spherical_bessel_j(40, x, j);
        spherical_hankel_h(20, x, h);
        for (int l = 0; l <= 40; ++l) {
            const double e = std::sph_bessel(l, x);
            if (std::abs(e) < 1e-250) continue;
            CAPTURE(x);
            CAPTURE(l);
            CHECK(std::abs(j[l] - e) <= 1e-12 * std::abs(e));
        }
        for (int l = 0; l <= 20; ++l) {
            const cplx e(std::sph_bessel(l, x), std::sph_neumann(l, x));
            CHECK(std::abs(h[l] - e) <= 1e-11 * std::abs(e));
        }
    }
    CHECK_THROWS_AS(spherical_bessel_j(3, 0.0, j), Error);
}

TEST_CASE("spherical Bessel functions, complex argument")
{
    std::vector<cplx> j, h;
    for (cplx z : {cplx(1.0, 0.5), cplx(2.0, 24.0), cplx(5.0, -3.0)}) {
        spherical_bessel_j(8, z, j);
        spherical_hankel_h(8, z, h);
        for (int l = 0; l <= 8; ++l) {
            CAPTURE(z);
            CAPTURE(l);
            const cplx ej = j_integral(l, z);
            // the integral cancels for small values; its floor scales with the integrand peak
            CHECK(std::abs(j[l] - ej) <= 1e-9 * std::abs(ej) + 1e-12 * std::exp(std::abs(z.imag())));
            const cplx eh = h_closed(l, z);
            CHECK(std::abs(h[l] - eh) <= 1e-12 * std::abs(eh));
        }
    }
}

TEST_CASE("homogeneous background: classical conducting-sphere coefficients")
{
    const MieSolution ms = mie_solve(pec_scene(homogeneous()), IncidentField::plane(Vec3(0, 0, 1), CVec3(1, 0, 0)));
    for (int l = 1; l <= ms.L; ++l) {
        const double x = 1.0;
        const double j = std::sph_bessel(l, x), y = std::sph_neumann(l, x);
        const double jm = std::sph_bessel(l - 1, x), ym = std::sph_neumann(l - 1, x);
        const cplx hh(j, y), dxh(jm - l * j / x, ym - l * y / x);  // (x h)' / x
        CAPTURE(l);
        // the series eliminates at the interface radius 2, which sets an absolute floor
        const double j2 = std::sph_bessel(l, 2.0), y2 = std::sph_neumann(l, 2.0);
        const double floor = 1e-14 * std::abs(j2 / cplx(j2, y2));
        CHECK(std::abs(ms.transfer_te[l] + j / hh) <= 1e-12 * std::abs(j / hh) + floor);
        const double dxj = jm - l * j / x;
        CHECK(std::abs(ms.transfer_tm[l] + dxj / dxh) <= 1e-12 * std::abs(dxj / dxh) + floor);
    }
    CHECK(ms.mode_residual <= 1e-12);
}

TEST_CASE("strongly absorbing layer hides the obstacle")
{
    const cplx k1(1.0, 12.0);
    const WaveNumbers m = direct_wavenumbers(1.0, k1, 1.0, 1.0 / k1);
    MieScene sc = pec_scene(m);
    const MieSolution ms = mie_solve(sc, IncidentField::plane(Vec3(0, 0, 1), CVec3(1, 0, 0)));
    sc.core = MieScene::Core::Impedance;
    sc.lambda = 2.0;
    const MieSolution mi = mie_solve(sc, IncidentField::plane(Vec3(0, 0, 1), CVec3(1, 0, 0)));
    // solid ball of radius 2 with wave number k1: 2 x 2 transmission system per degree
    const double x0 = 2.0;
    const cplx x1 = 2.0 * k1;
    for (int l = 1; l <= 8; ++l) {
        const double j0 = std::sph_bessel(l, x0), y0 = std::sph_neumann(l, x0);
        const cplx h0(j0, std::sph_neumann(l, x0));
        const double pj0 = std::sph_bessel(l - 1, x0) - l * j0 / x0;
        const cplx ph0(pj0, std::sph_neumann(l - 1, x0) - l * y0 / x0);
        const cplx j1 = j_integral(l, x1), pj1 = j_integral(l - 1, x1) - double(l) * j1 / x1;
        Eigen::Matrix2cd A;
        A << h0, -m.lambda_E * j1, ph0, -m.lambda_H * pj1;
        const cplx te = A.colPivHouseholderQr().solve(Eigen::Vector2cd(-j0, -pj0))(0);
        A << ph0, -m.lambda_E * pj1, h0, -m.lambda_H * j1;
        const cplx tm = A.colPivHouseholderQr().solve(Eigen::Vector2cd(-pj0, -j0))(0);
        CAPTURE(l);
        for (const MieSolution* s : {&ms, &mi}) {
            CHECK(std::abs(s->transfer_te[l] - te) <= 1e-6 * std::abs(te));
            CHECK(std::abs(s->transfer_tm[l] - tm) <= 1e-6 * std::abs(tm));
        }
    }
}

TEST_CASE("impedance core approaches the conducting core as lambda grows")
{
    const IncidentField inc = IncidentField::plane(Vec3(0.6, 0, 0.8), CVec3(0, 1, 0));
    MieScene sc = pec_scene(two_layer());
    const MieSolution pec = mie_solve(sc, inc);
    sc.core = MieScene::Core::Impedance;
    double prev = 1.0;
    for (double lam : {1e2, 1e4, 1e6}) {
        sc.lambda = lam;
        const MieSolution imp = mie_solve(sc, inc);
        const double d = farfield_distance(sample_pattern([&](const Vec3& x) { return mie_far_field(imp, x); }),
                                           sample_pattern([&](const Vec3& x) { return mie_far_field(pec, x); }));
        CHECK(d < prev);
        prev = d;
    }
    CHECK(prev <= 1e-3);
}

TEST_CASE("residual, truncation tail and tangentiality")
{
    const IncidentField inc = IncidentField::plane(Vec3(0.6, 0, 0.8), CVec3(0, 1, I));
    for (double theta : {0.0, 1.0}) {
        MieScene sc = pec_scene(two_layer(1.5));
        if (theta > 0.0) sc.core = MieScene::Core::Impedance, sc.lambda = 1.5;
        const MieSolution a = mie_solve(sc, inc);
        CHECK(a.mode_residual <= 1e-12);
        CHECK(a.tail <= 1e-10);
        sc.L = a.L + 5;
        const MieSolution b = mie_solve(sc, inc);
        const FarFieldPattern pa = sample_pattern([&](const Vec3& x) { return mie_far_field(a, x); });
        const FarFieldPattern pb = sample_pattern([&](const Vec3& x) { return mie_far_field(b, x); });
        CHECK(farfield_distance(pa, pb) <= 1e-10);
        CHECK(farfield_tangentiality(pa) <= 1e-12);
    }
}

TEST_CASE("rotation equivariance of the series solution")
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const Mat3 Q = random_rotation(seed);
        CHECK(oracle_equivariance(pec_scene(two_layer()), Q, Vec3(0, 0, 1), CVec3(1, 0, 0)) <= 1e-10);
    }
}

TEST_CASE("optical theorem: power balance")
{
    const Vec3 d(0.6, 0.0, 0.8);
    const CVec3 q(0.0, 1.0, 0.0);
    const IncidentField inc = IncidentField::plane(d, q);
    SUBCASE("lossless layer: scattered power equals extinction")
    {
        for (bool pec : {true, false}) {
            MieScene sc = pec_scene(two_layer(1.3));
            if (!pec) sc.core = MieScene::Core::Impedance, sc.lambda = 1.3;
            const MieSolution ms = mie_solve(sc, inc);
            if (pec) {
                CHECK(std::abs(power(ms) - extinction(ms, d, q)) <= 1e-10 * power(ms));
            } else {
                // the impedance core absorbs
                CHECK(power(ms) < extinction(ms, d, q));
            }
            CHECK(power(ms) > 0.0);
        }
    }
    SUBCASE("lossy layer absorbs")
    {
        const cplx k1(1.272019649514069, 0.7861513777574233);
        const MieSolution ms = mie_solve(pec_scene(direct_wavenumbers(1.0, k1, 1.0 / k1, 1.0)), inc);
        CHECK(power(ms) > 0.0);
        CHECK(power(ms) < extinction(ms, d, q));
    }
}

TEST_CASE("invalid series problems are rejected")
{
    MieScene sc = pec_scene(two_layer());
    sc.L = 5;  // below ceil(k0 r0) + 10
    CHECK_THROWS_AS(mie_solve(sc, IncidentField::plane(Vec3(0, 0, 1), CVec3(1, 0, 0))), Error);
    sc = pec_scene(two_layer());
    sc.r1 = 2.5;
    CHECK_THROWS_AS(mie_solve(sc, IncidentField::plane(Vec3(0, 0, 1), CVec3(1, 0, 0))), Error);
    sc = pec_scene(two_layer());
    CHECK_THROWS_AS(mie_solve(sc, IncidentField::dipole(Vec3(0, 0, 3), CVec3(1, 0, 0), 0)), Error);
    const MieSolution ms = mie_solve(sc, IncidentField::plane(Vec3(0, 0, 1), CVec3(1, 0, 0)));
    CHECK_THROWS_AS(mie_far_field(ms, Vec3(0, 0, 2)), Error);
}
