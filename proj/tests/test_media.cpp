#include <cmath>
#include <complex>

#include "support.hpp"

using namespace support;

TEST_CASE("homogeneous parameters give unit constants")
{
    const WaveNumbers w = derive_wavenumbers(MediumParams{}, MediumParams{});
    CHECK(std::abs(w.k0 - 1.0) < 1e-15);
    CHECK(std::abs(w.k1 - 1.0) < 1e-15);
    CHECK(std::abs(w.lambda_E - 1.0) < 1e-15);
    CHECK(std::abs(w.lambda_H - 1.0) < 1e-15);
}

TEST_CASE("dielectric layer: k1 = 2, lambda_E = 1/2")
{
    MediumParams inner;
    inner.epsilon = 4.0;
    const WaveNumbers w = derive_wavenumbers(MediumParams{}, inner);
    CHECK(std::abs(w.k1 - 2.0) < 1e-15);
    CHECK(std::abs(w.lambda_E - 0.5) < 1e-15);
    CHECK(std::abs(w.lambda_H - 1.0) < 1e-15);
    CHECK(std::abs(w.lambda_E * w.lambda_H - 0.5) < 1e-15);
}

TEST_CASE("conducting layer: k1 = sqrt(1 + 2i) and the lambda identity")
{
    MediumParams inner;
    inner.sigma = 2.0;
    const WaveNumbers w = derive_wavenumbers(MediumParams{}, inner);
    // independent: sqrt(1 + 2i) = sqrt((|z| + 1)/2) + i sqrt((|z| - 1)/2)
    const double r = std::sqrt(5.0);
    const cplx expect(std::sqrt((r + 1.0) / 2.0), std::sqrt((r - 1.0) / 2.0));
    CHECK(std::abs(w.k1 - expect) < 1e-14);
    CHECK(w.k1.real() > 0.0);
    CHECK(w.k1.imag() > 0.0);
    CHECK(std::abs(w.lambda_E * w.lambda_H - w.k0 / w.k1) <= 1e-12 * std::abs(w.k0 / w.k1));
}

TEST_CASE("lambda identity over a parameter sweep")
{
    for (double eps : {0.5, 1.0, 3.0})
        for (double mu : {0.7, 1.0, 2.0})
            for (double sigma : {0.0, 0.1, 5.0})
                for (double omega : {0.3, 1.0, 4.0}) {
                    MediumParams outer{1.3, 0.9, 0.0, omega}, inner{eps, mu, sigma, omega};
                    const WaveNumbers w = derive_wavenumbers(outer, inner);
                    CHECK(w.identity_residual() <= 1e-12);
                    CHECK(w.k1.real() > 0.0);
                    CHECK(w.k1.imag() >= 0.0);
                    CHECK(w.k0.imag() == 0.0);
                }
}

TEST_CASE("lossless scaling: omega times s scales k by s")
{
    MediumParams outer{2.0, 1.5, 0.0, 1.0}, inner{3.0, 0.5, 0.0, 1.0};
    const WaveNumbers a = derive_wavenumbers(outer, inner);
    outer.omega = inner.omega = 2.5;
    const WaveNumbers b = derive_wavenumbers(outer, inner);
    CHECK(std::abs(b.k0 - 2.5 * a.k0) < 1e-13);
    CHECK(std::abs(b.k1 - 2.5 * a.k1) < 1e-13);
}

TEST_CASE("invalid media are rejected")
{
    MediumParams bad;
    bad.epsilon = -1.0;
    CHECK_THROWS_AS(derive_wavenumbers(bad, MediumParams{}), Error);
    MediumParams lossy;
    lossy.sigma = 1.0;
    CHECK_THROWS_AS(derive_wavenumbers(lossy, MediumParams{}), Error);  // exterior must be lossless
    CHECK_THROWS_AS(direct_wavenumbers(1.0, 2.0, 1.0, 1.0), Error);    // lambda_E lambda_H != k0/k1
    CHECK_THROWS_AS(direct_wavenumbers(cplx(1.0, 0.1), 1.0, 1.0, 1.0), Error);
    CHECK_THROWS_AS(direct_wavenumbers(1.0, cplx(1.0, -0.1), 1.0, 1.0), Error);
    CHECK_NOTHROW(direct_wavenumbers(1.0, 2.0, 0.5, 1.0));
}

TEST_CASE("branch choice of the wave number square root")
{
    const cplx s = wave_sqrt(cplx(-3.0, 4.0));
    CHECK(s.real() > 0.0);
    CHECK(s.imag() >= 0.0);
    CHECK(std::abs(s * s - cplx(-3.0, 4.0)) < 1e-14);
}

TEST_CASE("scene validation")
{
    const WaveNumbers w = two_layer();
    SUBCASE("concentric spheres are valid")
    {
        const Scene s = make_scene(w, sphere(2, 12), sphere(1, 12), pi);
        const SceneDiagnostics d = validate_scene(s);
        CHECK(d.ok());
        CHECK(d.nested);
        CHECK(d.covered);
        CHECK(d.min_separation > 0.9);
        CHECK(d.identity_residual < 1e-12);
        CHECK(s.partition.all_pec());
    }
    SUBCASE("obstacle outside the interface")
    {
        const Scene s = make_scene(w, sphere(2, 12), sphere(3, 12), pi);
        const SceneDiagnostics d = validate_scene(s);
        CHECK_FALSE(d.ok());
        CHECK_FALSE(d.nested);
        CHECK_THROWS_AS(require_valid(s), Error);
    }
    SUBCASE("partition covering half the nodes")
    {
        Scene s = make_scene(w, sphere(2, 12), sphere(1, 12), pi);
        for (std::size_t i = 0; i < s.partition.labels.size(); i += 2) s.partition.labels[i] = 0;
        const SceneDiagnostics d = validate_scene(s);
        CHECK_FALSE(d.covered);
        CHECK(d.unassigned == static_cast<int>(s.partition.labels.size() / 2));
        CHECK_THROWS_AS(require_valid(s), Error);
    }
    SUBCASE("cap partition thresholds")
    {
        CHECK(make_scene(w, sphere(2, 12), sphere(1, 12), 0.0).partition.all_impedance());
        const Scene s = make_scene(w, sphere(2, 12), sphere(1, 12), pi / 2);
        CHECK(s.partition.mixed());
        for (int i = 0; i < s.s1->size(); ++i)
            CHECK(s.partition.labels[i] == (s.s1->yhat[i].z() > 0.0 ? 1 : 2));
    }
}
