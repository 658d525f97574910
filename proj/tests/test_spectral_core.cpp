#include "doctest.h"
#include "spectral_core.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace nslab;
using namespace nslab::testing;

TEST_CASE("grid validation rejects odd or tiny resolutions") {
    CHECK_THROWS_AS((SpectralGrid{1.0, 7}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((SpectralGrid{1.0, 2}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((SpectralGrid{-1.0, 8}).validate(), std::invalid_argument);
    CHECK_NOTHROW((SpectralGrid{2.0, 8}).validate());
}

TEST_CASE("coefficient convention matches the normalised Fourier integral") {
    SpectralGrid g{2.0, 16};
    // f = 3 + cos(2 pi x1 / L) has fhat(+-1,0,0) = 1/2 and fhat(0) = 3.
    const auto s = sample_grid(g, [&](const Vec3& x) { return 3.0 + std::cos(2 * kPi * x[0] / g.L); });
    const auto f = ScalarField::from_physical(g, s);
    CHECK(std::abs(f.c[0] - cplx(3.0, 0.0)) < 1e-14);
    CHECK(std::abs(f.c[1] - cplx(0.5, 0.0)) < 1e-14);
    // sin(2 pi x2 / L): fhat(0,1,0) = -i/2 sits in row i2 = 1.
    const auto s2 = sample_grid(g, [&](const Vec3& x) { return std::sin(2 * kPi * x[1] / g.L); });
    const auto h = ScalarField::from_physical(g, s2);
    CHECK(std::abs(h.c[std::size_t(1) * g.half()] - cplx(0.0, -0.5)) < 1e-14);
}

TEST_CASE("physical round trip and Hermitian symmetry") {
    SpectralGrid g{1.0, 16};
    const auto f = random_scalar(g, 7, 7);
    const auto phys = f.to_physical();
    const auto back = ScalarField::from_physical(g, phys);
    CHECK(coeff_diff(f, back) < 1e-13);
    // k1 = 0 plane: c(k2, k3) = conj c(-k2, -k3).
    const int N = g.N, H = g.half();
    double worst = 0.0;
    for (int i3 = 0; i3 < N; ++i3)
        for (int i2 = 0; i2 < N; ++i2) {
            const int j3 = (N - i3) % N, j2 = (N - i2) % N;
            const auto a = back.c[(std::size_t(i3) * N + i2) * H];
            const auto b = back.c[(std::size_t(j3) * N + j2) * H];
            worst = std::max(worst, std::abs(a - std::conj(b)));
        }
    CHECK(worst < 1e-14);
}

TEST_CASE("derivatives and Laplacian against closed forms") {
    SpectralGrid g{1.5, 16};
    const double a = 2 * kPi / g.L;
    const auto s = sample_grid(g, [&](const Vec3& x) { return std::sin(a * (2 * x[0] - x[1] + 3 * x[2])); });
    const auto f = ScalarField::from_physical(g, s);
    const auto d0 = derivative(f, 0).to_physical();
    const auto d2 = derivative(f, 2).to_physical();
    const auto lap = laplacian(f).to_physical();
    const auto e0 = sample_grid(g, [&](const Vec3& x) { return 2 * a * std::cos(a * (2 * x[0] - x[1] + 3 * x[2])); });
    const auto e2 = sample_grid(g, [&](const Vec3& x) { return 3 * a * std::cos(a * (2 * x[0] - x[1] + 3 * x[2])); });
    std::vector<double> el(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) el[i] = -14 * a * a * s[i];
    CHECK(max_abs_diff(d0, e0) < 1e-10);
    CHECK(max_abs_diff(d2, e2) < 1e-10);
    CHECK(max_abs_diff(lap, el) < 1e-9);
    CHECK_THROWS_AS(derivative(f, 3), std::invalid_argument);
}

TEST_CASE("inverse Laplacian inverts the Laplacian off the mean") {
    SpectralGrid g{1.0, 32};
    auto f = random_scalar(g, 11, 10);
    const auto back = laplacian(inverse_laplacian(f));
    auto expect = f;
    expect.c[0] = 0.0;
    CHECK(coeff_diff(back, expect) < 1e-10 * coeff_max(f));
    CHECK(inverse_laplacian(f).c[0] == cplx(0.0, 0.0));
    const auto again = inverse_laplacian(laplacian(f));
    CHECK(coeff_diff(again, expect) < 1e-10 * coeff_max(f));
}

TEST_CASE("Leray projection: idempotent, divergence-free, kills gradients") {
    SpectralGrid g{1.0, 32};
    const auto u = random_vector(g, 3, 10);
    const auto pu = leray_project(u);
    CHECK(coeff_diff(leray_project(pu), pu) < 1e-12);
    CHECK(coeff_max(divergence(pu)) < 1e-10);
    CHECK(std::abs(pu.comp[0].c[0] - u.comp[0].c[0]) == 0.0);
    const auto phi = random_scalar(g, 5, 10);
    const auto pg = leray_project(gradient(phi));
    double m = 0.0;
    for (int i = 0; i < 3; ++i) m = std::max(m, coeff_max(pg.comp[i]));
    CHECK(m < 1e-11);
    // Orthogonality: P u and (I - P) u are L^2-orthogonal mode by mode.
    const auto q = u - pu;
    double dot = 0.0;
    for_each_mode(g, [&](std::size_t idx, int, int, int, double w) {
        for (int i = 0; i < 3; ++i) dot += w * (pu.comp[i].c[idx] * std::conj(q.comp[i].c[idx])).real();
    });
    CHECK(std::abs(dot) < 1e-11);
}

TEST_CASE("Biot-Savart recovers a mean-zero divergence-free field from its curl") {
    SpectralGrid g{2.0, 32};
    const auto u = leray_project(random_vector(g, 9, 8, true));
    const auto back = biot_savart(curl(u));
    CHECK(coeff_diff(back, u) < 1e-12 * 100);
    VectorField w(g);
    w.comp[2].c[0] = 1.0;
    CHECK_THROWS_AS(biot_savart(w), std::invalid_argument);
}

TEST_CASE("heat semigroup: closed-form decay and semigroup law") {
    SpectralGrid g{1.0, 16};
    const auto s = sample_grid(g, [&](const Vec3& x) { return std::cos(2 * kPi * (x[0] + 2 * x[1])); });
    const auto f = ScalarField::from_physical(g, s);
    const double t = 0.01, eps = 1e-3;
    const double q = 4 * kPi * kPi * 5;
    const auto e = heat_semigroup(f, t, eps).to_physical();
    const double factor = std::exp(-t * (q + eps * q * q));
    std::vector<double> ex(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) ex[i] = factor * s[i];
    CHECK(max_abs_diff(e, ex) < 1e-14);
    const auto r = random_scalar(g, 2, 7);
    CHECK(coeff_diff(heat_semigroup(heat_semigroup(r, 0.002), 0.003), heat_semigroup(r, 0.005)) < 1e-15);
    CHECK_THROWS_AS(heat_semigroup(r, -1e-3), std::invalid_argument);
}

TEST_CASE("dealiased product keeps resolved modes and removes the rest") {
    SpectralGrid g{1.0, 32};
    const auto a = ScalarField::from_physical(g, sample_grid(g, [](const Vec3& x) { return std::sin(2 * kPi * 3 * x[0]); }));
    const auto b = ScalarField::from_physical(g, sample_grid(g, [](const Vec3& x) { return std::cos(2 * kPi * 4 * x[0]); }));
    // sin(6 pi x) cos(8 pi x) = (sin(14 pi x) - sin(2 pi x)) / 2; both modes are below N/3.
    const auto p = product(a, b).to_physical();
    const auto ex = sample_grid(g, [](const Vec3& x) { return 0.5 * (std::sin(2 * kPi * 7 * x[0]) - std::sin(2 * kPi * x[0])); });
    CHECK(max_abs_diff(p, ex) < 1e-13);
    // 9 + 4 = 13 > 32/3: the high mode is removed, the difference mode survives.
    const auto c = ScalarField::from_physical(g, sample_grid(g, [](const Vec3& x) { return std::cos(2 * kPi * 9 * x[0]); }));
    const auto q = product(c, b).to_physical();
    const auto eq = sample_grid(g, [](const Vec3& x) { return 0.5 * std::cos(2 * kPi * 5 * x[0]); });
    CHECK(max_abs_diff(q, eq) < 1e-13);
}

TEST_CASE("translation and point evaluation") {
    SpectralGrid g{1.0, 16};
    const auto f = random_scalar(g, 21, 5);
    const Vec3 x0{0.13, -0.4, 0.77};
    const auto tf = translate(f, x0);
    const Vec3 x{0.31, 0.52, 0.05};
    CHECK(std::abs(evaluate(tf, x) - evaluate(f, {x[0] - x0[0], x[1] - x0[1], x[2] - x0[2]})) < 1e-11);
    // Point evaluation agrees with the transform at grid nodes.
    const auto phys = f.to_physical();
    const double h = g.spacing();
    CHECK(std::abs(evaluate(f, {3 * h, 5 * h, 7 * h}) - phys[3 + 16 * (5 + 16 * 7)]) < 1e-11);
}

TEST_CASE("oversampled sup norm") {
    SpectralGrid g{1.0, 8};
    const auto f = ScalarField::from_physical(g, sample_grid(g, [](const Vec3& x) { return std::sin(2 * kPi * x[0]); }));
    CHECK(std::abs(sup_norm(f) - 1.0) < 1e-14);
    // Peak of cos(2 pi (3 x) + 0.4) falls between nodes; the oversampled value sits between the
    // coarse-grid max and the true max.
    const auto h = ScalarField::from_physical(g, sample_grid(g, [](const Vec3& x) { return std::cos(2 * kPi * 3 * x[0] + 0.4); }));
    const double coarse = max_abs(h.to_physical());
    CHECK(sup_norm(h) >= coarse - 1e-14);
    CHECK(sup_norm(h) <= 1.0 + 1e-14);
    VectorField u(g);
    u.comp[0] = f;
    u.comp[1] = f;
    CHECK(std::abs(sup_norm(u) - std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("Biot-Savart worked example and zero field") {
    SpectralGrid g{1.0, 16};
    VectorField w = sample_vector(g, [](const Vec3& x) { return Vec3{0.0, -2 * kPi * std::cos(2 * kPi * x[0]), 0.0}; });
    const auto u = biot_savart(w).to_physical();
    const auto ex = sample_grid(g, [](const Vec3& x) { return std::sin(2 * kPi * x[0]); });
    CHECK(max_abs(u[0]) < 1e-14);
    CHECK(max_abs(u[1]) < 1e-14);
    CHECK(max_abs_diff(u[2], ex) < 1e-13);
    CHECK(coeff_diff(biot_savart(VectorField(g)), VectorField(g)) == 0.0);
    const auto r = leray_project(random_vector(g, 4, 6, true));
    CHECK(coeff_diff(curl(biot_savart(curl(r))), curl(r)) < 1e-10);
}
