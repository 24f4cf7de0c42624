#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qbattery/error.hpp"
#include "qbattery/model.hpp"

using namespace qbattery;

namespace {

constexpr double pi = std::numbers::pi;

// Textbook transcription of the H2 p-sum, no phase reduction.
std::pair<double, double> h2_reference(int N, int n, double phi, long q) {
    double sa = 0.0, sc = 0.0;
    for (int p = 1; p <= n; ++p) {
        sa += std::cos(2.0 * pi / N * (p + 1) * q);
        sc += std::sin(2.0 * pi / N * (p + 1) * q);
    }
    return {sa / n * std::cos(phi) - std::sin(phi), -sc / n * std::cos(phi)};
}

}  // namespace

TEST_CASE("model spec validation") {
    CHECK_NOTHROW(ModelSpec{ModelKind::H1, 2, 1, 0.0}.validate());
    CHECK_THROWS_AS((ModelSpec{ModelKind::H1, 1, 1, 0.0}.validate()), Error);
    CHECK_THROWS_AS((ModelSpec{ModelKind::H2, 8, 8, 0.0}.validate()), Error);
    CHECK_THROWS_AS((ModelSpec{ModelKind::H2, 8, 0, 0.0}.validate()), Error);
    try {
        coefficients({ModelKind::H1, 5, 7, 0.1});
        FAIL("expected invalid-spec");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidSpec);
    }
}

TEST_CASE("H1 coefficients at phi = pi/2 are (-1, 0)") {
    for (auto kind : {ModelKind::H1, ModelKind::H2}) {
        const auto bdg = coefficients({kind, 13, 4, pi / 2});
        const auto eps = dispersion(bdg).eps;
        for (std::size_t q = 0; q < bdg.size(); ++q) {
            CHECK(bdg.a[q] == doctest::Approx(-1.0).epsilon(1e-15));
            CHECK(std::abs(bdg.c[q]) < 1e-16);
            CHECK(eps[q] == doctest::Approx(1.0).epsilon(1e-15));
        }
    }
}

TEST_CASE("q = 0 mode") {
    for (double phi : {-2.0, 0.0, 0.3, 1.7}) {
        const auto bdg = coefficients({ModelKind::H1, 9, 3, phi});
        CHECK(bdg.a[0] == std::cos(phi) - std::sin(phi));
        CHECK(bdg.c[0] == 0.0);
        auto closed = mode_coefficients({ModelKind::H2, 9, 3, phi}, 0, Summation::Closed);
        CHECK(closed.first == doctest::Approx(std::cos(phi) - std::sin(phi)).epsilon(1e-15));
        CHECK(closed.second == 0.0);
    }
}

TEST_CASE("H1 matches the defining expression bit for bit") {
    const ModelSpec s{ModelKind::H1, 11, 3, 0.77};
    const auto bdg = coefficients(s);
    for (int q = 0; q < s.N; ++q) {
        // (n+1) q < N here, so no modular reduction is involved
        if ((s.n + 1) * q >= s.N) continue;
        const double x = 2.0 * pi * static_cast<double>((s.n + 1) * q) / s.N;
        CHECK(bdg.a[static_cast<std::size_t>(q)] == std::cos(x) * std::cos(s.phi) - std::sin(s.phi));
        CHECK(bdg.c[static_cast<std::size_t>(q)] == -std::sin(x) * std::cos(s.phi));
    }
}

TEST_CASE("H2 with n = 1 equals H1 with n = 1") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int N : {2, 3, 8, 50, 201}) {
        const double phi = angle(rng);
        const auto h1 = coefficients({ModelKind::H1, N, 1, phi});
        for (auto how : {Summation::Direct, Summation::Closed}) {
            const auto h2 = coefficients({ModelKind::H2, N, 1, phi}, how);
            for (std::size_t q = 0; q < h1.size(); ++q) {
                CHECK(std::abs(h1.a[q] - h2.a[q]) <= 1e-15);
                CHECK(std::abs(h1.c[q] - h2.c[q]) <= 1e-15);
            }
        }
    }
}

TEST_CASE("H2 N=12 n=3 phi=0.3 q=1 against the direct p-sum") {
    // Frozen from an independent double-precision evaluation of the p-sum.
    const double a_ref = -0.2955202066613394;
    const double c_ref = -0.8700092755385426;
    const ModelSpec s{ModelKind::H2, 12, 3, 0.3};
    for (auto how : {Summation::Direct, Summation::Closed, Summation::Auto}) {
        auto [a, c] = mode_coefficients(s, 1, how);
        CHECK(std::abs(a - a_ref) <= 1e-12);
        CHECK(std::abs(c - c_ref) <= 1e-12);
    }
}

TEST_CASE("H1 N=8 n=2 phi=0.4 q=3 dispersion") {
    const auto bdg = coefficients({ModelKind::H1, 8, 2, 0.4});
    CHECK(std::abs(bdg.a[3] - 0.26187013243721163) <= 1e-15);
    CHECK(std::abs(bdg.c[3] - -0.6512884747458618) <= 1e-15);
    CHECK(std::abs(dispersion(bdg).eps[3] - 0.7019634204141081) <= 1e-15);
}

TEST_CASE("dispersion of a zero vector is zero") {
    BdgCoefficients z{{0.0, 3.0}, {0.0, -4.0}};
    const auto eps = dispersion(z).eps;
    CHECK(eps[0] == 0.0);
    CHECK(eps[1] == 5.0);
}

TEST_CASE("closed form matches direct sum for all n < N <= 400") {
    // Exhaustive on a coarse N lattice, every n and q.
    double worst = 0.0;
    for (int N = 2; N <= 400; N += (N < 40 ? 1 : 37)) {
        for (int n = 1; n < N; ++n) {
            const ModelSpec s{ModelKind::H2, N, n, 0.61};
            const auto d = coefficients(s, Summation::Direct);
            const auto c = coefficients(s, Summation::Closed);
            for (std::size_t q = 0; q < d.size(); ++q) {
                worst = std::max(worst, std::abs(d.a[q] - c.a[q]));
                worst = std::max(worst, std::abs(d.c[q] - c.c[q]));
            }
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("direct sum agrees with an unreduced transcription") {
    for (auto [N, n] : {std::pair{12, 3}, {37, 11}, {100, 7}}) {
        const ModelSpec s{ModelKind::H2, N, n, -0.9};
        const auto d = coefficients(s, Summation::Direct);
        for (int q = 0; q < N; ++q) {
            auto [a, c] = h2_reference(N, n, s.phi, q);
            CHECK(std::abs(d.a[static_cast<std::size_t>(q)] - a) <= 1e-12);
            CHECK(std::abs(d.c[static_cast<std::size_t>(q)] - c) <= 1e-12);
        }
    }
}

TEST_CASE("periodicity in q and reflection symmetry") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> size(2, 300);
    std::uniform_real_distribution<double> angle(-4.0, 4.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int N = size(rng);
        const int n = std::uniform_int_distribution<int>(1, N - 1)(rng);
        const ModelSpec s{trial % 2 ? ModelKind::H1 : ModelKind::H2, N, n, angle(rng)};
        const auto bdg = coefficients(s);
        const auto eps = dispersion(bdg).eps;
        for (int q = 0; q < N; ++q) {
            const auto uq = static_cast<std::size_t>(q);
            auto [a_shift, c_shift] = mode_coefficients(s, q + N);
            CHECK(std::abs(a_shift - bdg.a[uq]) <= 1e-12);
            CHECK(std::abs(c_shift - bdg.c[uq]) <= 1e-12);
            const auto r = static_cast<std::size_t>((N - q) % N);
            CHECK(std::abs(bdg.a[uq] - bdg.a[r]) <= 1e-12);
            CHECK(std::abs(bdg.c[uq] + bdg.c[r]) <= 1e-12);
            CHECK(std::abs(eps[uq] - eps[r]) <= 1e-12);
        }
    }
}

TEST_CASE("phi = 0 is a pure cluster term with unit H1 dispersion") {
    const auto eps = dispersion(coefficients({ModelKind::H1, 30, 6, 0.0})).eps;
    for (double e : eps) CHECK(e == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("phase reduction keeps precision for large N") {
    const int N = 1'000'000;
    const int n = 999'983;
    const ModelSpec s{ModelKind::H1, N, n, 0.2};
    // (n+1) q mod N == (q * 999984) mod N == N - 16 q for small q
    for (long q : {1L, 3L, 17L}) {
        auto [a, c] = mode_coefficients(s, q);
        const double x = 2.0 * pi * static_cast<double>(N - 16 * q) / N;
        CHECK(std::abs(a - (std::cos(x) * std::cos(0.2) - std::sin(0.2))) <= 1e-15);
        CHECK(std::abs(c + std::sin(x) * std::cos(0.2)) <= 1e-15);
    }
}
