#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "qbattery/energetics.hpp"
#include "qbattery/error.hpp"

using namespace qbattery;

namespace {

constexpr double pi = std::numbers::pi;

ModelPair pair_of(ModelKind k, int N, int n, double pb, double pc) {
    return make_pair(k, N, n, {pb, pc, Beta::infinite()});
}

// Straight transcription of the closed-form energy, no guards, no folding.
double naive_energy(const ModelPair& p, Beta beta, double tau) {
    const auto b = coefficients(p.battery, Summation::Direct);
    const auto c = coefficients(p.charger, Summation::Direct);
    double sum = 0.0;
    const double N = static_cast<double>(b.size());
    for (std::size_t q = 0; q < b.size(); ++q) {
        const double eps = std::sqrt(b.a[q] * b.a[q] + b.c[q] * b.c[q]);
        const double om = std::sqrt(c.a[q] * c.a[q] + c.c[q] * c.c[q]);
        const double cross = b.c[q] * c.a[q] - b.a[q] * c.c[q];
        const double th = beta.is_infinite() ? 1.0 : std::tanh(beta.value() * eps / 2.0);
        sum += (1.0 - std::cos(2.0 * om * tau)) / (2.0 * N * eps * om * om) * cross * cross * th;
    }
    return sum;
}

}  // namespace

TEST_CASE("beta parsing") {
    CHECK(Beta::parse("inf").is_infinite());
    CHECK(Beta::parse("1").value() == 1.0);
    CHECK(Beta::parse("0.25").to_string() == "0.25");
    CHECK_THROWS_AS((Beta::parse("-1")), Error);
    CHECK_THROWS_AS((Beta::parse("warm")), Error);
    CHECK_THROWS_AS((Beta::infinite().value()), Error);
}

TEST_CASE("mismatched battery and charger are rejected") {
    ModelPair p{{ModelKind::H1, 8, 2, 0.0}, {ModelKind::H1, 8, 3, 1.0}};
    try {
        stored_energy(p, Beta::infinite(), 1.0);
        FAIL("expected invalid-pair");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidPair);
    }
    ModelPair q{{ModelKind::H1, 8, 2, 0.0}, {ModelKind::H2, 8, 2, 1.0}};
    CHECK_THROWS_AS((stored_energy(q, Beta::infinite(), 1.0)), Error);
}

TEST_CASE("trivial limits are exact zeros") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(-pi, pi);
    std::uniform_real_distribution<double> time(0.01, 30.0);
    for (int i = 0; i < 50; ++i) {
        const auto kind = i % 2 ? ModelKind::H1 : ModelKind::H2;
        const double pb = angle(rng);
        const auto p = pair_of(kind, 40, 7, pb, angle(rng));
        CHECK(stored_energy(p, Beta::infinite(), 0.0) == 0.0);
        CHECK(stored_energy(p, Beta::finite(0.0), time(rng)) == 0.0);
        CHECK(stored_energy(pair_of(kind, 40, 7, pb, pb), Beta::finite(2.0), time(rng)) == 0.0);
        CHECK(charging_power(pair_of(kind, 40, 7, pb, pb), Beta::infinite(), 2.0) == 0.0);
    }
}

TEST_CASE("power at tau = 1 equals energy; tau <= 0 is a domain error") {
    const auto p = pair_of(ModelKind::H2, 36, 15, 0.0, pi / 2 - 0.3);
    CHECK(charging_power(p, Beta::infinite(), 1.0) == stored_energy(p, Beta::infinite(), 1.0));
    CHECK(charging_power(p, Beta::infinite(), 4.0) == stored_energy(p, Beta::infinite(), 4.0) / 4.0);
    try {
        charging_power(p, Beta::infinite(), 0.0);
        FAIL("expected domain error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Domain);
    }
    CHECK_THROWS_AS((charging_power(p, Beta::infinite(), -1.0)), Error);
    CHECK_THROWS_AS((stored_energy(p, Beta::infinite(), -1.0)), Error);
}

TEST_CASE("H1 N=8 n=2 against exact diagonalization fixtures") {
    // Frozen from tests/fixtures/generate_oracle_reference.py (numpy ED).
    const auto p = pair_of(ModelKind::H1, 8, 2, 0.0, pi / 3);
    CHECK(std::abs(stored_energy(p, Beta::infinite(), 1.0) - 0.2680426965354008) <= 1e-8);
    CHECK(std::abs(charging_power(p, Beta::infinite(), 1.0) - 0.2680426965354008) <= 1e-8);
    CHECK(std::abs(stored_energy(p, Beta::finite(1.0), 0.3) - 0.015135171837706627) <= 1e-8);
    CHECK(std::abs(stored_energy(p, Beta::infinite(), 2.5) - 0.3090259301626259) <= 1e-8);
}

TEST_CASE("agrees with the naive transcription away from singular modes") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(-1.4, 1.4);
    for (int i = 0; i < 40; ++i) {
        const auto kind = i % 2 ? ModelKind::H1 : ModelKind::H2;
        const auto p = pair_of(kind, 25 + i, 1 + i % 9, angle(rng), angle(rng));
        const Beta beta = i % 3 ? Beta::infinite() : Beta::finite(0.7);
        for (double tau : {0.5, 3.0, 11.0}) {
            const double ref = naive_energy(p, beta, tau);
            if (!std::isfinite(ref)) continue;
            CHECK(stored_energy(p, beta, tau) == doctest::Approx(ref).epsilon(1e-11));
        }
    }
}

TEST_CASE("nonnegativity and the Cauchy-Schwarz upper bound") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> angle(-pi, pi);
    std::uniform_real_distribution<double> time(0.0, 50.0);
    std::uniform_real_distribution<double> inv_t(0.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        const int N = 2 + static_cast<int>(rng() % 120);
        const int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(N - 1));
        const auto p = pair_of(i % 2 ? ModelKind::H1 : ModelKind::H2, N, n, angle(rng), angle(rng));
        const Beta beta = i % 4 == 0 ? Beta::infinite() : Beta::finite(inv_t(rng));
        const double e = stored_energy(p, beta, time(rng));
        CHECK(e >= 0.0);
        CHECK(e <= energy_upper_bound(p, beta) * (1.0 + 1e-12) + 1e-15);
    }
}

TEST_CASE("folding q <-> N-q reproduces the full sum") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int N : {2, 3, 8, 9, 64, 101, 500}) {
        for (auto kind : {ModelKind::H1, ModelKind::H2}) {
            const int n = std::max(1, N / 3);
            const auto p = pair_of(kind, N, n, angle(rng), angle(rng));
            for (Beta beta : {Beta::infinite(), Beta::finite(1.0)}) {
                const ChargingModes full(p, beta, ChargingModes::Range::Full);
                const ChargingModes folded(p, beta, ChargingModes::Range::Folded);
                for (double tau : {0.4, 2.0, 17.0}) {
                    const double a = full.energy(tau);
                    const double b = folded.energy(tau);
                    CHECK(std::abs(a - b) <= 1e-12 * std::abs(a) + 1e-300);
                }
            }
        }
    }
}

TEST_CASE("gapless modes are removable singularities") {
    // phi = pi/4 closes the H1 gap at phase 0 (q = 0 and multiples of N/(n+1)).
    const double gapless = pi / 4;
    for (Beta beta : {Beta::infinite(), Beta::finite(2.0)}) {
        const auto charger_gapless = pair_of(ModelKind::H1, 12, 2, 0.3, gapless);
        const auto battery_gapless = pair_of(ModelKind::H1, 12, 2, gapless, 0.3);
        for (double tau : {0.5, 5.0}) {
            const double e1 = stored_energy(charger_gapless, beta, tau);
            const double e2 = stored_energy(battery_gapless, beta, tau);
            CHECK(std::isfinite(e1));
            CHECK(std::isfinite(e2));
            CHECK(e1 >= 0.0);
            CHECK(e2 >= 0.0);
        }
    }
    const ChargingModes modes(pair_of(ModelKind::H1, 12, 2, gapless, 0.3), Beta::finite(1.0));
    // q = 0 and q = 4, 8 have (n+1) q = 0 mod 12
    CHECK(modes.amplitude()[0] == 0.0);
    CHECK(modes.amplitude()[4] == 0.0);
}

TEST_CASE("energy curve") {
    const auto same = pair_of(ModelKind::H1, 20, 3, 0.5, 0.5);
    const std::vector<double> grid{1.0, 2.0, 3.0};
    const auto c0 = energy_curve(same, Beta::infinite(), grid);
    for (double e : c0.energy) CHECK(e == 0.0);

    const auto p = pair_of(ModelKind::H2, 36, 15, 0.0, pi / 2 - 0.3);
    const std::vector<double> single{2.75};
    const auto c1 = energy_curve(p, Beta::infinite(), single);
    CHECK(c1.energy[0] == stored_energy(p, Beta::infinite(), 2.75));
    CHECK(c1.power[0] == c1.energy[0] / 2.75);

    const auto tau = uniform_tau_grid(20.0, 400);
    CHECK(tau.front() == doctest::Approx(0.05));
    CHECK(tau.back() == 20.0);
    const auto curve = energy_curve(p, Beta::infinite(), tau);
    REQUIRE(curve.energy.size() == 400);
    for (std::size_t i = 0; i < tau.size(); ++i) {
        CHECK(curve.power[i] == curve.energy[i] / curve.tau[i]);
    }
    // Rises from zero like tau^2, then oscillates: not monotone over (0, 20].
    CHECK(curve.energy[1] / curve.energy[0] == doctest::Approx(4.0).epsilon(0.01));
    bool decreases = false;
    for (std::size_t i = 1; i < tau.size(); ++i) decreases |= curve.energy[i] < curve.energy[i - 1];
    CHECK(decreases);

    for (const std::vector<double>& bad :
         {std::vector<double>{}, {1.0, 1.0}, {2.0, 1.0}, {0.0, 1.0}, {-1.0}}) {
        try {
            energy_curve(p, Beta::infinite(), bad);
            FAIL("expected invalid-grid");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidGrid);
        }
    }
}

TEST_CASE("small-tau behaviour: E ~ tau^2, P -> 0") {
    const auto p = pair_of(ModelKind::H1, 50, 4, 0.1, 1.2);
    const double e1 = stored_energy(p, Beta::infinite(), 1e-4);
    const double e2 = stored_energy(p, Beta::infinite(), 2e-4);
    CHECK(e2 / e1 == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(charging_power(p, Beta::infinite(), 1e-8) < 1e-7);
}
