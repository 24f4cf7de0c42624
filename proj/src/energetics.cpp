#include "qbattery/energetics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "qbattery/detail/compensated_sum.hpp"
#include "qbattery/error.hpp"

namespace qbattery {

Beta Beta::finite(double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw Error(ErrorKind::InvalidSpec, "beta must be a nonnegative real or inf");
    }
    return Beta(value);
}

Beta Beta::parse(std::string_view text) {
    if (text == "inf" || text == "INF" || text == "infinite" || text == "infinity") {
        return infinite();
    }
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw Error(ErrorKind::InvalidSpec, "cannot parse beta '" + std::string(text) + "'");
    }
    return finite(v);
}

double Beta::value() const {
    if (!value_) throw Error(ErrorKind::Domain, "beta is infinite");
    return *value_;
}

std::string Beta::to_string() const {
    if (!value_) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *value_);
    return buf;
}

void ModelPair::validate() const {
    battery.validate();
    charger.validate();
    if (battery.kind != charger.kind || battery.N != charger.N || battery.n != charger.n) {
        throw Error(ErrorKind::InvalidPair,
                    "battery and charger must share model kind, N and n");
    }
}

ModelPair make_pair(ModelKind kind, int N, int n, const QuenchSpec& quench) {
    ModelPair pair{{kind, N, n, quench.phi_b}, {kind, N, n, quench.phi_c}};
    pair.validate();
    return pair;
}

ChargingModes::ChargingModes(const ModelPair& pair, Beta beta, Range range, Summation how) {
    pair.validate();
    const auto battery = coefficients(pair.battery, how);
    const auto charger = coefficients(pair.charger, how);
    const auto eps = dispersion(battery).eps;
    const auto omega = dispersion(charger).eps;
    const std::size_t N = battery.size();
    spins_ = N;

    const std::size_t last = range == Range::Full ? N - 1 : N / 2;
    omega_.reserve(last + 1);
    amplitude_.reserve(last + 1);
    min_omega_ = std::numeric_limits<double>::infinity();
    max_omega_ = 0.0;
    for (std::size_t q = 0; q < N; ++q) {
        if (omega[q] >= kModeCutoff) min_omega_ = std::min(min_omega_, omega[q]);
        max_omega_ = std::max(max_omega_, omega[q]);
    }
    if (!std::isfinite(min_omega_)) min_omega_ = 0.0;

    for (std::size_t q = 0; q <= last; ++q) {
        const double w = omega[q];
        const double e = eps[q];
        double amp = 0.0;
        if (w >= kModeCutoff) {
            const double cross = battery.c[q] * charger.a[q] - battery.a[q] * charger.c[q];
            // tanh(beta eps/2)/eps, with its eps -> 0 limit beta/2
            double thermal = 0.0;
            if (beta.is_infinite()) {
                thermal = e >= kModeCutoff ? 1.0 / e : 0.0;
            } else if (e >= kModeCutoff) {
                thermal = std::tanh(beta.value() * e / 2.0) / e;
            } else {
                thermal = beta.value() / 2.0;
            }
            amp = cross * cross / (2.0 * static_cast<double>(N) * w * w) * thermal;
        }
        if (range == Range::Folded && q != 0 && 2 * q != N) amp *= 2.0;
        omega_.push_back(w);
        amplitude_.push_back(amp);
    }
}

double ChargingModes::energy(double tau) const {
    detail::CompensatedSum<double> sum;
    for (std::size_t q = 0; q < omega_.size(); ++q) {
        if (amplitude_[q] == 0.0) continue;
        // 1 - cos(2 w tau) == 2 sin^2(w tau), exact zero at tau = 0
        const double s = std::sin(omega_[q] * tau);
        sum.add(amplitude_[q] * 2.0 * s * s);
    }
    return sum.value();
}

long double ChargingModes::energy_extended(long double tau) const {
    detail::CompensatedSum<long double> sum;
    for (std::size_t q = 0; q < omega_.size(); ++q) {
        if (amplitude_[q] == 0.0) continue;
        const long double s = std::sin(static_cast<long double>(omega_[q]) * tau);
        sum.add(static_cast<long double>(amplitude_[q]) * 2.0L * s * s);
    }
    return sum.value();
}

double stored_energy(const ModelPair& pair, Beta beta, double tau) {
    if (!(tau >= 0.0)) throw Error(ErrorKind::Domain, "charging time must be >= 0");
    return ChargingModes(pair, beta).energy(tau);
}

double stored_energy(const ModelSpec& chain, const QuenchSpec& quench, double tau) {
    return stored_energy(make_pair(chain.kind, chain.N, chain.n, quench), quench.beta, tau);
}

double charging_power(const ModelPair& pair, Beta beta, double tau) {
    if (!(tau > 0.0)) throw Error(ErrorKind::Domain, "charging time must be > 0");
    return stored_energy(pair, beta, tau) / tau;
}

double charging_power(const ModelSpec& chain, const QuenchSpec& quench, double tau) {
    return charging_power(make_pair(chain.kind, chain.N, chain.n, quench), quench.beta, tau);
}

double energy_upper_bound(const ModelPair& pair, Beta beta) {
    pair.validate();
    const auto eps = dispersion(coefficients(pair.battery)).eps;
    detail::CompensatedSum<double> sum;
    for (double e : eps) {
        sum.add(beta.is_infinite() ? e : e * std::tanh(beta.value() * e / 2.0));
    }
    return sum.value() / static_cast<double>(eps.size());
}

EnergyCurve energy_curve(const ModelPair& pair, Beta beta, std::span<const double> tau_grid) {
    if (tau_grid.empty()) throw Error(ErrorKind::InvalidGrid, "empty tau grid");
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (!(tau_grid[i] > 0.0) || !std::isfinite(tau_grid[i])) {
            throw Error(ErrorKind::InvalidGrid, "tau grid values must be finite and > 0");
        }
        if (i > 0 && !(tau_grid[i] > tau_grid[i - 1])) {
            throw Error(ErrorKind::InvalidGrid, "tau grid must be strictly increasing");
        }
    }
    const ChargingModes modes(pair, beta);
    EnergyCurve curve;
    curve.tau.assign(tau_grid.begin(), tau_grid.end());
    curve.energy.reserve(tau_grid.size());
    curve.power.reserve(tau_grid.size());
    for (double t : tau_grid) {
        const double e = modes.energy(t);
        curve.energy.push_back(e);
        curve.power.push_back(e / t);
    }
    return curve;
}

std::vector<double> uniform_tau_grid(double tau_max, int points) {
    if (!(tau_max > 0.0) || points < 1) {
        throw Error(ErrorKind::InvalidGrid, "need tau_max > 0 and at least one point");
    }
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 1; i <= points; ++i) {
        grid[static_cast<std::size_t>(i - 1)] = tau_max * i / points;
    }
    return grid;
}

}  // namespace qbattery
