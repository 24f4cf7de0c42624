#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qbattery/model.hpp"

namespace qbattery {

/// Inverse temperature. Infinity is a distinguished value (ground-state
/// charging) rather than a large float, so the thermal factor is exactly 1.
class Beta {
public:
    static Beta infinite() { return Beta(); }
    static Beta finite(double value);
    /// Accepts "inf", "infinite" or a nonnegative real.
    static Beta parse(std::string_view text);

    bool is_infinite() const { return !value_.has_value(); }
    /// Finite value; throws for the infinite beta.
    double value() const;
    /// "inf" or the value with 17 significant digits.
    std::string to_string() const;

    friend bool operator==(const Beta&, const Beta&) = default;

private:
    Beta() = default;
    explicit Beta(double v) : value_(v) {}
    std::optional<double> value_;
};

struct QuenchSpec {
    double phi_b = 0.0;  // battery angle, held for t < 0 and t > tau
    double phi_c = 0.0;  // charging angle, held for 0 < t < tau
    Beta beta = Beta::infinite();
};

/// Battery and charger Hamiltonians; same (kind, N, n), different phi.
struct ModelPair {
    ModelSpec battery;
    ModelSpec charger;

    /// Throws Error(InvalidPair) on mismatched (kind, N, n).
    void validate() const;
};

ModelPair make_pair(ModelKind kind, int N, int n, const QuenchSpec& quench);

inline constexpr double kModeCutoff = 1e-14;

/// Per-mode amplitudes of the charging energy. Summand at q is
/// amplitude[q] * (1 - cos(2 omega[q] tau)); modes that are removable
/// singularities (omega or eps below kModeCutoff) carry amplitude 0.
class ChargingModes {
public:
    enum class Range {
        Full,    // q = 0..N-1, as written
        Folded,  // q = 0..N/2 with multiplicity from the q <-> N-q symmetry
    };

    ChargingModes(const ModelPair& pair, Beta beta, Range range = Range::Full,
                  Summation how = Summation::Auto);

    double energy(double tau) const;
    long double energy_extended(long double tau) const;

    std::size_t spins() const { return spins_; }
    std::span<const double> omega() const { return omega_; }
    std::span<const double> amplitude() const { return amplitude_; }
    /// Smallest charging dispersion above kModeCutoff (over all q).
    double min_nonzero_omega() const { return min_omega_; }
    double max_omega() const { return max_omega_; }

private:
    std::size_t spins_ = 0;
    std::vector<double> omega_;
    std::vector<double> amplitude_;
    double min_omega_ = 0.0;
    double max_omega_ = 0.0;
};

/// Stored energy per spin after charging for time tau >= 0.
double stored_energy(const ModelPair& pair, Beta beta, double tau);
double stored_energy(const ModelSpec& chain, const QuenchSpec& quench, double tau);

/// E(tau)/tau, tau > 0.
double charging_power(const ModelPair& pair, Beta beta, double tau);
double charging_power(const ModelSpec& chain, const QuenchSpec& quench, double tau);

/// (1/N) sum_q eps(q) tanh(beta eps(q)/2): the per-mode Cauchy-Schwarz bound.
double energy_upper_bound(const ModelPair& pair, Beta beta);

struct EnergyCurve {
    std::vector<double> tau;
    std::vector<double> energy;
    std::vector<double> power;
};

/// Throws Error(InvalidGrid) unless the grid is nonempty, positive and
/// strictly increasing.
EnergyCurve energy_curve(const ModelPair& pair, Beta beta, std::span<const double> tau_grid);

/// tau_i = i * tau_max / points, i = 1..points.
std::vector<double> uniform_tau_grid(double tau_max, int points);

}  // namespace qbattery
