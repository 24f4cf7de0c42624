#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qbattery {

/// H1 couples sites j and j+n+1 through a single string of n sigma^z.
/// H2 averages the strings of length 1..n with weight 1/n.
enum class ModelKind { H1, H2 };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

struct ModelSpec {
    ModelKind kind = ModelKind::H1;
    int N = 2;        // spins
    int n = 1;        // cluster range, 1 <= n < N
    double phi = 0.;  // radians, not normalised

    /// Throws Error(InvalidSpec) unless N >= 2 and 1 <= n < N.
    void validate() const;

    ModelSpec with_phi(double p) const { return {kind, N, n, p}; }
};

/// Momentum-space Bogoliubov-de Gennes coefficients, q = 0..N-1 in the
/// odd-parity (integer momentum) sector.
struct BdgCoefficients {
    std::vector<double> a;
    std::vector<double> c;

    std::size_t size() const { return a.size(); }
};

struct Dispersion {
    std::vector<double> eps;

    std::size_t size() const { return eps.size(); }
};

/// How the H2 p-sum is evaluated. H1 ignores this.
enum class Summation {
    Auto,    // closed form for n > 8, direct sum otherwise
    Direct,  // (1/n) sum_{p=1}^{n}
    Closed,  // Dirichlet-kernel resummation with the q = 0 limit
};

inline constexpr int kClosedFormThreshold = 8;

/// (a, c) for a single integer momentum. q may lie outside 0..N-1; the
/// phases are reduced modulo N in integer arithmetic before scaling.
std::pair<double, double> mode_coefficients(const ModelSpec& spec, std::int64_t q,
                                            Summation how = Summation::Auto);

BdgCoefficients coefficients(const ModelSpec& spec, Summation how = Summation::Auto);

Dispersion dispersion(const BdgCoefficients& coeffs);

}  // namespace qbattery
