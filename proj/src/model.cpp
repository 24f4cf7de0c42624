#include "qbattery/model.hpp"

#include <cmath>
#include <numbers>

#include "qbattery/error.hpp"

namespace qbattery {

namespace {

constexpr double kPi = std::numbers::pi;

std::int64_t positive_mod(std::int64_t k, std::int64_t m) {
    const std::int64_t r = k % m;
    return r < 0 ? r + m : r;
}

// 2*pi*(k*q mod N)/N with the product reduced before the floating multiply.
double reduced_phase(std::int64_t k, std::int64_t q, std::int64_t N) {
    const std::int64_t r = positive_mod(positive_mod(k, N) * positive_mod(q, N), N);
    return 2.0 * kPi * static_cast<double>(r) / static_cast<double>(N);
}

// pi*(k*q mod 2N)/N, i.e. half of the phase above without losing the sign.
double reduced_half_phase(std::int64_t k, std::int64_t q, std::int64_t N) {
    const std::int64_t two_n = 2 * N;
    const std::int64_t r = positive_mod(positive_mod(k, two_n) * positive_mod(q, two_n), two_n);
    return kPi * static_cast<double>(r) / static_cast<double>(N);
}

std::pair<double, double> h1_mode(const ModelSpec& s, std::int64_t q) {
    const double x = reduced_phase(s.n + 1, q, s.N);
    const double cp = std::cos(s.phi);
    return {std::cos(x) * cp - std::sin(s.phi), -std::sin(x) * cp};
}

std::pair<double, double> h2_mode_direct(const ModelSpec& s, std::int64_t q) {
    double sum_cos = 0.0;
    double sum_sin = 0.0;
    for (int p = 1; p <= s.n; ++p) {
        const double x = reduced_phase(p + 1, q, s.N);
        sum_cos += std::cos(x);
        sum_sin += std::sin(x);
    }
    const double w = std::cos(s.phi) / s.n;
    return {w * sum_cos - std::sin(s.phi), -w * sum_sin};
}

std::pair<double, double> h2_mode_closed(const ModelSpec& s, std::int64_t q) {
    const double cp = std::cos(s.phi);
    const double sp = std::sin(s.phi);
    if (positive_mod(q, s.N) == 0) {
        // theta -> 0: sum_p cos(0) = n, sum_p sin(0) = 0
        return {cp - sp, 0.0};
    }
    const double half = reduced_half_phase(1, q, s.N);
    const double upper = reduced_half_phase(s.n + 1, q, s.N);
    const double shifted = reduced_half_phase(s.n + 2, q, s.N);
    const double theta = reduced_phase(1, q, s.N);
    const double kernel = std::sin(upper) / std::sin(half);
    const double w = cp / s.n;
    const double a = w * (kernel * std::cos(shifted) - std::cos(theta)) - sp;
    const double c = -w * (kernel * std::sin(shifted) - std::sin(theta));
    return {a, c};
}

}  // namespace

std::string_view to_string(ModelKind kind) {
    return kind == ModelKind::H1 ? "h1" : "h2";
}

ModelKind parse_model_kind(std::string_view text) {
    if (text == "h1" || text == "H1") return ModelKind::H1;
    if (text == "h2" || text == "H2") return ModelKind::H2;
    throw Error(ErrorKind::InvalidSpec, "unknown model '" + std::string(text) + "'");
}

void ModelSpec::validate() const {
    if (N < 2) {
        throw Error(ErrorKind::InvalidSpec, "N must be >= 2, got " + std::to_string(N));
    }
    if (n < 1 || n >= N) {
        throw Error(ErrorKind::InvalidSpec, "cluster range must satisfy 1 <= n < N, got n=" +
                                                std::to_string(n) + ", N=" + std::to_string(N));
    }
    if (!std::isfinite(phi)) {
        throw Error(ErrorKind::InvalidSpec, "phi must be finite");
    }
}

std::pair<double, double> mode_coefficients(const ModelSpec& spec, std::int64_t q, Summation how) {
    if (spec.kind == ModelKind::H1) return h1_mode(spec, q);
    if (how == Summation::Auto) {
        how = spec.n > kClosedFormThreshold ? Summation::Closed : Summation::Direct;
    }
    return how == Summation::Closed ? h2_mode_closed(spec, q) : h2_mode_direct(spec, q);
}

BdgCoefficients coefficients(const ModelSpec& spec, Summation how) {
    spec.validate();
    BdgCoefficients out;
    out.a.resize(static_cast<std::size_t>(spec.N));
    out.c.resize(static_cast<std::size_t>(spec.N));
    for (int q = 0; q < spec.N; ++q) {
        auto [a, c] = mode_coefficients(spec, q, how);
        out.a[static_cast<std::size_t>(q)] = a;
        out.c[static_cast<std::size_t>(q)] = c;
    }
    return out;
}

Dispersion dispersion(const BdgCoefficients& coeffs) {
    Dispersion out;
    out.eps.resize(coeffs.size());
    for (std::size_t q = 0; q < coeffs.size(); ++q) {
        out.eps[q] = std::sqrt(coeffs.a[q] * coeffs.a[q] + coeffs.c[q] * coeffs.c[q]);
    }
    return out;
}

}  // namespace qbattery
