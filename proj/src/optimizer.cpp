#include "qbattery/optimizer.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "qbattery/error.hpp"

namespace qbattery {

namespace {

constexpr double kTieTolerance = 1e-15;
constexpr double kRefineTolerance = 1e-10;

void check_search(Window window, int grid_points) {
    if (!(window.lo > 0.0) || !(window.hi > window.lo) || !std::isfinite(window.hi)) {
        throw Error(ErrorKind::Domain, "search window must satisfy 0 < lo < hi");
    }
    if (grid_points < kMinGridPoints) {
        throw Error(ErrorKind::Domain,
                    "grid_points must be >= " + std::to_string(kMinGridPoints));
    }
}

}  // namespace

Window default_window(const ChargingModes& modes, int grid_points) {
    if (grid_points < kMinGridPoints) {
        throw Error(ErrorKind::Domain,
                    "grid_points must be >= " + std::to_string(kMinGridPoints));
    }
    const double w = modes.min_nonzero_omega();
    if (!(w > 0.0)) throw Error(ErrorKind::Domain, "charging dispersion vanishes identically");
    const double hi = 4.0 * std::numbers::pi / w;
    return {hi / grid_points, hi};
}

PowerSummary maximize_power(const ChargingModes& modes, Window window, int grid_points) {
    check_search(window, grid_points);

    const auto tau_at = [&](int i) {
        if (i == grid_points - 1) return window.hi;
        return window.lo + (window.hi - window.lo) * i / (grid_points - 1);
    };

    int best = 0;
    double best_power = modes.energy(tau_at(0)) / tau_at(0);
    for (int i = 1; i < grid_points; ++i) {
        const double t = tau_at(i);
        const double p = modes.energy(t) / t;
        if (p > best_power + kTieTolerance * std::abs(best_power)) {
            best = i;
            best_power = p;
        }
    }

    PowerSummary out;
    out.search_window = window;
    out.grid_points = grid_points;
    double tau_best = tau_at(best);

    if (best == 0 || best == grid_points - 1) {
        out.boundary_hit = true;
    } else {
        // Golden-section on P in extended precision; the peak is flat to
        // O(dtau^2) so double resolution stalls near sqrt(eps).
        const auto power = [&](long double t) { return modes.energy_extended(t) / t; };
        const long double g = (std::sqrt(5.0L) - 1.0L) / 2.0L;
        long double a = tau_at(best - 1);
        long double b = tau_at(best + 1);
        long double x1 = b - g * (b - a);
        long double x2 = a + g * (b - a);
        long double f1 = power(x1);
        long double f2 = power(x2);
        long double best_t = tau_best;
        long double best_f = power(best_t);
        const long double width = kRefineTolerance * window.hi;
        while (b - a >= width) {
            if (f1 >= f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - g * (b - a);
                f1 = power(x1);
                if (f1 > best_f) { best_f = f1; best_t = x1; }
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + g * (b - a);
                f2 = power(x2);
                if (f2 > best_f) { best_f = f2; best_t = x2; }
            }
        }
        const long double mid = (a + b) / 2.0L;
        if (power(mid) > best_f) best_t = mid;

        const double refined = static_cast<double>(best_t);
        if (modes.energy(refined) / refined >= best_power) tau_best = refined;
    }

    out.tau_max = tau_best;
    out.e_at_tau_max = modes.energy(tau_best);
    out.p_max = out.e_at_tau_max / tau_best;
    return out;
}

PowerSummary maximize_power(const ModelPair& pair, Beta beta, Window window, int grid_points) {
    check_search(window, grid_points);
    return maximize_power(ChargingModes(pair, beta), window, grid_points);
}

PowerSummary maximize_power(const ModelPair& pair, Beta beta, int grid_points) {
    const ChargingModes modes(pair, beta);
    return maximize_power(modes, default_window(modes, grid_points), grid_points);
}

}  // namespace qbattery
