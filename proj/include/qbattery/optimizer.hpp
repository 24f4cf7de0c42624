#pragma once

#include "qbattery/energetics.hpp"

namespace qbattery {

struct Window {
    double lo = 0.0;
    double hi = 0.0;
};

struct PowerSummary {
    double tau_max = 0.0;
    double p_max = 0.0;
    double e_at_tau_max = 0.0;
    Window search_window;
    int grid_points = 0;
    /// Best coarse-grid point was the first or last one; no refinement.
    bool boundary_hit = false;
};

inline constexpr int kDefaultGridPoints = 2048;
inline constexpr int kMinGridPoints = 16;

/// (tau_hi / grid_points, tau_hi) with tau_hi = 4 pi / omega_min, the first
/// few oscillation periods of the slowest charging mode.
Window default_window(const ChargingModes& modes, int grid_points = kDefaultGridPoints);

/// Coarse uniform scan of P(tau) over the window, then golden-section
/// refinement around the best grid point until the bracket is narrower
/// than 1e-10 * tau_hi. Ties on the grid go to the smaller tau.
PowerSummary maximize_power(const ChargingModes& modes, Window window,
                            int grid_points = kDefaultGridPoints);
PowerSummary maximize_power(const ModelPair& pair, Beta beta, Window window,
                            int grid_points = kDefaultGridPoints);
/// Same, over default_window().
PowerSummary maximize_power(const ModelPair& pair, Beta beta,
                            int grid_points = kDefaultGridPoints);

}  // namespace qbattery
