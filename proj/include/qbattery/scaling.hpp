#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qbattery/energetics.hpp"
#include "qbattery/optimizer.hpp"

namespace qbattery {

enum class RuleKind { Fixed, Sqrt, TwoThirds, OneThird, HalfN };
enum class Rounding { Nearest, ExactOnly };

/// How the cluster range n follows the chain length N in a sweep.
struct ClusterRule {
    RuleKind kind = RuleKind::Fixed;
    int fixed_n = 15;
    Rounding rounding = Rounding::Nearest;

    /// n for a given N, or nullopt when ExactOnly and N^gamma is not an
    /// integer (or N is odd for HalfN).
    std::optional<int> cluster_range(int N) const;
    std::string describe() const;
};

std::string_view to_string(RuleKind kind);
RuleKind parse_rule_kind(std::string_view text);

struct SweepRow {
    int N = 0;
    int n = 0;
    PowerSummary summary;
    std::optional<std::string> error;  // set for rejected rows

    bool ok() const { return !error.has_value(); }
};

struct SweepOptions {
    int grid_points = kDefaultGridPoints;
    std::optional<double> tau_hi;  // overrides the default window's upper end
    int jobs = 1;
};

/// One maximize_power run per N (ascending). Rows that violate the rule or
/// n < N are kept with an error record; the sweep continues.
std::vector<SweepRow> sweep(ModelKind kind, const QuenchSpec& quench, const ClusterRule& rule,
                            std::span<const int> sizes, const SweepOptions& options = {});

struct FitPoint {
    int N = 0;
    double p_max = 0.0;
};

struct ScalingFit {
    std::vector<FitPoint> points;
    double a = 0.0;
    double alpha = 0.0;
    double r_squared = 0.0;
    std::vector<double> residuals;  // log p_max - (log a + alpha log N)
};

/// Unweighted least squares of log p_max against log N.
ScalingFit fit_power_law(std::span<const FitPoint> points);

std::vector<FitPoint> fit_points(std::span<const SweepRow> rows);

/// Mean of p_max * n / N over the successful rows (0 if none).
double mean_power_per_density(std::span<const SweepRow> rows);

}  // namespace qbattery
