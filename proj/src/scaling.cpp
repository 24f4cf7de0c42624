#include "qbattery/scaling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <thread>

#include "qbattery/error.hpp"

namespace qbattery {

namespace {

// Largest k with k^p <= N.
int integer_root(int N, int p) {
    int k = static_cast<int>(std::floor(std::pow(static_cast<double>(N), 1.0 / p)));
    const auto power = [p](long long x) {
        long long r = 1;
        for (int i = 0; i < p; ++i) r *= x;
        return r;
    };
    while (k > 0 && power(k) > N) --k;
    while (power(k + 1) <= N) ++k;
    return k;
}

bool is_perfect_power(int N, int p) {
    const int k = integer_root(N, p);
    long long r = 1;
    for (int i = 0; i < p; ++i) r *= k;
    return r == N;
}

}  // namespace

std::string_view to_string(RuleKind kind) {
    switch (kind) {
        case RuleKind::Fixed: return "fixed";
        case RuleKind::Sqrt: return "sqrt";
        case RuleKind::TwoThirds: return "two-thirds";
        case RuleKind::OneThird: return "one-third";
        case RuleKind::HalfN: return "half";
    }
    return "fixed";
}

RuleKind parse_rule_kind(std::string_view text) {
    if (text == "fixed") return RuleKind::Fixed;
    if (text == "sqrt") return RuleKind::Sqrt;
    if (text == "two-thirds") return RuleKind::TwoThirds;
    if (text == "one-third") return RuleKind::OneThird;
    if (text == "half") return RuleKind::HalfN;
    throw Error(ErrorKind::Config, "unknown cluster rule '" + std::string(text) + "'");
}

std::optional<int> ClusterRule::cluster_range(int N) const {
    if (N < 1) return std::nullopt;
    const bool exact = rounding == Rounding::ExactOnly;
    switch (kind) {
        case RuleKind::Fixed:
            return fixed_n;
        case RuleKind::Sqrt:
            if (exact) {
                if (!is_perfect_power(N, 2)) return std::nullopt;
                return integer_root(N, 2);
            }
            return static_cast<int>(std::lround(std::sqrt(static_cast<double>(N))));
        case RuleKind::TwoThirds:
            if (exact) {
                if (!is_perfect_power(N, 3)) return std::nullopt;
                const int c = integer_root(N, 3);
                return c * c;
            }
            return static_cast<int>(std::lround(std::pow(static_cast<double>(N), 2.0 / 3.0)));
        case RuleKind::OneThird:
            if (exact) {
                if (!is_perfect_power(N, 3)) return std::nullopt;
                return integer_root(N, 3);
            }
            return static_cast<int>(std::lround(std::cbrt(static_cast<double>(N))));
        case RuleKind::HalfN:
            if (exact && N % 2 != 0) return std::nullopt;
            return static_cast<int>(std::lround(N / 2.0));
    }
    return std::nullopt;
}

std::string ClusterRule::describe() const {
    std::string out(to_string(kind));
    if (kind == RuleKind::Fixed) out += "(" + std::to_string(fixed_n) + ")";
    out += rounding == Rounding::ExactOnly ? " exact" : " nearest";
    return out;
}

std::vector<SweepRow> sweep(ModelKind kind, const QuenchSpec& quench, const ClusterRule& rule,
                            std::span<const int> sizes, const SweepOptions& options) {
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        if (sizes[i] <= sizes[i - 1]) {
            throw Error(ErrorKind::InvalidGrid, "sweep sizes must be strictly ascending");
        }
    }
    if (options.grid_points < kMinGridPoints) {
        throw Error(ErrorKind::Domain, "grid_points must be >= " + std::to_string(kMinGridPoints));
    }

    std::vector<SweepRow> rows(sizes.size());
    const auto run_row = [&](std::size_t i) {
        SweepRow& row = rows[i];
        row.N = sizes[i];
        const auto n = rule.cluster_range(row.N);
        if (!n) {
            row.error = "N=" + std::to_string(row.N) + " does not give an integer n under rule " +
                        rule.describe();
            return;
        }
        row.n = *n;
        try {
            const auto pair = make_pair(kind, row.N, row.n, quench);
            const ChargingModes modes(pair, quench.beta);
            Window window = default_window(modes, options.grid_points);
            if (options.tau_hi) window = {*options.tau_hi / options.grid_points, *options.tau_hi};
            row.summary = maximize_power(modes, window, options.grid_points);
        } catch (const Error& e) {
            row.error = e.what();
        }
    };

    const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(sizes.size())));
    if (jobs == 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) run_row(i);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < rows.size(); i = next++) run_row(i);
        });
    }
    workers.clear();
    return rows;
}

ScalingFit fit_power_law(std::span<const FitPoint> points) {
    if (points.size() < 3) {
        throw Error(ErrorKind::InsufficientData, "power-law fit needs at least 3 points");
    }
    std::set<int> seen;
    for (const auto& p : points) {
        if (!(p.p_max > 0.0)) throw Error(ErrorKind::Domain, "p_max must be > 0 for a log fit");
        if (p.N <= 0) throw Error(ErrorKind::Domain, "N must be > 0 for a log fit");
        if (!seen.insert(p.N).second) {
            throw Error(ErrorKind::Domain, "duplicate N in fit points");
        }
    }

    const double m = static_cast<double>(points.size());
    std::vector<double> x, y;
    for (const auto& p : points) {
        x.push_back(std::log(static_cast<double>(p.N)));
        y.push_back(std::log(p.p_max));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;

    ScalingFit fit;
    fit.points.assign(points.begin(), points.end());
    fit.alpha = slope;
    fit.a = std::exp(intercept);
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (intercept + slope * x[i]);
        fit.residuals.push_back(r);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

std::vector<FitPoint> fit_points(std::span<const SweepRow> rows) {
    std::vector<FitPoint> out;
    for (const auto& r : rows) {
        if (r.ok()) out.push_back({r.N, r.summary.p_max});
    }
    return out;
}

double mean_power_per_density(std::span<const SweepRow> rows) {
    double sum = 0.0;
    int count = 0;
    for (const auto& r : rows) {
        if (!r.ok()) continue;
        sum += r.summary.p_max * r.n / r.N;
        ++count;
    }
    return count ? sum / count : 0.0;
}

}  // namespace qbattery
