#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qbattery/ed_oracle.hpp"
#include "qbattery/energetics.hpp"
#include "qbattery/scaling.hpp"

namespace qbattery::cli {

/// Everything a subcommand needs. Unset optionals take per-command defaults.
struct RunConfig {
    std::string command;
    std::optional<ModelKind> model;
    ClusterRule rule;
    std::optional<std::vector<int>> sizes;
    std::optional<double> phi_b;
    std::optional<double> phi_c;
    std::optional<std::vector<Beta>> betas;
    std::optional<double> tau_max;
    std::optional<int> grid;
    std::string out;      // empty: standard output
    std::string fit_out;  // sweep only; empty: derived from out
    std::string format = "csv";
    bool meta = true;
    int jobs = 1;
    ed::Ensemble ensemble = ed::Ensemble::PeriodicFermionFock;
    std::string input;  // fit: sweep csv to read
    std::optional<double> synthetic_a;
    std::optional<double> synthetic_alpha;
    double energy_scale = 1.0;  // oracle-check fault injection
};

inline constexpr double kDefaultPhiB = 0.0;
double default_phi_c();

/// Overlays a YAML document onto cfg. Unknown keys throw Error(Config).
void apply_config_text(const std::string& yaml, RunConfig& cfg);
void apply_config_file(const std::string& path, RunConfig& cfg);

std::vector<int> parse_int_list(const std::string& text);
std::vector<Beta> parse_beta_list(const std::string& text);

/// Published fit parameters for (model, rule, beta), where there are any.
struct ReferenceFit {
    double a;
    double alpha;
};
std::optional<ReferenceFit> reference_fit(ModelKind model, RuleKind rule, Beta beta);

/// Default sweep sizes: perfect squares in [169, 324] (h1) or [36, 196] (h2).
std::vector<int> default_sizes(ModelKind model);

/// Exit status: 0 ok, 1 usage or configuration error, 2 oracle tolerance failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qbattery::cli
