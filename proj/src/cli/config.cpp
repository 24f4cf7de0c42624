#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "qbattery/cli.hpp"
#include "qbattery/csv.hpp"
#include "qbattery/error.hpp"

namespace qbattery::cli {

namespace {

void check_keys(const YAML::Node& node, const std::string& where,
                const std::set<std::string>& allowed) {
    if (!node.IsMap()) throw Error(ErrorKind::Config, where + " must be a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) {
            throw Error(ErrorKind::Config, "unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
T get(const YAML::Node& node, const std::string& name) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw Error(ErrorKind::Config, "bad value for '" + name + "'");
    }
}

double get_real(const YAML::Node& node, const std::string& name) {
    const auto v = get<double>(node, name);
    if (!std::isfinite(v)) throw Error(ErrorKind::Config, "'" + name + "' must be finite");
    return v;
}

std::vector<Beta> get_betas(const YAML::Node& node) {
    std::vector<Beta> out;
    const auto one = [](const YAML::Node& n) { return Beta::parse(get<std::string>(n, "beta")); };
    if (node.IsSequence()) {
        for (const auto& b : node) out.push_back(one(b));
    } else {
        out.push_back(one(node));
    }
    return out;
}

void apply(const YAML::Node& root, RunConfig& cfg) {
    if (!root || root.IsNull()) return;
    check_keys(root, "config",
               {"model", "rule", "sizes", "quench", "beta", "tau_max", "grid", "output", "jobs",
                "ensemble", "input"});
    if (root["model"]) cfg.model = parse_model_kind(get<std::string>(root["model"], "model"));
    if (const auto r = root["rule"]) {
        check_keys(r, "rule", {"kind", "n", "exact"});
        if (r["kind"]) cfg.rule.kind = parse_rule_kind(get<std::string>(r["kind"], "rule.kind"));
        if (r["n"]) cfg.rule.fixed_n = get<int>(r["n"], "rule.n");
        if (r["exact"]) {
            cfg.rule.rounding = get<bool>(r["exact"], "rule.exact") ? Rounding::ExactOnly
                                                                     : Rounding::Nearest;
        }
    }
    if (root["sizes"]) cfg.sizes = get<std::vector<int>>(root["sizes"], "sizes");
    if (const auto q = root["quench"]) {
        check_keys(q, "quench", {"phi_b", "phi_c"});
        if (q["phi_b"]) cfg.phi_b = get_real(q["phi_b"], "quench.phi_b");
        if (q["phi_c"]) cfg.phi_c = get_real(q["phi_c"], "quench.phi_c");
    }
    if (root["beta"]) cfg.betas = get_betas(root["beta"]);
    if (root["tau_max"]) cfg.tau_max = get_real(root["tau_max"], "tau_max");
    if (root["grid"]) cfg.grid = get<int>(root["grid"], "grid");
    if (const auto o = root["output"]) {
        check_keys(o, "output", {"path", "fit_path", "format", "meta"});
        if (o["path"]) cfg.out = get<std::string>(o["path"], "output.path");
        if (o["fit_path"]) cfg.fit_out = get<std::string>(o["fit_path"], "output.fit_path");
        if (o["format"]) cfg.format = get<std::string>(o["format"], "output.format");
        if (o["meta"]) cfg.meta = get<bool>(o["meta"], "output.meta");
    }
    if (root["jobs"]) cfg.jobs = get<int>(root["jobs"], "jobs");
    if (root["ensemble"]) {
        cfg.ensemble = ed::parse_ensemble(get<std::string>(root["ensemble"], "ensemble"));
    }
    if (root["input"]) cfg.input = get<std::string>(root["input"], "input");
}

}  // namespace

double default_phi_c() { return std::numbers::pi / 2 - 0.3; }

void apply_config_text(const std::string& yaml, RunConfig& cfg) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml);
    } catch (const YAML::Exception& e) {
        throw Error(ErrorKind::Config, std::string("config parse error: ") + e.what());
    }
    apply(root, cfg);
}

void apply_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_text(ss.str(), cfg);
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const auto& f : csv::split(text, ',')) {
        if (f.empty()) continue;
        out.push_back(csv::parse_int(f));
    }
    return out;
}

std::vector<Beta> parse_beta_list(const std::string& text) {
    std::vector<Beta> out;
    for (const auto& f : csv::split(text, ',')) {
        if (!f.empty()) out.push_back(Beta::parse(f));
    }
    return out;
}

std::optional<ReferenceFit> reference_fit(ModelKind model, RuleKind rule, Beta beta) {
    const bool h1 = model == ModelKind::H1;
    if (beta.is_infinite()) {
        switch (rule) {
            case RuleKind::Fixed: return h1 ? ReferenceFit{0.00019, 0.8327} : ReferenceFit{0.001, 0.8933};
            case RuleKind::Sqrt: return h1 ? ReferenceFit{0.0013, 0.4766} : ReferenceFit{0.0084, 0.4989};
            case RuleKind::TwoThirds: return h1 ? ReferenceFit{0.0016, 0.3015} : ReferenceFit{0.0083, 0.3561};
            default: return std::nullopt;
        }
    }
    if (beta == Beta::finite(1.0)) {
        switch (rule) {
            case RuleKind::Fixed: return h1 ? ReferenceFit{0.00015, 0.6943} : ReferenceFit{0.00036, 0.8595};
            case RuleKind::Sqrt: return h1 ? ReferenceFit{0.00064, 0.4275} : ReferenceFit{0.0035, 0.4326};
            case RuleKind::TwoThirds: return h1 ? ReferenceFit{0.00076, 0.2699} : ReferenceFit{0.0029, 0.3272};
            default: return std::nullopt;
        }
    }
    return std::nullopt;
}

std::vector<int> default_sizes(ModelKind model) {
    const int lo = model == ModelKind::H1 ? 13 : 6;
    const int hi = model == ModelKind::H1 ? 18 : 14;
    std::vector<int> out;
    for (int k = lo; k <= hi; ++k) out.push_back(k * k);
    return out;
}

}  // namespace qbattery::cli
