#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "qbattery/cli.hpp"
#include "qbattery/csv.hpp"
#include "qbattery/error.hpp"

namespace qbattery::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string meta_line(const std::string& command) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string("# qbattery ") + kVersion + " " + command + " " + stamp + "\n";
}

// Everything is rendered first, then written in one go.
void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
    if (path.empty() || path == "-") {
        fallback << text;
        fallback.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    f << text;
    f.close();
    if (!f) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

std::string fit_report_path(const RunConfig& cfg) {
    if (!cfg.fit_out.empty()) return cfg.fit_out;
    if (cfg.out.empty() || cfg.out == "-") return {};
    auto dot = cfg.out.find_last_of('.');
    const auto slash = cfg.out.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) dot = cfg.out.size();
    return cfg.out.substr(0, dot) + ".fit.yaml";
}

// Shortest text that reads back to v; for quoted constants.
std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string list(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + csv::format(v[i]);
    return s + "]";
}

std::string list(const std::vector<int>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s + "]";
}

Beta single_beta(const RunConfig& cfg) {
    if (!cfg.betas) return Beta::infinite();
    if (cfg.betas->size() != 1) {
        throw Error(ErrorKind::Config, cfg.command + " takes exactly one beta value");
    }
    return cfg.betas->front();
}

QuenchSpec quench_of(const RunConfig& cfg, Beta beta) {
    return {cfg.phi_b.value_or(kDefaultPhiB), cfg.phi_c.value_or(default_phi_c()), beta};
}

struct ReportHeader {
    std::string command;
    ModelKind model;
    ClusterRule rule;
    QuenchSpec quench;
    std::vector<int> sizes;
};

std::string fit_report(const ReportHeader& h, const std::vector<FitPoint>& points,
                       std::optional<double> density) {
    std::ostringstream r;
    r << "command: " << h.command << "\n"
      << "model: " << to_string(h.model) << "\n"
      << "rule: " << h.rule.describe() << "\n"
      << "beta: " << h.quench.beta.to_string() << "\n"
      << "phi_b: " << csv::format(h.quench.phi_b) << "\n"
      << "phi_c: " << csv::format(h.quench.phi_c) << "\n"
      << "sizes: " << list(h.sizes) << "\n"
      << "points: " << points.size() << "\n";
    std::optional<ScalingFit> fit;
    try {
        fit = fit_power_law(points);
    } catch (const Error& e) {
        r << "fit_error: \"" << e.what() << "\"\n";
    }
    if (fit) {
        std::vector<double> res(fit->residuals.begin(), fit->residuals.end());
        r << "a: " << csv::format(fit->a) << "\n"
          << "alpha: " << csv::format(fit->alpha) << "\n"
          << "r_squared: " << csv::format(fit->r_squared) << "\n"
          << "residuals: " << list(res) << "\n";
    }
    r << "mean_p_max_n_over_N: " << (density ? csv::format(*density) : "null") << "\n";
    const auto ref = reference_fit(h.model, h.rule.kind, h.quench.beta);
    const auto cell = [](std::optional<double> v) { return v ? csv::format(*v) : "null"; };
    r << "comparison:\n"
      << "  a: {fitted: " << cell(fit ? std::optional(fit->a) : std::nullopt)
      << ", published: " << (ref ? shortest(ref->a) : "null") << "}\n"
      << "  alpha: {fitted: " << cell(fit ? std::optional(fit->alpha) : std::nullopt)
      << ", published: " << (ref ? shortest(ref->alpha) : "null") << "}\n";
    return r.str();
}

int cmd_curve(const RunConfig& cfg, std::ostream& out) {
    const auto model = cfg.model.value_or(ModelKind::H1);
    const auto sizes = cfg.sizes.value_or(default_sizes(model));
    if (sizes.empty()) throw Error(ErrorKind::InvalidGrid, "no chain sizes given");
    const auto betas = cfg.betas.value_or(std::vector<Beta>{Beta::infinite(), Beta::finite(1.0)});
    if (betas.empty()) throw Error(ErrorKind::InvalidGrid, "no beta values given");
    const auto taus = uniform_tau_grid(cfg.tau_max.value_or(20.0), cfg.grid.value_or(400));

    std::ostringstream body;
    if (cfg.meta) body << meta_line("curve");
    body << "model,N,n,phi_b,phi_c,beta,tau,energy,power\n";
    for (int N : sizes) {
        const auto n = cfg.rule.cluster_range(N);
        if (!n) {
            throw Error(ErrorKind::InvalidSpec,
                        "rule " + cfg.rule.describe() + " gives no integer n for N=" + std::to_string(N));
        }
        for (Beta beta : betas) {
            const auto q = quench_of(cfg, beta);
            const auto pair = make_pair(model, N, *n, q);
            const auto curve = energy_curve(pair, beta, taus);
            const std::string prefix = std::string(to_string(model)) + "," + std::to_string(N) + "," +
                                       std::to_string(*n) + "," + csv::format(q.phi_b) + "," +
                                       csv::format(q.phi_c) + "," + beta.to_string() + ",";
            for (std::size_t i = 0; i < curve.tau.size(); ++i) {
                body << prefix << csv::format(curve.tau[i]) << ',' << csv::format(curve.energy[i])
                     << ',' << csv::format(curve.power[i]) << '\n';
            }
        }
    }
    emit(cfg.out, body.str(), out);
    return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    const auto model = cfg.model.value_or(ModelKind::H1);
    const auto sizes = cfg.sizes.value_or(default_sizes(model));
    if (sizes.empty()) throw Error(ErrorKind::InvalidGrid, "no chain sizes given");
    const auto quench = quench_of(cfg, single_beta(cfg));
    if (cfg.jobs < 1) throw Error(ErrorKind::Config, "jobs must be >= 1");
    const SweepOptions opts{cfg.grid.value_or(kDefaultGridPoints), cfg.tau_max, cfg.jobs};
    const auto rows = sweep(model, quench, cfg.rule, sizes, opts);

    std::ostringstream body;
    if (cfg.meta) body << meta_line("sweep");
    body << "model,N,n,tau_max,p_max,e_max,boundary_hit\n";
    for (const auto& row : rows) {
        if (!row.ok()) {
            body << "# skipped N=" << row.N << ": " << *row.error << '\n';
            continue;
        }
        const auto& s = row.summary;
        body << to_string(model) << ',' << row.N << ',' << row.n << ',' << csv::format(s.tau_max)
             << ',' << csv::format(s.p_max) << ',' << csv::format(s.e_at_tau_max) << ','
             << (s.boundary_hit ? "true" : "false") << '\n';
    }

    const auto report = fit_report({"sweep", model, cfg.rule, quench, sizes}, fit_points(rows),
                                   mean_power_per_density(rows));
    const auto report_path = fit_report_path(cfg);
    if (report_path.empty()) {
        // Both on one stream: the report rides along as comment lines.
        std::istringstream lines(report);
        for (std::string line; std::getline(lines, line);) body << "# " << line << '\n';
        emit(cfg.out, body.str(), out);
    } else {
        emit(cfg.out, body.str(), out);
        emit(report_path, report, out);
    }
    return 0;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out) {
    auto model = cfg.model.value_or(ModelKind::H1);
    std::vector<FitPoint> points;
    std::optional<double> density;
    std::vector<int> sizes;
    const bool synthetic = cfg.synthetic_a || cfg.synthetic_alpha;
    if (synthetic == !cfg.input.empty()) {
        throw Error(ErrorKind::Config, "fit needs exactly one of --in or --synthetic-a/--synthetic-alpha");
    }
    if (synthetic) {
        if (!cfg.synthetic_a || !cfg.synthetic_alpha) {
            throw Error(ErrorKind::Config, "--synthetic-a and --synthetic-alpha go together");
        }
        sizes = cfg.sizes.value_or(default_sizes(model));
        for (int N : sizes) points.push_back({N, *cfg.synthetic_a * std::pow(N, *cfg.synthetic_alpha)});
    } else {
        std::ifstream in(cfg.input);
        if (!in) throw Error(ErrorKind::Io, "cannot read '" + cfg.input + "'");
        const auto table = csv::read_table(in);
        const auto cN = table.column("N");
        const auto cp = table.column("p_max");
        std::optional<std::size_t> cn, cm;
        for (std::size_t i = 0; i < table.header.size(); ++i) {
            if (table.header[i] == "n") cn = i;
            if (table.header[i] == "model") cm = i;
        }
        double sum = 0.0;
        for (const auto& f : table.rows) {
            const FitPoint p{csv::parse_int(f[cN]), csv::parse_double(f[cp])};
            points.push_back(p);
            sizes.push_back(p.N);
            if (cn) sum += p.p_max * csv::parse_int(f[*cn]) / p.N;
            if (cm && !cfg.model) model = parse_model_kind(f[*cm]);
        }
        if (cn && !points.empty()) density = sum / static_cast<double>(points.size());
    }
    fit_power_law(points);  // surfaces fit errors as a failed command
    std::string text = fit_report({"fit", model, cfg.rule, quench_of(cfg, single_beta(cfg)), sizes},
                                  points, density);
    if (cfg.meta) text = meta_line("fit") + text;
    emit(cfg.out, text, out);
    return 0;
}

int cmd_oracle_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    constexpr double pi = std::numbers::pi;
    std::vector<ModelKind> kinds{ModelKind::H1, ModelKind::H2};
    if (cfg.model) kinds = {*cfg.model};
    const auto sizes = cfg.sizes.value_or(std::vector<int>{6, 8, 10});
    std::vector<std::pair<double, double>> angles{{0.0, pi / 3.0}, {0.4, 1.1}, {pi / 4.0, pi / 2.0 - 0.3}};
    if (cfg.phi_b || cfg.phi_c) {
        angles = {{cfg.phi_b.value_or(kDefaultPhiB), cfg.phi_c.value_or(default_phi_c())}};
    }
    const auto betas = cfg.betas.value_or(std::vector<Beta>{Beta::finite(1.0), Beta::infinite()});
    std::vector<double> taus{0.3, 1.0, 2.5};
    if (cfg.tau_max) taus = {*cfg.tau_max};

    std::vector<ed::OracleCase> cases;
    for (auto kind : kinds) {
        for (int N : sizes) {
            for (int n = 1; n <= 3 && n < N; ++n) {
                for (auto [pb, pc] : angles) {
                    for (Beta beta : betas) {
                        for (double tau : taus) cases.push_back({kind, N, n, pb, pc, beta, tau});
                    }
                }
            }
        }
    }
    if (cases.empty()) throw Error(ErrorKind::InvalidGrid, "oracle-check grid is empty");

    const ed::OracleTolerance tol;
    const auto report = ed::run_oracle_check(cases, tol, cfg.ensemble, cfg.energy_scale);
    std::ostringstream body;
    if (cfg.meta) body << meta_line("oracle-check");
    body << "ensemble: " << ed::to_string(cfg.ensemble) << "\n"
         << "cases: " << report.rows.size() << "\n"
         << "max_abs_deviation: " << csv::format(report.max_abs) << "\n"
         << "max_rel_deviation: " << csv::format(report.max_rel) << "\n"
         << "tolerance: {abs: " << shortest(tol.abs) << ", rel: " << shortest(tol.rel)
         << ", rel_floor: " << shortest(tol.rel_floor) << "}\n"
         << "status: " << (report.pass ? "pass" : "fail") << "\n";
    if (!report.pass) {
        body << "failures:\n";
        for (const auto& row : report.rows) {
            if (row.pass) continue;
            const auto& c = row.input;
            body << "  - {model: " << to_string(c.kind) << ", N: " << c.N << ", n: " << c.n
                 << ", phi_b: " << csv::format(c.phi_b) << ", phi_c: " << csv::format(c.phi_c)
                 << ", beta: " << c.beta.to_string() << ", tau: " << csv::format(c.tau)
                 << ", formula: " << csv::format(row.formula) << ", oracle: " << csv::format(row.oracle)
                 << ", abs: " << csv::format(row.abs_dev) << "}\n";
        }
    }
    emit(cfg.out, body.str(), out);
    if (!report.pass) {
        err << "qbattery: oracle-check failed, max |dE| = " << csv::format(report.max_abs) << "\n";
        return 2;
    }
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Charging energetics of cluster-Ising quantum batteries"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, model, rule, sizes, beta, ensemble, format = "csv", out_path, fit_out,
                input;
    double phi_b = 0, phi_c = 0, tau_max = 0, syn_a = 0, syn_alpha = 0, scale = 1.0;
    int n_fixed = 0, grid = 0, jobs = 1;
    bool no_meta = false, exact = false;

    auto* o_config = app.add_option("--config", config_path, "YAML configuration file");
    auto* o_model = app.add_option("--model", model, "h1 or h2")
                        ->check(CLI::IsMember({"h1", "h2"}));
    auto* o_rule = app.add_option("--n-rule", rule, "cluster range rule")
                       ->check(CLI::IsMember({"fixed", "sqrt", "two-thirds", "one-third", "half"}));
    auto* o_nfixed = app.add_option("--n-fixed", n_fixed, "n for the fixed rule (default 15)");
    auto* o_exact = app.add_flag("--exact-n", exact, "reject N where the rule gives a non-integer n");
    auto* o_sizes = app.add_option("--sizes", sizes, "comma-separated chain lengths");
    auto* o_phib = app.add_option("--phi-b", phi_b, "battery angle (default 0)");
    auto* o_phic = app.add_option("--phi-c", phi_c, "charging angle (default pi/2 - 0.3)");
    auto* o_beta = app.add_option("--beta", beta, "inverse temperature(s), number or inf");
    auto* o_taumax = app.add_option("--tau-max", tau_max, "largest charging time / search window end");
    auto* o_grid = app.add_option("--grid", grid, "number of tau points");
    auto* o_out = app.add_option("--out", out_path, "output path (default stdout)");
    auto* o_fitout = app.add_option("--fit-out", fit_out, "sweep fit report path");
    auto* o_format = app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv"}));
    auto* o_jobs = app.add_option("--jobs", jobs, "worker threads for sweeps");
    auto* o_nometa = app.add_flag("--no-meta", no_meta, "omit the timestamp header line");
    auto* o_ens = app.add_option("--ensemble", ensemble, "oracle initial-state ensemble")
                      ->check(CLI::IsMember({"fock", "odd"}));
    auto* o_in = app.add_option("--in", input, "sweep csv to fit");
    auto* o_syna = app.add_option("--synthetic-a", syn_a, "fit exact points a N^alpha (testing)");
    auto* o_synalpha = app.add_option("--synthetic-alpha", syn_alpha, "fit exact points a N^alpha (testing)");
    auto* o_scale = app.add_option("--inject-energy-scale", scale)->group("");

    app.add_subcommand("curve", "stored energy and power against charging time");
    app.add_subcommand("sweep", "maximal power over chain sizes, plus a power-law fit");
    app.add_subcommand("fit", "power-law fit of a sweep table");
    app.add_subcommand("oracle-check", "compare the closed form against exact diagonalization");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    try {
        RunConfig cfg;
        cfg.command = app.get_subcommands().front()->get_name();
        if (*o_config) apply_config_file(config_path, cfg);
        if (*o_model) cfg.model = parse_model_kind(model);
        if (*o_rule) cfg.rule.kind = parse_rule_kind(rule);
        if (*o_nfixed) cfg.rule.fixed_n = n_fixed;
        if (*o_exact) cfg.rule.rounding = exact ? Rounding::ExactOnly : Rounding::Nearest;
        if (*o_sizes) cfg.sizes = parse_int_list(sizes);
        if (*o_phib) cfg.phi_b = phi_b;
        if (*o_phic) cfg.phi_c = phi_c;
        if (*o_beta) cfg.betas = parse_beta_list(beta);
        if (*o_taumax) cfg.tau_max = tau_max;
        if (*o_grid) cfg.grid = grid;
        if (*o_out) cfg.out = out_path;
        if (*o_fitout) cfg.fit_out = fit_out;
        if (*o_format) cfg.format = format;
        if (*o_jobs) cfg.jobs = jobs;
        if (*o_nometa) cfg.meta = !no_meta;
        if (*o_ens) cfg.ensemble = ed::parse_ensemble(ensemble);
        if (*o_in) cfg.input = input;
        if (*o_syna) cfg.synthetic_a = syn_a;
        if (*o_synalpha) cfg.synthetic_alpha = syn_alpha;
        if (*o_scale) cfg.energy_scale = scale;

        if (cfg.format != "csv") throw Error(ErrorKind::Config, "unsupported format '" + cfg.format + "'");
        if (cfg.rule.kind == RuleKind::Fixed && cfg.rule.fixed_n < 1) {
            throw Error(ErrorKind::Config, "--n-fixed must be >= 1");
        }
        for (auto v : {cfg.phi_b, cfg.phi_c, cfg.tau_max}) {
            if (v && !std::isfinite(*v)) throw Error(ErrorKind::Config, "angles and tau_max must be finite");
        }

        if (cfg.command == "curve") return cmd_curve(cfg, out);
        if (cfg.command == "sweep") return cmd_sweep(cfg, out);
        if (cfg.command == "fit") return cmd_fit(cfg, out);
        return cmd_oracle_check(cfg, out, err);
    } catch (const Error& e) {
        err << "qbattery: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "qbattery: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace qbattery::cli
