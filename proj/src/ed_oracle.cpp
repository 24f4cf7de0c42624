#include "qbattery/ed_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <tuple>

#include "qbattery/csv.hpp"
#include "qbattery/detail/compensated_sum.hpp"
#include "qbattery/error.hpp"

namespace qbattery::ed {

namespace {

constexpr double kDegeneracyWindow = 1e-10;

void check_capacity(int N) {
    if (N > kMaxDenseSpins) {
        throw Error(ErrorKind::Capacity, "dense exact diagonalization is capped at N = " +
                                             std::to_string(kMaxDenseSpins) + ", got " +
                                             std::to_string(N));
    }
}

bool odd(std::uint32_t s) { return (std::popcount(s) & 1) == 1; }

struct Term {
    int first;   // site carrying the left sigma^x
    int second;  // site carrying the right sigma^x (== first when l = N-1)
    int length;  // number of sigma^z in the string
    bool wraps;  // crosses the periodic boundary
    double weight;
};

std::vector<Term> cluster_terms(const ModelSpec& spec) {
    std::vector<Term> terms;
    const double w = spec.kind == ModelKind::H1 ? 1.0 : 1.0 / spec.n;
    const int lo = spec.kind == ModelKind::H1 ? spec.n : 1;
    for (int l = lo; l <= spec.n; ++l) {
        for (int j = 0; j < spec.N; ++j) {
            terms.push_back({j, (j + l + 1) % spec.N, l, j + l + 1 >= spec.N, w});
        }
    }
    return terms;
}

// Applies H to basis state s, calling emit(target, amplitude) per entry.
template <typename Emit>
void apply(const ModelSpec& spec, const std::vector<Term>& terms, const HamiltonianOptions& opt,
           std::uint32_t s, Emit&& emit) {
    const double cp = std::cos(spec.phi);
    const double sp = std::sin(spec.phi);
    const int down = std::popcount(s);
    emit(s, opt.prefactor * sp * (spec.N - 2 * down));
    if (cp == 0.0) return;
    for (const auto& t : terms) {
        double sign = 1.0;
        for (int k = 1; k <= t.length; ++k) {
            if ((s >> ((t.first + k) % spec.N)) & 1u) sign = -sign;
        }
        if (opt.fermionic_even_boundary && t.wraps && !odd(s)) sign = -sign;
        const std::uint32_t target = s ^ (1u << t.first) ^ (1u << t.second);
        emit(t.first == t.second ? s : target, -opt.prefactor * cp * t.weight * sign);
    }
}

struct Eigensystem {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

Eigensystem diagonalize(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::Domain, "eigendecomposition failed");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

// Thermal weights over several blocks sharing one normalisation.
std::vector<Eigen::VectorXd> thermal_weights(const std::vector<Eigen::VectorXd>& levels, Beta beta,
                                             int* degeneracy) {
    double e0 = std::numeric_limits<double>::infinity();
    for (const auto& v : levels) {
        if (v.size() > 0) e0 = std::min(e0, v.minCoeff());
    }
    std::vector<Eigen::VectorXd> w;
    double z = 0.0;
    int deg = 0;
    for (const auto& v : levels) {
        Eigen::VectorXd p(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (beta.is_infinite()) {
                const bool ground = v[i] <= e0 + kDegeneracyWindow;
                p[i] = ground ? 1.0 : 0.0;
                deg += ground ? 1 : 0;
            } else {
                p[i] = std::exp(-beta.value() * (v[i] - e0));
            }
            z += p[i];
        }
        w.push_back(std::move(p));
    }
    for (auto& p : w) p /= z;
    if (degeneracy) *degeneracy = deg;
    return w;
}

std::vector<Parity> blocks_for(Ensemble e) {
    if (e == Ensemble::OddSector) return {Parity::Odd};
    return {Parity::Even, Parity::Odd};
}

HamiltonianOptions bdg_options() { return {0.5, true}; }

ModelSpec mirrored(const ModelSpec& s) { return s.with_phi(-s.phi); }

}  // namespace

std::string_view to_string(Ensemble e) {
    return e == Ensemble::OddSector ? "odd" : "fock";
}

Ensemble parse_ensemble(std::string_view text) {
    if (text == "odd") return Ensemble::OddSector;
    if (text == "fock") return Ensemble::PeriodicFermionFock;
    throw Error(ErrorKind::Config, "unknown ensemble '" + std::string(text) + "'");
}

DenseOperator build_hamiltonian(const ModelSpec& spec, const HamiltonianOptions& options) {
    spec.validate();
    check_capacity(spec.N);
    const auto terms = cluster_terms(spec);
    const Eigen::Index dim = Eigen::Index{1} << spec.N;
    DenseOperator H{spec.N, Eigen::MatrixXd::Zero(dim, dim)};
    for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(dim); ++s) {
        apply(spec, terms, options, s, [&](std::uint32_t t, double v) { H.matrix(t, s) += v; });
    }
    return H;
}

DenseOperator bdg_equivalent_hamiltonian(const ModelSpec& spec) {
    return build_hamiltonian(mirrored(spec), bdg_options());
}

std::vector<std::uint32_t> parity_basis(int N, Parity parity) {
    check_capacity(N);
    std::vector<std::uint32_t> out;
    const std::uint32_t dim = 1u << N;
    out.reserve(dim / 2);
    for (std::uint32_t s = 0; s < dim; ++s) {
        if (odd(s) == (parity == Parity::Odd)) out.push_back(s);
    }
    return out;
}

Eigen::VectorXd parity_diagonal(int N) {
    check_capacity(N);
    const std::uint32_t dim = 1u << N;
    Eigen::VectorXd d(dim);
    for (std::uint32_t s = 0; s < dim; ++s) d[s] = odd(s) ? -1.0 : 1.0;
    return d;
}

Eigen::MatrixXd sector_block(const ModelSpec& spec, Parity parity,
                             const HamiltonianOptions& options) {
    spec.validate();
    check_capacity(spec.N);
    const auto basis = parity_basis(spec.N, parity);
    std::vector<int> index(std::size_t{1} << spec.N, -1);
    for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<int>(i);
    const auto terms = cluster_terms(spec);
    const auto d = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index col = 0; col < d; ++col) {
        apply(spec, terms, options, basis[static_cast<std::size_t>(col)],
              [&](std::uint32_t t, double v) {
                  const int row = index[t];
                  if (row < 0) throw Error(ErrorKind::Domain, "Hamiltonian breaks parity");
                  block(row, col) += v;
              });
    }
    return block;
}

SectorState sector_thermal_state(const DenseOperator& H, Beta beta) {
    return thermal_state(H, beta, Ensemble::OddSector);
}

SectorState thermal_state(const DenseOperator& H, Beta beta, Ensemble ensemble) {
    std::vector<std::vector<std::uint32_t>> bases;
    std::vector<Eigensystem> systems;
    std::vector<Eigen::VectorXd> levels;
    for (Parity p : blocks_for(ensemble)) {
        auto basis = parity_basis(H.N, p);
        const auto d = static_cast<Eigen::Index>(basis.size());
        Eigen::MatrixXd block(d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
                block(i, j) = H.matrix(basis[static_cast<std::size_t>(i)],
                                       basis[static_cast<std::size_t>(j)]);
            }
        }
        systems.push_back(diagonalize(block));
        levels.push_back(systems.back().values);
        bases.push_back(std::move(basis));
    }
    const auto weights = thermal_weights(levels, beta, nullptr);

    SectorState state;
    for (const auto& b : bases) state.basis.insert(state.basis.end(), b.begin(), b.end());
    std::vector<Eigen::Index> position(std::size_t{1} << H.N, -1);
    std::vector<std::uint32_t> sorted = state.basis;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) position[sorted[i]] = static_cast<Eigen::Index>(i);
    state.basis = sorted;
    const auto dim = static_cast<Eigen::Index>(sorted.size());
    state.rho = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t b = 0; b < bases.size(); ++b) {
        const auto& v = systems[b].vectors;
        const Eigen::MatrixXd rho = v * weights[b].asDiagonal() * v.transpose();
        for (Eigen::Index i = 0; i < rho.rows(); ++i) {
            for (Eigen::Index j = 0; j < rho.cols(); ++j) {
                state.rho(position[bases[b][static_cast<std::size_t>(i)]],
                          position[bases[b][static_cast<std::size_t>(j)]]) = rho(i, j);
            }
        }
    }
    return state;
}

Eigen::MatrixXcd evolution_operator(const DenseOperator& H, double tau) {
    const auto sys = diagonalize(H.matrix);
    Eigen::VectorXcd phases(sys.values.size());
    for (Eigen::Index i = 0; i < sys.values.size(); ++i) {
        phases[i] = std::polar(1.0, -sys.values[i] * tau);
    }
    const Eigen::MatrixXcd v = sys.vectors.cast<std::complex<double>>();
    return v * phases.asDiagonal() * v.adjoint();
}

OracleEvaluator::OracleEvaluator(const ModelSpec& battery, const ModelSpec& charger, Beta beta,
                                 Ensemble ensemble) {
    ModelPair{battery, charger}.validate();
    check_capacity(battery.N);
    N_ = battery.N;

    std::vector<Eigen::MatrixXd> hb;
    std::vector<Eigensystem> battery_sys;
    std::vector<Eigen::VectorXd> levels;
    for (Parity p : blocks_for(ensemble)) {
        hb.push_back(sector_block(mirrored(battery), p, bdg_options()));
        battery_sys.push_back(diagonalize(hb.back()));
        levels.push_back(battery_sys.back().values);
    }
    const auto weights = thermal_weights(levels, beta, &degeneracy_);

    std::size_t b = 0;
    for (Parity p : blocks_for(ensemble)) {
        const auto charger_sys = diagonalize(sector_block(mirrored(charger), p, bdg_options()));
        const auto& vb = battery_sys[b].vectors;
        const Eigen::MatrixXd rho = vb * weights[b].asDiagonal() * vb.transpose();
        const auto& vc = charger_sys.vectors;
        const Eigen::MatrixXd r = vc.transpose() * rho * vc;
        const Eigen::MatrixXd m = vc.transpose() * hb[b] * vc;
        // Tr[rho U^dag H_B U] = sum_ab r_ba m_ab exp(i (l_a - l_b) tau)
        blocks_.push_back({charger_sys.values, r.transpose().cwiseProduct(m)});
        ++b;
    }
}

double OracleEvaluator::energy(double tau) const {
    detail::CompensatedSum<double> sum;
    for (const auto& block : blocks_) {
        const auto& l = block.charger_levels;
        const auto d = l.size();
        for (Eigen::Index a = 0; a < d; ++a) {
            for (Eigen::Index b = 0; b < d; ++b) {
                const double k = block.weights(a, b);
                if (k == 0.0) continue;
                // cos(x) - 1 = -2 sin^2(x/2)
                const double s = std::sin((l[a] - l[b]) * tau / 2.0);
                sum.add(-2.0 * k * s * s);
            }
        }
    }
    return sum.value() / N_;
}

double oracle_energy(const ModelSpec& battery, const ModelSpec& charger, Beta beta, double tau,
                     Ensemble ensemble) {
    return OracleEvaluator(battery, charger, beta, ensemble).energy(tau);
}

std::vector<OracleCase> acceptance_grid() {
    constexpr double pi = std::numbers::pi;
    const std::pair<double, double> angles[] = {{0.0, pi / 3.0}, {0.4, 1.1}, {pi / 4.0, pi / 2.0 - 0.3}};
    std::vector<OracleCase> cases;
    for (ModelKind kind : {ModelKind::H1, ModelKind::H2}) {
        for (int N : {6, 8, 10}) {
            for (int n : {1, 2, 3}) {
                for (auto [pb, pc] : angles) {
                    for (Beta beta : {Beta::finite(1.0), Beta::infinite()}) {
                        for (double tau : {0.3, 1.0, 2.5}) {
                            cases.push_back({kind, N, n, pb, pc, beta, tau});
                        }
                    }
                }
            }
        }
    }
    return cases;
}

OracleReport run_oracle_check(std::span<const OracleCase> cases, const OracleTolerance& tol,
                              Ensemble ensemble, double formula_scale) {
    OracleReport report;
    // Cases sharing everything but tau reuse one evaluator.
    using Key = std::tuple<int, int, int, double, double, std::string>;
    std::map<Key, OracleEvaluator> evaluators;
    for (const auto& c : cases) {
        const ModelSpec battery{c.kind, c.N, c.n, c.phi_b};
        const ModelSpec charger{c.kind, c.N, c.n, c.phi_c};
        const Key key{static_cast<int>(c.kind), c.N, c.n, c.phi_b, c.phi_c, c.beta.to_string()};
        auto it = evaluators.find(key);
        if (it == evaluators.end()) {
            it = evaluators.emplace(key, OracleEvaluator(battery, charger, c.beta, ensemble)).first;
        }
        OracleRow row;
        row.input = c;
        row.oracle = it->second.energy(c.tau);
        row.formula = formula_scale * stored_energy(ModelPair{battery, charger}, c.beta, c.tau);
        row.abs_dev = std::abs(row.formula - row.oracle);
        row.rel_dev = std::abs(row.oracle) > tol.rel_floor ? row.abs_dev / std::abs(row.oracle) : 0.0;
        row.pass = row.abs_dev <= tol.abs && row.rel_dev <= tol.rel;
        report.max_abs = std::max(report.max_abs, row.abs_dev);
        report.max_rel = std::max(report.max_rel, row.rel_dev);
        report.pass = report.pass && row.pass;
        report.rows.push_back(row);
    }
    return report;
}

void write_fixtures(std::ostream& out, std::span<const FixtureRow> rows) {
    out << "model,N,n,phi_b,phi_c,beta,tau,energy\n";
    for (const auto& r : rows) {
        const auto& c = r.input;
        out << to_string(c.kind) << ',' << c.N << ',' << c.n << ',' << csv::format(c.phi_b) << ','
            << csv::format(c.phi_c) << ',' << c.beta.to_string() << ',' << csv::format(c.tau)
            << ',' << csv::format(r.energy) << '\n';
    }
}

std::vector<FixtureRow> read_fixtures(std::istream& in) {
    const auto table = csv::read_table(in);
    const auto col = [&](std::string_view name) { return table.column(name); };
    const std::size_t cm = col("model"), cN = col("N"), cn = col("n"), cb = col("phi_b"),
                      cc = col("phi_c"), cbeta = col("beta"), ct = col("tau"), ce = col("energy");
    std::vector<FixtureRow> rows;
    for (const auto& f : table.rows) {
        FixtureRow r;
        r.input = {parse_model_kind(f[cm]), csv::parse_int(f[cN]), csv::parse_int(f[cn]),
                   csv::parse_double(f[cb]), csv::parse_double(f[cc]), Beta::parse(f[cbeta]),
                   csv::parse_double(f[ct])};
        r.energy = csv::parse_double(f[ce]);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace qbattery::ed
