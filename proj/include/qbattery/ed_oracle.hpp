#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qbattery/energetics.hpp"
#include "qbattery/model.hpp"

namespace qbattery::ed {

inline constexpr int kMaxDenseSpins = 14;

/// Computational basis: bit j of a state index is 0 for sigma^z_j = +1
/// (fermion vacuum at j) and 1 for sigma^z_j = -1.
enum class Parity { Even, Odd };

/// Which states enter the battery's initial (thermal or ground) state.
enum class Ensemble {
    /// Odd fermion-parity spin sector only (odd number of down spins).
    OddSector,
    /// Both parity blocks, with the even block carrying the Jordan-Wigner
    /// boundary twist: the full Fock space of the integer-momentum fermion
    /// model, which is the ensemble the momentum-space energy describes.
    PeriodicFermionFock,
};

std::string_view to_string(Ensemble e);
Ensemble parse_ensemble(std::string_view text);

struct HamiltonianOptions {
    double prefactor = 1.0;
    /// Flip the sign of boundary-crossing cluster terms on even-parity
    /// states so both blocks map onto integer-momentum fermions.
    bool fermionic_even_boundary = false;
};

/// Real symmetric matrix in the sigma^z basis (the Hamiltonians are real).
struct DenseOperator {
    int N = 0;
    Eigen::MatrixXd matrix;

    Eigen::Index dim() const { return matrix.rows(); }
};

/// H1 / H2 exactly as written, periodic boundary conditions:
///   -cos(phi) sum_j sum_l w_l sx_j (prod_{k=1}^{l} sz_{j+k}) sx_{j+l+1} + sin(phi) sum_j sz_j
/// with l = n only (H1, w = 1) or l = 1..n (H2, w = 1/n).
DenseOperator build_hamiltonian(const ModelSpec& spec, const HamiltonianOptions& options = {});

/// Spin operator whose Jordan-Wigner image is the quadratic form with the
/// momentum-space coefficients of model.hpp: (1/2) H(-phi) with the
/// fermionic even-sector boundary.
DenseOperator bdg_equivalent_hamiltonian(const ModelSpec& spec);

std::vector<std::uint32_t> parity_basis(int N, Parity parity);
Eigen::VectorXd parity_diagonal(int N);

/// Block of H on the given parity sector; only the block is allocated.
Eigen::MatrixXd sector_block(const ModelSpec& spec, Parity parity,
                             const HamiltonianOptions& options = {});

struct SectorState {
    std::vector<std::uint32_t> basis;  // sorted state indices
    Eigen::MatrixXd rho;               // on `basis`
};

/// rho ~ exp(-beta H) on the odd sector; at infinite beta the uniform
/// mixture over the sector ground space (eigenvalues within 1e-10).
SectorState sector_thermal_state(const DenseOperator& H, Beta beta);

/// Same, over the ensemble's states. H must conserve parity.
SectorState thermal_state(const DenseOperator& H, Beta beta, Ensemble ensemble);

/// exp(-i H tau) on the full space.
Eigen::MatrixXcd evolution_operator(const DenseOperator& H, double tau);

/// Stored energy per spin, (1/N) Tr[rho_B (U^dag H_B U - H_B)], U = exp(-i H_C tau).
/// Eigendecompositions are done once; energy(tau) is O(d^2).
class OracleEvaluator {
public:
    OracleEvaluator(const ModelSpec& battery, const ModelSpec& charger, Beta beta,
                    Ensemble ensemble = Ensemble::PeriodicFermionFock);

    double energy(double tau) const;
    /// Number of battery eigenstates carrying weight at infinite beta.
    int ground_degeneracy() const { return degeneracy_; }

private:
    struct Block {
        Eigen::VectorXd charger_levels;
        Eigen::MatrixXd weights;  // rho_ba * (H_B)_ab in the charger eigenbasis
    };
    int N_ = 0;
    int degeneracy_ = 0;
    std::vector<Block> blocks_;
};

double oracle_energy(const ModelSpec& battery, const ModelSpec& charger, Beta beta, double tau,
                     Ensemble ensemble = Ensemble::PeriodicFermionFock);

// ---- acceptance grid and fixtures ----

struct OracleCase {
    ModelKind kind = ModelKind::H1;
    int N = 0;
    int n = 0;
    double phi_b = 0.0;
    double phi_c = 0.0;
    Beta beta = Beta::infinite();
    double tau = 0.0;
};

struct OracleRow {
    OracleCase input;
    double formula = 0.0;
    double oracle = 0.0;
    double abs_dev = 0.0;
    double rel_dev = 0.0;  // 0 when |oracle| <= 1e-10
    bool pass = false;
};

struct OracleTolerance {
    double abs = 1e-8;
    double rel = 1e-6;
    double rel_floor = 1e-10;  // relative check only above this oracle value
};

struct OracleReport {
    std::vector<OracleRow> rows;
    double max_abs = 0.0;
    double max_rel = 0.0;
    bool pass = true;
};

/// {H1,H2} x N{6,8,10} x n{1,2,3} x angle pairs x beta{1,inf} x tau{0.3,1,2.5}.
std::vector<OracleCase> acceptance_grid();

/// formula_scale multiplies the momentum-space energy (fault injection).
OracleReport run_oracle_check(std::span<const OracleCase> cases, const OracleTolerance& tol = {},
                              Ensemble ensemble = Ensemble::PeriodicFermionFock,
                              double formula_scale = 1.0);

struct FixtureRow {
    OracleCase input;
    double energy = 0.0;
};

void write_fixtures(std::ostream& out, std::span<const FixtureRow> rows);
std::vector<FixtureRow> read_fixtures(std::istream& in);

}  // namespace qbattery::ed
