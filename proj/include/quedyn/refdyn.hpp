#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "quedyn/fermion.hpp"
#include "quedyn/pulse.hpp"
#include "quedyn/timeseries.hpp"

namespace quedyn {

/// All Sz = 0 determinants of N electrons in M spin orbitals, listed in
/// ascending occupation-bitmask order. Bit q of a mask is spin orbital q.
struct DeterminantBasis {
    int num_spin_orbitals = 0;
    int num_electrons = 0;
    std::vector<std::uint64_t> determinants;

    int size() const { return static_cast<int>(determinants.size()); }
    /// -1 when the bitmask is not in the basis.
    int index_of(std::uint64_t det) const;
};

DeterminantBasis enumerate_determinants(int num_spin_orbitals, int num_electrons);

/// Applies a ladder-operator product (right-to-left) to a determinant.
/// Returns the resulting bitmask and fermionic sign, or nullopt when the
/// string annihilates the determinant.
std::optional<std::pair<std::uint64_t, int>> apply_ladder_string(
    std::uint64_t det, const std::vector<LadderOp>& ops);

/// Dense matrix of the operator over the basis, <D_i| op |D_j>. A term whose
/// final bitmask leaves the basis sector raises domain_error.
Eigen::MatrixXcd build_matrix(const FermionOperator& op, const DeterminantBasis& basis);

struct CIEigenbasis {
    Eigen::VectorXd energies;          // ascending
    Eigen::MatrixXd coefficients;      // determinant x state
    Eigen::VectorXd s2_values;
    Eigen::VectorXd lifetime_shifts;   // Gamma_n >= 0, zero without a CAP
    std::vector<int> singlet_states;   // state indices with <S^2> < 1e-6

    // Set by add_cap_shifts: complex eigenmodes of H + V_CAP expressed in
    // this (Hermitian) eigenbasis, for field-free propagation e^{-i lambda t}.
    bool has_cap = false;
    Eigen::MatrixXcd cap_modes;
    Eigen::MatrixXcd cap_modes_inv;
    Eigen::VectorXcd cap_eigenvalues;  // E_n - (i/2) Gamma_n

    int num_states() const { return static_cast<int>(energies.size()); }
    bool is_singlet(int state) const { return s2_values[state] < 1e-6; }
};

/// Diagonalizes the CI Hamiltonian. Degenerate blocks (|dE| < 1e-9, chained)
/// are rotated to S^2 eigenstates; blocks still degenerate after spin
/// resolution are oriented against the ground state's transition dipoles,
/// x-coupled before y-coupled before z-coupled, when dipole matrices are
/// given. Every eigenvector's largest-magnitude entry is made positive.
CIEigenbasis diagonalize_ci(const Eigen::MatrixXcd& hamiltonian,
                            const Eigen::MatrixXcd& s2_matrix,
                            const std::array<Eigen::MatrixXcd, 3>* dipole_matrices = nullptr);

/// Adds complex level shifts from an anti-Hermitian CAP: diagonalizes
/// H + V_CAP once and stores eigenmodes E_n - (i/2) Gamma_n for propagation.
void add_cap_shifts(CIEigenbasis& eig, const FermionOperator& cap,
                    const DeterminantBasis& basis);

struct CIWavepacket {
    Eigen::VectorXcd b;  // coefficients over CI eigenstates
};

/// Ground state, or a basis determinant expanded in the eigenbasis.
CIWavepacket initial_wavepacket_ground(const CIEigenbasis& eig);
CIWavepacket initial_wavepacket_determinant(const CIEigenbasis& eig, int det_index);

struct TdciConfig {
    double dt = 1.0;
    double t_final = 0.0;
    int record_every = 1;
    int record_axis = 2;  // dipole column axis
};

/// Strang-split propagation B(t+dt) = U_half e^{-i mu.F(t+dt/2) dt} U_half B(t)
/// with U_half the field-free half step (complex eigenmodes under a CAP).
/// The dipole column is <mu>/<Psi|Psi>; populations are |B_i|^2, unnormalized.
TimeSeries tdci_propagate(const CIEigenbasis& eig,
                          const std::array<Eigen::MatrixXd, 3>& dipole_eig,
                          const LaserPulse& pulse, const TdciConfig& cfg,
                          const CIWavepacket& b0);

/// Transforms a determinant-basis operator matrix to the CI eigenbasis,
/// checking it is real symmetric to tolerance.
Eigen::MatrixXd to_eigenbasis_real(const Eigen::MatrixXcd& det_matrix,
                                   const CIEigenbasis& eig);

}  // namespace quedyn
