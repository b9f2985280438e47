#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "quedyn/pauli.hpp"

namespace quedyn {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Spatial-orbital integrals in the molecular-orbital basis, as ingested from
/// an FCIDUMP file plus dipole and orbital-energy sidecars. Two-electron
/// integrals are stored in chemists' notation (pq|rs) with 8-fold symmetry.
struct MolecularIntegrals {
    int num_spatial_orbitals = 0;  // K
    int num_electrons = 0;         // N
    double core_energy = 0.0;
    Eigen::MatrixXd one_body;                     // h_pq, K x K
    std::vector<double> two_body;                 // (pq|rs), K^4 flattened
    std::array<Eigen::MatrixXd, 3> dipole_one_body;  // electronic -r integrals
    Eigen::Vector3d nuclear_dipole = Eigen::Vector3d::Zero();
    std::vector<double> orbital_energies;

    double& tb(int p, int q, int r, int s) {
        int K = num_spatial_orbitals;
        return two_body[((p * K + q) * K + r) * K + s];
    }
    double tb(int p, int q, int r, int s) const {
        int K = num_spatial_orbitals;
        return two_body[((p * K + q) * K + r) * K + s];
    }
};

struct LadderOp {
    int index;    // spin orbital, alpha = 2p, beta = 2p+1
    bool create;  // a^dagger if true
};

struct FermionTerm {
    cplx coefficient;
    std::vector<LadderOp> ops;  // applied right-to-left onto kets
};

/// Sum of ladder-operator products plus a scalar part.
struct FermionOperator {
    cplx constant{0.0, 0.0};
    std::vector<FermionTerm> terms;
    bool hermitian = false;

    int max_spin_orbital() const;
};

/// Interleaved spin ordering: spatial orbital p with spin alpha sits on qubit
/// 2p, spin beta on qubit 2p+1. Spin-orbital indices already follow this rule,
/// so the map to qubits is the identity.
struct SpinOrbitalOrdering {
    int qubit_of(int spin_orbital) const { return spin_orbital; }
    static SpinOrbitalOrdering interleaved() { return {}; }
};

/// Parses the FCIDUMP body (core energy, h_pq, (pq|rs)); dipole and orbital
/// energies come from the sidecars below. Errors carry 1-based line numbers.
MolecularIntegrals parse_fcidump(std::istream& text);

void parse_dipole_sidecar(std::istream& text, int axis, MolecularIntegrals& mi);
void parse_orben_sidecar(std::istream& text, MolecularIntegrals& mi);

/// Loads <base>.fcidump together with <base>.dipole.{x,y,z} and <base>.orben;
/// a missing sidecar is a parse error.
MolecularIntegrals load_molecule(const std::string& fcidump_path);

/// H = E_core + sum h_pq a+_{p s} a_{q s} + 1/2 sum (pq|rs) a+_{p s} a+_{r t} a_{s t} a_{q s}
FermionOperator build_electronic_hamiltonian(const MolecularIntegrals& mi);

/// mu_axis = nuclear_dipole[axis] + sum d_pq a+_{p s} a_{q s}
FermionOperator build_dipole_operator(const MolecularIntegrals& mi, int axis);

/// V_CAP = -(i/2) sum_p gamma_p n_p with gamma_p = 1/(d sqrt(2 eps_p)) for
/// eps_p > 0 and 0 otherwise; same gamma for both spins of a spatial orbital.
FermionOperator build_cap_operator(const MolecularIntegrals& mi, double d);

/// S^2 = S-S+ + Sz^2 + Sz as ladder products over K spatial orbitals.
FermionOperator build_s2_operator(int num_spatial_orbitals);

/// Total number operator sum_p n_p.
FermionOperator build_number_operator(int num_spin_orbitals);

/// a+_p -> 1/2(X_p - iY_p) (x) Z_{p-1} ... Z_0, a_p -> 1/2(X_p + iY_p) (x) Z-string.
/// The sign convention is fixed so the mapped n_p = a+_p a_p has eigenvalue 1
/// exactly on basis states with bit p set.
PauliSum jordan_wigner(const FermionOperator& op, SpinOrbitalOrdering ordering);

}  // namespace quedyn
