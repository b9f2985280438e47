#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "quedyn/pauli.hpp"

namespace quedyn {

/// Tally of the gates a hardware compilation of the applied operations would
/// need. Rotations are executed here by direct amplitude pairing; the ladder
/// compilation (basis changes + CNOT chain + one z rotation) is only counted.
struct GateCounts {
    std::uint64_t one_qubit = 0;
    std::uint64_t basis_changes = 0;
    std::uint64_t entangling = 0;
    std::uint64_t rotations = 0;
    std::uint64_t controlled_rotations = 0;

    void reset() { *this = GateCounts{}; }
};

/// Dense statevector over 2^M computational basis states. Basis index b has
/// qubit q occupied iff bit q of b is set (qubit 0 = least significant bit).
class QubitRegister {
public:
    QubitRegister(int num_qubits, std::uint64_t basis_index);

    int num_qubits() const { return num_qubits_; }
    std::uint64_t dim() const { return std::uint64_t(1) << num_qubits_; }

    cplx amplitude(std::uint64_t basis_index) const;
    const std::vector<cplx>& amplitudes() const { return amps_; }
    std::vector<cplx>& amplitudes_mut() { return amps_; }

    double norm_squared() const;

    /// u is row-major {u00, u01, u10, u11}; must be unitary to 1e-10.
    void apply_one_qubit_gate(int qubit, const std::array<cplx, 4>& u);

    /// exp(-i theta P) for the operator part of `term`; the coefficient must
    /// be real and is folded into the angle as theta * coefficient.
    void apply_pauli_rotation(const PauliTerm& term, double theta);

    /// Rotation restricted to the control-qubit = 1 subspace.
    void apply_controlled_pauli_rotation(int control, const PauliTerm& term,
                                         double theta);

    /// <Psi| op |Psi>, exact (simulator privilege, non-destructive).
    cplx expectation(const PauliSum& op) const;
    cplx expectation(const PauliTerm& term) const;

    /// coefficient * mean of `shots` +/-1 draws with success probability
    /// (1+<P>)/2. Samples the exact distribution; the register never
    /// collapses. Deterministic for a fixed seed.
    double sample_pauli_expectation(const PauliTerm& term, std::uint64_t shots,
                                    std::uint64_t seed) const;

    /// Overwrite the amplitudes (state preparation oracle); caller provides a
    /// normalized vector of length 2^M.
    void load_amplitudes(const std::vector<cplx>& amps);

    void normalize();

    GateCounts& gate_counts() { return counts_; }
    const GateCounts& gate_counts() const { return counts_; }

private:
    void rotation_kernel(const PauliTerm& term, double theta,
                         std::uint64_t control_mask);

    int num_qubits_;
    std::vector<cplx> amps_;
    GateCounts counts_;
};

}  // namespace quedyn
