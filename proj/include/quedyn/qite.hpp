#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "quedyn/pauli.hpp"
#include "quedyn/pulse.hpp"
#include "quedyn/qdyn.hpp"
#include "quedyn/register.hpp"
#include "quedyn/timeseries.hpp"

namespace quedyn {

enum class ReadoutMode { exact, sampled };

/// Expectation-value access in the configured mode. Sampled mode draws each
/// value once with `shots` shots from a per-site stream; sites are numbered
/// by a running counter so a run is reproducible for a fixed seed.
struct Readout {
    ReadoutMode mode = ReadoutMode::exact;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    mutable std::uint64_t counter = 0;

    /// <P> for the operator part of a string (coefficient ignored).
    double value(const QubitRegister& reg, const PauliTerm& term) const;
};

/// All 4^m Pauli strings over an ordered qubit subset, identity first. String
/// k has, on subset qubit i, the factor encoded by base-4 digit (k >> 2i) & 3:
/// 0 = identity, 1 = X, 2 = Y, 3 = Z.
struct QiteDomain {
    std::vector<int> qubits;
    std::vector<PauliTerm> pauli_basis;  // coefficient 1 strings

    static QiteDomain full(int num_qubits);
    static QiteDomain over(std::vector<int> qubits);

    /// Index of the string with these masks, or -1 when outside the domain.
    int index_of(std::uint64_t x_mask, std::uint64_t z_mask) const;
};

struct QiteStepRecord {
    double c_squared = 1.0;
    Eigen::VectorXd a_coefficients;  // over pauli_basis minus the identity
    double residual = 0.0;
    double condition_estimate = 1.0;
};

/// Routes terms with |Im coefficient| > 1e-12 to the non-Hermitian sequence.
/// A term with both parts large is split into a Hermitian and an
/// anti-Hermitian piece.
std::pair<PauliSum, std::vector<PauliTerm>> split_hamiltonian(const PauliSum& h);

/// Groups anti-Hermitian terms into per-step replacement units: every
/// single-qubit Z term iq Z_k is paired with a matching identity share so the
/// unit is a multiple of a number operator (c^2 stays in (0,1] for a CAP);
/// leftover identity becomes a norm-only unit, first in the list. Remaining
/// strings become single-term units in canonical order.
std::vector<PauliSum> group_cap_units(const std::vector<PauliTerm>& non_hermitian);

/// c_j^2 = Re(1 - 2i dt <unit>), the first-order squared norm of
/// e^{-i unit dt}|Psi>. The unit must have purely imaginary coefficients.
double norm_factor(const QubitRegister& reg, const PauliSum& unit, double dt,
                   const Readout& readout);

/// Fits the unitary generator: solves (S_R + delta I) a = b over the domain
/// strings (identity excluded) with S_R,IJ = Re<s_I s_J> and
/// b_I = Im<s_I G>, G = i * unit. The residual is the first-order defect
/// |(-iA - (G - <G>))|Psi>| evaluated from the same expectation values.
QiteStepRecord solve_qite_coefficients(const QubitRegister& reg, const PauliSum& unit,
                                       double dt, const QiteDomain& domain,
                                       double delta, const Readout& readout);

/// Applies prod_I exp(-i a_I dt s_I) in the domain's basis order.
void apply_qite_step(QubitRegister& reg, const QiteStepRecord& rec,
                     const QiteDomain& domain, double dt);

struct QiteConfig {
    ReadoutMode mode = ReadoutMode::exact;
    std::uint64_t shots = 1000000;
    double delta = 0.1;
    std::uint64_t seed = 1;
};

/// Trotter propagation where every non-Hermitian CAP factor is replaced by a
/// fitted unitary plus a classical norm ledger. The norm column carries the
/// accumulated product of c^2; populations are norm-weighted so they compare
/// directly to the reference engine's decaying populations.
TimeSeries propagate_with_cap(QubitRegister& reg, const PauliSum& h_el,
                              const std::array<PauliSum, 3>& dipoles,
                              const PauliSum& cap, const LaserPulse& pulse,
                              const PropagationConfig& cfg, const QiteConfig& qite,
                              const StepObserver& observer,
                              std::vector<QiteStepRecord>* record_stream = nullptr);

}  // namespace quedyn
