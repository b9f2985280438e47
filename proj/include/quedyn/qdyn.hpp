#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>

#include "quedyn/pauli.hpp"
#include "quedyn/pulse.hpp"
#include "quedyn/refdyn.hpp"
#include "quedyn/register.hpp"
#include "quedyn/timeseries.hpp"

namespace quedyn {

struct PropagationConfig {
    double dt = 0.2;
    int trotter_order = 2;
    double t_final = 0.0;
    int record_every = 1;
    int record_axis = 2;
};

/// H(t_mid) = H_el + sum_a F_a(t_mid) mu_a, canonicalized so shared Pauli
/// strings merge. Field components that are exactly zero contribute nothing.
PauliSum assemble_step_hamiltonian(const PauliSum& h_el,
                                   const std::array<PauliSum, 3>& dipoles,
                                   const LaserPulse& pulse, double t_mid);

/// One Trotter step of e^{-i h dt}. Order 1 applies each term once in
/// canonical order; order 2 applies half-angle sweeps forward then reversed.
/// The Hamiltonian must be Hermitian (real coefficients after merging).
void trotter_step(QubitRegister& reg, const PauliSum& h, double dt, int order);

/// (prod_t e^{-i c_t dt/n P_t})^n, the n-cycle refinement of a first-order step.
void trotter_cycles(QubitRegister& reg, const PauliSum& h, double dt, int n);

/// Loads a CI wavepacket onto the register: amplitude of basis state
/// |bitmask(D)> is sum_s C(D,s) b_s. Register order matches determinant
/// bitmasks because the Jordan-Wigner parity strings use the same rule.
QubitRegister prepare_register(const CIEigenbasis& eig, const DeterminantBasis& basis,
                               const CIWavepacket& w);

/// |<Phi_s|reg>|^2 for every CI eigenstate.
Eigen::VectorXd populations_from_register(const QubitRegister& reg,
                                          const CIEigenbasis& eig,
                                          const DeterminantBasis& basis);

/// Appends norm, dipole and singlet populations for the current register to
/// the series. `norm_scale` multiplies norm and populations; unitary engines
/// pass 1, the CAP engine passes the accumulated c^2 product.
void record_ci_row(TimeSeries& ts, const QubitRegister& reg, const CIEigenbasis& eig,
                   const DeterminantBasis& basis, const PauliSum& mu_record,
                   double norm_scale);

/// Called on the recording grid after times/field are appended; fills the
/// remaining columns. `norm_scale` is 1 for unitary engines; the CAP engine
/// passes its accumulated c^2 ledger.
using StepObserver =
    std::function<void(double t, const QubitRegister&, double norm_scale, TimeSeries&)>;

/// Observer computing the standard observable row. The referenced objects
/// must outlive the returned callable.
StepObserver make_ci_recorder(const CIEigenbasis& eig, const DeterminantBasis& basis,
                              PauliSum mu_record);

/// Trotterized real-time propagation under the pulse. Records at t = 0, every
/// record_every-th step and the final step; times and field columns are
/// filled here, the observer fills the rest.
TimeSeries propagate_quantum(QubitRegister& reg, const PauliSum& h_el,
                             const std::array<PauliSum, 3>& dipoles,
                             const LaserPulse& pulse, const PropagationConfig& cfg,
                             const StepObserver& observer);

}  // namespace quedyn
