#pragma once

#include <cstdint>
#include <functional>

#include "quedyn/pauli.hpp"
#include "quedyn/register.hpp"

namespace quedyn {

enum class HadamardPart { real, imaginary };
enum class RestartMode { cached_register, honest_restart };

/// Protocol settings for estimating <e^{-i mu delta_x}>. The imaginary part
/// with linear inversion -Im/delta_x recovers <mu> with O(delta_x^2) bias.
struct HadamardPlan {
    double delta_x = 0.1;
    std::uint64_t shots = 1;
    HadamardPart part = HadamardPart::imaginary;
    int trotter_order_for_u = 1;
    RestartMode restart_mode = RestartMode::cached_register;
};

/// Applies controlled-e^{-i mu delta_x} as a Trotterized product of controlled
/// Pauli rotations; identity terms become controlled phase gates.
void controlled_unitary_apply(QubitRegister& reg, int ancilla, const PauliSum& mu,
                              double delta_x, int order);

using StatePreparer = std::function<QubitRegister()>;

/// Exact ancilla <Z> after the protocol: Hadamard, (S-dagger for the
/// imaginary part), controlled-U, Hadamard. Equals Re or Im <U> up to the
/// Trotter error in U.
double hadamard_ancilla_expectation(const QubitRegister& system, const PauliSum& mu,
                                    double delta_x, HadamardPart part, int order);

/// Shot-sampled Hadamard test: mean of +-1 ancilla outcomes, deterministic
/// per (seed, time_index). The preparer must reproduce the propagated system
/// state at the queried time.
double hadamard_test(const StatePreparer& preparer, const PauliSum& mu,
                     const HadamardPlan& plan, std::uint64_t seed,
                     std::uint64_t time_index);

/// -estimate/delta_x; first-order inversion of Im<e^{-i mu delta_x}>.
double estimate_dipole(double im_estimate, double delta_x);

}  // namespace quedyn
