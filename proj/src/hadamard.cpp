#include "quedyn/hadamard.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "quedyn/rng.hpp"

namespace quedyn {

void controlled_unitary_apply(QubitRegister& reg, int ancilla, const PauliSum& mu,
                              double delta_x, int order) {
    if (order != 1 && order != 2)
        throw std::invalid_argument("trotter order must be 1 or 2");
    if (!mu.is_hermitian())
        throw std::invalid_argument("controlled unitary requires a Hermitian generator");
    if (order == 1) {
        for (const auto& t : mu.terms)
            reg.apply_controlled_pauli_rotation(ancilla, t, delta_x);
    } else {
        for (const auto& t : mu.terms)
            reg.apply_controlled_pauli_rotation(ancilla, t, 0.5 * delta_x);
        for (auto it = mu.terms.rbegin(); it != mu.terms.rend(); ++it)
            reg.apply_controlled_pauli_rotation(ancilla, *it, 0.5 * delta_x);
    }
}

double hadamard_ancilla_expectation(const QubitRegister& system, const PauliSum& mu,
                                    double delta_x, HadamardPart part, int order) {
    if (delta_x == 0.0) throw std::domain_error("delta_x must be nonzero");
    int m = system.num_qubits();
    int anc = m;
    QubitRegister reg(m + 1, 0);
    std::vector<cplx> amps(1ull << (m + 1), cplx(0.0, 0.0));
    for (std::uint64_t b = 0; b < (1ull << m); ++b) amps[b] = system.amplitude(b);
    reg.load_amplitudes(amps);

    const double r = 1.0 / std::numbers::sqrt2;
    const std::array<cplx, 4> hadamard{cplx(r), cplx(r), cplx(r), cplx(-r)};
    const std::array<cplx, 4> s_dagger{cplx(1.0), cplx(0.0), cplx(0.0), cplx(0.0, -1.0)};

    reg.apply_one_qubit_gate(anc, hadamard);
    if (part == HadamardPart::imaginary) reg.apply_one_qubit_gate(anc, s_dagger);
    controlled_unitary_apply(reg, anc, mu, delta_x, order);
    reg.apply_one_qubit_gate(anc, hadamard);

    // Basis states below 2^m have the ancilla clear.
    double p0 = 0.0;
    for (std::uint64_t b = 0; b < (1ull << m); ++b) p0 += std::norm(reg.amplitude(b));
    return 2.0 * p0 - 1.0;
}

double hadamard_test(const StatePreparer& preparer, const PauliSum& mu,
                     const HadamardPlan& plan, std::uint64_t seed,
                     std::uint64_t time_index) {
    if (plan.shots == 0) throw std::domain_error("shots must be >= 1");
    if (plan.delta_x == 0.0) throw std::domain_error("delta_x must be nonzero");
    QubitRegister system = preparer();
    double z = hadamard_ancilla_expectation(system, mu, plan.delta_x, plan.part,
                                            plan.trotter_order_for_u);
    double p0 = 0.5 * (1.0 + z);
    p0 = std::min(1.0, std::max(0.0, p0));
    // One batched draw is distributed like the sum of independent +-1 shots.
    auto eng = keyed_engine(seed, 0x6864746573740000ull, time_index);
    std::binomial_distribution<std::uint64_t> bin(plan.shots, p0);
    std::uint64_t k = bin(eng);
    return (2.0 * double(k) - double(plan.shots)) / double(plan.shots);
}

double estimate_dipole(double im_estimate, double delta_x) {
    if (delta_x == 0.0) throw std::domain_error("delta_x must be nonzero");
    if (std::abs(im_estimate) > 1.0 + 1e-12)
        throw std::domain_error("estimate magnitude exceeds 1");
    return -im_estimate / delta_x;
}

}  // namespace quedyn
