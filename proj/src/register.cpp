#include "quedyn/register.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "quedyn/rng.hpp"

namespace quedyn {

QubitRegister::QubitRegister(int num_qubits, std::uint64_t basis_index)
    : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > 30)
        throw std::domain_error("num_qubits out of supported range");
    if (basis_index >= dim())
        throw std::domain_error("basis index out of range");
    amps_.assign(dim(), cplx(0.0, 0.0));
    amps_[basis_index] = 1.0;
}

cplx QubitRegister::amplitude(std::uint64_t basis_index) const {
    if (basis_index >= dim())
        throw std::domain_error("basis index out of range");
    return amps_[basis_index];
}

double QubitRegister::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

void QubitRegister::apply_one_qubit_gate(int qubit, const std::array<cplx, 4>& u) {
    if (qubit < 0 || qubit >= num_qubits_)
        throw std::domain_error("qubit index out of range");
    // unitarity check: U U^dag = I to 1e-10
    cplx r00 = u[0] * std::conj(u[0]) + u[1] * std::conj(u[1]);
    cplx r01 = u[0] * std::conj(u[2]) + u[1] * std::conj(u[3]);
    cplx r11 = u[2] * std::conj(u[2]) + u[3] * std::conj(u[3]);
    if (std::abs(r00 - 1.0) > 1e-10 || std::abs(r11 - 1.0) > 1e-10
        || std::abs(r01) > 1e-10)
        throw std::invalid_argument("one-qubit gate is not unitary");

    std::uint64_t bit = 1ull << qubit;
    for (std::uint64_t b = 0; b < dim(); ++b) {
        if (b & bit) continue;
        cplx a0 = amps_[b], a1 = amps_[b | bit];
        amps_[b] = u[0] * a0 + u[1] * a1;
        amps_[b | bit] = u[2] * a0 + u[3] * a1;
    }
    ++counts_.one_qubit;
}

void QubitRegister::rotation_kernel(const PauliTerm& term, double theta,
                                    std::uint64_t control_mask) {
    if (std::abs(term.coefficient.imag()) > 1e-12)
        throw std::invalid_argument(
            "rotation requires a real coefficient (non-unitary otherwise)");
    if (term.highest_qubit() >= num_qubits_)
        throw std::domain_error("term acts outside the register");
    theta *= term.coefficient.real();

    const std::uint64_t x = term.x_mask, z = term.z_mask;
    const double c = std::cos(theta), s = std::sin(theta);

    if (x == 0) {
        // diagonal: e^{-i theta} on even z-parity, e^{+i theta} on odd
        const cplx ep(c, s), em(c, -s);
        for (std::uint64_t b = 0; b < dim(); ++b) {
            if ((b & control_mask) != control_mask) continue;
            amps_[b] *= (std::popcount(b & z) & 1) ? ep : em;
        }
    } else {
        // pair (b, b^x) via the lowest set bit of x; P|b> = phase(b)|b^x>
        const std::uint64_t pivot = x & (~x + 1);
        const cplx mis(0.0, -s);
        for (std::uint64_t b = 0; b < dim(); ++b) {
            if (b & pivot) continue;
            if ((b & control_mask) != control_mask) continue;
            const std::uint64_t bp = b ^ x;
            const cplx ph = term.basis_phase(b);
            const cplx a0 = amps_[b], a1 = amps_[bp];
            amps_[b] = c * a0 + mis * std::conj(ph) * a1;
            amps_[bp] = c * a1 + mis * ph * a0;
        }
    }

    // ladder-compilation cost: one basis change before/after per X or Y factor,
    // a CNOT chain down and back up the support, one z rotation
    int sup = term.support_size();
    counts_.basis_changes += 2 * std::popcount(x);
    if (sup > 0) {
        counts_.entangling += 2 * std::uint64_t(sup - 1);
        if (control_mask)
            ++counts_.controlled_rotations;
        else
            ++counts_.rotations;
    }
}

void QubitRegister::apply_pauli_rotation(const PauliTerm& term, double theta) {
    rotation_kernel(term, theta, 0);
}

void QubitRegister::apply_controlled_pauli_rotation(int control,
                                                    const PauliTerm& term,
                                                    double theta) {
    if (control < 0 || control >= num_qubits_)
        throw std::domain_error("control qubit out of range");
    if (term.has_factor(control))
        throw std::domain_error("control qubit inside the term's support");
    const std::uint64_t cmask = 1ull << control;
    if (term.support() == 0) {
        // controlled global phase = phase gate on the control qubit
        if (std::abs(term.coefficient.imag()) > 1e-12)
            throw std::invalid_argument("rotation requires a real coefficient");
        double a = theta * term.coefficient.real();
        for (std::uint64_t b = 0; b < dim(); ++b)
            if (b & cmask) amps_[b] *= cplx(std::cos(a), -std::sin(a));
        ++counts_.one_qubit;
        return;
    }
    rotation_kernel(term, theta, cmask);
}

cplx QubitRegister::expectation(const PauliTerm& term) const {
    if (term.highest_qubit() >= num_qubits_)
        throw std::domain_error("term acts outside the register");
    cplx acc(0.0, 0.0);
    const std::uint64_t x = term.x_mask;
    for (std::uint64_t b = 0; b < dim(); ++b)
        acc += std::conj(amps_[b ^ x]) * term.basis_phase(b) * amps_[b];
    return acc * term.coefficient;
}

cplx QubitRegister::expectation(const PauliSum& op) const {
    cplx acc(0.0, 0.0);
    for (const auto& t : op.terms) acc += expectation(t);
    return acc;
}

double QubitRegister::sample_pauli_expectation(const PauliTerm& term,
                                               std::uint64_t shots,
                                               std::uint64_t seed) const {
    if (shots == 0) throw std::domain_error("shots must be >= 1");
    if (std::abs(term.coefficient.imag()) > 1e-12)
        throw std::invalid_argument("sampling requires a Hermitian term");
    PauliTerm bare = term;
    bare.coefficient = 1.0;
    double ev = expectation(bare).real();
    double nsq = norm_squared();
    if (nsq > 0) ev /= nsq;
    double p = 0.5 * (1.0 + ev);
    p = std::min(1.0, std::max(0.0, p));
    auto eng = keyed_engine(seed, 0x716d6561737572ull, 0);
    std::binomial_distribution<std::uint64_t> bin(shots, p);
    std::uint64_t k = bin(eng);
    double mean = (2.0 * double(k) - double(shots)) / double(shots);
    return term.coefficient.real() * mean;
}

void QubitRegister::load_amplitudes(const std::vector<cplx>& amps) {
    if (amps.size() != dim())
        throw std::domain_error("amplitude vector has wrong length");
    amps_ = amps;
}

void QubitRegister::normalize() {
    double n = std::sqrt(norm_squared());
    if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
    for (auto& a : amps_) a /= n;
}

}  // namespace quedyn
