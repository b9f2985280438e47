#pragma once

// Dense-matrix oracles used only by tests: explicit Kronecker products and
// matrix exponentials, independent of the library's masked-index kernels.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <complex>
#include <random>
#include <vector>

#include "quedyn/pauli.hpp"
#include "quedyn/register.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using quedyn::cplx;

inline Mat pauli1(char a) {
    Mat m(2, 2);
    switch (a) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        default:  m << 1, 0, 0, -1; break;
    }
    return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Dense matrix of a PauliTerm on num_qubits qubits. Qubit 0 is the least
// significant bit, so it is the rightmost factor in the Kronecker chain.
inline Mat term_matrix(const quedyn::PauliTerm& t, int num_qubits) {
    Mat m = Mat::Identity(1, 1);
    for (int q = num_qubits - 1; q >= 0; --q) {
        char a = 'I';
        if (t.has_factor(q)) {
            switch (t.axis_on(q)) {
                case quedyn::Axis::X: a = 'X'; break;
                case quedyn::Axis::Y: a = 'Y'; break;
                case quedyn::Axis::Z: a = 'Z'; break;
            }
        }
        m = kron(m, pauli1(a));
    }
    return t.coefficient * m;
}

inline Mat sum_matrix(const quedyn::PauliSum& s, int num_qubits) {
    Mat m = Mat::Zero(1 << num_qubits, 1 << num_qubits);
    for (const auto& t : s.terms) m += term_matrix(t, num_qubits);
    return m;
}

inline Mat expm(const Mat& m) { return m.exp(); }

inline Vec to_vec(const quedyn::QubitRegister& reg) {
    Vec v(reg.dim());
    for (std::uint64_t b = 0; b < reg.dim(); ++b) v(b) = reg.amplitude(b);
    return v;
}

inline void load_vec(quedyn::QubitRegister& reg, const Vec& v) {
    std::vector<cplx> a(v.data(), v.data() + v.size());
    reg.load_amplitudes(a);
}

inline quedyn::QubitRegister random_register(int num_qubits, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    quedyn::QubitRegister reg(num_qubits, 0);
    std::vector<cplx> a(reg.dim());
    for (auto& x : a) x = cplx(g(eng), g(eng));
    reg.load_amplitudes(a);
    reg.normalize();
    return reg;
}

inline quedyn::PauliTerm random_term(int num_qubits, std::uint64_t seed,
                                     bool real_coef = true) {
    std::mt19937_64 eng(seed);
    std::uniform_int_distribution<std::uint64_t> mask(0, (1ull << num_qubits) - 1);
    std::normal_distribution<double> g(0.0, 1.0);
    quedyn::PauliTerm t;
    t.x_mask = mask(eng);
    t.z_mask = mask(eng);
    t.coefficient = real_coef ? cplx(g(eng), 0.0) : cplx(g(eng), g(eng));
    return t;
}

}  // namespace oracle
