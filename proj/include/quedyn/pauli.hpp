#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace quedyn {

using cplx = std::complex<double>;

enum class Axis { X, Y, Z };

/// Tensor product of single-qubit Pauli operators times a complex coefficient.
/// Stored in symplectic form: the operator part is i^{|x&z|} X^x Z^z, so a bit
/// set in both masks is exactly Y on that qubit. Squares to the identity.
struct PauliTerm {
    cplx coefficient{1.0, 0.0};
    std::uint64_t x_mask = 0;
    std::uint64_t z_mask = 0;

    PauliTerm() = default;
    PauliTerm(cplx c, std::uint64_t x, std::uint64_t z)
        : coefficient(c), x_mask(x), z_mask(z) {}

    static PauliTerm identity(cplx c = 1.0) { return {c, 0, 0}; }
    static PauliTerm from_factors(cplx c,
                                  const std::vector<std::pair<int, Axis>>& factors);
    static PauliTerm single(cplx c, int qubit, Axis a);

    std::uint64_t support() const { return x_mask | z_mask; }
    int support_size() const { return std::popcount(support()); }
    bool is_identity() const { return support() == 0; }
    int highest_qubit() const;

    /// Axis acting on `qubit`, or no value for identity.
    bool has_factor(int qubit) const { return (support() >> qubit) & 1; }
    Axis axis_on(int qubit) const;

    /// |b> -> phase(b) |b ^ x_mask> for the operator part (coefficient excluded).
    cplx basis_phase(std::uint64_t b) const;

    std::string to_string() const;
};

/// Operator product of the operator parts, coefficients multiplied.
PauliTerm pauli_product(const PauliTerm& a, const PauliTerm& b);

/// Linear combination of PauliTerms.
struct PauliSum {
    std::vector<PauliTerm> terms;

    PauliSum() = default;
    explicit PauliSum(std::vector<PauliTerm> t) : terms(std::move(t)) {}

    PauliSum& operator+=(const PauliTerm& t);
    PauliSum& operator+=(const PauliSum& other);
    PauliSum operator*(cplx scale) const;

    /// Merge duplicate factor sets, drop |coefficient| < 1e-12, and order terms
    /// deterministically: identity first, then ascending (support, x, z).
    void canonicalize();

    int highest_qubit() const;
    bool empty() const { return terms.empty(); }
    std::size_t size() const { return terms.size(); }

    /// Coefficient carried by the identity string (0 if absent).
    cplx identity_coefficient() const;
    /// Copy with the identity string removed.
    PauliSum without_identity() const;

    /// True when every term's coefficient is real to `tol` (Hermitian sum,
    /// given that each Pauli string is Hermitian).
    bool is_hermitian(double tol = 1e-12) const;

    std::string to_string() const;
};

}  // namespace quedyn
