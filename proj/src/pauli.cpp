#include "quedyn/pauli.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace quedyn {

namespace {

// i^k for k mod 4
cplx ipow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace

PauliTerm PauliTerm::from_factors(cplx c,
                                  const std::vector<std::pair<int, Axis>>& factors) {
    PauliTerm t(c, 0, 0);
    for (auto [q, a] : factors) {
        if (q < 0 || q >= 64) throw std::domain_error("qubit index out of range");
        if (t.has_factor(q)) throw std::domain_error("duplicate qubit in PauliTerm");
        std::uint64_t bit = 1ull << q;
        if (a == Axis::X || a == Axis::Y) t.x_mask |= bit;
        if (a == Axis::Z || a == Axis::Y) t.z_mask |= bit;
    }
    return t;
}

PauliTerm PauliTerm::single(cplx c, int qubit, Axis a) {
    return from_factors(c, {{qubit, a}});
}

int PauliTerm::highest_qubit() const {
    std::uint64_t s = support();
    return s == 0 ? -1 : 63 - std::countl_zero(s);
}

Axis PauliTerm::axis_on(int qubit) const {
    std::uint64_t bit = 1ull << qubit;
    bool x = x_mask & bit, z = z_mask & bit;
    if (x && z) return Axis::Y;
    if (x) return Axis::X;
    if (z) return Axis::Z;
    throw std::domain_error("identity factor has no axis");
}

cplx PauliTerm::basis_phase(std::uint64_t b) const {
    cplx ph = ipow(std::popcount(x_mask & z_mask));
    if (std::popcount(b & z_mask) & 1) ph = -ph;
    return ph;
}

PauliTerm pauli_product(const PauliTerm& a, const PauliTerm& b) {
    std::uint64_t x3 = a.x_mask ^ b.x_mask;
    std::uint64_t z3 = a.z_mask ^ b.z_mask;
    int p = std::popcount(a.x_mask & a.z_mask) + std::popcount(b.x_mask & b.z_mask)
            - std::popcount(x3 & z3) + 2 * std::popcount(a.z_mask & b.x_mask);
    return {a.coefficient * b.coefficient * ipow(p), x3, z3};
}

PauliSum& PauliSum::operator+=(const PauliTerm& t) {
    terms.push_back(t);
    return *this;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
    terms.insert(terms.end(), other.terms.begin(), other.terms.end());
    return *this;
}

PauliSum PauliSum::operator*(cplx scale) const {
    PauliSum out = *this;
    for (auto& t : out.terms) t.coefficient *= scale;
    return out;
}

void PauliSum::canonicalize() {
    auto key_less = [](const PauliTerm& a, const PauliTerm& b) {
        if (a.support() != b.support()) return a.support() < b.support();
        if (a.x_mask != b.x_mask) return a.x_mask < b.x_mask;
        return a.z_mask < b.z_mask;
    };
    std::sort(terms.begin(), terms.end(), key_less);
    std::vector<PauliTerm> merged;
    for (const auto& t : terms) {
        if (!merged.empty() && merged.back().x_mask == t.x_mask
            && merged.back().z_mask == t.z_mask) {
            merged.back().coefficient += t.coefficient;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const PauliTerm& t) {
        return std::abs(t.coefficient) < 1e-12;
    });
    terms = std::move(merged);
}

int PauliSum::highest_qubit() const {
    int h = -1;
    for (const auto& t : terms) h = std::max(h, t.highest_qubit());
    return h;
}

cplx PauliSum::identity_coefficient() const {
    cplx c = 0.0;
    for (const auto& t : terms)
        if (t.is_identity()) c += t.coefficient;
    return c;
}

PauliSum PauliSum::without_identity() const {
    PauliSum out;
    for (const auto& t : terms)
        if (!t.is_identity()) out.terms.push_back(t);
    return out;
}

bool PauliSum::is_hermitian(double tol) const {
    for (const auto& t : terms)
        if (std::abs(t.coefficient.imag()) > tol) return false;
    return true;
}

std::string PauliTerm::to_string() const {
    std::ostringstream os;
    os << "(" << coefficient.real();
    if (coefficient.imag() >= 0) os << "+";
    os << coefficient.imag() << "i)";
    if (is_identity()) {
        os << " I";
    } else {
        for (int q = 0; q <= highest_qubit(); ++q) {
            if (!has_factor(q)) continue;
            switch (axis_on(q)) {
                case Axis::X: os << " X" << q; break;
                case Axis::Y: os << " Y" << q; break;
                case Axis::Z: os << " Z" << q; break;
            }
        }
    }
    return os.str();
}

std::string PauliSum::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) os << " + ";
        os << terms[i].to_string();
    }
    return os.str();
}

}  // namespace quedyn
