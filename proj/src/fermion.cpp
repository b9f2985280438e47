#include "quedyn/fermion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace quedyn {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

// Stores (pq|rs) into all eight symmetry-equivalent slots.
void set_eri(MolecularIntegrals& mi, int p, int q, int r, int s, double v) {
    mi.tb(p, q, r, s) = v;
    mi.tb(q, p, r, s) = v;
    mi.tb(p, q, s, r) = v;
    mi.tb(q, p, s, r) = v;
    mi.tb(r, s, p, q) = v;
    mi.tb(s, r, p, q) = v;
    mi.tb(r, s, q, p) = v;
    mi.tb(s, r, q, p) = v;
}

}  // namespace

int FermionOperator::max_spin_orbital() const {
    int m = -1;
    for (const auto& t : terms)
        for (const auto& op : t.ops) m = std::max(m, op.index);
    return m;
}

MolecularIntegrals parse_fcidump(std::istream& text) {
    MolecularIntegrals mi;
    std::string line;
    int lineno = 0;

    // Header: starts with &FCI, runs until &END (or a bare /). NORB and NELEC
    // are required; other namelist entries are accepted and ignored.
    std::string header;
    bool header_done = false;
    bool saw_fci = false;
    while (!header_done && std::getline(text, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (!saw_fci) {
            if (t.rfind("&FCI", 0) != 0) fail(lineno, "expected &FCI header");
            saw_fci = true;
        }
        header += " " + t;
        if (t.find("&END") != std::string::npos || t == "/" || t.back() == '/')
            header_done = true;
    }
    if (!saw_fci) fail(lineno ? lineno : 1, "missing &FCI header");
    if (!header_done) fail(lineno, "header not terminated by &END");

    auto header_int = [&](const std::string& key) -> int {
        auto pos = header.find(key + "=");
        if (pos == std::string::npos) fail(lineno, "header missing " + key);
        const char* c = header.c_str() + pos + key.size() + 1;
        char* end = nullptr;
        long v = std::strtol(c, &end, 10);
        if (end == c) fail(lineno, "malformed integer for " + key);
        return static_cast<int>(v);
    };
    int K = header_int("NORB");
    int N = header_int("NELEC");
    if (K < 1 || K > 16) fail(lineno, "NORB out of supported range [1,16]");
    if (N < 1 || N > 2 * K) fail(lineno, "NELEC out of range");

    mi.num_spatial_orbitals = K;
    mi.num_electrons = N;
    mi.one_body = Eigen::MatrixXd::Zero(K, K);
    mi.two_body.assign(static_cast<std::size_t>(K) * K * K * K, 0.0);
    for (auto& d : mi.dipole_one_body) d = Eigen::MatrixXd::Zero(K, K);

    while (std::getline(text, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        std::istringstream ss(t);
        double v;
        int i, j, k, l;
        if (!(ss >> v >> i >> j >> k >> l)) fail(lineno, "expected: value i j k l");
        std::string rest;
        if (ss >> rest) fail(lineno, "trailing tokens after integral entry");
        auto in_range = [&](int x) { return x >= 0 && x <= K; };
        if (!in_range(i) || !in_range(j) || !in_range(k) || !in_range(l))
            fail(lineno, "orbital index out of range");
        if (i == 0 && j == 0 && k == 0 && l == 0) {
            mi.core_energy = v;
        } else if (k == 0 && l == 0) {
            if (i == 0 || j == 0) fail(lineno, "one-body entry needs two nonzero indices");
            mi.one_body(i - 1, j - 1) = v;
            mi.one_body(j - 1, i - 1) = v;
        } else {
            if (i == 0 || j == 0 || k == 0 || l == 0)
                fail(lineno, "two-body entry needs four nonzero indices");
            set_eri(mi, i - 1, j - 1, k - 1, l - 1, v);
        }
    }
    return mi;
}

void parse_dipole_sidecar(std::istream& text, int axis, MolecularIntegrals& mi) {
    if (axis < 0 || axis > 2) throw std::domain_error("dipole axis must be 0, 1 or 2");
    int K = mi.num_spatial_orbitals;
    std::string line;
    int lineno = 0;
    bool saw_nuclear = false;
    while (std::getline(text, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        std::istringstream ss(t);
        double v;
        int i, j;
        if (!(ss >> v >> i >> j)) fail(lineno, "expected: value i j");
        if (i < 0 || i > K || j < 0 || j > K) fail(lineno, "orbital index out of range");
        if (i == 0 && j == 0) {
            mi.nuclear_dipole[axis] = v;
            saw_nuclear = true;
        } else if (i == 0 || j == 0) {
            fail(lineno, "dipole entry needs two nonzero indices");
        } else {
            mi.dipole_one_body[axis](i - 1, j - 1) = v;
            mi.dipole_one_body[axis](j - 1, i - 1) = v;
        }
    }
    if (!saw_nuclear) fail(lineno, "dipole sidecar missing nuclear 'value 0 0' entry");
}

void parse_orben_sidecar(std::istream& text, MolecularIntegrals& mi) {
    int K = mi.num_spatial_orbitals;
    std::string line;
    int lineno = 0;
    mi.orbital_energies.clear();
    while (std::getline(text, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        std::istringstream ss(t);
        double v;
        if (!(ss >> v)) fail(lineno, "expected one orbital energy per line");
        mi.orbital_energies.push_back(v);
    }
    if (static_cast<int>(mi.orbital_energies.size()) != K)
        fail(lineno, "expected " + std::to_string(K) + " orbital energies, got " +
                         std::to_string(mi.orbital_energies.size()));
}

MolecularIntegrals load_molecule(const std::string& fcidump_path) {
    auto base = fcidump_path;
    auto dot = base.rfind(".fcidump");
    if (dot != std::string::npos && dot == base.size() - 8) base.erase(dot);

    std::ifstream fci(fcidump_path);
    if (!fci) throw ParseError("cannot open " + fcidump_path);
    MolecularIntegrals mi;
    try {
        mi = parse_fcidump(fci);
    } catch (const ParseError& e) {
        throw ParseError(fcidump_path + ": " + e.what());
    }

    const char* axes = "xyz";
    for (int a = 0; a < 3; ++a) {
        std::string path = base + ".dipole." + axes[a];
        std::ifstream f(path);
        if (!f) throw ParseError("missing dipole sidecar " + path);
        try {
            parse_dipole_sidecar(f, a, mi);
        } catch (const ParseError& e) {
            throw ParseError(path + ": " + e.what());
        }
    }
    std::string orben_path = base + ".orben";
    std::ifstream f(orben_path);
    if (!f) throw ParseError("missing orbital-energy sidecar " + orben_path);
    try {
        parse_orben_sidecar(f, mi);
    } catch (const ParseError& e) {
        throw ParseError(orben_path + ": " + e.what());
    }
    return mi;
}

FermionOperator build_electronic_hamiltonian(const MolecularIntegrals& mi) {
    FermionOperator op;
    op.constant = mi.core_energy;
    op.hermitian = true;
    int K = mi.num_spatial_orbitals;
    for (int p = 0; p < K; ++p)
        for (int q = 0; q < K; ++q) {
            double h = mi.one_body(p, q);
            if (std::abs(h) < 1e-14) continue;
            for (int s = 0; s < 2; ++s)
                op.terms.push_back({h, {{2 * p + s, true}, {2 * q + s, false}}});
        }
    for (int p = 0; p < K; ++p)
        for (int q = 0; q < K; ++q)
            for (int r = 0; r < K; ++r)
                for (int s = 0; s < K; ++s) {
                    double v = mi.tb(p, q, r, s);
                    if (std::abs(v) < 1e-14) continue;
                    for (int s1 = 0; s1 < 2; ++s1)
                        for (int s2 = 0; s2 < 2; ++s2)
                            op.terms.push_back({0.5 * v,
                                                {{2 * p + s1, true},
                                                 {2 * r + s2, true},
                                                 {2 * s + s2, false},
                                                 {2 * q + s1, false}}});
                }
    return op;
}

FermionOperator build_dipole_operator(const MolecularIntegrals& mi, int axis) {
    if (axis < 0 || axis > 2) throw std::domain_error("dipole axis must be 0, 1 or 2");
    FermionOperator op;
    op.constant = mi.nuclear_dipole[axis];
    op.hermitian = true;
    int K = mi.num_spatial_orbitals;
    for (int p = 0; p < K; ++p)
        for (int q = 0; q < K; ++q) {
            double d = mi.dipole_one_body[axis](p, q);
            if (std::abs(d) < 1e-14) continue;
            for (int s = 0; s < 2; ++s)
                op.terms.push_back({d, {{2 * p + s, true}, {2 * q + s, false}}});
        }
    return op;
}

FermionOperator build_cap_operator(const MolecularIntegrals& mi, double d) {
    if (d <= 0.0) throw std::domain_error("CAP onset parameter d must be positive");
    if (static_cast<int>(mi.orbital_energies.size()) != mi.num_spatial_orbitals)
        throw std::domain_error("CAP requires orbital energies for every spatial orbital");
    FermionOperator op;
    op.hermitian = false;
    for (int p = 0; p < mi.num_spatial_orbitals; ++p) {
        double eps = mi.orbital_energies[p];
        if (eps <= 0.0) continue;
        double gamma = 1.0 / (d * std::sqrt(2.0 * eps));
        for (int s = 0; s < 2; ++s)
            op.terms.push_back({cplx(0.0, -0.5 * gamma),
                                {{2 * p + s, true}, {2 * p + s, false}}});
    }
    return op;
}

FermionOperator build_s2_operator(int num_spatial_orbitals) {
    FermionOperator op;
    op.hermitian = true;
    int K = num_spatial_orbitals;
    // S- S+ with S+ = sum_p a+_{p alpha} a_{p beta}
    for (int p = 0; p < K; ++p)
        for (int q = 0; q < K; ++q)
            op.terms.push_back({1.0,
                                {{2 * p + 1, true},
                                 {2 * p, false},
                                 {2 * q, true},
                                 {2 * q + 1, false}}});
    // Sz = 1/2 sum_p (n_{p alpha} - n_{p beta})
    for (int p = 0; p < K; ++p) {
        op.terms.push_back({0.5, {{2 * p, true}, {2 * p, false}}});
        op.terms.push_back({-0.5, {{2 * p + 1, true}, {2 * p + 1, false}}});
    }
    // Sz^2
    for (int p = 0; p < K; ++p)
        for (int q = 0; q < K; ++q)
            for (int sp = 0; sp < 2; ++sp)
                for (int sq = 0; sq < 2; ++sq) {
                    double sign = (sp == sq) ? 0.25 : -0.25;
                    op.terms.push_back({sign,
                                        {{2 * p + sp, true},
                                         {2 * p + sp, false},
                                         {2 * q + sq, true},
                                         {2 * q + sq, false}}});
                }
    return op;
}

FermionOperator build_number_operator(int num_spin_orbitals) {
    FermionOperator op;
    op.hermitian = true;
    for (int q = 0; q < num_spin_orbitals; ++q)
        op.terms.push_back({1.0, {{q, true}, {q, false}}});
    return op;
}

namespace {

// a+_q or a_q as a two-term Pauli sum: 1/2(X -+ iY)_q tensor Z_{q-1}..Z_0.
std::array<PauliTerm, 2> jw_ladder(int q, bool create) {
    std::uint64_t bit = 1ull << q;
    std::uint64_t zs = bit - 1;
    PauliTerm x{cplx(0.5, 0.0), bit, zs};
    PauliTerm y{create ? cplx(0.0, -0.5) : cplx(0.0, 0.5), bit, bit | zs};
    return {x, y};
}

}  // namespace

PauliSum jordan_wigner(const FermionOperator& op, SpinOrbitalOrdering ordering) {
    PauliSum out;
    if (op.constant != cplx(0.0, 0.0))
        out.terms.push_back(PauliTerm::identity(op.constant));
    for (const auto& ft : op.terms) {
        std::vector<PauliTerm> acc{PauliTerm::identity(ft.coefficient)};
        for (const auto& lop : ft.ops) {
            int q = ordering.qubit_of(lop.index);
            if (q < 0 || q > 63) throw std::domain_error("spin orbital index out of range");
            auto factors = jw_ladder(q, lop.create);
            std::vector<PauliTerm> next;
            next.reserve(acc.size() * 2);
            for (const auto& a : acc)
                for (const auto& f : factors) next.push_back(pauli_product(a, f));
            acc = std::move(next);
        }
        out.terms.insert(out.terms.end(), acc.begin(), acc.end());
    }
    out.canonicalize();
    return out;
}

}  // namespace quedyn
