#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>
#include <sstream>

#include "oracle.hpp"
#include "quedyn/fermion.hpp"
#include "quedyn/refdyn.hpp"
#include "quedyn/register.hpp"

using namespace quedyn;
using doctest::Contains;

namespace {

const MolecularIntegrals& h2() {
    static MolecularIntegrals mi = load_molecule("fixtures/h2_sto3g.fcidump");
    return mi;
}

const MolecularIntegrals& lih() {
    static MolecularIntegrals mi = load_molecule("fixtures/lih_sto3g.fcidump");
    return mi;
}

// Two electrons in one spatial orbital: E = 2 h11 + (11|11).
MolecularIntegrals one_orbital_system(double h11, double eri, double core) {
    MolecularIntegrals mi;
    mi.num_spatial_orbitals = 1;
    mi.num_electrons = 2;
    mi.core_energy = core;
    mi.one_body = Eigen::MatrixXd::Constant(1, 1, h11);
    mi.two_body.assign(1, eri);
    for (auto& d : mi.dipole_one_body) d = Eigen::MatrixXd::Zero(1, 1);
    mi.orbital_energies = {h11};
    return mi;
}

FermionOperator single_ladder(int q, bool create) {
    FermionOperator op;
    op.terms.push_back({1.0, {{q, create}}});
    return op;
}

PauliSum mul(const PauliSum& a, const PauliSum& b) {
    PauliSum out;
    for (const auto& ta : a.terms)
        for (const auto& tb : b.terms) out += pauli_product(ta, tb);
    out.canonicalize();
    return out;
}

}  // namespace

TEST_CASE("fcidump parsing reads header, core, one- and two-body entries") {
    std::istringstream text(
        "&FCI NORB=2,NELEC=2,MS2=0,\n"
        " ORBSYM=1,1,\n"
        "&END\n"
        " 0.25  1 2 1 1\n"
        "-1.1   1 1 0 0\n"
        " 0.5   0 0 0 0\n");
    MolecularIntegrals mi = parse_fcidump(text);
    CHECK(mi.num_spatial_orbitals == 2);
    CHECK(mi.num_electrons == 2);
    CHECK(mi.core_energy == 0.5);
    CHECK(mi.one_body(0, 0) == -1.1);
    CHECK(mi.one_body(1, 0) == 0.0);
    // all eight symmetry images of (12|11) are populated
    CHECK(mi.tb(0, 1, 0, 0) == 0.25);
    CHECK(mi.tb(1, 0, 0, 0) == 0.25);
    CHECK(mi.tb(0, 0, 0, 1) == 0.25);
    CHECK(mi.tb(0, 0, 1, 0) == 0.25);
    CHECK(mi.tb(1, 1, 1, 1) == 0.0);
}

TEST_CASE("fcidump parse errors name the offending line") {
    auto parse = [](const char* s) {
        std::istringstream text(s);
        return parse_fcidump(text);
    };
    CHECK_THROWS_WITH_AS(parse("1.0 1 1 0 0\n"), Contains("expected &FCI"), ParseError);
    CHECK_THROWS_WITH_AS(parse("&FCI NELEC=2,\n&END\n"), Contains("NORB"), ParseError);
    CHECK_THROWS_WITH_AS(parse("&FCI NORB=2,NELEC=2,\n"), Contains("not terminated"),
                         ParseError);
    CHECK_THROWS_WITH_AS(parse("&FCI NORB=2,NELEC=2,\n&END\n bogus\n"),
                         Contains("line 3"), ParseError);
    CHECK_THROWS_WITH_AS(parse("&FCI NORB=2,NELEC=2,\n&END\n1.0 1 3 0 0\n"),
                         Contains("out of range"), ParseError);
    CHECK_THROWS_WITH_AS(parse("&FCI NORB=2,NELEC=2,\n&END\n1.0 1 1 0 0 9\n"),
                         Contains("trailing"), ParseError);
    CHECK_THROWS_WITH_AS(parse("&FCI NORB=2,NELEC=2,\n&END\n1.0 1 0 0 0\n"),
                         Contains("one-body"), ParseError);
    CHECK_THROWS_WITH_AS(parse("&FCI NORB=2,NELEC=2,\n&END\n1.0 1 1 1 0\n"),
                         Contains("two-body"), ParseError);
    CHECK_THROWS_WITH_AS(parse("&FCI NORB=99,NELEC=2,\n&END\n"), Contains("NORB"),
                         ParseError);
    CHECK_THROWS_WITH_AS(parse("&FCI NORB=2,NELEC=5,\n&END\n"), Contains("NELEC"),
                         ParseError);
}

TEST_CASE("dipole sidecar requires the nuclear entry and two-index rows") {
    MolecularIntegrals mi = one_orbital_system(-1.0, 0.5, 0.0);
    {
        std::istringstream text("0.4 1 1\n-2.5 0 0\n");
        parse_dipole_sidecar(text, 2, mi);
        CHECK(mi.dipole_one_body[2](0, 0) == 0.4);
        CHECK(mi.nuclear_dipole[2] == -2.5);
    }
    {
        std::istringstream text("0.4 1 1\n");
        CHECK_THROWS_WITH_AS(parse_dipole_sidecar(text, 0, mi), Contains("nuclear"),
                             ParseError);
    }
    {
        std::istringstream text("0.4 1 0\n");
        CHECK_THROWS_WITH_AS(parse_dipole_sidecar(text, 0, mi), Contains("line 1"),
                             ParseError);
    }
    {
        std::istringstream text("0.4 1 1\n0 0 0\n");
        CHECK_THROWS_AS(parse_dipole_sidecar(text, 5, mi), std::domain_error);
    }
}

TEST_CASE("orbital-energy sidecar must list one energy per orbital") {
    MolecularIntegrals mi = one_orbital_system(-1.0, 0.5, 0.0);
    mi.num_spatial_orbitals = 2;
    {
        std::istringstream text("-0.5 1\n 0.7 2\n");
        parse_orben_sidecar(text, mi);
        CHECK(mi.orbital_energies == std::vector<double>{-0.5, 0.7});
    }
    {
        std::istringstream text("-0.5\n");
        CHECK_THROWS_WITH_AS(parse_orben_sidecar(text, mi), Contains("expected 2"),
                             ParseError);
    }
}

TEST_CASE("bundled fixtures load with the expected shapes and symmetries") {
    const auto& a = h2();
    CHECK(a.num_spatial_orbitals == 2);
    CHECK(a.num_electrons == 2);
    CHECK(a.core_energy == doctest::Approx(0.71372493041181928));
    CHECK(a.orbital_energies.size() == 2);
    CHECK(a.nuclear_dipole[2] == 0.0);

    const auto& b = lih();
    CHECK(b.num_spatial_orbitals == 6);
    CHECK(b.num_electrons == 4);
    CHECK(b.core_energy == doctest::Approx(0.97396272969287712));
    CHECK(b.orbital_energies.size() == 6);
    CHECK(b.nuclear_dipole[2] == doctest::Approx(3.0802));

    // h_pq and d_pq symmetric, (pq|rs) carries the full 8-fold symmetry
    for (const auto* mi : {&a, &b}) {
        int K = mi->num_spatial_orbitals;
        CHECK((mi->one_body - mi->one_body.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        for (int ax = 0; ax < 3; ++ax)
            CHECK((mi->dipole_one_body[ax] - mi->dipole_one_body[ax].transpose())
                      .cwiseAbs()
                      .maxCoeff() < 1e-12);
        for (int p = 0; p < K; ++p)
            for (int q = 0; q < K; ++q)
                for (int r = 0; r < K; ++r)
                    for (int s = 0; s < K; ++s) {
                        double v = mi->tb(p, q, r, s);
                        CHECK(mi->tb(q, p, r, s) == v);
                        CHECK(mi->tb(p, q, s, r) == v);
                        CHECK(mi->tb(r, s, p, q) == v);
                    }
    }
}

TEST_CASE("load_molecule reports missing sidecars by path") {
    CHECK_THROWS_WITH_AS(load_molecule("fixtures/does_not_exist.fcidump"),
                         Contains("cannot open"), ParseError);
}

TEST_CASE("hamiltonian on a doubly occupied orbital gives 2 h11 + (11|11)") {
    MolecularIntegrals mi = one_orbital_system(-1.0, 0.5, 0.0);
    FermionOperator h = build_electronic_hamiltonian(mi);
    PauliSum jw = jordan_wigner(h, SpinOrbitalOrdering::interleaved());

    QubitRegister reg(2, 3);  // both spin orbitals occupied
    cplx e = reg.expectation(jw);
    CHECK(std::abs(e - cplx(-1.5)) < 1e-12);

    // the core energy is a plain shift
    mi.core_energy = 0.25;
    PauliSum jw2 =
        jordan_wigner(build_electronic_hamiltonian(mi), SpinOrbitalOrdering::interleaved());
    CHECK(std::abs(reg.expectation(jw2) - cplx(-1.25)) < 1e-12);

    // singly occupied: no two-electron contribution
    QubitRegister one(2, 1);
    CHECK(std::abs(one.expectation(jw) - cplx(-1.0)) < 1e-12);
}

TEST_CASE("absorbing potential uses gamma = 1/(d sqrt(2 eps)) on unbound orbitals") {
    MolecularIntegrals mi = one_orbital_system(-1.0, 0.5, 0.0);
    mi.num_spatial_orbitals = 3;
    mi.orbital_energies = {-0.5, 1.0, 0.5};
    FermionOperator cap = build_cap_operator(mi, 50.0);

    // two spin orbitals for each of the two unbound spatial orbitals
    REQUIRE(cap.terms.size() == 4);
    double g1 = 1.0 / (50.0 * std::sqrt(2.0));
    double g2 = 1.0 / 50.0;
    for (const auto& t : cap.terms) {
        REQUIRE(t.ops.size() == 2);
        CHECK(t.ops[0].create);
        CHECK_FALSE(t.ops[1].create);
        CHECK(t.ops[0].index == t.ops[1].index);
        double g = t.ops[0].index >= 4 ? g2 : g1;
        CHECK(std::abs(t.coefficient - cplx(0.0, -0.5 * g)) < 1e-15);
    }

    // all orbitals bound: nothing to absorb into
    mi.orbital_energies = {-0.5, -0.4, 0.0};
    CHECK(build_cap_operator(mi, 50.0).terms.empty());

    CHECK_THROWS_AS(build_cap_operator(mi, 0.0), std::domain_error);
    CHECK_THROWS_AS(build_cap_operator(mi, -1.0), std::domain_error);
    mi.orbital_energies = {-0.5};
    CHECK_THROWS_AS(build_cap_operator(mi, 50.0), std::domain_error);
}

TEST_CASE("jordan-wigner maps the number operator to (1 - Z_p)/2") {
    FermionOperator n;
    n.terms.push_back({1.0, {{2, true}, {2, false}}});
    PauliSum jw = jordan_wigner(n, SpinOrbitalOrdering::interleaved());
    jw.canonicalize();

    REQUIRE(jw.size() == 2);
    CHECK(std::abs(jw.identity_coefficient() - cplx(0.5)) < 1e-15);
    const PauliTerm& z = jw.terms[1];
    CHECK(z.x_mask == 0);
    CHECK(z.z_mask == (1ull << 2));
    CHECK(std::abs(z.coefficient - cplx(-0.5)) < 1e-15);

    // eigenvalue 1 exactly on occupied basis states
    QubitRegister occ(3, 4), emp(3, 3);
    CHECK(std::abs(occ.expectation(jw) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(emp.expectation(jw)) < 1e-15);
}

TEST_CASE("mapped ladder operators satisfy the anticommutation relations") {
    auto ord = SpinOrbitalOrdering::interleaved();
    const int M = 4;
    std::vector<PauliSum> create(M), destroy(M);
    for (int q = 0; q < M; ++q) {
        create[q] = jordan_wigner(single_ladder(q, true), ord);
        destroy[q] = jordan_wigner(single_ladder(q, false), ord);
    }
    auto anti = [&](const PauliSum& a, const PauliSum& b) {
        PauliSum s = mul(a, b);
        s += mul(b, a);
        s.canonicalize();
        return s;
    };
    for (int p = 0; p < M; ++p)
        for (int q = 0; q < M; ++q) {
            PauliSum mixed = anti(destroy[p], create[q]);
            if (p == q) {
                REQUIRE(mixed.size() == 1);
                CHECK(mixed.terms[0].is_identity());
                CHECK(std::abs(mixed.terms[0].coefficient - cplx(1.0)) < 1e-15);
            } else {
                CHECK(mixed.empty());
            }
            CHECK(anti(destroy[p], destroy[q]).empty());
            CHECK(anti(create[p], create[q]).empty());
        }
}

TEST_CASE("creation order fixes the sign of a two-particle state") {
    auto ord = SpinOrbitalOrdering::interleaved();
    FermionOperator asc, desc;
    asc.terms.push_back({1.0, {{0, true}, {1, true}}});   // a+_0 a+_1
    desc.terms.push_back({1.0, {{1, true}, {0, true}}});  // a+_1 a+_0

    oracle::Vec vac = oracle::Vec::Zero(4);
    vac(0) = 1.0;
    oracle::Vec up = oracle::sum_matrix(jordan_wigner(asc, ord), 2) * vac;
    oracle::Vec dn = oracle::sum_matrix(jordan_wigner(desc, ord), 2) * vac;
    CHECK(std::abs(up(3) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(dn(3) + cplx(1.0)) < 1e-15);
    for (int b = 0; b < 3; ++b) {
        CHECK(std::abs(up(b)) < 1e-15);
        CHECK(std::abs(dn(b)) < 1e-15);
    }
}

TEST_CASE("mapped operators keep the hermiticity of their fermionic source") {
    PauliSum h = jordan_wigner(build_electronic_hamiltonian(h2()),
                               SpinOrbitalOrdering::interleaved());
    CHECK(h.is_hermitian());
    CHECK(h.size() > 1);
    std::size_t bound = 1;
    for (int i = 0; i < 4; ++i) bound *= 4;  // (2K)^4 distinct strings at most
    CHECK(h.size() <= bound);

    for (int ax = 0; ax < 3; ++ax)
        CHECK(jordan_wigner(build_dipole_operator(h2(), ax),
                            SpinOrbitalOrdering::interleaved())
                  .is_hermitian());

    // the absorbing potential is anti-Hermitian: purely imaginary coefficients
    MolecularIntegrals mi = h2();
    PauliSum cap =
        jordan_wigner(build_cap_operator(mi, 50.0), SpinOrbitalOrdering::interleaved());
    CHECK(cap.size() > 0);
    for (const auto& t : cap.terms) CHECK(std::abs(t.coefficient.real()) < 1e-15);
    CHECK_FALSE(cap.is_hermitian());
}

TEST_CASE("hamiltonian and dipole commute with the total number operator") {
    auto ord = SpinOrbitalOrdering::interleaved();
    PauliSum n = jordan_wigner(build_number_operator(4), ord);
    PauliSum h = jordan_wigner(build_electronic_hamiltonian(h2()), ord);
    PauliSum mu = jordan_wigner(build_dipole_operator(h2(), 2), ord);

    oracle::Mat nm = oracle::sum_matrix(n, 4);
    for (const auto* op : {&h, &mu}) {
        oracle::Mat m = oracle::sum_matrix(*op, 4);
        CHECK((m * nm - nm * m).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("dipole identity share equals nuclear plus orbital trace") {
    auto ord = SpinOrbitalOrdering::interleaved();
    for (const auto* mi : {&h2(), &lih()}) {
        for (int ax = 0; ax < 3; ++ax) {
            PauliSum mu = jordan_wigner(build_dipole_operator(*mi, ax), ord);
            double expected = mi->nuclear_dipole[ax] + mi->dipole_one_body[ax].trace();
            CHECK(std::abs(mu.identity_coefficient() - cplx(expected)) < 1e-12);
        }
    }
    CHECK_THROWS_AS(build_dipole_operator(h2(), 3), std::domain_error);
}

TEST_CASE("mapped hamiltonian matches the determinant-basis matrix elementwise") {
    auto ord = SpinOrbitalOrdering::interleaved();

    // H2: dense 16x16 of the mapped operator, restricted to the Sz = 0 sector
    {
        FermionOperator h = build_electronic_hamiltonian(h2());
        DeterminantBasis basis = enumerate_determinants(4, 2);
        Eigen::MatrixXcd ref = build_matrix(h, basis);
        oracle::Mat dense = oracle::sum_matrix(jordan_wigner(h, ord), 4);
        for (int i = 0; i < basis.size(); ++i)
            for (int j = 0; j < basis.size(); ++j)
                CHECK(std::abs(dense(basis.determinants[i], basis.determinants[j]) -
                               ref(i, j)) < 1e-9);
    }

    // LiH: too large for a dense map; stream each mapped string over the
    // basis-index identity instead and accumulate columns
    {
        FermionOperator h = build_electronic_hamiltonian(lih());
        DeterminantBasis basis = enumerate_determinants(12, 4);
        REQUIRE(basis.size() == 225);
        Eigen::MatrixXcd ref = build_matrix(h, basis);
        PauliSum jw = jordan_wigner(h, ord);

        double worst = 0.0;
        for (int j = 0; j < basis.size(); ++j) {
            std::uint64_t det = basis.determinants[j];
            std::map<std::uint64_t, cplx> col;
            for (const auto& t : jw.terms)
                col[det ^ t.x_mask] += t.coefficient * t.basis_phase(det);
            for (auto& [b, amp] : col) {
                int i = basis.index_of(b);
                if (i < 0)
                    CHECK(std::abs(amp) < 1e-9);  // never leaves the sector
                else
                    worst = std::max(worst, std::abs(amp - ref(i, j)));
            }
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("spin and number operators act as expected on the Sz = 0 sector") {
    DeterminantBasis basis = enumerate_determinants(4, 2);
    Eigen::MatrixXcd s2 = build_matrix(build_s2_operator(2), basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s2);
    for (int i = 0; i < basis.size(); ++i) {
        double v = es.eigenvalues()[i];
        CHECK((std::abs(v) < 1e-10 || std::abs(v - 2.0) < 1e-10));
    }

    Eigen::MatrixXcd n = build_matrix(build_number_operator(4), basis);
    CHECK((n - 2.0 * Eigen::MatrixXcd::Identity(basis.size(), basis.size()))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}
