#include "quedyn/qite.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "quedyn/rng.hpp"

namespace quedyn {

double Readout::value(const QubitRegister& reg, const PauliTerm& term) const {
    if (term.is_identity()) return 1.0;
    PauliTerm bare = term;
    bare.coefficient = 1.0;
    if (mode == ReadoutMode::exact) {
        double nsq = reg.norm_squared();
        return reg.expectation(bare).real() / nsq;
    }
    return reg.sample_pauli_expectation(bare, shots, mix_key(seed, counter++));
}

QiteDomain QiteDomain::full(int num_qubits) {
    std::vector<int> q(num_qubits);
    for (int i = 0; i < num_qubits; ++i) q[i] = i;
    return over(std::move(q));
}

QiteDomain QiteDomain::over(std::vector<int> qubits) {
    QiteDomain d;
    d.qubits = std::move(qubits);
    // The dense solve scales as 16^m; the CAP fixtures need m = 4.
    int m = static_cast<int>(d.qubits.size());
    if (m < 1 || m > 6)
        throw std::domain_error("QITE domain size out of supported range [1,6]");
    std::size_t count = std::size_t(1) << (2 * m);
    d.pauli_basis.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::uint64_t x = 0, z = 0;
        for (int i = 0; i < m; ++i) {
            int digit = int((k >> (2 * i)) & 3);
            std::uint64_t bit = 1ull << d.qubits[i];
            if (digit == 1 || digit == 2) x |= bit;
            if (digit == 2 || digit == 3) z |= bit;
        }
        d.pauli_basis.emplace_back(cplx(1.0, 0.0), x, z);
    }
    return d;
}

int QiteDomain::index_of(std::uint64_t x_mask, std::uint64_t z_mask) const {
    std::size_t k = 0;
    for (int i = 0; i < static_cast<int>(qubits.size()); ++i) {
        std::uint64_t bit = 1ull << qubits[i];
        bool bx = x_mask & bit, bz = z_mask & bit;
        int digit = bx ? (bz ? 2 : 1) : (bz ? 3 : 0);
        k |= std::size_t(digit) << (2 * i);
        x_mask &= ~bit;
        z_mask &= ~bit;
    }
    if (x_mask || z_mask) return -1;  // support outside the domain
    return static_cast<int>(k);
}

std::pair<PauliSum, std::vector<PauliTerm>> split_hamiltonian(const PauliSum& h) {
    PauliSum hermitian;
    std::vector<PauliTerm> non_hermitian;
    for (const auto& t : h.terms) {
        double re = t.coefficient.real(), im = t.coefficient.imag();
        if (std::abs(re) > 1e-12)
            hermitian.terms.push_back({cplx(re, 0.0), t.x_mask, t.z_mask});
        if (std::abs(im) > 1e-12)
            non_hermitian.push_back({cplx(0.0, im), t.x_mask, t.z_mask});
    }
    hermitian.canonicalize();
    return {std::move(hermitian), std::move(non_hermitian)};
}

std::vector<PauliSum> group_cap_units(const std::vector<PauliTerm>& non_hermitian) {
    cplx identity_budget(0.0, 0.0);
    std::vector<PauliTerm> z_terms;
    std::vector<PauliTerm> others;
    for (const auto& t : non_hermitian) {
        if (std::abs(t.coefficient.real()) > 1e-12)
            throw std::invalid_argument("non-Hermitian unit with a real coefficient part");
        if (t.is_identity())
            identity_budget += t.coefficient;
        else if (t.x_mask == 0 && std::popcount(t.z_mask) == 1)
            z_terms.push_back(t);
        else
            others.push_back(t);
    }
    std::sort(z_terms.begin(), z_terms.end(),
              [](const PauliTerm& a, const PauliTerm& b) { return a.z_mask < b.z_mask; });

    std::vector<PauliSum> units;
    for (const auto& t : z_terms) {
        // i k Z_q - i k I = -2 i k n_q: a pure number-operator unit.
        PauliSum u;
        u.terms.push_back(PauliTerm::identity(-t.coefficient));
        u.terms.push_back(t);
        identity_budget += t.coefficient;
        units.push_back(std::move(u));
    }
    if (std::abs(identity_budget) > 1e-14) {
        PauliSum u;
        u.terms.push_back(PauliTerm::identity(identity_budget));
        units.insert(units.begin(), std::move(u));
    }
    for (const auto& t : others) {
        PauliSum u;
        u.terms.push_back(t);
        units.push_back(std::move(u));
    }
    return units;
}

namespace {

void require_anti_hermitian(const PauliSum& unit) {
    for (const auto& t : unit.terms)
        if (std::abs(t.coefficient.real()) > 1e-12)
            throw std::invalid_argument(
                "norm factor requires purely imaginary coefficients");
}

}  // namespace

double norm_factor(const QubitRegister& reg, const PauliSum& unit, double dt,
                   const Readout& readout) {
    require_anti_hermitian(unit);
    // <unit> = i y with y real; c^2 = Re(1 - 2 i dt <unit>) = 1 + 2 dt y.
    double y = 0.0;
    for (const auto& t : unit.terms) y += t.coefficient.imag() * readout.value(reg, t);
    double c2 = 1.0 + 2.0 * dt * y;
    if (c2 <= 0.0)
        throw std::runtime_error("norm factor not positive; time step too large");
    return c2;
}

QiteStepRecord solve_qite_coefficients(const QubitRegister& reg, const PauliSum& unit,
                                       double dt, const QiteDomain& domain,
                                       double delta, const Readout& readout) {
    require_anti_hermitian(unit);
    if (delta < 0.0) throw std::invalid_argument("delta must be >= 0");

    // G = i * unit is Hermitian with real coefficients on domain strings.
    std::vector<std::pair<int, double>> g;  // (basis index, real coefficient)
    for (const auto& t : unit.terms) {
        int idx = domain.index_of(t.x_mask, t.z_mask);
        if (idx < 0)
            throw std::invalid_argument("unit support not covered by the QITE domain");
        g.emplace_back(idx, (cplx(0.0, 1.0) * t.coefficient).real());
    }

    const auto& basis = domain.pauli_basis;
    int nb = static_cast<int>(basis.size());

    // One expectation value per domain string serves the whole solve; string
    // products reduce to phase * another domain string.
    std::vector<double> ev(nb);
    ev[0] = 1.0;
    for (int k = 1; k < nb; ++k) ev[k] = readout.value(reg, basis[k]);

    auto product_ev = [&](int i, int j) -> cplx {
        PauliTerm p = pauli_product(basis[i], basis[j]);
        int k = domain.index_of(p.x_mask, p.z_mask);
        return p.coefficient * ev[k];
    };

    int n = nb - 1;  // identity excluded
    Eigen::MatrixXd s_r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = product_ev(i + 1, j + 1).real();
            s_r(i, j) = v;
            s_r(j, i) = v;
        }
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        cplx acc(0.0, 0.0);
        for (const auto& [gk, gc] : g) acc += gc * product_ev(i + 1, gk);
        b[i] = acc.imag();
    }

    Eigen::MatrixXd lhs = s_r;
    lhs.diagonal().array() += delta;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(lhs);
    QiteStepRecord rec;
    Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
    double dmax = d.maxCoeff(), dmin = d.minCoeff();
    rec.condition_estimate = (dmin > 0.0) ? dmax / dmin
                                          : std::numeric_limits<double>::infinity();
    if (ldlt.info() != Eigen::Success || !(dmin > 0.0))
        throw std::runtime_error(
            "QITE linear system singular beyond regularization (condition estimate " +
            std::to_string(rec.condition_estimate) + ")");
    rec.a_coefficients = ldlt.solve(b);

    // Residual of the first-order fit, |(-iA - (G - <G>))|Psi>|, from the
    // same expectation values: a^T S a - 2 a^T b + (<G^2> - <G>^2).
    double g_mean = 0.0;
    for (const auto& [gk, gc] : g) g_mean += gc * ev[gk];
    double g2 = 0.0;
    for (const auto& [gi, ci] : g)
        for (const auto& [gj, cj] : g) g2 += ci * cj * product_ev(gi, gj).real();
    double quad = rec.a_coefficients.dot(s_r * rec.a_coefficients) -
                  2.0 * rec.a_coefficients.dot(b) + (g2 - g_mean * g_mean);
    rec.residual = std::sqrt(std::max(0.0, quad));
    rec.c_squared = 1.0;  // set by the caller from norm_factor
    return rec;
}

void apply_qite_step(QubitRegister& reg, const QiteStepRecord& rec,
                     const QiteDomain& domain, double dt) {
    int n = static_cast<int>(domain.pauli_basis.size()) - 1;
    if (rec.a_coefficients.size() != n)
        throw std::invalid_argument("coefficient vector does not match the domain");
    for (int i = 0; i < n; ++i) {
        double theta = rec.a_coefficients[i] * dt;
        if (theta == 0.0) continue;
        reg.apply_pauli_rotation(domain.pauli_basis[i + 1], theta);
    }
}

TimeSeries propagate_with_cap(QubitRegister& reg, const PauliSum& h_el,
                              const std::array<PauliSum, 3>& dipoles,
                              const PauliSum& cap, const LaserPulse& pulse,
                              const PropagationConfig& cfg, const QiteConfig& qite,
                              const StepObserver& observer,
                              std::vector<QiteStepRecord>* record_stream) {
    if (cfg.dt <= 0.0) throw std::invalid_argument("dt must be positive");
    if (cfg.record_every < 1) throw std::invalid_argument("record_every must be >= 1");
    long long steps = std::llround(cfg.t_final / cfg.dt);
    if (steps < 0 ||
        std::abs(steps * cfg.dt - cfg.t_final) > 1e-9 * std::max(1.0, cfg.t_final))
        throw std::invalid_argument("t_final must be a whole number of steps");

    auto [cap_hermitian, cap_rest] = split_hamiltonian(cap);
    PauliSum h_unitary = h_el;
    h_unitary += cap_hermitian;  // empty for a true CAP
    h_unitary.canonicalize();
    std::vector<PauliSum> units = group_cap_units(cap_rest);

    bool needs_solve = false;
    for (const auto& u : units)
        if (!(u.terms.size() == 1 && u.terms.front().is_identity())) needs_solve = true;
    QiteDomain domain;
    if (needs_solve) domain = QiteDomain::full(reg.num_qubits());
    Readout readout{qite.mode, qite.shots, qite.seed, 0};

    double norm_accum = 1.0;
    TimeSeries ts;
    auto record = [&](double t) {
        ts.times.push_back(t);
        Eigen::Vector3d f = pulse_field(pulse, t);
        ts.field.push_back({f[0], f[1], f[2]});
        observer(t, reg, norm_accum, ts);
    };
    record(0.0);
    for (long long k = 0; k < steps; ++k) {
        double t = k * cfg.dt;
        PauliSum h = assemble_step_hamiltonian(h_unitary, dipoles, pulse, t + 0.5 * cfg.dt);
        trotter_step(reg, h, cfg.dt, cfg.trotter_order);
        for (const auto& unit : units) {
            double c2 = norm_factor(reg, unit, cfg.dt, readout);
            bool norm_only =
                unit.terms.size() == 1 && unit.terms.front().is_identity();
            QiteStepRecord rec;
            if (norm_only) {
                int nb = static_cast<int>(domain.pauli_basis.size());
                rec.a_coefficients = Eigen::VectorXd::Zero(nb > 0 ? nb - 1 : 0);
            } else {
                rec = solve_qite_coefficients(reg, unit, cfg.dt, domain, qite.delta,
                                              readout);
                apply_qite_step(reg, rec, domain, cfg.dt);
            }
            rec.c_squared = c2;
            norm_accum *= c2;
            if (record_stream) record_stream->push_back(rec);
        }
        if ((k + 1) % cfg.record_every == 0 || k + 1 == steps)
            record((k + 1) * cfg.dt);
    }
    ts.check_consistent();
    return ts;
}

}  // namespace quedyn
