#include "quedyn/qdyn.hpp"

#include <cmath>
#include <stdexcept>

namespace quedyn {

PauliSum assemble_step_hamiltonian(const PauliSum& h_el,
                                   const std::array<PauliSum, 3>& dipoles,
                                   const LaserPulse& pulse, double t_mid) {
    PauliSum h = h_el;
    Eigen::Vector3d f = pulse_field(pulse, t_mid);
    for (int a = 0; a < 3; ++a) {
        if (f[a] == 0.0) continue;
        for (const auto& t : dipoles[a].terms) {
            PauliTerm scaled = t;
            scaled.coefficient *= f[a];
            h.terms.push_back(scaled);
        }
    }
    h.canonicalize();
    return h;
}

void trotter_step(QubitRegister& reg, const PauliSum& h, double dt, int order) {
    if (order != 1 && order != 2)
        throw std::invalid_argument("trotter order must be 1 or 2");
    if (!h.is_hermitian())
        throw std::invalid_argument("trotter step requires a Hermitian Hamiltonian");
    if (order == 1) {
        for (const auto& t : h.terms) reg.apply_pauli_rotation(t, dt);
    } else {
        for (const auto& t : h.terms) reg.apply_pauli_rotation(t, 0.5 * dt);
        for (auto it = h.terms.rbegin(); it != h.terms.rend(); ++it)
            reg.apply_pauli_rotation(*it, 0.5 * dt);
    }
}

void trotter_cycles(QubitRegister& reg, const PauliSum& h, double dt, int n) {
    if (n < 1) throw std::invalid_argument("cycle count must be >= 1");
    if (!h.is_hermitian())
        throw std::invalid_argument("trotter step requires a Hermitian Hamiltonian");
    for (int c = 0; c < n; ++c)
        for (const auto& t : h.terms) reg.apply_pauli_rotation(t, dt / n);
}

QubitRegister prepare_register(const CIEigenbasis& eig, const DeterminantBasis& basis,
                               const CIWavepacket& w) {
    if (w.b.size() != eig.num_states())
        throw std::invalid_argument("wavepacket dimension mismatch");
    int m = basis.num_spin_orbitals;
    QubitRegister reg(m, 0);
    std::vector<cplx> amps(1ull << m, cplx(0.0, 0.0));
    Eigen::VectorXcd v = eig.coefficients.cast<cplx>() * w.b;
    for (int d = 0; d < basis.size(); ++d) amps[basis.determinants[d]] = v[d];
    reg.load_amplitudes(amps);
    return reg;
}

Eigen::VectorXd populations_from_register(const QubitRegister& reg,
                                          const CIEigenbasis& eig,
                                          const DeterminantBasis& basis) {
    Eigen::VectorXcd v(basis.size());
    for (int d = 0; d < basis.size(); ++d)
        v[d] = reg.amplitude(basis.determinants[d]);
    Eigen::VectorXcd overlaps = eig.coefficients.transpose().cast<cplx>() * v;
    return overlaps.cwiseAbs2();
}

void record_ci_row(TimeSeries& ts, const QubitRegister& reg, const CIEigenbasis& eig,
                   const DeterminantBasis& basis, const PauliSum& mu_record,
                   double norm_scale) {
    if (ts.populations.empty() && !eig.singlet_states.empty()) {
        ts.populations.resize(eig.singlet_states.size());
        ts.state_labels.resize(eig.singlet_states.size());
        for (std::size_t s = 0; s < eig.singlet_states.size(); ++s)
            ts.state_labels[s] = static_cast<int>(s);
    }
    double nsq = reg.norm_squared();
    ts.norm.push_back(norm_scale * nsq);
    ts.dipole.push_back(reg.expectation(mu_record).real() / nsq);
    Eigen::VectorXd p = populations_from_register(reg, eig, basis);
    for (std::size_t s = 0; s < eig.singlet_states.size(); ++s)
        ts.populations[s].push_back(norm_scale * p[eig.singlet_states[s]]);
}

StepObserver make_ci_recorder(const CIEigenbasis& eig, const DeterminantBasis& basis,
                              PauliSum mu_record) {
    const CIEigenbasis* e = &eig;
    const DeterminantBasis* b = &basis;
    return [e, b, mu = std::move(mu_record)](double, const QubitRegister& reg,
                                             double norm_scale, TimeSeries& ts) {
        record_ci_row(ts, reg, *e, *b, mu, norm_scale);
    };
}

TimeSeries propagate_quantum(QubitRegister& reg, const PauliSum& h_el,
                             const std::array<PauliSum, 3>& dipoles,
                             const LaserPulse& pulse, const PropagationConfig& cfg,
                             const StepObserver& observer) {
    if (cfg.dt <= 0.0) throw std::invalid_argument("dt must be positive");
    if (cfg.record_every < 1) throw std::invalid_argument("record_every must be >= 1");
    long long steps = std::llround(cfg.t_final / cfg.dt);
    if (steps < 0 ||
        std::abs(steps * cfg.dt - cfg.t_final) > 1e-9 * std::max(1.0, cfg.t_final))
        throw std::invalid_argument("t_final must be a whole number of steps");

    TimeSeries ts;
    auto record = [&](double t) {
        ts.times.push_back(t);
        Eigen::Vector3d f = pulse_field(pulse, t);
        ts.field.push_back({f[0], f[1], f[2]});
        observer(t, reg, 1.0, ts);
    };
    record(0.0);
    for (long long k = 0; k < steps; ++k) {
        double t = k * cfg.dt;
        PauliSum h = assemble_step_hamiltonian(h_el, dipoles, pulse, t + 0.5 * cfg.dt);
        trotter_step(reg, h, cfg.dt, cfg.trotter_order);
        if ((k + 1) % cfg.record_every == 0 || k + 1 == steps)
            record((k + 1) * cfg.dt);
    }
    ts.check_consistent();
    return ts;
}

}  // namespace quedyn
