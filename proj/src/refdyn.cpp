#include "quedyn/refdyn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace quedyn {

namespace {

int parity_sign(std::uint64_t bits) { return (std::popcount(bits) & 1) ? -1 : 1; }

}  // namespace

int DeterminantBasis::index_of(std::uint64_t det) const {
    auto it = std::lower_bound(determinants.begin(), determinants.end(), det);
    if (it == determinants.end() || *it != det) return -1;
    return static_cast<int>(it - determinants.begin());
}

DeterminantBasis enumerate_determinants(int num_spin_orbitals, int num_electrons) {
    if (num_spin_orbitals < 1 || num_spin_orbitals > 32)
        throw std::domain_error("spin orbital count out of supported range [1,32]");
    if (num_electrons < 0 || num_electrons > num_spin_orbitals)
        throw std::domain_error("electron count out of range");
    DeterminantBasis basis;
    basis.num_spin_orbitals = num_spin_orbitals;
    basis.num_electrons = num_electrons;
    std::uint64_t alpha_mask = 0, beta_mask = 0;
    for (int q = 0; q < num_spin_orbitals; ++q)
        ((q & 1) ? beta_mask : alpha_mask) |= 1ull << q;
    for (std::uint64_t det = 0; det < (1ull << num_spin_orbitals); ++det) {
        if (std::popcount(det) != num_electrons) continue;
        if (std::popcount(det & alpha_mask) != std::popcount(det & beta_mask)) continue;
        basis.determinants.push_back(det);
    }
    return basis;
}

std::optional<std::pair<std::uint64_t, int>> apply_ladder_string(
    std::uint64_t det, const std::vector<LadderOp>& ops) {
    int sign = 1;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        std::uint64_t bit = 1ull << it->index;
        if (it->create) {
            if (det & bit) return std::nullopt;
            sign *= parity_sign(det & (bit - 1));
            det |= bit;
        } else {
            if (!(det & bit)) return std::nullopt;
            sign *= parity_sign(det & (bit - 1));
            det &= ~bit;
        }
    }
    return std::make_pair(det, sign);
}

Eigen::MatrixXcd build_matrix(const FermionOperator& op, const DeterminantBasis& basis) {
    int n = basis.size();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    if (op.constant != cplx(0.0, 0.0)) m.diagonal().array() += op.constant;
    for (int j = 0; j < n; ++j) {
        std::uint64_t det = basis.determinants[j];
        for (const auto& term : op.terms) {
            auto r = apply_ladder_string(det, term.ops);
            if (!r) continue;
            int i = basis.index_of(r->first);
            if (i < 0)
                throw std::domain_error(
                    "operator maps a determinant outside the Sz=0 basis sector");
            m(i, j) += term.coefficient * static_cast<double>(r->second);
        }
    }
    return m;
}

namespace {

// Makes the largest-magnitude entry of each column real positive; ties on
// magnitude (within 1e-12) resolve to the lowest row index.
void fix_column_phases(Eigen::MatrixXd& c) {
    for (int j = 0; j < c.cols(); ++j) {
        int best = 0;
        double best_mag = -1.0;
        for (int i = 0; i < c.rows(); ++i) {
            double mag = std::abs(c(i, j));
            if (mag > best_mag + 1e-12) {
                best_mag = mag;
                best = i;
            }
        }
        if (c(best, j) < 0.0) c.col(j) = -c.col(j);
    }
}

Eigen::MatrixXd require_real_symmetric(const Eigen::MatrixXcd& m, const char* what) {
    if (m.rows() != m.cols()) throw std::invalid_argument(std::string(what) + ": not square");
    double imag_norm = m.imag().cwiseAbs().maxCoeff();
    if (imag_norm > 1e-9)
        throw std::invalid_argument(std::string(what) + ": matrix is not real");
    Eigen::MatrixXd r = m.real();
    if ((r - r.transpose()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument(std::string(what) + ": matrix is not symmetric");
    return r;
}

}  // namespace

CIEigenbasis diagonalize_ci(const Eigen::MatrixXcd& hamiltonian,
                            const Eigen::MatrixXcd& s2_matrix,
                            const std::array<Eigen::MatrixXcd, 3>* dipole_matrices) {
    Eigen::MatrixXd h = require_real_symmetric(hamiltonian, "hamiltonian");
    Eigen::MatrixXd s2 = require_real_symmetric(s2_matrix, "S^2");
    int n = static_cast<int>(h.rows());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("CI eigensolver failed to converge");
    Eigen::VectorXd e = solver.eigenvalues();
    Eigen::MatrixXd c = solver.eigenvectors();

    // Resolve degenerate blocks into S^2 eigenstates, singlets first.
    int i = 0;
    while (i < n) {
        int j = i + 1;
        while (j < n && std::abs(e[j] - e[j - 1]) < 1e-9) ++j;
        int k = j - i;
        if (k > 1) {
            Eigen::MatrixXd block = c.middleCols(i, k);
            Eigen::MatrixXd s2_block = block.transpose() * s2 * block;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spin(s2_block);
            c.middleCols(i, k) = block * spin.eigenvectors();
        }
        i = j;
    }

    // Within sub-blocks that stay degenerate at equal spin, orient states
    // along the ground state's transition-dipole axes, x before y before z.
    if (dipole_matrices) {
        std::array<Eigen::MatrixXd, 3> mu;
        for (int a = 0; a < 3; ++a)
            mu[a] = require_real_symmetric((*dipole_matrices)[a], "dipole");
        Eigen::VectorXd ground = c.col(0);
        Eigen::VectorXd s2_after = (c.transpose() * s2 * c).diagonal();
        i = 0;
        while (i < n) {
            int j = i + 1;
            while (j < n && std::abs(e[j] - e[j - 1]) < 1e-9 &&
                   std::abs(s2_after[j] - s2_after[j - 1]) < 1e-6)
                ++j;
            int k = j - i;
            if (k > 1 && i > 0) {
                std::vector<Eigen::VectorXd> sub;
                for (int t = 0; t < k; ++t) sub.push_back(c.col(i + t));
                std::vector<Eigen::VectorXd> done;
                for (int a = 0; a < 3 && !sub.empty(); ++a) {
                    Eigen::VectorXd coup(sub.size());
                    for (std::size_t t = 0; t < sub.size(); ++t)
                        coup[static_cast<int>(t)] = ground.dot(mu[a] * sub[t]);
                    double cn = coup.norm();
                    if (cn < 1e-8) continue;
                    Eigen::VectorXd picked = Eigen::VectorXd::Zero(n);
                    for (std::size_t t = 0; t < sub.size(); ++t)
                        picked += (coup[static_cast<int>(t)] / cn) * sub[t];
                    done.push_back(picked);
                    // Deflate by Gram-Schmidt against everything kept so far.
                    std::vector<Eigen::VectorXd> next;
                    for (const auto& v0 : sub) {
                        Eigen::VectorXd v = v0;
                        v -= picked * picked.dot(v);
                        for (const auto& u : next) v -= u * u.dot(v);
                        if (v.norm() > 1e-8 &&
                            next.size() + 1 < sub.size())
                            next.push_back(v.normalized());
                    }
                    sub = std::move(next);
                }
                for (const auto& v : sub) done.push_back(v);
                if (static_cast<int>(done.size()) == k)
                    for (int t = 0; t < k; ++t) c.col(i + t) = done[t];
            }
            i = j;
        }
    }

    fix_column_phases(c);

    CIEigenbasis eig;
    eig.energies = e;
    eig.coefficients = c;
    eig.s2_values = (c.transpose() * s2 * c).diagonal();
    for (int s = 0; s < n; ++s)
        if (eig.s2_values[s] < 0.0 && eig.s2_values[s] > -1e-9) eig.s2_values[s] = 0.0;
    eig.lifetime_shifts = Eigen::VectorXd::Zero(n);
    for (int s = 0; s < n; ++s)
        if (eig.is_singlet(s)) eig.singlet_states.push_back(s);
    return eig;
}

void add_cap_shifts(CIEigenbasis& eig, const FermionOperator& cap,
                    const DeterminantBasis& basis) {
    int n = eig.num_states();
    if (basis.size() != n)
        throw std::invalid_argument("basis size does not match eigenbasis dimension");
    Eigen::MatrixXcd v_det = build_matrix(cap, basis);
    // Effective Hamiltonian in the Hermitian eigenbasis coordinates.
    Eigen::MatrixXcd h_eff =
        eig.energies.cast<cplx>().asDiagonal().toDenseMatrix() +
        eig.coefficients.transpose().cast<cplx>() * v_det * eig.coefficients.cast<cplx>();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h_eff);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("CAP eigensolver failed to converge");
    Eigen::VectorXcd lam = solver.eigenvalues();
    Eigen::MatrixXcd w = solver.eigenvectors();
    // Sort modes by real part so Gamma_n lines up with the energy ladder.
    std::vector<int> order(n);
    for (int s = 0; s < n; ++s) order[s] = s;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return lam[a].real() < lam[b].real(); });
    Eigen::VectorXcd lam_sorted(n);
    Eigen::MatrixXcd w_sorted(n, n);
    for (int s = 0; s < n; ++s) {
        lam_sorted[s] = lam[order[s]];
        w_sorted.col(s) = w.col(order[s]);
    }
    eig.cap_eigenvalues = lam_sorted;
    eig.cap_modes = w_sorted;
    eig.cap_modes_inv = w_sorted.inverse();
    eig.lifetime_shifts = -2.0 * lam_sorted.imag();
    for (int s = 0; s < n; ++s) {
        if (eig.lifetime_shifts[s] < -1e-10)
            throw std::runtime_error("CAP produced a negative lifetime shift");
        if (eig.lifetime_shifts[s] < 0.0) eig.lifetime_shifts[s] = 0.0;
    }
    eig.has_cap = true;
}

CIWavepacket initial_wavepacket_ground(const CIEigenbasis& eig) {
    CIWavepacket w;
    w.b = Eigen::VectorXcd::Zero(eig.num_states());
    w.b[0] = 1.0;
    return w;
}

CIWavepacket initial_wavepacket_determinant(const CIEigenbasis& eig, int det_index) {
    if (det_index < 0 || det_index >= eig.num_states())
        throw std::domain_error("determinant index out of range");
    CIWavepacket w;
    w.b = eig.coefficients.row(det_index).transpose().cast<cplx>();
    return w;
}

Eigen::MatrixXd to_eigenbasis_real(const Eigen::MatrixXcd& det_matrix,
                                   const CIEigenbasis& eig) {
    Eigen::MatrixXd m = require_real_symmetric(det_matrix, "observable");
    return eig.coefficients.transpose() * m * eig.coefficients;
}

TimeSeries tdci_propagate(const CIEigenbasis& eig,
                          const std::array<Eigen::MatrixXd, 3>& dipole_eig,
                          const LaserPulse& pulse, const TdciConfig& cfg,
                          const CIWavepacket& b0) {
    int n = eig.num_states();
    if (b0.b.size() != n) throw std::invalid_argument("wavepacket dimension mismatch");
    if (cfg.dt <= 0.0) throw std::invalid_argument("dt must be positive");
    if (cfg.record_every < 1) throw std::invalid_argument("record_every must be >= 1");
    if (cfg.record_axis < 0 || cfg.record_axis > 2)
        throw std::invalid_argument("record axis must be 0, 1 or 2");
    long long steps = std::llround(cfg.t_final / cfg.dt);
    if (steps < 0 || std::abs(steps * cfg.dt - cfg.t_final) > 1e-9 * std::max(1.0, cfg.t_final))
        throw std::invalid_argument("t_final must be a whole number of steps");

    // Field-free half step; a diagonal phase unless a CAP is present.
    bool dense_half = eig.has_cap;
    Eigen::VectorXcd half_phase;
    Eigen::MatrixXcd half_matrix;
    if (dense_half) {
        Eigen::VectorXcd ph(n);
        for (int s = 0; s < n; ++s)
            ph[s] = std::exp(cplx(0.0, -0.5 * cfg.dt) * eig.cap_eigenvalues[s]);
        half_matrix = eig.cap_modes * ph.asDiagonal() * eig.cap_modes_inv;
    } else {
        half_phase.resize(n);
        for (int s = 0; s < n; ++s)
            half_phase[s] = std::exp(cplx(0.0, -0.5 * cfg.dt * eig.energies[s]));
    }

    // Field coupling along the fixed polarization: M = sum_a f0_a mu_a.
    bool has_field = pulse.f0.norm() > 0.0;
    Eigen::MatrixXd field_q;
    Eigen::VectorXd field_d;
    if (has_field) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (int a = 0; a < 3; ++a)
            if (pulse.f0[a] != 0.0) m += pulse.f0[a] * dipole_eig[a];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> fs(m);
        field_q = fs.eigenvectors();
        field_d = fs.eigenvalues();
    }

    const Eigen::MatrixXd& mu_rec = dipole_eig[cfg.record_axis];
    TimeSeries ts;
    ts.state_labels.resize(eig.singlet_states.size());
    ts.populations.resize(eig.singlet_states.size());
    for (std::size_t s = 0; s < eig.singlet_states.size(); ++s)
        ts.state_labels[s] = static_cast<int>(s);

    Eigen::VectorXcd b = b0.b;
    auto record = [&](double t) {
        ts.times.push_back(t);
        Eigen::Vector3d f = pulse_field(pulse, t);
        ts.field.push_back({f[0], f[1], f[2]});
        double nrm = b.squaredNorm();
        ts.norm.push_back(nrm);
        double mu = (b.adjoint() * (mu_rec * b)).value().real();
        ts.dipole.push_back(mu / nrm);
        for (std::size_t s = 0; s < eig.singlet_states.size(); ++s)
            ts.populations[s].push_back(std::norm(b[eig.singlet_states[s]]));
    };

    record(0.0);
    for (long long k = 0; k < steps; ++k) {
        double t = k * cfg.dt;
        if (dense_half)
            b = half_matrix * b;
        else
            b = half_phase.cwiseProduct(b);
        if (has_field) {
            double s_mid = pulse_envelope(pulse, t + 0.5 * cfg.dt);
            if (s_mid != 0.0) {
                Eigen::VectorXcd y = field_q.transpose() * b;
                for (int s = 0; s < n; ++s)
                    y[s] *= std::exp(cplx(0.0, -cfg.dt * s_mid * field_d[s]));
                b = field_q * y;
            }
        }
        if (dense_half)
            b = half_matrix * b;
        else
            b = half_phase.cwiseProduct(b);
        if ((k + 1) % cfg.record_every == 0 || k + 1 == steps) record((k + 1) * cfg.dt);
    }
    ts.check_consistent();
    return ts;
}

}  // namespace quedyn
