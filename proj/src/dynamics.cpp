#include "ghz/dynamics.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "ghz/errors.hpp"

namespace ghz {

StateVector StateVector::all_down(int n_qubits) {
  return basis_state(n_qubits, 0);
}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t b) {
  StateVector psi;
  psi.n_qubits = n_qubits;
  psi.amp = Eigen::VectorXcd::Zero(std::int64_t{1} << n_qubits);
  psi.amp[static_cast<std::int64_t>(b)] = 1.0;
  return psi;
}

HamiltonianTerms build_hamiltonianTermsImpl(const Eigen::MatrixXd& v_rad,
                                            const Eigen::VectorXd& kappa_rad) {
  const int n = static_cast<int>(kappa_rad.size());
  HamiltonianTerms terms;
  terms.n_qubits = n;
  const std::int64_t dim = std::int64_t{1} << n;
  terms.d0.resize(dim);
  terms.m.resize(dim);
  std::vector<double> s(static_cast<std::size_t>(n));
  for (std::int64_t b = 0; b < dim; ++b) {
    for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = (b >> i) & 1 ? 1.0 : -1.0;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += kappa_rad[i] * s[static_cast<std::size_t>(i)];
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        acc += v_rad(i, j) * s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)];
    terms.d0[b] = acc;
    terms.m[b] = 2 * static_cast<int>(std::popcount(static_cast<std::uint64_t>(b))) - n;
  }
  return terms;
}

HamiltonianTerms build_hamiltonian(const InteractionTable& interactions) {
  if (interactions.n > kMaxQubits)
    throw CapacityError("build_hamiltonian: N=" + std::to_string(interactions.n) +
                        " exceeds the maximum of " + std::to_string(kMaxQubits));
  if (interactions.n < 1) throw SpecError("build_hamiltonian: empty interaction table");
  // The single Hz -> rad/us conversion point for the whole artifact.
  return build_hamiltonianTermsImpl(interactions.v * hz_to_rad_per_us,
                                    interactions.kappa * hz_to_rad_per_us);
}

namespace {

// out = diag .* in + omega * sum_i flip_i(in)
void apply_with_diag(const Eigen::VectorXd& diag, double omega, int n_qubits,
                     const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
  const std::int64_t dim = in.size();
  out.array() = diag.array() * in.array();
  if (omega == 0.0) return;
  const std::complex<double>* x = in.data();
  std::complex<double>* y = out.data();
  for (int i = 0; i < n_qubits; ++i) {
    const std::int64_t step = std::int64_t{1} << i;
    for (std::int64_t base = 0; base < dim; base += 2 * step) {
      const std::complex<double>* xa = x + base;
      const std::complex<double>* xb = x + base + step;
      std::complex<double>* ya = y + base;
      std::complex<double>* yb = y + base + step;
      for (std::int64_t k = 0; k < step; ++k) {
        ya[k] += omega * xb[k];
        yb[k] += omega * xa[k];
      }
    }
  }
}

}  // namespace

void apply_hamiltonian(const HamiltonianTerms& terms, double omega, double delta,
                       const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
  if (in.size() != terms.dim())
    throw DomainError("apply_hamiltonian: state dimension mismatch");
  out.resize(in.size());
  Eigen::VectorXd diag = terms.d0 - delta * terms.m.cast<double>();
  apply_with_diag(diag, omega, terms.n_qubits, in, out);
}

Eigen::VectorXcd apply_hamiltonian(const HamiltonianTerms& terms, double omega,
                                   double delta, const Eigen::VectorXcd& in) {
  Eigen::VectorXcd out;
  apply_hamiltonian(terms, omega, delta, in, out);
  return out;
}

namespace {

struct LanczosWorkspace {
  Eigen::MatrixXcd basis;      // dim x m_max
  Eigen::VectorXd alpha, beta; // tridiagonal entries
  Eigen::VectorXcd scratch;
  Eigen::VectorXcd coeffs;     // re-orthogonalization projections
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  Eigen::VectorXcd phase, small_vec;
};

// One exp(-i H dt) application in the Krylov subspace. Returns true and
// overwrites psi on success; false if the residual estimate stays above tol
// at m_max (psi untouched). Convergence is tested on a sparse schedule so the
// small eigensolve does not dominate at small dimensions.
bool lanczos_expv(const Eigen::VectorXd& diag, double omega, int n_qubits,
                  double dt, double tol, int m_max, bool reorthogonalize,
                  Eigen::VectorXcd& psi, LanczosWorkspace& ws,
                  EvolveStats& stats, int& m_used) {
  using cd = std::complex<double>;
  const std::int64_t dim = psi.size();
  const int m_cap = static_cast<int>(std::min<std::int64_t>(m_max, dim));
  ws.basis.col(0) = psi;
  Eigen::VectorXcd& w = ws.scratch;
  const double breakdown = 1e-13 * std::max(1.0, diag.cwiseAbs().maxCoeff());

  for (int j = 0; j < m_cap; ++j) {
    apply_with_diag(diag, omega, n_qubits, ws.basis.col(j), w);
    ++stats.matvecs;
    const double a = w.dot(ws.basis.col(j)).real();
    ws.alpha[j] = a;
    w -= a * ws.basis.col(j);
    if (j > 0) w -= ws.beta[j - 1] * ws.basis.col(j - 1);
    if (reorthogonalize) {
      auto v = ws.basis.leftCols(j + 1);
      ws.coeffs.head(j + 1).noalias() = v.adjoint() * w;
      w.noalias() -= v * ws.coeffs.head(j + 1);
    }
    const double b = w.norm();
    ws.beta[j] = b;

    const bool happy = b <= breakdown;
    const bool last = j + 1 == m_cap;
    const bool scheduled = j >= 5 && (j + 1) % 3 == 0;
    if (happy || last || scheduled) {
      const int m = j + 1;
      ws.eig.computeFromTridiagonal(ws.alpha.head(m), ws.beta.head(m - 1),
                                    Eigen::ComputeEigenvectors);
      const Eigen::MatrixXd& u = ws.eig.eigenvectors();
      const Eigen::VectorXd& lam = ws.eig.eigenvalues();
      ws.phase.resize(m);
      for (int k = 0; k < m; ++k) ws.phase[k] = std::polar(1.0, -lam[k] * dt);
      ws.small_vec.noalias() =
          u * (ws.phase.cwiseProduct(u.row(0).transpose().cast<cd>()));
      // a posteriori estimate: weight of the last basis vector in the
      // propagated small-system solution, scaled by the leaked coupling
      const double err = happy ? 0.0 : std::abs(b * dt * ws.small_vec[m - 1]);
      if (happy || err <= tol) {
        psi.noalias() = ws.basis.leftCols(m) * ws.small_vec;
        m_used = m;
        if (m > stats.max_krylov_dim) stats.max_krylov_dim = m;
        return true;
      }
    }
    if (!last) ws.basis.col(j + 1) = w / b;
  }
  return false;
}

}  // namespace

Trajectory evolve(const HamiltonianTerms& terms, const PulseShape& pulse,
                  const EvolveSettings& settings, const StateVector& initial) {
  if (initial.n_qubits != terms.n_qubits)
    throw DomainError("evolve: state/Hamiltonian qubit count mismatch");
  if (std::abs(initial.norm() - 1.0) > 1e-9)
    throw DomainError("evolve: initial state is not normalized");
  if (settings.n_steps < 1) throw DomainError("evolve: n_steps must be >= 1");
  if (!(settings.krylov_tol > 0.0)) throw DomainError("evolve: krylov_tol must be > 0");

  const double T = pulse.duration();
  const double dt = T / settings.n_steps;
  const std::int64_t dim = terms.dim();

  Trajectory traj;
  traj.n_qubits = terms.n_qubits;
  traj.times_us.push_back(0.0);
  traj.states.push_back(initial.amp);

  LanczosWorkspace ws;
  ws.basis.resize(dim, std::min<std::int64_t>(settings.krylov_dim_max, dim));
  ws.alpha.resize(settings.krylov_dim_max);
  ws.beta.resize(settings.krylov_dim_max);
  ws.scratch.resize(dim);
  ws.coeffs.resize(settings.krylov_dim_max);

  Eigen::VectorXcd psi = initial.amp;
  Eigen::VectorXcd segment_start(dim);
  Eigen::VectorXd diag(dim);

  int hint = 1;          // substeps that worked for the previous segment
  int cooldown = 0;      // segments to wait before trying fewer substeps
  constexpr int kMaxSubsteps = 1 << 22;

  for (int step = 0; step < settings.n_steps; ++step) {
    const double t_mid = (step + 0.5) * dt;
    const double omega = pulse.omega(t_mid);
    const double delta = pulse.delta(t_mid);
    diag = terms.d0 - delta * terms.m.cast<double>();

    segment_start = psi;
    int substeps = hint;
    int max_m_seen = 0;
    bool retried = false;
    for (;;) {
      const double dt_sub = dt / substeps;
      const double tol_sub = std::max(settings.krylov_tol * dt_sub / T, 1e-15);
      bool ok = true;
      max_m_seen = 0;
      for (int k = 0; k < substeps; ++k) {
        int m_used = 0;
        if (!lanczos_expv(diag, omega, terms.n_qubits, dt_sub, tol_sub,
                          settings.krylov_dim_max, settings.reorthogonalize,
                          psi, ws, traj.stats, m_used)) {
          ok = false;
          break;
        }
        ++traj.stats.substeps;
        if (m_used > max_m_seen) max_m_seen = m_used;
      }
      if (ok) break;
      psi = segment_start;
      if (substeps >= kMaxSubsteps)
        throw PropagationError(
            "evolve: Krylov propagation failed to converge at segment " +
            std::to_string(step) + " (t=" + std::to_string(t_mid) +
            " us, substeps=" + std::to_string(substeps) +
            ", dim_max=" + std::to_string(settings.krylov_dim_max) + ")");
      substeps *= 2;
      retried = true;
    }
    if (substeps > traj.stats.max_substeps_per_segment)
      traj.stats.max_substeps_per_segment = substeps;

    if (retried) {
      hint = substeps;
      cooldown = 4;
    } else if (cooldown > 0) {
      --cooldown;
      hint = substeps;
    } else if (substeps > 1 && max_m_seen <= (settings.krylov_dim_max * 2) / 5) {
      hint = substeps / 2;  // converged easily, try coarser next segment
    } else {
      hint = substeps;
    }

    const bool last = step + 1 == settings.n_steps;
    const bool record = settings.record_stride > 0 &&
                        (step + 1) % settings.record_stride == 0;
    if (record || last) {
      traj.times_us.push_back((step + 1) * dt);
      traj.states.push_back(psi);
    }
  }
  return traj;
}

}  // namespace ghz
