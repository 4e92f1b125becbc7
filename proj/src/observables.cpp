#include "ghz/observables.hpp"

#include <cmath>
#include <string>

#include "ghz/errors.hpp"

namespace ghz {

void GhzTarget::validate(int n_qubits) const {
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  if (alpha_index >= dim || beta_index >= dim)
    throw DomainError("ghz target: component index out of range");
  if (alpha_index == beta_index)
    throw DomainError("ghz target: components must differ");
}

GhzTarget ghz_phi_target(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw DomainError("ghz target: bad qubit count");
  GhzTarget t;
  t.alpha_index = 0;
  t.beta_index = (std::uint64_t{1} << n_qubits) - 1;
  return t;
}

GhzTarget ghz_psi_target(const LatticeSpec& spec) {
  const int n = spec.n_sites();
  if (n < 2) throw DomainError("ghz target: staggered target needs >= 2 sites");
  GhzTarget t;
  t.alpha_index = neel_bitmask(spec);
  t.beta_index = ~t.alpha_index & ((std::uint64_t{1} << n) - 1);
  return t;
}

double fidelity(const StateVector& state, const GhzTarget& target) {
  target.validate(state.n_qubits);
  const std::complex<double> a = state.amp[static_cast<std::int64_t>(target.alpha_index)];
  const std::complex<double> b = state.amp[static_cast<std::int64_t>(target.beta_index)];
  return 0.5 * (std::norm(a) + std::norm(b)) + std::abs(std::conj(a) * b);
}

SpectrumSnapshot instantaneous_spectrum(const HamiltonianTerms& terms, double omega,
                                        double delta, const StateVector& state,
                                        double time_us) {
  if (terms.n_qubits > kMaxDenseQubits)
    throw CapacityError(
        "instantaneous_spectrum: dense diagonalization capped at N=" +
        std::to_string(kMaxDenseQubits) +
        "; subsample times or use a smaller lattice");
  if (state.n_qubits != terms.n_qubits)
    throw DomainError("instantaneous_spectrum: state size mismatch");
  const std::int64_t dim = terms.dim();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (std::int64_t b = 0; b < dim; ++b) {
    h(b, b) = terms.d0[b] - delta * terms.m[b];
    for (int i = 0; i < terms.n_qubits; ++i)
      h(b ^ (std::int64_t{1} << i), b) += omega;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);

  SpectrumSnapshot snap;
  snap.time_us = time_us;
  snap.eigenvalues = eig.eigenvalues();
  const Eigen::MatrixXd& u = eig.eigenvectors();
  snap.magnetizations.resize(dim);
  snap.populations.resize(dim);
  const Eigen::VectorXd m = terms.m.cast<double>();
  for (std::int64_t k = 0; k < dim; ++k)
    snap.magnetizations[k] = u.col(k).cwiseAbs2().dot(m);
  const Eigen::VectorXcd proj = u.transpose() * state.amp;
  for (std::int64_t k = 0; k < dim; ++k) snap.populations[k] = std::norm(proj[k]);
  return snap;
}

LevelDiagram level_diagram(const HamiltonianTerms& terms,
                           const std::vector<double>& delta_grid) {
  const std::int64_t dim = terms.dim();
  LevelDiagram diagram;
  diagram.delta_grid = delta_grid;
  diagram.lines.resize(static_cast<std::size_t>(dim));
  diagram.energies.resize(dim, static_cast<Eigen::Index>(delta_grid.size()));
  for (std::int64_t b = 0; b < dim; ++b) {
    auto& line = diagram.lines[static_cast<std::size_t>(b)];
    line.basis_index = static_cast<std::uint64_t>(b);
    line.slope = -static_cast<double>(terms.m[b]);
    line.intercept = terms.d0[b];
    for (std::size_t g = 0; g < delta_grid.size(); ++g)
      diagram.energies(b, static_cast<Eigen::Index>(g)) =
          line.intercept + line.slope * delta_grid[g];
  }
  return diagram;
}

double find_crossing(const HamiltonianTerms& terms, std::uint64_t b1,
                     std::uint64_t b2) {
  const std::uint64_t dim = std::uint64_t{1} << terms.n_qubits;
  if (b1 >= dim || b2 >= dim) throw DomainError("find_crossing: index out of range");
  if (b1 == b2) throw DomainError("find_crossing: identical states");
  const auto i1 = static_cast<std::int64_t>(b1);
  const auto i2 = static_cast<std::int64_t>(b2);
  if (terms.m[i1] == terms.m[i2])
    throw DomainError("find_crossing: equal magnetization, levels are parallel");
  return (terms.d0[i1] - terms.d0[i2]) /
         static_cast<double>(terms.m[i1] - terms.m[i2]);
}

double entanglement_entropy(const StateVector& state,
                            const std::vector<int>& partition) {
  const int n = state.n_qubits;
  if (partition.empty() || static_cast<int>(partition.size()) >= n)
    throw PartitionError("entropy: partition must be a nonempty proper subset");
  std::uint64_t keep_mask = 0;
  for (int atom : partition) {
    if (atom < 0 || atom >= n) throw PartitionError("entropy: atom index out of range");
    const std::uint64_t bit = std::uint64_t{1} << atom;
    if (keep_mask & bit) throw PartitionError("entropy: duplicate atom in partition");
    keep_mask |= bit;
  }

  const int k = static_cast<int>(partition.size());
  const std::int64_t rows = std::int64_t{1} << k;
  const std::int64_t cols = std::int64_t{1} << (n - k);

  // Pack kept bits into the row index, complement bits into the column index,
  // both in ascending atom order.
  std::vector<int> keep(partition);
  std::sort(keep.begin(), keep.end());
  std::vector<int> rest;
  for (int i = 0; i < n; ++i)
    if (!(keep_mask & (std::uint64_t{1} << i))) rest.push_back(i);

  Eigen::MatrixXcd a(rows, cols);
  const std::int64_t dim = std::int64_t{1} << n;
  for (std::int64_t b = 0; b < dim; ++b) {
    std::int64_t r = 0, c = 0;
    for (int i = 0; i < k; ++i) r |= ((b >> keep[static_cast<std::size_t>(i)]) & 1) << i;
    for (int i = 0; i < n - k; ++i) c |= ((b >> rest[static_cast<std::size_t>(i)]) & 1) << i;
    a(r, c) = state.amp[b];
  }

  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(a).singularValues();
  double s = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    const double lambda = sv[i] * sv[i];
    if (lambda > 1e-14) s -= lambda * std::log2(lambda);
  }
  return s;
}

}  // namespace ghz
