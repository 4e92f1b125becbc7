#include "ghz/lattice.hpp"

#include <cmath>

#include "ghz/errors.hpp"

namespace ghz {

int LatticeSpec::n_sites() const {
  int n = 1;
  for (int e : extents) n *= e;
  return extents.empty() ? 0 : n;
}

void LatticeSpec::validate() const {
  if (extents.empty() || extents.size() > 3)
    throw SpecError("lattice: extents must have 1-3 axes");
  for (int e : extents)
    if (e <= 0) throw SpecError("lattice: zero or negative extent");
  if (!(spacing_um > 0.0)) throw SpecError("lattice: spacing must be positive");
  if (!(c6_hz_m6 > 0.0)) throw SpecError("lattice: c6 must be positive");
}

Eigen::Vector3i site_coords(const LatticeSpec& spec, int i) {
  Eigen::Vector3i c = Eigen::Vector3i::Zero();
  int rem = i;
  for (std::size_t a = 0; a < spec.extents.size(); ++a) {
    c[static_cast<int>(a)] = rem % spec.extents[a];
    rem /= spec.extents[a];
  }
  return c;
}

std::vector<Eigen::Vector3d> build_positions(const LatticeSpec& spec) {
  spec.validate();
  const int n = spec.n_sites();
  const double a_m = spec.spacing_um * 1e-6;
  std::vector<Eigen::Vector3d> pos(n);
  for (int i = 0; i < n; ++i) pos[i] = site_coords(spec, i).cast<double>() * a_m;
  return pos;
}

InteractionTable interaction_matrix(const std::vector<Eigen::Vector3d>& positions,
                                    double c6_hz_m6) {
  const int n = static_cast<int>(positions.size());
  InteractionTable table;
  table.n = n;
  table.v = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double r2 = (positions[i] - positions[j]).squaredNorm();
      if (r2 == 0.0)
        throw SpecError("interaction_matrix: duplicate atom positions");
      const double vij = c6_hz_m6 / (r2 * r2 * r2);
      table.v(i, j) = vij;
      table.v(j, i) = vij;
      if (vij > table.v0) table.v0 = vij;
    }
  }
  table.kappa = table.v.rowwise().sum();
  return table;
}

std::uint64_t neel_bitmask(const LatticeSpec& spec) {
  spec.validate();
  const int n = spec.n_sites();
  std::uint64_t mask = 0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3i c = site_coords(spec, i);
    if ((c.x() + c.y() + c.z()) & 1) mask |= (std::uint64_t{1} << i);
  }
  return mask;
}

std::string bitmask_string(std::uint64_t mask, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if (mask & (std::uint64_t{1} << i)) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

}  // namespace ghz
