#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace ghz {

// Regular 1D/2D/3D lattice of atoms with unit filling.
struct LatticeSpec {
  std::vector<int> extents;       // sites per axis, 1-3 axes
  double spacing_um = 1.5;        // lattice constant
  double c6_hz_m6 = 1.56e-26;     // van der Waals coefficient, Hz m^6

  int n_sites() const;
  // Throws SpecError on zero/negative extents, non-positive spacing or c6.
  void validate() const;
};

// Pairwise van der Waals couplings, all in Hz.
struct InteractionTable {
  int n = 0;
  Eigen::MatrixXd v;       // symmetric, zero diagonal
  double v0 = 0.0;         // largest entry
  Eigen::VectorXd kappa;   // row sums, kappa[i] = sum_j v(i,j)
};

// Integer grid coordinates of site i (missing axes are 0). The first axis
// varies fastest: site index = c0 + e0*(c1 + e1*c2).
Eigen::Vector3i site_coords(const LatticeSpec& spec, int i);

// Positions in meters on the axis-aligned grid.
std::vector<Eigen::Vector3d> build_positions(const LatticeSpec& spec);

// v(i,j) = c6 / |r_i - r_j|^6. Throws SpecError on duplicate positions.
InteractionTable interaction_matrix(const std::vector<Eigen::Vector3d>& positions,
                                    double c6_hz_m6);

// Checkerboard mask: bit i set iff the coordinate-parity of site i is odd.
// The mask defines the first product component of the staggered GHZ target;
// its complement defines the second.
std::uint64_t neel_bitmask(const LatticeSpec& spec);

// "0101..." rendering with site 0 leftmost.
std::string bitmask_string(std::uint64_t mask, int n);

}  // namespace ghz
