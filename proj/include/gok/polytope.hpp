// Copyright 2026 The gok-bounds Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GOK_POLYTOPE_HPP
#define GOK_POLYTOPE_HPP

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "gok/core.hpp"

namespace gok {

/// Bijection on {0, ..., D-1}. As a basis map, trial state l is the exact
/// eigenstate mapping[l].
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> mapping);
  static Permutation identity(std::size_t dim);
  /// Swaps i and j.
  static Permutation transposition(std::size_t dim, std::size_t i, std::size_t j);
  /// Sends cycle[0] -> cycle[1] -> ... -> cycle[0].
  static Permutation from_cycle(std::size_t dim, std::span<const std::size_t> cycle);

  std::size_t size() const noexcept { return mapping_.size(); }
  std::size_t operator[](std::size_t l) const { return mapping_[l]; }
  const std::vector<std::size_t>& mapping() const noexcept { return mapping_; }

  /// Non-trivial cycles, each starting at its smallest element.
  std::vector<std::vector<std::size_t>> cycles() const;
  /// P with P(mapping[l], l) = 1.
  Eigen::MatrixXd matrix() const;
  BasisMap basis() const { return BasisMap::permutation(mapping_); }

 private:
  std::vector<std::size_t> mapping_;
};

/// All distinct rearrangements of `v`, in lexicographic order of the
/// ascending-sorted entries. Limited to D <= 8.
std::vector<Eigen::VectorXd> permutohedron_vertices(const Eigen::VectorXd& v);

/// Convex combination sum_i c_i P_i of permutation matrices.
Eigen::MatrixXd birkhoff_combination(std::span<const Permutation> perms,
                                     std::span<const double> coefficients);

/// Which permutohedron a functional lives on: P(w), the orbit of the
/// trial weights w~ = Xw, or P(E), the orbit of the trial energies E~ = X^T E.
enum class Space { weights, energies };

std::string_view to_string(Space space);

/// offset + coeffs . x on P(w) or P(E).
struct LinearTarget {
  Space space = Space::weights;
  Eigen::VectorXd coeffs;
  double offset = 0.0;
  std::string name;

  double operator()(const Eigen::VectorXd& x) const { return offset + coeffs.dot(x); }
};

/// 2 w . (w - w~).
LinearTarget delta_rho_target(const WeightVector& w);
/// E~_k - E_k.
LinearTarget delta_E_target(std::size_t k, const EnergySpectrum& energies);
/// The ensemble-energy error itself, as a function on the chosen space.
LinearTarget delta_E_w_target(Space space, const WeightVector& w,
                              const EnergySpectrum& energies);

/// Vertex adjacent to a reference vertex, reached by swapping positions i
/// and j.
struct PositiveVertex {
  std::size_t reference = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  Eigen::VectorXd vertex;
  double error = 0.0;
};

/// Point where the edge towards a positive vertex crosses the error level.
struct SliceVertex {
  std::size_t neighbour = 0;
  double mixing = 0.0;
  Eigen::VectorXd point;
};

struct PermutohedronSlice {
  Space space = Space::weights;
  double delta = 0.0;
  std::vector<Eigen::VectorXd> reference_vertices;
  std::vector<PositiveVertex> positive_vertices;
  std::vector<SliceVertex> intersection_vertices;
};

/// Zero-error vertices, their positive-error neighbours and the slice at
/// ensemble-energy error delta, for 0 < delta <= g.
PermutohedronSlice reference_and_positive_vertices(Space space, const WeightVector& w,
                                                   const EnergySpectrum& energies,
                                                   double delta);

struct Extrema {
  double min = 0.0;
  double max = 0.0;
};

/// Extrema of a linear target over the slice, evaluated on the analytic
/// slice vertices.
Extrema constrained_extrema(const LinearTarget& target, const WeightVector& w,
                            const EnergySpectrum& energies, double delta);

/// Same extrema found by enumerating every vertex and edge of the
/// permutohedron. Limited to D <= 6.
Extrema brute_force_extrema(const LinearTarget& target, const WeightVector& w,
                            const EnergySpectrum& energies, double delta);

/// min over permutations P of w^T P E.
double gok_minimum_check(const WeightVector& w, const EnergySpectrum& energies);

struct CycleBoundReport {
  /// True when no cycle moves a positive weight.
  bool reference = false;
  std::size_t cycle_length = 0;
  std::size_t positive_moved = 0;
  double delta_E_w = 0.0;
  /// Smallest swap error among two positive weights, and between a
  /// positive and a zero weight. Infinite when no such pair exists.
  double delta_pp = 0.0;
  double delta_pz = 0.0;
  double max_swap_error = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  /// Which lower bound applies: "pairs" for (L'-1) delta_pp, "mixed" for
  /// (2L'-1) delta_pz.
  std::string lower_branch;
  bool lower_holds = true;
  bool upper_holds = true;
};

/// Cycle-length bounds on the ensemble-energy error of a vertex that moves
/// positive weights along a single cycle, possibly composed with a
/// permutation of the zero weights.
CycleBoundReport cycle_bound_check(const Permutation& perm, const WeightVector& w,
                                   const EnergySpectrum& energies, double tolerance = 1e-10);

}  // namespace gok

#endif  // GOK_POLYTOPE_HPP
