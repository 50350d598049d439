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

#ifndef GOK_CORE_HPP
#define GOK_CORE_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "gok/errors.hpp"

namespace gok {

inline constexpr double kWeightTolerance = 1e-12;
inline constexpr double kSpectrumRelativeTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kStochasticTolerance = 1e-10;

/// Ascending, non-degenerate eigenvalues of a Hamiltonian.
///
/// Two neighbouring levels count as degenerate when their difference does
/// not exceed `relative_tolerance * (E_max - E_min)`.
class EnergySpectrum {
 public:
  explicit EnergySpectrum(std::vector<double> values,
                          double relative_tolerance = kSpectrumRelativeTolerance);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  std::span<const double> values() const noexcept { return values_; }
  Eigen::Map<const Eigen::VectorXd> vector() const {
    return {values_.data(), static_cast<Eigen::Index>(values_.size())};
  }

  double spread() const noexcept { return values_.back() - values_.front(); }
  /// E_{k+1} - E_k.
  double gap(std::size_t k) const { return values_.at(k + 1) - values_.at(k); }

  EnergySpectrum scaled(double factor) const;

 private:
  std::vector<double> values_;
};

enum class WeightShape {
  /// w_0 > w_1 > ... > w_{D-1} >= 0.
  strict_full,
  /// w_0 > ... > w_{K-1} > w_K = ... = w_{D-1} = 0 with K < D-1.
  strict_head,
  other,
};

std::string_view to_string(WeightShape shape);

/// Descending probability vector of ensemble weights.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights,
                        double tolerance = kWeightTolerance);

  /// Normalizes non-negative raw weights by their sum.
  static WeightVector from_unnormalized(std::vector<double> raw);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t k) const { return weights_[k]; }
  std::span<const double> values() const noexcept { return weights_; }
  Eigen::Map<const Eigen::VectorXd> vector() const {
    return {weights_.data(), static_cast<Eigen::Index>(weights_.size())};
  }

  /// Number of entries above the tolerance.
  std::size_t positive_count() const noexcept { return positive_count_; }
  WeightShape shape() const noexcept { return shape_; }
  double tolerance() const noexcept { return tolerance_; }

  /// Eigenstates whose errors enter the summed error measures: all D
  /// for a strictly decreasing vector, otherwise the K weighted ones.
  std::size_t targeted_count() const noexcept;

  /// w_k - w_{k+1}, with w_D taken as zero.
  double gap(std::size_t k) const;
  /// Gap coordinates mu_l = w_l - w_{l+1}, mu_{D-1} = w_{D-1}.
  std::vector<double> mu() const;

  /// True when w_k differs from every existing neighbour.
  bool distinct_at(std::size_t k) const;

 private:
  std::vector<double> weights_;
  double tolerance_;
  std::size_t positive_count_ = 0;
  WeightShape shape_ = WeightShape::other;
};

enum class BasisMode { orthogonal, unitary, permutation };

std::string_view to_string(BasisMode mode);

/// Unitary U with U_{kl} = <Psi_k | Psi~_l>: column l holds the trial state
/// l expanded in the exact eigenbasis.
class BasisMap {
 public:
  static BasisMap identity(std::size_t dim);
  static BasisMap orthogonal(const Eigen::MatrixXd& u,
                             double tolerance = kUnitaryTolerance);
  static BasisMap unitary(Eigen::MatrixXcd u, double tolerance = kUnitaryTolerance);
  /// Trial state l is the exact eigenstate mapping[l].
  static BasisMap permutation(std::span<const std::size_t> mapping);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(u_.rows()); }
  BasisMode mode() const noexcept { return mode_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return u_; }

 private:
  BasisMap(Eigen::MatrixXcd u, BasisMode mode) : u_(std::move(u)), mode_(mode) {}

  Eigen::MatrixXcd u_;
  BasisMode mode_;
};

/// Max-entry deviation of U^dagger U from the identity.
double unitarity_defect(const Eigen::MatrixXcd& u);

/// Doubly stochastic matrix X. Built from a BasisMap it is unistochastic,
/// X_{kl} = |U_{kl}|^2; the general constructor also admits arbitrary points
/// of the Birkhoff polytope.
class UnistochasticMatrix {
 public:
  explicit UnistochasticMatrix(Eigen::MatrixXd x,
                               double tolerance = kStochasticTolerance);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(x_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return x_; }

 private:
  Eigen::MatrixXd x_;
};

UnistochasticMatrix unistochastic_from_basis(const BasisMap& basis);

/// Exact errors of one trial ensemble relative to the exact one.
struct ErrorBundle {
  double delta_E_w = 0.0;
  /// Same quantity evaluated as (Xw - w).E.
  double delta_E_w_dual = 0.0;
  double delta_rho_w = 0.0;
  std::vector<double> delta_psi;
  std::vector<double> delta_E;
  /// Number of leading states summed into sum_psi and sum_abs_E.
  std::size_t targeted = 0;
  double sum_psi = 0.0;
  double sum_abs_E = 0.0;
  /// F_k = sum_{j<=k} delta_E[j].
  std::vector<double> kyfan_partials;
};

/// sum_k w_k E_k with w descending and E ascending.
double ensemble_energy(const WeightVector& w, const EnergySpectrum& energies);

ErrorBundle error_bundle(const UnistochasticMatrix& x, const WeightVector& w,
                         const EnergySpectrum& energies);
ErrorBundle error_bundle(const BasisMap& basis, const WeightVector& w,
                         const EnergySpectrum& energies);

struct RayleighRitzPrefactors {
  double q_minus = 0.0;
  double q_plus = 0.0;
};

/// Linear bounds on the ground-state infidelity in terms of its energy error.
RayleighRitzPrefactors rr_state_bounds(const EnergySpectrum& energies);

/// ||A||_HS * sqrt(a_plus * delta_E_w).
double observable_error_bound(double hs_norm, double a_plus, double delta_E_w);

}  // namespace gok

#endif  // GOK_CORE_HPP
