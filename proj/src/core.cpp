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

#include "gok/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gok {

EnergySpectrum::EnergySpectrum(std::vector<double> values, double relative_tolerance)
    : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw InvalidArgument("energy spectrum needs at least two levels");
  }
  for (double e : values_) {
    if (!std::isfinite(e)) throw InvalidArgument("energy spectrum contains a non-finite value");
  }
  const double spread = values_.back() - values_.front();
  if (!(spread > 0.0)) {
    throw DegenerateSpectrum("energy spectrum must be strictly ascending");
  }
  const double eps = relative_tolerance * spread;
  for (std::size_t k = 0; k + 1 < values_.size(); ++k) {
    if (values_[k + 1] - values_[k] <= eps) {
      throw DegenerateSpectrum("energy levels " + std::to_string(k) + " and " +
                               std::to_string(k + 1) +
                               " are degenerate or out of ascending order");
    }
  }
}

EnergySpectrum EnergySpectrum::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("spectrum scale factor must be positive");
  std::vector<double> v = values_;
  for (double& e : v) e *= factor;
  return EnergySpectrum(std::move(v));
}

std::string_view to_string(WeightShape shape) {
  switch (shape) {
    case WeightShape::strict_full: return "strict_full";
    case WeightShape::strict_head: return "strict_head";
    case WeightShape::other: return "other";
  }
  return "other";
}

WeightVector::WeightVector(std::vector<double> weights, double tolerance)
    : weights_(std::move(weights)), tolerance_(tolerance) {
  const std::size_t d = weights_.size();
  if (d < 2) throw InvalidArgument("weight vector needs at least two entries");
  double sum = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double v = weights_[k];
    if (!std::isfinite(v) || v < -tolerance_) {
      throw InvalidArgument("weight " + std::to_string(k) + " is negative or non-finite");
    }
    if (k > 0 && v > weights_[k - 1] + tolerance_) {
      throw InvalidArgument("weights must be sorted in descending order (entry " +
                            std::to_string(k) + ")");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw InvalidArgument("weights must sum to one (sum = " + std::to_string(sum) + ")");
  }

  positive_count_ = static_cast<std::size_t>(
      std::count_if(weights_.begin(), weights_.end(), [&](double v) { return v > tolerance_; }));

  bool strict = true;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    if (weights_[k] - weights_[k + 1] <= tolerance_) strict = false;
  }
  if (strict) {
    shape_ = WeightShape::strict_full;
    return;
  }
  const std::size_t big_k = positive_count_;
  if (big_k >= 1 && big_k + 1 < d) {
    bool head = true;
    for (std::size_t k = 0; k + 1 < big_k; ++k) {
      if (weights_[k] - weights_[k + 1] <= tolerance_) head = false;
    }
    shape_ = head ? WeightShape::strict_head : WeightShape::other;
  }
}

WeightVector WeightVector::from_unnormalized(std::vector<double> raw) {
  const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
  if (!(sum > 0.0)) throw InvalidArgument("raw weights must have a positive sum");
  for (double& v : raw) v /= sum;
  return WeightVector(std::move(raw));
}

std::size_t WeightVector::targeted_count() const noexcept {
  return shape_ == WeightShape::strict_full ? weights_.size() : positive_count_;
}

double WeightVector::gap(std::size_t k) const {
  const double next = k + 1 < weights_.size() ? weights_[k + 1] : 0.0;
  return weights_.at(k) - next;
}

std::vector<double> WeightVector::mu() const {
  std::vector<double> m(weights_.size());
  for (std::size_t k = 0; k < weights_.size(); ++k) m[k] = gap(k);
  return m;
}

bool WeightVector::distinct_at(std::size_t k) const {
  if (k >= weights_.size()) return false;
  if (k > 0 && weights_[k - 1] - weights_[k] <= tolerance_) return false;
  if (k + 1 < weights_.size() && weights_[k] - weights_[k + 1] <= tolerance_) return false;
  return true;
}

std::string_view to_string(BasisMode mode) {
  switch (mode) {
    case BasisMode::orthogonal: return "orthogonal";
    case BasisMode::unitary: return "unitary";
    case BasisMode::permutation: return "permutation";
  }
  return "unitary";
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd gram = u.adjoint() * u;
  return (gram - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

BasisMap BasisMap::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return BasisMap(Eigen::MatrixXcd::Identity(n, n), BasisMode::permutation);
}

BasisMap BasisMap::orthogonal(const Eigen::MatrixXd& u, double tolerance) {
  BasisMap b = unitary(u.cast<std::complex<double>>(), tolerance);
  b.mode_ = BasisMode::orthogonal;
  return b;
}

BasisMap BasisMap::unitary(Eigen::MatrixXcd u, double tolerance) {
  if (u.rows() != u.cols() || u.rows() < 1) {
    throw DimensionMismatch("basis map must be a non-empty square matrix");
  }
  const double defect = unitarity_defect(u);
  if (!(defect <= tolerance)) {
    throw NotUnitary("basis map is not unitary (max |U^dagger U - 1| = " +
                     std::to_string(defect) + ")");
  }
  return BasisMap(std::move(u), BasisMode::unitary);
}

BasisMap BasisMap::permutation(std::span<const std::size_t> mapping) {
  const std::size_t d = mapping.size();
  std::vector<bool> seen(d, false);
  for (std::size_t target : mapping) {
    if (target >= d || seen[target]) {
      throw InvalidArgument("permutation mapping is not a bijection");
    }
    seen[target] = true;
  }
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t l = 0; l < d; ++l) {
    u(static_cast<Eigen::Index>(mapping[l]), static_cast<Eigen::Index>(l)) = 1.0;
  }
  return BasisMap(std::move(u), BasisMode::permutation);
}

UnistochasticMatrix::UnistochasticMatrix(Eigen::MatrixXd x, double tolerance)
    : x_(std::move(x)) {
  if (x_.rows() != x_.cols() || x_.rows() < 1) {
    throw DimensionMismatch("stochastic matrix must be a non-empty square matrix");
  }
  if (x_.minCoeff() < -tolerance) {
    throw InvalidArgument("stochastic matrix has a negative entry");
  }
  const double row_dev = (x_.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double col_dev = (x_.colwise().sum().array() - 1.0).abs().maxCoeff();
  if (!(row_dev <= tolerance && col_dev <= tolerance)) {
    throw InvalidArgument("matrix is not doubly stochastic (row dev " + std::to_string(row_dev) +
                          ", column dev " + std::to_string(col_dev) + ")");
  }
}

UnistochasticMatrix unistochastic_from_basis(const BasisMap& basis) {
  return UnistochasticMatrix(basis.matrix().cwiseAbs2());
}

double ensemble_energy(const WeightVector& w, const EnergySpectrum& energies) {
  if (w.size() != energies.size()) {
    throw DimensionMismatch("weights and spectrum have different dimensions");
  }
  return w.vector().dot(energies.vector());
}

ErrorBundle error_bundle(const UnistochasticMatrix& x, const WeightVector& w,
                         const EnergySpectrum& energies) {
  const std::size_t d = w.size();
  if (energies.size() != d || x.dim() != d) {
    throw DimensionMismatch("basis, weights and spectrum must share one dimension");
  }
  const Eigen::MatrixXd& xm = x.matrix();
  const auto wv = w.vector();
  const auto ev = energies.vector();
  const Eigen::VectorXd w_trial = xm * wv;
  const Eigen::VectorXd e_trial = xm.transpose() * ev;
  const Eigen::VectorXd de = e_trial - ev;

  ErrorBundle b;
  b.delta_E_w = wv.dot(de);
  b.delta_E_w_dual = (w_trial - wv).dot(ev);
  b.delta_rho_w = 2.0 * wv.dot(wv - w_trial);
  b.delta_psi.resize(d);
  b.delta_E.resize(d);
  b.kyfan_partials.resize(d);
  b.targeted = w.targeted_count();
  double partial = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    b.delta_psi[k] = 1.0 - xm(i, i);
    b.delta_E[k] = de(i);
    partial += de(i);
    b.kyfan_partials[k] = partial;
    if (k < b.targeted) {
      b.sum_psi += b.delta_psi[k];
      b.sum_abs_E += std::abs(b.delta_E[k]);
    }
  }
  return b;
}

ErrorBundle error_bundle(const BasisMap& basis, const WeightVector& w,
                         const EnergySpectrum& energies) {
  return error_bundle(unistochastic_from_basis(basis), w, energies);
}

RayleighRitzPrefactors rr_state_bounds(const EnergySpectrum& energies) {
  return {1.0 / energies.spread(), 1.0 / energies.gap(0)};
}

double observable_error_bound(double hs_norm, double a_plus, double delta_E_w) {
  if (!(hs_norm >= 0.0) || !(a_plus >= 0.0) || !(delta_E_w >= 0.0)) {
    throw InvalidArgument("observable bound inputs must be non-negative");
  }
  return hs_norm * std::sqrt(a_plus * delta_E_w);
}

}  // namespace gok
