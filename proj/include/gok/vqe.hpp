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

#ifndef GOK_VQE_HPP
#define GOK_VQE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gok/core.hpp"
#include "gok/linalg.hpp"

namespace gok {

struct Coupling {
  std::size_t first = 0;
  std::size_t second = 0;
  double value = 0.0;
};

/// H = sum_i a_i X_i + sum_{i<j} J_ij Z_i Z_j on `spins` qubits. Spin 0 is
/// the most significant bit of the computational-basis index.
struct IsingModel {
  std::size_t spins = 0;
  std::vector<double> field;
  std::vector<Coupling> couplings;

  /// Two spins with J = 0.09, a = (0.32696, 0.80430).
  static IsingModel reference_model();
};

Eigen::MatrixXd build_hamiltonian(const IsingModel& model);

SymmetricEigen exact_eigensystem(const Eigen::MatrixXd& h);
EnergySpectrum exact_spectrum(const Eigen::MatrixXd& h);

/// exp(A) with A antisymmetric built from `params`.
BasisMap ansatz_unitary(std::span<const double> params, std::size_t dim);

/// sum_k w_k (U^T H U)_kk.
double ensemble_cost(std::span<const double> params, const WeightVector& w,
                     const Eigen::MatrixXd& h);

/// Exact gradient through the Frechet derivative of the exponential.
std::vector<double> ensemble_cost_gradient(std::span<const double> params, const WeightVector& w,
                                           const Eigen::MatrixXd& h);
/// Central differences.
std::vector<double> finite_difference_gradient(std::span<const double> params,
                                               const WeightVector& w, const Eigen::MatrixXd& h,
                                               double step = 1e-6);

/// w proportional to (D^n, (D-1)^n, ..., 1^n).
WeightVector power_weights(std::size_t dim, int exponent);

enum class GradientMethod { analytic, finite_difference };

struct AdamConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Initial parameters are uniform in [-init_scale, init_scale].
  double init_scale = 0.1;
  std::size_t max_iter = 5000;
  /// Stop once the ensemble-energy error falls below this.
  double target_error = 1e-10;
  /// Consecutive cost increases tolerated before giving up.
  std::size_t divergence_window = 100;
  GradientMethod gradient = GradientMethod::analytic;
};

struct TracePoint {
  std::size_t iteration = 0;
  double cost = 0.0;
  double param_norm = 0.0;
  /// Running minimum of delta_E_w up to this iteration.
  double best_delta_E_w = 0.0;
  double orthogonality_defect = 0.0;
  ErrorBundle bundle;
};

struct OptimizerTrace {
  std::vector<TracePoint> points;
  std::vector<double> params;
  bool converged = false;
};

/// Minimizes the ensemble cost with Adam. Errors are measured against the
/// exact eigenbasis of h.
OptimizerTrace adam_optimize(const WeightVector& w, const Eigen::MatrixXd& h,
                             const AdamConfig& config, std::uint64_t seed);

void write_trace_csv(std::ostream& out, const OptimizerTrace& trace);
void write_bounds_csv(std::ostream& out, const WeightVector& w, const EnergySpectrum& energies);

struct DemoRun {
  int exponent = 0;
  WeightVector weights;
  OptimizerTrace trace;
  std::filesystem::path trace_path;
  std::filesystem::path bounds_path;
};

/// One optimization per weight exponent, each writing
/// trace_w<n>.csv and bounds_w<n>.csv into `out_dir`.
std::vector<DemoRun> run_demo(const IsingModel& model, std::span<const int> exponents,
                              const AdamConfig& config, std::uint64_t seed,
                              const std::filesystem::path& out_dir);

}  // namespace gok

#endif  // GOK_VQE_HPP
