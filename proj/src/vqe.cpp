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

#include "gok/vqe.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "gok/bounds.hpp"
#include "gok/io.hpp"
#include "gok/sampler.hpp"

namespace gok {
namespace {

constexpr std::size_t kMaxSpins = 10;

void require_square(const Eigen::MatrixXd& h, std::size_t dim) {
  if (h.rows() != h.cols() || static_cast<std::size_t>(h.rows()) != dim) {
    throw DimensionMismatch("Hamiltonian dimension does not match the weight vector");
  }
}

Eigen::MatrixXd rotation_from(std::span<const double> params, std::size_t dim) {
  return expm(antisymmetric_from_params(params, dim));
}

}  // namespace

IsingModel IsingModel::reference_model() {
  IsingModel m;
  m.spins = 2;
  m.field = {0.32696, 0.80430};
  m.couplings = {{0, 1, 0.09}};
  return m;
}

Eigen::MatrixXd build_hamiltonian(const IsingModel& model) {
  const std::size_t n = model.spins;
  if (n == 0) throw InvalidArgument("the model needs at least one spin");
  if (n > kMaxSpins) throw InvalidArgument("dense Hamiltonians are limited to 10 spins");
  if (model.field.size() != n) {
    throw DimensionMismatch("expected one transverse-field coefficient per spin");
  }
  for (double a : model.field) {
    if (!std::isfinite(a)) throw InvalidArgument("field coefficients must be finite");
  }
  for (const Coupling& c : model.couplings) {
    if (c.first >= c.second || c.second >= n) {
      throw InvalidArgument("couplings need spin indices i < j < N");
    }
    if (!std::isfinite(c.value)) throw InvalidArgument("coupling values must be finite");
  }

  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  const auto mask = [n](std::size_t spin) { return Eigen::Index{1} << (n - 1 - spin); };
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    for (std::size_t i = 0; i < n; ++i) h(s ^ mask(i), s) += model.field[i];
    double diag = 0.0;
    for (const Coupling& c : model.couplings) {
      const double zi = (s & mask(c.first)) ? -1.0 : 1.0;
      const double zj = (s & mask(c.second)) ? -1.0 : 1.0;
      diag += c.value * zi * zj;
    }
    h(s, s) += diag;
  }
  return h;
}

SymmetricEigen exact_eigensystem(const Eigen::MatrixXd& h) { return jacobi_eigensolver(h); }

EnergySpectrum exact_spectrum(const Eigen::MatrixXd& h) {
  const SymmetricEigen eig = exact_eigensystem(h);
  return EnergySpectrum(std::vector<double>(eig.values.data(), eig.values.data() + eig.values.size()));
}

BasisMap ansatz_unitary(std::span<const double> params, std::size_t dim) {
  return BasisMap::orthogonal(rotation_from(params, dim));
}

double ensemble_cost(std::span<const double> params, const WeightVector& w,
                     const Eigen::MatrixXd& h) {
  require_square(h, w.size());
  const Eigen::MatrixXd u = rotation_from(params, w.size());
  const Eigen::MatrixXd projected = u.transpose() * h * u;
  return w.vector().dot(projected.diagonal());
}

std::vector<double> ensemble_cost_gradient(std::span<const double> params, const WeightVector& w,
                                           const Eigen::MatrixXd& h) {
  require_square(h, w.size());
  const std::size_t d = w.size();
  const Eigen::MatrixXd a = antisymmetric_from_params(params, d);
  const Eigen::MatrixXd u = expm(a);
  // dF = tr(M dU) with M = 2 W U^T H; contracting with the Frechet
  // derivative turns this into L(A, M)^T against dA.
  const Eigen::MatrixXd m = 2.0 * w.vector().asDiagonal() * u.transpose() * h;
  const Eigen::MatrixXd l = expm_frechet(a, m);
  std::vector<double> grad(params.size());
  std::size_t p = 0;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d); ++i) {
    for (Eigen::Index j = i + 1; j < static_cast<Eigen::Index>(d); ++j) {
      grad[p++] = l(j, i) - l(i, j);
    }
  }
  return grad;
}

std::vector<double> finite_difference_gradient(std::span<const double> params,
                                               const WeightVector& w, const Eigen::MatrixXd& h,
                                               double step) {
  std::vector<double> shifted(params.begin(), params.end());
  std::vector<double> grad(params.size());
  for (std::size_t p = 0; p < params.size(); ++p) {
    shifted[p] = params[p] + step;
    const double up = ensemble_cost(shifted, w, h);
    shifted[p] = params[p] - step;
    const double down = ensemble_cost(shifted, w, h);
    shifted[p] = params[p];
    grad[p] = (up - down) / (2.0 * step);
  }
  return grad;
}

WeightVector power_weights(std::size_t dim, int exponent) {
  if (dim < 2) throw InvalidArgument("dimension must be at least 2");
  std::vector<double> raw(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    raw[k] = std::pow(static_cast<double>(dim - k), static_cast<double>(exponent));
  }
  return WeightVector::from_unnormalized(std::move(raw));
}

OptimizerTrace adam_optimize(const WeightVector& w, const Eigen::MatrixXd& h,
                             const AdamConfig& config, std::uint64_t seed) {
  const std::size_t d = w.size();
  require_square(h, d);
  if (!(config.learning_rate > 0.0) || !(config.beta1 >= 0.0 && config.beta1 < 1.0) ||
      !(config.beta2 >= 0.0 && config.beta2 < 1.0) || !(config.epsilon > 0.0) ||
      !(config.init_scale >= 0.0)) {
    throw InvalidArgument("invalid Adam hyperparameters");
  }
  const SymmetricEigen eig = exact_eigensystem(h);
  const EnergySpectrum energies(
      std::vector<double>(eig.values.data(), eig.values.data() + eig.values.size()));
  const Eigen::MatrixXd to_eigenbasis = eig.vectors.transpose();

  const std::size_t count = antisymmetric_param_count(d);
  std::vector<double> params(count);
  CounterRng rng(seed, 0);
  for (double& p : params) p = rng.uniform(-config.init_scale, config.init_scale);
  std::vector<double> m1(count, 0.0);
  std::vector<double> m2(count, 0.0);

  OptimizerTrace trace;
  double best = std::numeric_limits<double>::infinity();
  double previous_cost = std::numeric_limits<double>::infinity();
  std::size_t rising = 0;
  for (std::size_t iter = 0;; ++iter) {
    const Eigen::MatrixXd u = rotation_from(params, d);
    TracePoint point;
    point.iteration = iter;
    point.cost = w.vector().dot((u.transpose() * h * u).diagonal());
    point.param_norm = Eigen::Map<const Eigen::VectorXd>(params.data(),
                                                         static_cast<Eigen::Index>(count)).norm();
    point.orthogonality_defect =
        (u.transpose() * u - Eigen::MatrixXd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
    point.bundle = error_bundle(BasisMap::orthogonal(to_eigenbasis * u), w, energies);
    best = std::min(best, point.bundle.delta_E_w);
    point.best_delta_E_w = best;
    trace.points.push_back(point);

    rising = point.cost > previous_cost ? rising + 1 : 0;
    previous_cost = point.cost;
    if (rising >= config.divergence_window) {
      throw DivergenceError("ensemble cost rose for " + std::to_string(rising) +
                                " consecutive iterations (iteration " + std::to_string(iter) + ")",
                            iter);
    }
    if (point.bundle.delta_E_w < config.target_error) {
      trace.converged = true;
      break;
    }
    if (iter == config.max_iter) break;

    const std::vector<double> grad = config.gradient == GradientMethod::analytic
                                         ? ensemble_cost_gradient(params, w, h)
                                         : finite_difference_gradient(params, w, h);
    const double t = static_cast<double>(iter + 1);
    const double c1 = 1.0 - std::pow(config.beta1, t);
    const double c2 = 1.0 - std::pow(config.beta2, t);
    for (std::size_t p = 0; p < count; ++p) {
      m1[p] = config.beta1 * m1[p] + (1.0 - config.beta1) * grad[p];
      m2[p] = config.beta2 * m2[p] + (1.0 - config.beta2) * grad[p] * grad[p];
      params[p] -= config.learning_rate * (m1[p] / c1) / (std::sqrt(m2[p] / c2) + config.epsilon);
    }
  }
  trace.params = std::move(params);
  return trace;
}

void write_trace_csv(std::ostream& out, const OptimizerTrace& trace) {
  write_csv_preamble(out);
  const std::size_t d = trace.points.empty() ? 0 : trace.points.front().bundle.delta_psi.size();
  out << "iter,delta_E_w,delta_rho_w";
  for (std::size_t k = 0; k < d; ++k) out << ",delta_psi_" << k;
  for (std::size_t k = 0; k < d; ++k) out << ",delta_E_" << k;
  out << ",sum_psi,sum_abs_E\n";
  for (const TracePoint& p : trace.points) {
    const ErrorBundle& b = p.bundle;
    out << p.iteration << ',' << format_number(b.delta_E_w) << ',' << format_number(b.delta_rho_w);
    for (double v : b.delta_psi) out << ',' << format_number(v);
    for (double v : b.delta_E) out << ',' << format_number(v);
    out << ',' << format_number(b.sum_psi) << ',' << format_number(b.sum_abs_E) << '\n';
  }
}

void write_bounds_csv(std::ostream& out, const WeightVector& w, const EnergySpectrum& energies) {
  const BoundSet bounds = compute_bounds(w, energies);
  const std::string g = bounds.gaps ? format_number(bounds.gaps->min_swap_error) : "";
  const std::string big_g = bounds.gaps ? format_number(bounds.gaps->max_swap_error) : "";
  write_csv_preamble(out);
  out << "quantity,lower_prefactor,upper_prefactor,g,G\n";
  const auto row = [&](const std::string& name, std::optional<Prefactors> p) {
    out << name << ',' << (p ? format_number(p->lower) : "") << ','
        << (p ? format_number(p->upper) : "") << ',' << g << ',' << big_g << '\n';
  };
  row("delta_rho_w", bounds.ensemble_state);
  for (std::size_t k = 0; k < bounds.dim; ++k) {
    std::optional<Prefactors> p;
    if (bounds.eigenstate[k]) p = Prefactors{0.0, *bounds.eigenstate[k]};
    row("delta_psi_" + std::to_string(k), p);
  }
  row("sum_psi", bounds.eigenstate_sum);
  for (std::size_t k = 0; k < bounds.dim; ++k) {
    row("delta_E_" + std::to_string(k), bounds.eigenenergy[k]);
  }
  row("sum_abs_E", bounds.eigenenergy_sum);
}

std::vector<DemoRun> run_demo(const IsingModel& model, std::span<const int> exponents,
                              const AdamConfig& config, std::uint64_t seed,
                              const std::filesystem::path& out_dir) {
  const Eigen::MatrixXd h = build_hamiltonian(model);
  const EnergySpectrum energies = exact_spectrum(h);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

  std::vector<DemoRun> runs;
  for (int n : exponents) {
    const WeightVector w = power_weights(energies.size(), n);
    DemoRun run{n, w, adam_optimize(w, h, config, seed), out_dir / ("trace_w" + std::to_string(n) + ".csv"),
                out_dir / ("bounds_w" + std::to_string(n) + ".csv")};
    std::ofstream trace_file(run.trace_path);
    if (!trace_file) throw IoError("cannot write " + run.trace_path.string());
    write_trace_csv(trace_file, run.trace);
    std::ofstream bounds_file(run.bounds_path);
    if (!bounds_file) throw IoError("cannot write " + run.bounds_path.string());
    write_bounds_csv(bounds_file, w, energies);
    if (!trace_file || !bounds_file) throw IoError("write failed in " + out_dir.string());
    runs.push_back(std::move(run));
  }
  return runs;
}

}  // namespace gok
