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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

#include "gok/bounds.hpp"
#include "gok/linalg.hpp"
#include "gok/vqe.hpp"

using namespace gok;
using doctest::Approx;

namespace {

Eigen::MatrixXd pauli_on(const Eigen::Matrix2d& op, std::size_t site, std::size_t spins) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Ones(1, 1);
  for (std::size_t s = 0; s < spins; ++s) {
    const Eigen::MatrixXd factor = s == site ? Eigen::MatrixXd(op) : Eigen::MatrixXd::Identity(2, 2);
    out = Eigen::kroneckerProduct(out, factor).eval();
  }
  return out;
}

Eigen::MatrixXd kron_hamiltonian(const IsingModel& m) {
  Eigen::Matrix2d x;
  x << 0, 1, 1, 0;
  Eigen::Matrix2d z;
  z << 1, 0, 0, -1;
  const auto d = Eigen::Index{1} << m.spins;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < m.spins; ++i) h += m.field[i] * pauli_on(x, i, m.spins);
  for (const Coupling& c : m.couplings) {
    h += c.value * pauli_on(z, c.first, m.spins) * pauli_on(z, c.second, m.spins);
  }
  return h;
}

}  // namespace

TEST_CASE("Ising Hamiltonian assembly") {
  IsingModel one{1, {1.0}, {}};
  Eigen::Matrix2d x;
  x << 0, 1, 1, 0;
  CHECK(build_hamiltonian(one).isApprox(x));

  const IsingModel ref = IsingModel::reference_model();
  const Eigen::MatrixXd h = build_hamiltonian(ref);
  CHECK(h.diagonal().isApprox(Eigen::Vector4d(0.09, -0.09, -0.09, 0.09)));
  CHECK(h.isApprox(kron_hamiltonian(ref)));

  IsingModel three{3, {0.3, -0.2, 0.7}, {{0, 1, 0.5}, {1, 2, -0.25}, {0, 2, 0.1}}};
  CHECK(build_hamiltonian(three).isApprox(kron_hamiltonian(three)));

  IsingModel zero{2, {0.0, 0.0}, {{0, 1, 0.0}}};
  CHECK(build_hamiltonian(zero).isZero());
}

TEST_CASE("exact spectrum") {
  const EnergySpectrum e = exact_spectrum(build_hamiltonian(IsingModel::reference_model()));
  const double expected[] = {-1.13483, -0.48575, 0.48575, 1.13483};
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(e[k] - expected[k]) < 1e-5);

  Eigen::Matrix3d diag = Eigen::Vector3d(2, -1, 0.5).asDiagonal();
  const EnergySpectrum d = exact_spectrum(diag);
  CHECK(d[0] == Approx(-1));
  CHECK(d[1] == Approx(0.5));
  CHECK(d[2] == Approx(2));
  Eigen::Matrix2d x;
  x << 0, 1, 1, 0;
  CHECK(exact_spectrum(x)[0] == Approx(-1));
}

TEST_CASE("Jacobi eigensolver agrees with a library solver") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd a(6, 6);
    for (Eigen::Index i = 0; i < 6; ++i) {
      for (Eigen::Index j = 0; j < 6; ++j) a(i, j) = n(rng);
    }
    const Eigen::MatrixXd h = a + a.transpose();
    const SymmetricEigen mine = jacobi_eigensolver(h);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(h);
    CHECK((mine.values - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((h * mine.vectors - mine.vectors * mine.values.asDiagonal()).norm() < 1e-9);
  }
  Eigen::Matrix2d bad;
  bad << 0, 1, 2, 0;
  CHECK_THROWS(jacobi_eigensolver(bad));
}

TEST_CASE("matrix exponential and ansatz") {
  CHECK(expm(Eigen::MatrixXd(Eigen::MatrixXd::Zero(3, 3))).isApprox(Eigen::MatrixXd::Identity(3, 3)));
  Eigen::MatrixXd a(2, 2);
  a << 0, 0.3, -0.3, 0;
  Eigen::MatrixXd r(2, 2);
  r << std::cos(0.3), std::sin(0.3), -std::sin(0.3), std::cos(0.3);
  CHECK(expm(a).isApprox(r));
  const std::vector<double> zero(antisymmetric_param_count(4), 0.0);
  CHECK(ansatz_unitary(zero, 4).matrix().isApprox(Eigen::MatrixXcd::Identity(4, 4)));
  const std::vector<double> theta{0.3};
  CHECK(ansatz_unitary(theta, 2).matrix().real().isApprox(r));
  CHECK(antisymmetric_param_count(4) == 6);
}

TEST_CASE("ensemble cost") {
  const Eigen::MatrixXd h = build_hamiltonian(IsingModel::reference_model());
  const WeightVector w = power_weights(4, 1);
  CHECK(w[0] == Approx(0.4));
  CHECK(power_weights(4, 2)[0] == Approx(16.0 / 30));
  const EnergySpectrum e = exact_spectrum(h);
  const std::vector<double> zero(6, 0.0);
  double diag = 0.0;
  for (Eigen::Index k = 0; k < 4; ++k) diag += w[static_cast<std::size_t>(k)] * h(k, k);
  CHECK(ensemble_cost(zero, w, h) == Approx(diag));
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> p(6);
    for (double& v : p) v = u(rng);
    REQUIRE(ensemble_cost(p, w, h) >= ensemble_energy(w, e) - 1e-12);
  }
}

TEST_CASE("analytic gradient matches finite differences") {
  const Eigen::MatrixXd h = build_hamiltonian(IsingModel::reference_model());
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int n : {1, 2, 3}) {
    const WeightVector w = power_weights(4, n);
    for (int trial = 0; trial < 34; ++trial) {
      std::vector<double> p(6);
      for (double& v : p) v = u(rng);
      const auto g = ensemble_cost_gradient(p, w, h);
      const auto f = finite_difference_gradient(p, w, h);
      for (std::size_t i = 0; i < 6; ++i) REQUIRE(g[i] == Approx(f[i]).epsilon(1e-6).scale(1e-6));
    }
  }
}

TEST_CASE("Adam reaches the exact ensemble and respects the bounds") {
  const Eigen::MatrixXd h = build_hamiltonian(IsingModel::reference_model());
  const EnergySpectrum e = exact_spectrum(h);
  for (int n : {1, 2, 3}) {
    const WeightVector w = power_weights(4, n);
    const OptimizerTrace trace = adam_optimize(w, h, AdamConfig{}, 0);
    CHECK(trace.converged);
    CHECK(trace.points.back().bundle.delta_E_w < 1e-6);
    CHECK(trace.points.back().iteration <= 5000);
    const BoundSet bounds = compute_bounds(w, e);
    for (const TracePoint& p : trace.points) {
      REQUIRE(p.bundle.delta_E_w >= -1e-12);
      REQUIRE(check_bounds(p.bundle, bounds).violations() == 0);
    }
  }
  AdamConfig none;
  none.max_iter = 0;
  const OptimizerTrace t = adam_optimize(power_weights(4, 1), h, none, 0);
  CHECK(t.points.size() == 1);
  CHECK(t.points[0].iteration == 0);
}

TEST_CASE("optimizer trace invariants") {
  const Eigen::MatrixXd h = build_hamiltonian(IsingModel::reference_model());
  const OptimizerTrace trace = adam_optimize(power_weights(4, 2), h, AdamConfig{}, 9);
  double best = trace.points.front().best_delta_E_w;
  for (const TracePoint& p : trace.points) {
    REQUIRE(p.best_delta_E_w <= best);
    best = p.best_delta_E_w;
    REQUIRE(p.best_delta_E_w <= p.bundle.delta_E_w);
    REQUIRE(p.orthogonality_defect < 1e-8);
  }
  AdamConfig fd;
  fd.gradient = GradientMethod::finite_difference;
  CHECK(adam_optimize(power_weights(4, 1), h, fd, 0).converged);
}

TEST_CASE("optimizer is deterministic for a seed") {
  const Eigen::MatrixXd h = build_hamiltonian(IsingModel::reference_model());
  AdamConfig config;
  config.max_iter = 50;
  const OptimizerTrace a = adam_optimize(power_weights(4, 1), h, config, 5);
  const OptimizerTrace b = adam_optimize(power_weights(4, 1), h, config, 5);
  CHECK(a.params == b.params);
  std::ostringstream sa;
  std::ostringstream sb;
  write_trace_csv(sa, a);
  write_trace_csv(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind("# schema_version: 1", 0) == 0);
}

TEST_CASE("demo writes trace and bounds files") {
  const auto dir = std::filesystem::temp_directory_path() / "gok_demo_test";
  std::filesystem::remove_all(dir);
  const std::vector<int> exps{1, 2, 3};
  AdamConfig config;
  config.max_iter = 20;
  const auto runs = run_demo(IsingModel::reference_model(), exps, config, 0, dir);
  CHECK(runs.size() == 3);
  for (const DemoRun& r : runs) {
    CHECK(std::filesystem::exists(r.trace_path));
    CHECK(std::filesystem::exists(r.bounds_path));
  }
  std::filesystem::remove_all(dir);
}
