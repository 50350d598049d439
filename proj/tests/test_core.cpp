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

#include <cmath>
#include <numbers>
#include <random>

#include "gok/core.hpp"
#include "gok/sampler.hpp"
#include "oracle.hpp"

using namespace gok;
using doctest::Approx;

TEST_CASE("spectrum validation") {
  CHECK_NOTHROW(EnergySpectrum({-1, 0, 2}));
  CHECK_THROWS_AS(EnergySpectrum({0}), InvalidArgument);
  CHECK_THROWS_AS(EnergySpectrum({0, 0, 1}), DegenerateSpectrum);
  CHECK_THROWS_AS(EnergySpectrum({1, 0}), DegenerateSpectrum);
  CHECK_THROWS_AS(EnergySpectrum({0, 1e-14, 1}), DegenerateSpectrum);
  const EnergySpectrum e({-1, 0, 2});
  CHECK(e.spread() == 3.0);
  CHECK(e.gap(1) == 2.0);
  CHECK(e.scaled(2.0)[2] == 4.0);
}

TEST_CASE("weight vector shapes") {
  CHECK(WeightVector({0.5, 0.3, 0.2}).shape() == WeightShape::strict_full);
  CHECK(WeightVector({2.0 / 3, 1.0 / 3, 0.0}).shape() == WeightShape::strict_full);
  CHECK(WeightVector({0.75, 0.25, 0, 0, 0}).shape() == WeightShape::strict_head);
  CHECK(WeightVector({0.75, 0.25, 0, 0, 0}).targeted_count() == 2);
  CHECK(WeightVector({0.5, 0.3, 0.2}).targeted_count() == 3);
  CHECK(WeightVector({0.5, 0.5, 0}).shape() == WeightShape::other);
  CHECK(WeightVector({1.0 / 3, 1.0 / 3, 1.0 / 3}).shape() == WeightShape::other);
  CHECK_THROWS_AS(WeightVector({0.2, 0.8}), InvalidArgument);
  CHECK_THROWS_AS(WeightVector({0.6, 0.3}), InvalidArgument);
  CHECK_THROWS_AS(WeightVector({1.1, -0.1}), InvalidArgument);
  const WeightVector w = WeightVector::from_unnormalized({4, 3, 2, 1});
  CHECK(w[0] == Approx(0.4));
  const auto mu = w.mu();
  CHECK(mu[0] == Approx(0.1));
  CHECK(mu[3] == Approx(0.1));
}

TEST_CASE("ensemble energy") {
  const EnergySpectrum e({-1, 0, 2});
  CHECK(ensemble_energy(WeightVector({0.5, 0.3, 0.2}), e) == Approx(-0.1));
  CHECK(ensemble_energy(WeightVector({1, 0, 0}), e) == -1.0);
  CHECK(ensemble_energy(WeightVector({1.0 / 3, 1.0 / 3, 1.0 / 3}), e) == Approx(1.0 / 3));
}

TEST_CASE("identity basis has zero errors") {
  const ErrorBundle b =
      error_bundle(BasisMap::identity(3), WeightVector({0.5, 0.3, 0.2}), EnergySpectrum({-1, 0, 2}));
  CHECK(b.delta_E_w == 0.0);
  CHECK(b.delta_rho_w == 0.0);
  CHECK(b.sum_psi == 0.0);
  CHECK(b.sum_abs_E == 0.0);
  for (double v : b.delta_psi) CHECK(v == 0.0);
  for (double v : b.delta_E) CHECK(v == 0.0);
}

TEST_CASE("equal weights hide a mixed pair") {
  const double c = std::cos(std::numbers::pi / 4);
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(3, 3);
  u << c, -c, 0, c, c, 0, 0, 0, 1;
  const ErrorBundle b =
      error_bundle(BasisMap::orthogonal(u), WeightVector({0.5, 0.5, 0}), EnergySpectrum({-1, 0, 1}));
  CHECK(std::abs(b.delta_E_w) < 1e-15);
  CHECK(std::abs(b.delta_rho_w) < 1e-15);
  CHECK(b.delta_psi[0] == Approx(0.5));
  CHECK(b.delta_E[0] == Approx(0.5));
}

TEST_CASE("rotation of a neighbouring pair") {
  const WeightVector w({0.5, 0.3, 0.2});
  const EnergySpectrum e({-1, 0, 2});
  for (double theta : {0.1, 0.7, 1.3}) {
    const ErrorBundle b = error_bundle(BasisMap::orthogonal(oracle::rotation(3, 1, 2, theta)), w, e);
    CHECK(b.delta_E_w == Approx(std::pow(std::sin(theta), 2) * 0.1 * 2.0).epsilon(1e-12));
  }
}

TEST_CASE("unistochastic matrix from a basis") {
  const Eigen::MatrixXd x = unistochastic_from_basis(BasisMap::identity(4)).matrix();
  CHECK(x.isApprox(Eigen::MatrixXd::Identity(4, 4)));
  const std::vector<std::size_t> map{2, 0, 1};
  const Eigen::MatrixXd p = unistochastic_from_basis(BasisMap::permutation(map)).matrix();
  for (std::size_t l = 0; l < 3; ++l) CHECK(p(static_cast<Eigen::Index>(map[l]), static_cast<Eigen::Index>(l)) == 1.0);
  const double t = 0.4;
  const Eigen::MatrixXd r = unistochastic_from_basis(BasisMap::orthogonal(oracle::rotation(2, 0, 1, t))).matrix();
  CHECK(r(0, 0) == Approx(std::pow(std::cos(t), 2)));
  CHECK(r(0, 1) == Approx(std::pow(std::sin(t), 2)));
  CHECK(r(1, 0) == Approx(std::pow(std::sin(t), 2)));
  CHECK_THROWS_AS(UnistochasticMatrix(Eigen::MatrixXd::Constant(2, 2, 0.6)), InvalidArgument);
  CHECK_THROWS_AS(BasisMap::orthogonal(Eigen::MatrixXd::Constant(2, 2, 1.0)), NotUnitary);
}

TEST_CASE("error bundle agrees with dense matrix algebra") {
  std::mt19937_64 rng(7);
  for (std::size_t d : {3, 4, 5}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto wv = oracle::random_strict_weights(rng, d);
      const auto ev = oracle::random_spectrum(rng, d);
      const WeightVector w(wv);
      const EnergySpectrum e(ev);
      const BasisMap u = trial % 2 ? sample_unitary(d, 11, static_cast<std::uint64_t>(trial))
                                   : sample_orthogonal(d, 11, static_cast<std::uint64_t>(trial));
      const ErrorBundle b = error_bundle(u, w, e);
      const oracle::Errors ref = oracle::direct_errors(u.matrix(), wv, ev, d);
      CHECK(b.delta_E_w == Approx(ref.ensemble_energy).epsilon(1e-10));
      CHECK(b.delta_E_w_dual == Approx(ref.ensemble_energy).epsilon(1e-10));
      CHECK(b.delta_rho_w == Approx(ref.ensemble_state).epsilon(1e-10));
      CHECK(b.sum_psi == Approx(ref.state_sum).epsilon(1e-10));
      CHECK(b.sum_abs_E == Approx(ref.energy_abs_sum).epsilon(1e-10));
      for (std::size_t k = 0; k < d; ++k) {
        CHECK(b.delta_psi[k] == Approx(ref.state[k]).epsilon(1e-10));
        CHECK(b.delta_E[k] == Approx(ref.energy[k]).epsilon(1e-10));
      }
      CHECK(std::abs(b.kyfan_partials.back()) < 1e-10);
    }
  }
}

TEST_CASE("summed errors use the weighted states of a truncated ensemble") {
  const WeightVector w({0.75, 0.25, 0, 0, 0});
  const EnergySpectrum e({-1, 0, 2, 5, 8});
  const BasisMap u = sample_orthogonal(5, 3, 0);
  const ErrorBundle b = error_bundle(u, w, e);
  const oracle::Errors ref = oracle::direct_errors(u.matrix(), {0.75, 0.25, 0, 0, 0}, {-1, 0, 2, 5, 8}, 2);
  CHECK(b.targeted == 2);
  CHECK(b.sum_psi == Approx(ref.state_sum));
  CHECK(b.sum_abs_E == Approx(ref.energy_abs_sum));
}

TEST_CASE("Rayleigh-Ritz state prefactors") {
  auto p = rr_state_bounds(EnergySpectrum({-1, 0, 2}));
  CHECK(p.q_minus == Approx(1.0 / 3));
  CHECK(p.q_plus == Approx(1.0));
  p = rr_state_bounds(EnergySpectrum({0, 1}));
  CHECK(p.q_minus == Approx(1.0));
  CHECK(p.q_plus == Approx(1.0));
  p = rr_state_bounds(EnergySpectrum({-1.13483, -0.48575, 0.48575, 1.13483}));
  CHECK(p.q_plus == Approx(1.0 / 0.64908));
}

TEST_CASE("observable error bound") {
  CHECK(observable_error_bound(1.0, 0.4, 0.0) == 0.0);
  CHECK(observable_error_bound(1.0, 0.4, 0.1) == Approx(0.2));
  CHECK(observable_error_bound(2.0, 0.4, 0.1) == Approx(0.4));
  CHECK_THROWS_AS(observable_error_bound(1.0, 0.4, -0.1), InvalidArgument);
}
