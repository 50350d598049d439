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

#include <random>

#include "gok/bounds.hpp"
#include "gok/sampler.hpp"
#include "oracle.hpp"

using namespace gok;
using doctest::Approx;

namespace {

const EnergySpectrum kThreeLevel({-1, 0, 2});
const WeightVector kFigureWeights({0.5, 0.3, 0.2});

}  // namespace

TEST_CASE("Heaviside convention") {
  CHECK(heaviside(1.0) == 1.0);
  CHECK(heaviside(-1.0) == 0.0);
  CHECK(heaviside(0.0) == 0.5);
}

TEST_CASE("gap functions") {
  GapFunctions g = gap_functions(kFigureWeights, kThreeLevel);
  CHECK(g.min_swap_error == Approx(0.2));
  CHECK(g.max_swap_error == Approx(0.9));
  g = gap_functions(WeightVector({1, 0, 0}), kThreeLevel);
  CHECK(g.min_swap_error == Approx(1.0));
  CHECK(g.max_swap_error == Approx(3.0));
  CHECK_THROWS_AS(gap_functions(WeightVector({0.5, 0.5}), EnergySpectrum({0, 1})), DegenerateWeight);
}

TEST_CASE("ensemble-state prefactors") {
  Prefactors p = ensemble_state_prefactors(kFigureWeights, kThreeLevel);
  CHECK(p.lower == Approx(0.1));
  CHECK(p.upper == Approx(0.4));
  p = ensemble_state_prefactors(WeightVector({0.7, 0.3}), EnergySpectrum({0, 2}));
  CHECK(p.lower == Approx(p.upper));
  p = ensemble_state_prefactors(WeightVector({0.75, 0.25, 0, 0, 0}), EnergySpectrum({-1, 0, 2, 5, 8}));
  CHECK(p.lower == Approx(2.0 * 0.25 / 8.0));
  CHECK_THROWS_AS(ensemble_state_prefactors(WeightVector({0.5, 0.5, 0}), kThreeLevel), ShapeViolation);
}

TEST_CASE("eigenstate prefactors") {
  CHECK(eigenstate_prefactor(0, kFigureWeights, kThreeLevel) == Approx(5.0));
  CHECK(eigenstate_prefactor(1, kFigureWeights, kThreeLevel) == Approx(5.0));
  CHECK_THROWS_AS(eigenstate_prefactor(0, WeightVector({0.5, 0.5, 0}), kThreeLevel), DegenerateWeight);
  CHECK_THROWS_AS(eigenstate_prefactor(1, WeightVector({0.5, 0.5, 0}), kThreeLevel), DegenerateWeight);
}

TEST_CASE("eigenstate-sum prefactors") {
  Prefactors p = eigenstate_sum_prefactors(kFigureWeights, kThreeLevel);
  CHECK(p.lower == Approx(2.0 / 0.9));
  CHECK(p.upper == Approx(10.0));
  p = eigenstate_sum_prefactors(WeightVector({1, 0, 0}), kThreeLevel);
  CHECK(p.upper == Approx(1.0));
}

TEST_CASE("eigenenergy prefactors") {
  Prefactors p = eigenenergy_prefactors(1, kFigureWeights);
  CHECK(p.lower == Approx(-5.0));
  CHECK(p.upper == Approx(10.0));
  CHECK(eigenenergy_prefactors(0, kFigureWeights).lower == 0.0);
  p = eigenenergy_prefactors(1, WeightVector({0.75, 0.25, 0, 0, 0}));
  CHECK(p.upper == Approx(4.0));
  CHECK_THROWS_AS(eigenenergy_prefactors(2, WeightVector({0.75, 0.25, 0, 0, 0})), DegenerateWeight);
}

TEST_CASE("eigenenergy-sum prefactors") {
  Prefactors p = eigenenergy_sum_prefactors(kFigureWeights);
  CHECK(p.lower == Approx(2.0 / 0.3));
  CHECK(p.upper == Approx(20.0));
  CHECK(eigenenergy_sum_prefactors(WeightVector({0.5, 1.0 / 3, 1.0 / 6, 0})).upper == Approx(12.0));
  CHECK(eigenenergy_sum_prefactors(WeightVector({0.75, 0.25, 0, 0, 0})).upper == Approx(4.0));
}

TEST_CASE("upper prefactors match the steepest permutation direction") {
  std::mt19937_64 rng(2024);
  for (std::size_t d : {3, 4, 5}) {
    for (int trial = 0; trial < 15; ++trial) {
      const auto wv = oracle::random_strict_weights(rng, d);
      const auto ev = oracle::random_spectrum(rng, d);
      const WeightVector w(wv);
      const EnergySpectrum e(ev);
      const oracle::Slopes s = oracle::permutation_slopes(wv, ev, d);
      const Prefactors rho = ensemble_state_prefactors(w, e);
      CHECK(rho.lower == Approx(s.state_lo).epsilon(1e-10));
      CHECK(rho.upper == Approx(s.state_hi).epsilon(1e-10));
      const Prefactors psi_sum = eigenstate_sum_prefactors(w, e);
      CHECK(psi_sum.lower == Approx(s.psi_sum_lo).epsilon(1e-10));
      CHECK(psi_sum.upper == Approx(s.psi_sum_hi).epsilon(1e-10));
      CHECK(eigenenergy_sum_prefactors(w).upper == Approx(s.abs_sum_hi).epsilon(1e-10));
      for (std::size_t k = 0; k < d; ++k) {
        CHECK(eigenstate_prefactor(k, w, e) == Approx(s.psi_hi[k]).epsilon(1e-10));
        const Prefactors en = eigenenergy_prefactors(k, w);
        CHECK(en.lower == Approx(s.energy_lo[k]).epsilon(1e-10));
        // The top level can only move down, so its upper bound is not reached.
        if (k + 1 < d) CHECK(en.upper == Approx(s.energy_hi[k]).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("truncated ensembles match the steepest permutation direction") {
  const std::vector<double> wv{0.6, 0.3, 0.1, 0, 0};
  const std::vector<double> ev{-1, 0, 2, 5, 8};
  const WeightVector w(wv);
  const EnergySpectrum e(ev);
  const oracle::Slopes s = oracle::permutation_slopes(wv, ev, 3);
  const Prefactors rho = ensemble_state_prefactors(w, e);
  CHECK(rho.lower == Approx(s.state_lo));
  CHECK(rho.upper == Approx(s.state_hi));
  const Prefactors psi_sum = eigenstate_sum_prefactors(w, e);
  CHECK(psi_sum.lower == Approx(s.psi_sum_lo));
  CHECK(psi_sum.upper == Approx(s.psi_sum_hi));
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(eigenstate_prefactor(k, w, e) == Approx(s.psi_hi[k]));
    CHECK(eigenenergy_prefactors(k, w).lower == Approx(s.energy_lo[k]));
    CHECK(eigenenergy_prefactors(k, w).upper == Approx(s.energy_hi[k]));
  }
  CHECK(eigenenergy_sum_prefactors(w).upper == Approx(s.abs_sum_hi));
}

TEST_CASE("bound set refusals name the caveat") {
  const BoundSet set = compute_bounds(WeightVector({0.5, 0.5, 0}), kThreeLevel);
  CHECK_FALSE(set.ensemble_state.has_value());
  CHECK_FALSE(set.eigenstate[0].has_value());
  CHECK_FALSE(set.eigenstate[1].has_value());
  CHECK_FALSE(set.eigenenergy[0].has_value());
  CHECK_FALSE(set.eigenenergy[1].has_value());
  CHECK(set.eigenstate[2].has_value());
  CHECK_FALSE(set.refusals.empty());
  bool names_caveat = false;
  for (const auto& r : set.refusals) names_caveat |= r.find("coincides") != std::string::npos;
  CHECK(names_caveat);
}

TEST_CASE("compliance report") {
  const BoundSet set = compute_bounds(kFigureWeights, kThreeLevel);
  ComplianceReport r = check_bounds(error_bundle(BasisMap::identity(3), kFigureWeights, kThreeLevel), set);
  CHECK(r.in_regime);
  CHECK(r.violations() == 0);
  for (const auto& c : r.checks) CHECK(c.pass);

  const SaturatingState sat = jacobi_saturating_state(SaturationTarget::eigenenergy_sum_upper,
                                                      kFigureWeights, kThreeLevel, 0.15);
  r = check_bounds(error_bundle(sat.basis, kFigureWeights, kThreeLevel), set);
  bool found = false;
  for (const auto& c : r.checks) {
    if (c.quantity == Quantity::sum_abs_E) {
      found = true;
      CHECK(std::abs(c.upper_slack) < 1e-12);
    }
  }
  CHECK(found);

  const std::vector<std::size_t> swap{2, 1, 0};
  r = check_bounds(error_bundle(BasisMap::permutation(swap), kFigureWeights, kThreeLevel), set);
  CHECK_FALSE(r.in_regime);
  CHECK(r.violations() == 0);
}
