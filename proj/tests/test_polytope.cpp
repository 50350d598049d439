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
#include "gok/polytope.hpp"
#include "oracle.hpp"

using namespace gok;
using doctest::Approx;

TEST_CASE("permutohedron vertices") {
  CHECK(permutohedron_vertices(Eigen::Vector3d(1, 0, 0)).size() == 3);
  CHECK(permutohedron_vertices(Eigen::Vector3d(0.5, 0.3, 0.2)).size() == 6);
  CHECK(permutohedron_vertices(Eigen::Vector3d(1, 1, 1)).size() == 1);
  CHECK(permutohedron_vertices(Eigen::Vector4d(0.5, 0.5, 0, 0)).size() == 6);
}

TEST_CASE("permutations") {
  const std::vector<std::size_t> cycle{0, 2, 3};
  const Permutation p = Permutation::from_cycle(4, cycle);
  CHECK(p.cycles().size() == 1);
  CHECK(p.cycles()[0].size() == 3);
  const Eigen::MatrixXd m = p.matrix();
  CHECK(m.colwise().sum().isOnes());
  CHECK(m.rowwise().sum().isOnes());
  CHECK(Permutation::identity(3).cycles().empty());
  CHECK_THROWS(Permutation({0, 0, 1}));
  const std::vector<Permutation> perms{Permutation::identity(3), Permutation::transposition(3, 0, 1)};
  const std::vector<double> coeffs{0.25, 0.75};
  const Eigen::MatrixXd x = birkhoff_combination(perms, coeffs);
  CHECK(x(0, 0) == Approx(0.25));
  CHECK(x(1, 0) == Approx(0.75));
}

TEST_CASE("slice vertices") {
  const WeightVector w({0.5, 0.3, 0.2});
  const EnergySpectrum e({-1, 0, 2});
  PermutohedronSlice s = reference_and_positive_vertices(Space::weights, w, e, 0.1);
  CHECK(s.reference_vertices.size() == 1);
  REQUIRE(s.positive_vertices.size() == 2);
  CHECK(s.positive_vertices[0].i == 0);
  CHECK(s.positive_vertices[0].j == 1);
  CHECK(s.positive_vertices[1].i == 1);
  CHECK(s.positive_vertices[1].j == 2);
  const LinearTarget energy = delta_E_w_target(Space::weights, w, e);
  for (const SliceVertex& v : s.intersection_vertices) CHECK(energy(v.point) == Approx(0.1));

  const WeightVector head({0.7, 0.3, 0, 0});
  s = reference_and_positive_vertices(Space::weights, head, EnergySpectrum({-1, 0, 2, 5}), 0.1);
  bool s12 = false;
  bool s13 = false;
  for (const PositiveVertex& v : s.positive_vertices) {
    s12 |= v.i == 1 && v.j == 2;
    s13 |= v.i == 1 && v.j == 3;
  }
  CHECK(s12);
  CHECK(s13);

  s = reference_and_positive_vertices(Space::energies, head, EnergySpectrum({-1, 0, 2, 5}), 0.1);
  CHECK(s.reference_vertices.size() == 2);
  CHECK_THROWS_AS(reference_and_positive_vertices(Space::weights, w, e, 0.3), RegimeError);
  CHECK_THROWS_AS(reference_and_positive_vertices(Space::weights, w, e, 0.0), InvalidArgument);
}

TEST_CASE("constrained extrema of the ensemble-state error") {
  const WeightVector w({0.5, 0.3, 0.2});
  const EnergySpectrum e({-1, 0, 2});
  const LinearTarget rho = delta_rho_target(w);
  const Extrema x = constrained_extrema(rho, w, e, 0.1);
  CHECK(x.min == Approx(0.01));
  CHECK(x.max == Approx(0.04));
  const Extrema tiny = constrained_extrema(rho, w, e, 1e-9);
  CHECK(std::abs(tiny.max) < 1e-8);
  LinearTarget flat = rho;
  flat.coeffs.setZero();
  const Extrema c = constrained_extrema(flat, w, e, 0.1);
  CHECK(c.min == c.max);
  const Extrema edge = brute_force_extrema(rho, w, e, 0.2);
  CHECK(edge.max == Approx(constrained_extrema(rho, w, e, 0.2).max));
}

TEST_CASE("constrained extrema match vertex enumeration") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto wv = oracle::random_strict_weights(rng, 4);
    const auto ev = oracle::random_spectrum(rng, 4);
    const WeightVector w(wv);
    const EnergySpectrum e(ev);
    const double delta = 0.5 * gap_functions(w, e).min_swap_error;
    std::vector<LinearTarget> targets{delta_rho_target(w)};
    for (std::size_t k = 0; k < 4; ++k) targets.push_back(delta_E_target(k, e));
    for (const LinearTarget& t : targets) {
      const Extrema a = constrained_extrema(t, w, e, delta);
      const Extrema b = brute_force_extrema(t, w, e, delta);
      CHECK(std::abs(a.min - b.min) <= 1e-10);
      CHECK(std::abs(a.max - b.max) <= 1e-10);
    }
  }
}

TEST_CASE("extrema equal prefactor times error level") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto wv = oracle::random_strict_weights(rng, 4);
    const auto ev = oracle::random_spectrum(rng, 4);
    const WeightVector w(wv);
    const EnergySpectrum e(ev);
    const double delta = 0.3 * gap_functions(w, e).min_swap_error;
    const oracle::Slopes s = oracle::permutation_slopes(wv, ev, 4);
    const Extrema x = constrained_extrema(delta_rho_target(w), w, e, delta);
    CHECK(x.min == Approx(s.state_lo * delta).epsilon(1e-10));
    CHECK(x.max == Approx(s.state_hi * delta).epsilon(1e-10));
    for (std::size_t k = 0; k < 4; ++k) {
      const Extrema y = constrained_extrema(delta_E_target(k, e), w, e, delta);
      CHECK(y.min == Approx(s.energy_lo[k] * delta).epsilon(1e-10));
      CHECK(y.max == Approx(s.energy_hi[k] * delta).epsilon(1e-10));
    }
  }
}

TEST_CASE("exhaustive minimum is the sorted pairing") {
  const EnergySpectrum e({-1, 0, 2});
  CHECK(gok_minimum_check(WeightVector({0.5, 0.3, 0.2}), e) == Approx(-0.1));
  CHECK(gok_minimum_check(WeightVector({1, 0, 0}), e) == -1.0);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const WeightVector w(oracle::random_strict_weights(rng, 6));
    const EnergySpectrum es(oracle::random_spectrum(rng, 6));
    CHECK(gok_minimum_check(w, es) == Approx(ensemble_energy(w, es)).epsilon(1e-12));
  }
}

TEST_CASE("cycle bounds") {
  const WeightVector w({0.4, 0.3, 0.2, 0.1});
  const EnergySpectrum e({-1, 0, 2, 5});
  const CycleBoundReport t = cycle_bound_check(Permutation::transposition(4, 1, 2), w, e);
  CHECK(t.delta_E_w == Approx(0.1 * 2.0));
  CHECK(t.lower_holds);
  CHECK(t.upper_holds);

  std::vector<std::size_t> c(3);
  for (c[0] = 0; c[0] < 4; ++c[0]) {
    for (c[1] = 0; c[1] < 4; ++c[1]) {
      for (c[2] = 0; c[2] < 4; ++c[2]) {
        if (c[0] == c[1] || c[1] == c[2] || c[0] == c[2]) continue;
        const CycleBoundReport r = cycle_bound_check(Permutation::from_cycle(4, c), w, e);
        CHECK(r.cycle_length == 3);
        CHECK(r.lower_holds);
        CHECK(r.upper_holds);
      }
    }
  }

  const WeightVector head({0.6, 0.4, 0, 0, 0});
  const std::vector<std::size_t> tail{2, 3, 4};
  const CycleBoundReport z = cycle_bound_check(Permutation::from_cycle(5, tail), head,
                                               EnergySpectrum({-1, 0, 2, 5, 8}));
  CHECK(z.reference);
  CHECK(z.delta_E_w == 0.0);
}

// The mixed-branch lower bound (2L'-1) * delta_pz assumes every moved
// positive weight lands on a zero-weight level. A transposition of two
// positive weights undercuts it whenever 2*delta_pz < delta_pp < 3*delta_pz,
// while the weaker statement that every non-reference vertex costs at least g
// still holds.
TEST_CASE("mixed lower bound fails for a swap of two positive weights") {
  const WeightVector w({0.9, 0.1, 0, 0});
  const EnergySpectrum e({0, 1, 4.2, 6});
  const CycleBoundReport r = cycle_bound_check(Permutation::transposition(4, 0, 1), w, e);
  CHECK(r.delta_pp == Approx(0.8));
  CHECK(r.delta_pz == Approx(0.32));
  CHECK(r.lower_branch == "mixed");
  CHECK(r.delta_E_w == Approx(0.8));
  CHECK(r.lower_bound == Approx(0.96));
  CHECK_FALSE(r.lower_holds);
  CHECK(r.upper_holds);
  CHECK(r.delta_E_w >= gap_functions(w, e).min_swap_error);
}

TEST_CASE("cycle check rejects unsupported structures") {
  const EnergySpectrum e({-1, 0, 2, 5});
  CHECK_THROWS_AS(cycle_bound_check(Permutation::identity(4), WeightVector({0.5, 0.5, 0, 0}), e),
                  ShapeViolation);
  const Permutation two_cycles({1, 0, 3, 2});
  CHECK_THROWS_AS(cycle_bound_check(two_cycles, WeightVector({0.4, 0.3, 0.2, 0.1}), e), InvalidArgument);
}
