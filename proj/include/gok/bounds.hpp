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

#ifndef GOK_BOUNDS_HPP
#define GOK_BOUNDS_HPP

#include <optional>
#include <string>
#include <vector>

#include "gok/core.hpp"

namespace gok {

/// Smallest and largest ensemble-energy error produced by swapping two
/// exact eigenstates. `min_swap_error` is also the edge of the window in
/// which the linear bounds hold.
struct GapFunctions {
  double min_swap_error = 0.0;
  double max_swap_error = 0.0;
};

/// Heaviside step with the midpoint convention step(0) = 1/2.
double heaviside(double x);

/// (w_k - w_{k+1}) (E_{k+1} - E_k), w_D = 0.
double swap_error(const WeightVector& w, const EnergySpectrum& energies, std::size_t k);

GapFunctions gap_functions(const WeightVector& w, const EnergySpectrum& energies);

struct Prefactors {
  double lower = 0.0;
  double upper = 0.0;
};

/// Ensemble state: lower <= delta_rho_w / delta_E_w <= upper.
Prefactors ensemble_state_prefactors(const WeightVector& w, const EnergySpectrum& energies);
/// Upper slope for the infidelity of eigenstate k.
double eigenstate_prefactor(std::size_t k, const WeightVector& w,
                            const EnergySpectrum& energies);
/// Sum of infidelities over the targeted eigenstates.
Prefactors eigenstate_sum_prefactors(const WeightVector& w, const EnergySpectrum& energies);
/// Signed slopes for the energy error of eigenstate k. The lower one is
/// non-positive.
Prefactors eigenenergy_prefactors(std::size_t k, const WeightVector& w);
/// Sum of absolute energy errors over the targeted eigenstates.
Prefactors eigenenergy_sum_prefactors(const WeightVector& w);

/// Every prefactor that can be computed for (w, E). Entries whose
/// preconditions fail are left empty and the reason recorded in
/// `refusals`.
struct BoundSet {
  std::size_t dim = 0;
  std::size_t targeted = 0;
  std::optional<GapFunctions> gaps;
  std::optional<Prefactors> ensemble_state;
  std::vector<std::optional<double>> eigenstate;
  std::optional<Prefactors> eigenstate_sum;
  std::vector<std::optional<Prefactors>> eigenenergy;
  std::optional<Prefactors> eigenenergy_sum;
  std::vector<std::string> refusals;
};

BoundSet compute_bounds(const WeightVector& w, const EnergySpectrum& energies);

/// Error measures covered by the bounds.
enum class Quantity { delta_rho_w, delta_psi, sum_psi, delta_E, sum_abs_E };

struct BoundCheck {
  Quantity quantity = Quantity::delta_rho_w;
  /// State index for delta_psi and delta_E.
  std::size_t index = 0;
  double value = 0.0;
  /// Allowed range at the bundle's delta_E_w.
  double lower = 0.0;
  double upper = 0.0;
  double lower_slack = 0.0;
  double upper_slack = 0.0;
  bool pass = true;

  /// Column-style name such as "delta_psi_2".
  std::string label() const;
};

struct ComplianceReport {
  double delta_E_w = 0.0;
  double validity_threshold = 0.0;
  /// False when delta_E_w exceeds the threshold; failures are then
  /// informational only.
  bool in_regime = true;
  std::vector<BoundCheck> checks;

  /// Failed checks, counted only inside the validity window.
  std::size_t violations() const;
};

ComplianceReport check_bounds(const ErrorBundle& bundle, const BoundSet& bounds,
                              double tolerance = 1e-10);

}  // namespace gok

#endif  // GOK_BOUNDS_HPP
