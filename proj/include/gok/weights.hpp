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

#ifndef GOK_WEIGHTS_HPP
#define GOK_WEIGHTS_HPP

#include <optional>
#include <string_view>

#include "gok/core.hpp"

namespace gok {

/// Error measure whose upper slope a weight vector is tuned to minimize.
enum class WeightTarget {
  single_energy,    // E_k
  all_energies,     // sumE_all
  lowest_energies,  // sumE_K
  single_state,     // Psi_k
  all_states,       // sumPsi_all
  lowest_states,    // sumPsi_K
};

std::string_view to_string(WeightTarget target);
WeightTarget parse_weight_target(std::string_view name);
/// State-targeting measures need the spectrum; energy-targeting ones do not.
bool needs_spectrum(WeightTarget target);

/// A target together with its dimension, index (k or K) and, for the
/// state measures, the spectrum.
struct TargetSpec {
  WeightTarget target = WeightTarget::all_energies;
  std::size_t dim = 0;
  std::size_t index = 0;
  std::optional<EnergySpectrum> energies;
};

struct OptimalWeights {
  WeightVector weights;
  double bound;
};

WeightVector optimal_weights_single_energy(std::size_t k, std::size_t dim);
WeightVector optimal_weights_all_energies(std::size_t dim);
WeightVector optimal_weights_lowest_energies(std::size_t count, std::size_t dim);
WeightVector optimal_weights_single_state(std::size_t k, const EnergySpectrum& energies);
WeightVector optimal_weights_all_states(const EnergySpectrum& energies);
WeightVector optimal_weights_lowest_states(std::size_t count, const EnergySpectrum& energies);

/// Closed-form smallest achievable upper slope for the target.
double lowest_upper_bound(const TargetSpec& spec);

/// Closed-form optimal weights paired with lowest_upper_bound.
OptimalWeights optimal_weights(const TargetSpec& spec);

/// Upper slope of the target measure for a given w, taken from the bounds
/// module.
double target_upper_prefactor(const TargetSpec& spec, const WeightVector& w);

/// Brute-force minimization of the target's upper slope over a regular
/// grid in the weight-gap coordinates mu_l = w_l - w_{l+1}, subject to
/// sum_l (l + 1) mu_l = 1. Ties are broken by the sorted vector of all
/// slope terms, then by the lexicographically largest w.
OptimalWeights grid_search_optimal(const TargetSpec& spec, double resolution);

}  // namespace gok

#endif  // GOK_WEIGHTS_HPP
