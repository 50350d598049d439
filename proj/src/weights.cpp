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

#include "gok/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "gok/bounds.hpp"

namespace gok {
namespace {

void require_dim(std::size_t dim) {
  if (dim < 2) throw InvalidArgument("dimension must be at least 2");
}

void require_single_index(std::size_t k, std::size_t dim) {
  require_dim(dim);
  if (k + 2 > dim) {
    throw InvalidArgument("state index k must satisfy k <= D - 2 (got k=" + std::to_string(k) +
                          ", D=" + std::to_string(dim) + ")");
  }
}

void require_count(std::size_t count, std::size_t dim) {
  require_dim(dim);
  if (count == 0 || count + 1 >= dim) {
    throw InvalidArgument("K must satisfy 0 < K < D - 1 (got K=" + std::to_string(count) +
                          ", D=" + std::to_string(dim) + ")");
  }
}

const EnergySpectrum& spectrum_of(const TargetSpec& spec) {
  if (!spec.energies) {
    throw InvalidArgument(std::string(to_string(spec.target)) + " needs an energy spectrum");
  }
  if (spec.energies->size() != spec.dim) {
    throw DimensionMismatch("spectrum size does not match the requested dimension");
  }
  return *spec.energies;
}

// Builds w from gap coordinates mu_0..mu_{n-1}; later entries are zero.
WeightVector from_mu(const std::vector<double>& mu, std::size_t dim) {
  std::vector<double> w(dim, 0.0);
  double tail = 0.0;
  for (std::size_t l = mu.size(); l-- > 0;) {
    tail += mu[l];
    w[l] = tail;
  }
  return WeightVector::from_unnormalized(std::move(w));
}

// Number of leading gap coordinates that may be non-zero at the optimum and
// the slope terms as a function of those coordinates.
struct GridObjective {
  std::size_t active = 0;
  std::function<void(const std::vector<double>&, std::vector<double>&)> terms;
};

GridObjective grid_objective(const TargetSpec& spec) {
  const std::size_t d = spec.dim;
  const auto inv = [](double num, double den) {
    return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
  };
  GridObjective obj;
  switch (spec.target) {
    case WeightTarget::single_energy: {
      const std::size_t k = spec.index;
      require_single_index(k, d);
      obj.active = k + 1;
      obj.terms = [=](const std::vector<double>& mu, std::vector<double>& out) {
        out.clear();
        if (k > 0) out.push_back(inv(1.0, mu[k - 1]));
        out.push_back(inv(1.0, mu[k]));
      };
      break;
    }
    case WeightTarget::all_energies:
      require_dim(d);
      obj.active = d - 1;
      obj.terms = [=](const std::vector<double>& mu, std::vector<double>& out) {
        out.clear();
        for (double m : mu) out.push_back(inv(2.0, m));
      };
      break;
    case WeightTarget::lowest_energies: {
      const std::size_t count = spec.index;
      require_count(count, d);
      obj.active = count;
      obj.terms = [=](const std::vector<double>& mu, std::vector<double>& out) {
        out.clear();
        for (std::size_t k = 0; k < count; ++k) {
          const double step = heaviside(static_cast<double>(count) - static_cast<double>(k) - 1.0);
          out.push_back(inv(2.0 * step, mu[k]));
        }
      };
      break;
    }
    case WeightTarget::single_state: {
      const std::size_t k = spec.index;
      require_single_index(k, d);
      const EnergySpectrum& e = spectrum_of(spec);
      const double r_below = k > 0 ? 1.0 / e.gap(k - 1) : 0.0;
      const double r_above = 1.0 / e.gap(k);
      obj.active = k + 1;
      obj.terms = [=](const std::vector<double>& mu, std::vector<double>& out) {
        out.clear();
        if (k > 0) out.push_back(inv(r_below, mu[k - 1]));
        out.push_back(inv(r_above, mu[k]));
      };
      break;
    }
    case WeightTarget::all_states: {
      require_dim(d);
      const EnergySpectrum e = spectrum_of(spec);
      obj.active = d - 1;
      obj.terms = [=](const std::vector<double>& mu, std::vector<double>& out) {
        out.clear();
        for (std::size_t k = 0; k < mu.size(); ++k) out.push_back(inv(2.0, mu[k] * e.gap(k)));
      };
      break;
    }
    case WeightTarget::lowest_states: {
      const std::size_t count = spec.index;
      require_count(count, d);
      const EnergySpectrum e = spectrum_of(spec);
      obj.active = count;
      obj.terms = [=](const std::vector<double>& mu, std::vector<double>& out) {
        out.clear();
        for (std::size_t k = 0; k < count; ++k) {
          const double step = heaviside(static_cast<double>(count) - static_cast<double>(k) - 1.0);
          out.push_back(inv(2.0 * step, mu[k] * e.gap(k)));
        }
      };
      break;
    }
  }
  return obj;
}

bool nearly_equal(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

// -1 if a is preferable, +1 if b is, 0 on a tie. Both sorted descending.
int compare_terms(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!nearly_equal(a[i], b[i])) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

bool lexicographically_larger(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!nearly_equal(a[i], b[i])) return a[i] > b[i];
  }
  return false;
}

}  // namespace

std::string_view to_string(WeightTarget target) {
  switch (target) {
    case WeightTarget::single_energy: return "E_k";
    case WeightTarget::all_energies: return "sumE_all";
    case WeightTarget::lowest_energies: return "sumE_K";
    case WeightTarget::single_state: return "Psi_k";
    case WeightTarget::all_states: return "sumPsi_all";
    case WeightTarget::lowest_states: return "sumPsi_K";
  }
  return "sumE_all";
}

WeightTarget parse_weight_target(std::string_view name) {
  for (WeightTarget t : {WeightTarget::single_energy, WeightTarget::all_energies,
                         WeightTarget::lowest_energies, WeightTarget::single_state,
                         WeightTarget::all_states, WeightTarget::lowest_states}) {
    if (to_string(t) == name) return t;
  }
  throw InvalidArgument("unknown weight target '" + std::string(name) +
                        "' (expected E_k, sumE_all, sumE_K, Psi_k, sumPsi_all or sumPsi_K)");
}

bool needs_spectrum(WeightTarget target) {
  return target == WeightTarget::single_state || target == WeightTarget::all_states ||
         target == WeightTarget::lowest_states;
}

WeightVector optimal_weights_single_energy(std::size_t k, std::size_t dim) {
  require_single_index(k, dim);
  std::vector<double> w(dim, 0.0);
  std::fill_n(w.begin(), k, 2.0);
  w[k] = 1.0;
  return WeightVector::from_unnormalized(std::move(w));
}

WeightVector optimal_weights_all_energies(std::size_t dim) {
  require_dim(dim);
  std::vector<double> w(dim);
  for (std::size_t k = 0; k < dim; ++k) w[k] = static_cast<double>(dim - 1 - k);
  return WeightVector::from_unnormalized(std::move(w));
}

WeightVector optimal_weights_lowest_energies(std::size_t count, std::size_t dim) {
  require_count(count, dim);
  std::vector<double> w(dim, 0.0);
  for (std::size_t k = 0; k < count; ++k) w[k] = static_cast<double>(2 * (count - k) - 1);
  return WeightVector::from_unnormalized(std::move(w));
}

WeightVector optimal_weights_single_state(std::size_t k, const EnergySpectrum& energies) {
  const std::size_t dim = energies.size();
  require_single_index(k, dim);
  const double r_above = 1.0 / energies.gap(k);
  const double r_below = k > 0 ? 1.0 / energies.gap(k - 1) : 0.0;
  std::vector<double> w(dim, 0.0);
  std::fill_n(w.begin(), k, r_below + r_above);
  w[k] = r_above;
  return WeightVector::from_unnormalized(std::move(w));
}

WeightVector optimal_weights_all_states(const EnergySpectrum& energies) {
  const std::size_t dim = energies.size();
  std::vector<double> w(dim, 0.0);
  for (std::size_t k = dim - 1; k-- > 0;) w[k] = w[k + 1] + 1.0 / energies.gap(k);
  return WeightVector::from_unnormalized(std::move(w));
}

WeightVector optimal_weights_lowest_states(std::size_t count, const EnergySpectrum& energies) {
  const std::size_t dim = energies.size();
  require_count(count, dim);
  std::vector<double> w(dim, 0.0);
  // Level count contributes half its inverse gap; higher levels contribute nothing.
  for (std::size_t k = count; k-- > 0;) {
    const double step = heaviside(static_cast<double>(count) - static_cast<double>(k) - 1.0);
    w[k] = w[k + 1] + step / energies.gap(k);
  }
  return WeightVector::from_unnormalized(std::move(w));
}

double lowest_upper_bound(const TargetSpec& spec) {
  const std::size_t d = spec.dim;
  switch (spec.target) {
    case WeightTarget::single_energy:
      require_single_index(spec.index, d);
      return static_cast<double>(2 * spec.index + 1);
    case WeightTarget::all_energies:
      require_dim(d);
      return static_cast<double>(d * (d - 1));
    case WeightTarget::lowest_energies:
      require_count(spec.index, d);
      return static_cast<double>(spec.index * spec.index);
    case WeightTarget::single_state: {
      const std::size_t k = spec.index;
      require_single_index(k, d);
      const EnergySpectrum& e = spectrum_of(spec);
      const double r_above = 1.0 / e.gap(k);
      const double r_below = k > 0 ? 1.0 / e.gap(k - 1) : 0.0;
      return static_cast<double>(k) * (r_below + r_above) + r_above;
    }
    case WeightTarget::all_states: {
      require_dim(d);
      const EnergySpectrum& e = spectrum_of(spec);
      double sum = 0.0;
      for (std::size_t l = 1; l < d; ++l) sum += 2.0 * static_cast<double>(l) / e.gap(l - 1);
      return sum;
    }
    case WeightTarget::lowest_states: {
      const std::size_t count = spec.index;
      require_count(count, d);
      const EnergySpectrum& e = spectrum_of(spec);
      double sum = 0.0;
      for (std::size_t l = 1; l <= count; ++l) {
        const double step = heaviside(static_cast<double>(count) - static_cast<double>(l));
        sum += 2.0 * static_cast<double>(l) * step / e.gap(l - 1);
      }
      return sum;
    }
  }
  return 0.0;
}

OptimalWeights optimal_weights(const TargetSpec& spec) {
  const double bound = lowest_upper_bound(spec);
  switch (spec.target) {
    case WeightTarget::single_energy:
      return {optimal_weights_single_energy(spec.index, spec.dim), bound};
    case WeightTarget::all_energies:
      return {optimal_weights_all_energies(spec.dim), bound};
    case WeightTarget::lowest_energies:
      return {optimal_weights_lowest_energies(spec.index, spec.dim), bound};
    case WeightTarget::single_state:
      return {optimal_weights_single_state(spec.index, spectrum_of(spec)), bound};
    case WeightTarget::all_states:
      return {optimal_weights_all_states(spectrum_of(spec)), bound};
    case WeightTarget::lowest_states:
      return {optimal_weights_lowest_states(spec.index, spectrum_of(spec)), bound};
  }
  throw InvalidArgument("unknown weight target");
}

double target_upper_prefactor(const TargetSpec& spec, const WeightVector& w) {
  if (w.size() != spec.dim) throw DimensionMismatch("weight vector has the wrong dimension");
  switch (spec.target) {
    case WeightTarget::single_energy: {
      const Prefactors p = eigenenergy_prefactors(spec.index, w);
      return std::max(-p.lower, p.upper);
    }
    case WeightTarget::all_energies:
    case WeightTarget::lowest_energies:
      return eigenenergy_sum_prefactors(w).upper;
    case WeightTarget::single_state:
      return eigenstate_prefactor(spec.index, w, spectrum_of(spec));
    case WeightTarget::all_states:
    case WeightTarget::lowest_states:
      return eigenstate_sum_prefactors(w, spectrum_of(spec)).upper;
  }
  return 0.0;
}

OptimalWeights grid_search_optimal(const TargetSpec& spec, double resolution) {
  if (!(resolution > 0.0) || resolution > 1.0) {
    throw InvalidArgument("grid resolution must lie in (0, 1]");
  }
  const GridObjective obj = grid_objective(spec);
  const std::size_t free_dims = obj.active - 1;

  double estimate = 1.0;
  for (std::size_t l = 0; l < free_dims; ++l) {
    estimate *= (1.0 / (static_cast<double>(l + 1) * resolution) + 1.0) / static_cast<double>(l + 1);
  }
  if (estimate > 2e8) {
    throw InvalidArgument("infeasible grid: about " + std::to_string(estimate) +
                          " points; use a coarser resolution");
  }

  std::vector<double> mu(obj.active, 0.0);
  std::vector<double> terms;
  std::vector<double> best_terms;
  std::vector<double> best_w;
  std::vector<double> best_mu;

  const auto visit = [&] {
    obj.terms(mu, terms);
    std::sort(terms.begin(), terms.end(), std::greater<>());
    if (!std::isfinite(terms.front())) return;
    const int cmp = best_terms.empty() ? -1 : compare_terms(terms, best_terms);
    if (cmp > 0) return;
    std::vector<double> w(obj.active, 0.0);
    double tail = 0.0;
    for (std::size_t l = obj.active; l-- > 0;) {
      tail += mu[l];
      w[l] = tail;
    }
    if (cmp == 0 && !lexicographically_larger(w, best_w)) return;
    best_terms = terms;
    best_w = std::move(w);
    best_mu = mu;
  };

  // Depth-first walk over the free coordinates; the last active coordinate
  // absorbs the remaining normalization budget.
  std::function<void(std::size_t, double)> walk = [&](std::size_t l, double used) {
    if (l == free_dims) {
      const double rest = (1.0 - used) / static_cast<double>(obj.active);
      if (rest < -1e-12) return;
      mu[l] = std::max(rest, 0.0);
      if (mu[l] < 1e-12) mu[l] = 0.0;
      visit();
      return;
    }
    const double weight = static_cast<double>(l + 1);
    for (std::size_t i = 0;; ++i) {
      const double value = static_cast<double>(i) * resolution;
      if (used + weight * value > 1.0 + 1e-12) break;
      mu[l] = value;
      walk(l + 1, used + weight * value);
    }
  };
  walk(0, 0.0);

  if (best_terms.empty()) throw InvalidArgument("infeasible grid: no admissible point");
  return {from_mu(best_mu, spec.dim), best_terms.front()};
}

}  // namespace gok
