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

#include "gok/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gok {
namespace {

void require_theorem_shape(const WeightVector& w, const char* what) {
  if (w.shape() == WeightShape::other) {
    throw ShapeViolation(std::string(what) +
                         " needs strictly decreasing weights, or K strictly decreasing "
                         "positive weights followed by at least two zeros");
  }
}

void require_same_dim(const WeightVector& w, const EnergySpectrum& energies) {
  if (w.size() != energies.size()) {
    throw DimensionMismatch("weights and spectrum have different dimensions");
  }
}

void require_distinct(const WeightVector& w, std::size_t k) {
  if (k >= w.size()) throw InvalidArgument("state index " + std::to_string(k) + " out of range");
  if (!w.distinct_at(k)) {
    throw DegenerateWeight("weight " + std::to_string(k) +
                           " coincides with a neighbour; its individual bound is meaningless");
  }
}

}  // namespace

double heaviside(double x) {
  if (x > 0.0) return 1.0;
  if (x < 0.0) return 0.0;
  return 0.5;
}

double swap_error(const WeightVector& w, const EnergySpectrum& energies, std::size_t k) {
  return w.gap(k) * energies.gap(k);
}

GapFunctions gap_functions(const WeightVector& w, const EnergySpectrum& energies) {
  require_same_dim(w, energies);
  const std::size_t d = w.size();
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < d; ++k) {
    if (w.gap(k) > w.tolerance()) smallest = std::min(smallest, swap_error(w, energies, k));
  }
  if (!std::isfinite(smallest)) {
    throw DegenerateWeight("all weights are equal; no swap changes the ensemble energy");
  }
  return {smallest, (w[0] - w[d - 1]) * energies.spread()};
}

Prefactors ensemble_state_prefactors(const WeightVector& w, const EnergySpectrum& energies) {
  require_same_dim(w, energies);
  require_theorem_shape(w, "ensemble-state bound");
  const std::size_t d = w.size();
  const auto ratio = [&](std::size_t k) { return w.gap(k) / energies.gap(k); };
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  if (w.shape() == WeightShape::strict_full) {
    for (std::size_t k = 0; k + 1 < d; ++k) {
      lo = std::min(lo, ratio(k));
      hi = std::max(hi, ratio(k));
    }
  } else {
    const std::size_t big_k = w.positive_count();
    for (std::size_t k = 0; k + 1 < big_k; ++k) lo = std::min(lo, ratio(k));
    lo = std::min(lo, w[big_k - 1] / (energies[d - 1] - energies[big_k - 1]));
    for (std::size_t k = 0; k < big_k; ++k) hi = std::max(hi, ratio(k));
  }
  return {2.0 * lo, 2.0 * hi};
}

double eigenstate_prefactor(std::size_t k, const WeightVector& w,
                            const EnergySpectrum& energies) {
  require_same_dim(w, energies);
  require_distinct(w, k);
  const std::size_t d = w.size();
  double t = std::numeric_limits<double>::infinity();
  if (k > 0) t = std::min(t, swap_error(w, energies, k - 1));
  if (k + 1 < d) t = std::min(t, swap_error(w, energies, k));
  return 1.0 / t;
}

Prefactors eigenstate_sum_prefactors(const WeightVector& w, const EnergySpectrum& energies) {
  require_same_dim(w, energies);
  require_theorem_shape(w, "eigenstate-sum bound");
  const GapFunctions gaps = gap_functions(w, energies);
  if (w.shape() == WeightShape::strict_full) {
    return {2.0 / gaps.max_swap_error, 2.0 / gaps.min_swap_error};
  }
  const std::size_t big_k = w.positive_count();
  double hi = 0.0;
  for (std::size_t k = 0; k < big_k; ++k) {
    const double step = heaviside(static_cast<double>(big_k) - static_cast<double>(k) - 1.0);
    hi = std::max(hi, 2.0 * step / swap_error(w, energies, k));
  }
  return {1.0 / gaps.max_swap_error, hi};
}

Prefactors eigenenergy_prefactors(std::size_t k, const WeightVector& w) {
  require_distinct(w, k);
  const double below = w.gap(k);
  if (!(below > w.tolerance())) {
    throw DegenerateWeight("weight " + std::to_string(k) +
                           " is zero; its energy error has no linear upper bound");
  }
  const double lower = k == 0 ? 0.0 : 1.0 / (w[k] - w[k - 1]);
  return {lower, 1.0 / below};
}

Prefactors eigenenergy_sum_prefactors(const WeightVector& w) {
  require_theorem_shape(w, "eigenenergy-sum bound");
  const std::size_t d = w.size();
  double hi = 0.0;
  if (w.shape() == WeightShape::strict_full) {
    for (std::size_t k = 0; k + 1 < d; ++k) hi = std::max(hi, 2.0 / w.gap(k));
    return {2.0 / (w[0] - w[d - 1]), hi};
  }
  const std::size_t big_k = w.positive_count();
  for (std::size_t k = 0; k < big_k; ++k) {
    const double step = heaviside(static_cast<double>(big_k) - static_cast<double>(k) - 1.0);
    hi = std::max(hi, 2.0 * step / w.gap(k));
  }
  return {1.0 / w[0], hi};
}

BoundSet compute_bounds(const WeightVector& w, const EnergySpectrum& energies) {
  require_same_dim(w, energies);
  const std::size_t d = w.size();
  BoundSet set;
  set.dim = d;
  set.targeted = w.targeted_count();
  set.eigenstate.assign(d, std::nullopt);
  set.eigenenergy.assign(d, std::nullopt);

  const auto attempt = [&](const std::string& label, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      set.refusals.push_back(label + ": " + e.what());
    }
  };
  attempt("gap functions", [&] { set.gaps = gap_functions(w, energies); });
  attempt("ensemble state", [&] { set.ensemble_state = ensemble_state_prefactors(w, energies); });
  for (std::size_t k = 0; k < d; ++k) {
    attempt("eigenstate " + std::to_string(k),
            [&] { set.eigenstate[k] = eigenstate_prefactor(k, w, energies); });
  }
  attempt("eigenstate sum", [&] { set.eigenstate_sum = eigenstate_sum_prefactors(w, energies); });
  for (std::size_t k = 0; k < d; ++k) {
    attempt("eigenenergy " + std::to_string(k),
            [&] { set.eigenenergy[k] = eigenenergy_prefactors(k, w); });
  }
  attempt("eigenenergy sum", [&] { set.eigenenergy_sum = eigenenergy_sum_prefactors(w); });
  return set;
}

std::string BoundCheck::label() const {
  switch (quantity) {
    case Quantity::delta_rho_w: return "delta_rho_w";
    case Quantity::delta_psi: return "delta_psi_" + std::to_string(index);
    case Quantity::sum_psi: return "sum_psi";
    case Quantity::delta_E: return "delta_E_" + std::to_string(index);
    case Quantity::sum_abs_E: return "sum_abs_E";
  }
  return "";
}

std::size_t ComplianceReport::violations() const {
  if (!in_regime) return 0;
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const BoundCheck& c) { return !c.pass; }));
}

ComplianceReport check_bounds(const ErrorBundle& bundle, const BoundSet& bounds,
                              double tolerance) {
  if (bundle.delta_E.size() != bounds.dim) {
    throw DimensionMismatch("error bundle and bound set have different dimensions");
  }
  ComplianceReport report;
  const double de = bundle.delta_E_w;
  report.delta_E_w = de;
  report.validity_threshold =
      bounds.gaps ? bounds.gaps->min_swap_error : std::numeric_limits<double>::infinity();
  report.in_regime = bounds.gaps.has_value() &&
                     de <= report.validity_threshold * (1.0 + 1e-12);

  report.checks.reserve(2 * bounds.dim + 3);
  const auto add = [&](Quantity quantity, std::size_t index, double value,
                       double lower, double upper) {
    BoundCheck c;
    c.quantity = quantity;
    c.index = index;
    c.value = value;
    c.lower = lower;
    c.upper = upper;
    c.lower_slack = value - lower;
    c.upper_slack = upper - value;
    c.pass = c.lower_slack >= -tolerance && c.upper_slack >= -tolerance;
    report.checks.push_back(c);
  };

  if (bounds.ensemble_state) {
    add(Quantity::delta_rho_w, 0, bundle.delta_rho_w, bounds.ensemble_state->lower * de,
        bounds.ensemble_state->upper * de);
  }
  for (std::size_t k = 0; k < bounds.dim; ++k) {
    if (bounds.eigenstate[k]) {
      add(Quantity::delta_psi, k, bundle.delta_psi[k], 0.0,
          *bounds.eigenstate[k] * de);
    }
  }
  if (bounds.eigenstate_sum) {
    add(Quantity::sum_psi, 0, bundle.sum_psi, bounds.eigenstate_sum->lower * de,
        bounds.eigenstate_sum->upper * de);
  }
  for (std::size_t k = 0; k < bounds.dim; ++k) {
    if (bounds.eigenenergy[k]) {
      add(Quantity::delta_E, k, bundle.delta_E[k],
          bounds.eigenenergy[k]->lower * de, bounds.eigenenergy[k]->upper * de);
    }
  }
  if (bounds.eigenenergy_sum) {
    add(Quantity::sum_abs_E, 0, bundle.sum_abs_E, bounds.eigenenergy_sum->lower * de,
        bounds.eigenenergy_sum->upper * de);
  }
  return report;
}

}  // namespace gok
