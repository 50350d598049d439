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

#include "gok/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "gok/linalg.hpp"

namespace gok {
namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void require_theorem_shape(const WeightVector& w) {
  if (w.shape() == WeightShape::other) {
    throw ShapeViolation("saturating rotation needs a strictly decreasing weight vector, "
                         "or K strictly decreasing positive weights followed by zeros");
  }
}

std::size_t head_count(const WeightVector& w) {
  return w.shape() == WeightShape::strict_full ? w.size() - 1 : w.positive_count();
}

double head_step(const WeightVector& w, std::size_t k) {
  if (w.shape() == WeightShape::strict_full) return 1.0;
  return heaviside(static_cast<double>(w.positive_count()) - static_cast<double>(k) - 1.0);
}

template <typename Score>
std::size_t arg_best(std::size_t count, Score score, bool maximize) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < count; ++k) {
    const double s = score(k);
    const double b = score(best);
    if (maximize ? s > b : s < b) best = k;
  }
  return best;
}

double predicted_prefactor(SaturationTarget target, const WeightVector& w,
                           const EnergySpectrum& energies, std::size_t k) {
  switch (target) {
    case SaturationTarget::ensemble_state_upper:
      return ensemble_state_prefactors(w, energies).upper;
    case SaturationTarget::ensemble_state_lower:
      return ensemble_state_prefactors(w, energies).lower;
    case SaturationTarget::eigenstate_upper:
      return eigenstate_prefactor(k, w, energies);
    case SaturationTarget::eigenstate_sum_upper:
      return eigenstate_sum_prefactors(w, energies).upper;
    case SaturationTarget::eigenstate_sum_lower:
      return eigenstate_sum_prefactors(w, energies).lower;
    case SaturationTarget::eigenenergy_upper:
      return eigenenergy_prefactors(k, w).upper;
    case SaturationTarget::eigenenergy_lower:
      return eigenenergy_prefactors(k, w).lower;
    case SaturationTarget::eigenenergy_sum_upper:
      return eigenenergy_sum_prefactors(w).upper;
    case SaturationTarget::eigenenergy_sum_lower:
      return eigenenergy_sum_prefactors(w).lower;
  }
  return 0.0;
}

constexpr std::array<SaturationTarget, 9> kAllTargets = {
    SaturationTarget::ensemble_state_upper, SaturationTarget::ensemble_state_lower,
    SaturationTarget::eigenstate_upper,     SaturationTarget::eigenstate_sum_upper,
    SaturationTarget::eigenstate_sum_lower, SaturationTarget::eigenenergy_upper,
    SaturationTarget::eigenenergy_lower,    SaturationTarget::eigenenergy_sum_upper,
    SaturationTarget::eigenenergy_sum_lower,
};

Envelope make_envelope(const BoundSet& bounds) {
  Envelope env;
  env.validity_threshold = bounds.gaps->min_swap_error;
  const auto add = [&](std::string name, std::optional<Prefactors> p) {
    QuantityEnvelope q;
    q.name = std::move(name);
    q.min_ratio = std::numeric_limits<double>::infinity();
    q.max_ratio = -std::numeric_limits<double>::infinity();
    q.bin_max.assign(kEnvelopeBins, std::numeric_limits<double>::quiet_NaN());
    if (p) {
      q.lower_prefactor = p->lower;
      q.upper_prefactor = p->upper;
    }
    env.quantities.push_back(std::move(q));
  };
  add("delta_rho_w", bounds.ensemble_state);
  add("sum_psi", bounds.eigenstate_sum);
  add("sum_abs_E", bounds.eigenenergy_sum);
  for (std::size_t k = 0; k < bounds.dim; ++k) {
    std::optional<Prefactors> p;
    if (bounds.eigenstate[k]) p = Prefactors{0.0, *bounds.eigenstate[k]};
    add("delta_psi_" + std::to_string(k), p);
  }
  for (std::size_t k = 0; k < bounds.dim; ++k) {
    add("delta_E_" + std::to_string(k), bounds.eigenenergy[k]);
  }
  return env;
}

// Values in the order laid out by make_envelope.
void envelope_values(const ErrorBundle& b, std::vector<double>& out) {
  out.clear();
  out.push_back(b.delta_rho_w);
  out.push_back(b.sum_psi);
  out.push_back(b.sum_abs_E);
  out.insert(out.end(), b.delta_psi.begin(), b.delta_psi.end());
  out.insert(out.end(), b.delta_E.begin(), b.delta_E.end());
}

std::size_t envelope_bin(double delta, double threshold) {
  const double pos = static_cast<double>(kEnvelopeBins) *
                     (1.0 + std::log10(delta / threshold) / kEnvelopeDecades);
  if (!(pos > 0.0)) return 0;
  return std::min(kEnvelopeBins - 1, static_cast<std::size_t>(pos));
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t index)
    : state_(mix64(seed + 0x9E3779B97F4A7C15ULL) ^ mix64(index + 0x632BE59BD9B4E019ULL)) {}

std::uint64_t CounterRng::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

BasisMap sample_orthogonal(std::size_t dim, std::uint64_t seed, std::uint64_t index) {
  if (dim < 2) throw InvalidArgument("dimension must be at least 2");
  CounterRng rng(seed, index);
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      a(i, j) = rng.uniform(-std::numbers::pi, std::numbers::pi);
      a(j, i) = -a(i, j);
    }
  }
  return BasisMap::orthogonal(expm(a));
}

BasisMap sample_unitary(std::size_t dim, std::uint64_t seed, std::uint64_t index) {
  if (dim < 2) throw InvalidArgument("dimension must be at least 2");
  CounterRng rng(seed, index);
  const auto n = static_cast<Eigen::Index>(dim);
  const double pi = std::numbers::pi;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) = rng.uniform(-pi, pi);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double re = rng.uniform(-pi, pi);
      const double im = rng.uniform(-pi, pi);
      h(i, j) = {re, im};
      h(j, i) = {re, -im};
    }
  }
  return BasisMap::unitary(expm(Eigen::MatrixXcd(std::complex<double>(0.0, 1.0) * h)));
}

BasisMap jacobi_rotation(std::size_t dim, std::size_t i, std::size_t j, double angle) {
  if (i >= dim || j >= dim || i == j) throw InvalidArgument("invalid rotation plane");
  const auto n = static_cast<Eigen::Index>(dim);
  const auto a = static_cast<Eigen::Index>(i);
  const auto b = static_cast<Eigen::Index>(j);
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(n, n);
  u(a, a) = std::cos(angle);
  u(b, b) = std::cos(angle);
  u(b, a) = std::sin(angle);
  u(a, b) = -std::sin(angle);
  return BasisMap::orthogonal(u);
}

std::string_view to_string(SaturationTarget target) {
  switch (target) {
    case SaturationTarget::ensemble_state_upper: return "ensemble_state_upper";
    case SaturationTarget::ensemble_state_lower: return "ensemble_state_lower";
    case SaturationTarget::eigenstate_upper: return "eigenstate_upper";
    case SaturationTarget::eigenstate_sum_upper: return "eigenstate_sum_upper";
    case SaturationTarget::eigenstate_sum_lower: return "eigenstate_sum_lower";
    case SaturationTarget::eigenenergy_upper: return "eigenenergy_upper";
    case SaturationTarget::eigenenergy_lower: return "eigenenergy_lower";
    case SaturationTarget::eigenenergy_sum_upper: return "eigenenergy_sum_upper";
    case SaturationTarget::eigenenergy_sum_lower: return "eigenenergy_sum_lower";
  }
  return "";
}

SaturationTarget parse_saturation_target(std::string_view name) {
  for (SaturationTarget t : kAllTargets) {
    if (to_string(t) == name) return t;
  }
  throw InvalidArgument("unknown saturation target '" + std::string(name) + "'");
}

bool is_per_state(SaturationTarget target) {
  return target == SaturationTarget::eigenstate_upper ||
         target == SaturationTarget::eigenenergy_upper ||
         target == SaturationTarget::eigenenergy_lower;
}

std::pair<std::size_t, std::size_t> saturating_plane(SaturationTarget target,
                                                     const WeightVector& w,
                                                     const EnergySpectrum& energies,
                                                     std::size_t k) {
  if (w.size() != energies.size()) {
    throw DimensionMismatch("weights and spectrum have different dimensions");
  }
  const std::size_t d = w.size();
  const auto slope = [&](std::size_t l) { return w.gap(l) / energies.gap(l); };
  const auto swap_err = [&](std::size_t l) { return swap_error(w, energies, l); };
  const auto check_state = [&] {
    if (k >= d) throw InvalidArgument("state index out of range");
    if (!w.distinct_at(k)) {
      throw DegenerateWeight("weight " + std::to_string(k) + " coincides with a neighbour");
    }
  };

  switch (target) {
    case SaturationTarget::ensemble_state_upper: {
      require_theorem_shape(w);
      const std::size_t l = arg_best(head_count(w), slope, true);
      return {l, l + 1};
    }
    case SaturationTarget::ensemble_state_lower: {
      require_theorem_shape(w);
      if (w.shape() == WeightShape::strict_full) {
        const std::size_t l = arg_best(d - 1, slope, false);
        return {l, l + 1};
      }
      const std::size_t big_k = w.positive_count();
      const double far = w[big_k - 1] / (energies[d - 1] - energies[big_k - 1]);
      if (big_k >= 2) {
        const std::size_t l = arg_best(big_k - 1, slope, false);
        if (slope(l) < far) return {l, l + 1};
      }
      return {big_k - 1, d - 1};
    }
    case SaturationTarget::eigenstate_upper: {
      check_state();
      if (k == 0) return {0, 1};
      if (k + 1 == d || swap_err(k - 1) <= swap_err(k)) return {k - 1, k};
      return {k, k + 1};
    }
    case SaturationTarget::eigenstate_sum_upper: {
      require_theorem_shape(w);
      const std::size_t l = arg_best(
          head_count(w), [&](std::size_t m) { return head_step(w, m) / swap_err(m); }, true);
      return {l, l + 1};
    }
    case SaturationTarget::eigenenergy_sum_upper: {
      require_theorem_shape(w);
      const std::size_t l = arg_best(
          head_count(w), [&](std::size_t m) { return head_step(w, m) / w.gap(m); }, true);
      return {l, l + 1};
    }
    case SaturationTarget::eigenstate_sum_lower:
    case SaturationTarget::eigenenergy_sum_lower:
      require_theorem_shape(w);
      return {0, d - 1};
    case SaturationTarget::eigenenergy_upper:
      check_state();
      if (k + 1 == d || !(w.gap(k) > w.tolerance())) {
        throw InvalidArgument("no rotation saturates the energy upper bound of state " +
                              std::to_string(k));
      }
      return {k, k + 1};
    case SaturationTarget::eigenenergy_lower:
      check_state();
      if (k == 0) {
        throw InvalidArgument("the ground-state energy lower bound is the variational floor");
      }
      return {k - 1, k};
  }
  throw InvalidArgument("unknown saturation target");
}

SaturatingState jacobi_saturating_state(SaturationTarget target, const WeightVector& w,
                                        const EnergySpectrum& energies, double delta,
                                        std::size_t k) {
  if (delta < 0.0) throw InvalidArgument("error level must be non-negative");
  const auto [i, j] = saturating_plane(target, w, energies, k);
  const double full = (w[i] - w[j]) * (energies[j] - energies[i]);
  if (delta > full * (1.0 + 1e-12)) {
    throw RegimeError("error level exceeds the full swap error " + std::to_string(full) +
                      " of plane (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
  const double angle = std::asin(std::sqrt(std::min(1.0, delta / full)));
  return {jacobi_rotation(w.size(), i, j, angle), i, j, angle,
          predicted_prefactor(target, w, energies, k)};
}

std::string_view to_string(SampleSource source) {
  switch (source) {
    case SampleSource::random: return "random";
    case SampleSource::permutation: return "permutation";
    case SampleSource::jacobi: return "jacobi";
  }
  return "";
}

const QuantityEnvelope& Envelope::at(std::string_view name) const {
  for (const QuantityEnvelope& q : quantities) {
    if (q.name == name) return q;
  }
  throw InvalidArgument("no envelope for quantity '" + std::string(name) + "'");
}

void Envelope::merge(const Envelope& other) {
  if (other.quantities.size() != quantities.size()) {
    throw DimensionMismatch("envelopes describe different quantities");
  }
  records += other.records;
  in_regime += other.in_regime;
  violations += other.violations;
  for (std::size_t q = 0; q < quantities.size(); ++q) {
    QuantityEnvelope& mine = quantities[q];
    const QuantityEnvelope& theirs = other.quantities[q];
    mine.min_ratio = std::min(mine.min_ratio, theirs.min_ratio);
    mine.max_ratio = std::max(mine.max_ratio, theirs.max_ratio);
    mine.count += theirs.count;
    for (std::size_t b = 0; b < mine.bin_max.size(); ++b) {
      if (std::isnan(mine.bin_max[b]) || theirs.bin_max[b] > mine.bin_max[b]) {
        if (!std::isnan(theirs.bin_max[b])) mine.bin_max[b] = theirs.bin_max[b];
      }
    }
  }
}

ScatterResult scatter_experiment(const WeightVector& w, const EnergySpectrum& energies,
                                 const ScatterConfig& config, const RecordSink& sink) {
  const std::size_t d = w.size();
  const BoundSet bounds = compute_bounds(w, energies);
  if (!bounds.gaps) throw DegenerateWeight("all weights are equal; no error window exists");
  if (config.mode == BasisMode::permutation) {
    throw InvalidArgument("random sampling mode must be orthogonal or unitary");
  }
  const double g = bounds.gaps->min_swap_error;

  ScatterResult result;
  for (Envelope& e : result.by_source) e = make_envelope(bounds);
  std::vector<double> values;

  ScatterRecord record;
  const auto process = [&](SampleSource source, std::uint64_t index, const BasisMap& basis) {
    record.source = source;
    record.index = index;
    record.bundle = error_bundle(basis, w, energies);
    if (sink) sink(record);
    Envelope& env = result.by_source[static_cast<std::size_t>(source)];
    ++env.records;
    const double de = record.bundle.delta_E_w;
    if (de > g * (1.0 + 1e-12)) return;
    ++env.in_regime;
    env.violations += check_bounds(record.bundle, bounds, config.tolerance).violations();
    if (!(de > 1e-12 * g)) return;
    envelope_values(record.bundle, values);
    const std::size_t bin = envelope_bin(de, g);
    for (std::size_t q = 0; q < values.size(); ++q) {
      QuantityEnvelope& qe = env.quantities[q];
      const double ratio = values[q] / de;
      qe.min_ratio = std::min(qe.min_ratio, ratio);
      qe.max_ratio = std::max(qe.max_ratio, ratio);
      ++qe.count;
      if (std::isnan(qe.bin_max[bin]) || ratio > qe.bin_max[bin]) qe.bin_max[bin] = ratio;
    }
  };

  for (std::uint64_t i = 0; i < config.samples; ++i) {
    process(SampleSource::random, i,
            config.mode == BasisMode::unitary ? sample_unitary(d, config.seed, i)
                                              : sample_orthogonal(d, config.seed, i));
  }

  if (config.permutations) {
    if (d > 8) throw EnumerationLimit("permutation sweep is limited to D <= 8");
    std::vector<std::size_t> mapping(d);
    std::iota(mapping.begin(), mapping.end(), std::size_t{0});
    std::uint64_t index = 0;
    do {
      process(SampleSource::permutation, index++, BasisMap::permutation(mapping));
    } while (std::next_permutation(mapping.begin(), mapping.end()));
  }

  if (config.jacobi_sweep && config.sweep_points > 0) {
    std::uint64_t index = 0;
    for (SaturationTarget target : kAllTargets) {
      const std::size_t states = is_per_state(target) ? d : 1;
      for (std::size_t k = 0; k < states; ++k) {
        try {
          jacobi_saturating_state(target, w, energies, 0.0, k);
        } catch (const Error&) {
          continue;
        }
        for (std::size_t s = 1; s <= config.sweep_points; ++s) {
          const double delta = g * static_cast<double>(s) / static_cast<double>(config.sweep_points);
          process(SampleSource::jacobi, index++,
                  jacobi_saturating_state(target, w, energies, delta, k).basis);
        }
      }
    }
  }

  result.combined = result.by_source[0];
  result.combined.merge(result.by_source[1]);
  result.combined.merge(result.by_source[2]);
  return result;
}

}  // namespace gok
