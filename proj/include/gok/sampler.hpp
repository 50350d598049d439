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

#ifndef GOK_SAMPLER_HPP
#define GOK_SAMPLER_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gok/bounds.hpp"
#include "gok/core.hpp"

namespace gok {

/// Counter-based generator: the stream for (seed, index) is fixed, so
/// sample i is reproducible without generating samples 0..i-1.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t index);
  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

/// U = exp(A), A real antisymmetric with entries uniform in [-pi, pi].
BasisMap sample_orthogonal(std::size_t dim, std::uint64_t seed, std::uint64_t index = 0);
/// U = exp(iH), H Hermitian with real and imaginary parts uniform in [-pi, pi].
BasisMap sample_unitary(std::size_t dim, std::uint64_t seed, std::uint64_t index = 0);

/// Plane rotation mixing exact eigenstates i and j: trial state i becomes
/// cos(angle)|i> + sin(angle)|j>.
BasisMap jacobi_rotation(std::size_t dim, std::size_t i, std::size_t j, double angle);

/// Bound that a plane rotation drives to equality.
enum class SaturationTarget {
  ensemble_state_upper,
  ensemble_state_lower,
  eigenstate_upper,
  eigenstate_sum_upper,
  eigenstate_sum_lower,
  eigenenergy_upper,
  eigenenergy_lower,
  eigenenergy_sum_upper,
  eigenenergy_sum_lower,
};

std::string_view to_string(SaturationTarget target);
SaturationTarget parse_saturation_target(std::string_view name);
/// Targets that take a state index.
bool is_per_state(SaturationTarget target);

struct SaturatingState {
  BasisMap basis;
  /// Rotation plane, first < second.
  std::size_t first = 0;
  std::size_t second = 0;
  double angle = 0.0;
  /// Slope the rotation attains, equal to the saturated prefactor.
  double prefactor = 0.0;
};

/// Rotation plane that extremizes the target's prefactor.
std::pair<std::size_t, std::size_t> saturating_plane(SaturationTarget target,
                                                     const WeightVector& w,
                                                     const EnergySpectrum& energies,
                                                     std::size_t k = 0);

/// Rotation in the saturating plane with ensemble-energy error delta.
SaturatingState jacobi_saturating_state(SaturationTarget target, const WeightVector& w,
                                        const EnergySpectrum& energies, double delta,
                                        std::size_t k = 0);

enum class SampleSource { random, permutation, jacobi };

std::string_view to_string(SampleSource source);

struct ScatterRecord {
  SampleSource source = SampleSource::random;
  std::uint64_t index = 0;
  ErrorBundle bundle;
};

/// Ratio statistics of one error measure over records with
/// 0 < delta_E_w <= g.
struct QuantityEnvelope {
  std::string name;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::size_t count = 0;
  /// Largest ratio per logarithmic bin of delta_E_w over [g 1e-6, g];
  /// NaN for empty bins.
  std::vector<double> bin_max;
  std::optional<double> lower_prefactor;
  std::optional<double> upper_prefactor;
};

inline constexpr std::size_t kEnvelopeBins = 50;
inline constexpr double kEnvelopeDecades = 6.0;

struct Envelope {
  double validity_threshold = 0.0;
  std::size_t records = 0;
  std::size_t in_regime = 0;
  std::size_t violations = 0;
  std::vector<QuantityEnvelope> quantities;

  const QuantityEnvelope& at(std::string_view name) const;
  /// Merges another envelope built for the same (w, E).
  void merge(const Envelope& other);
};

struct ScatterConfig {
  std::size_t samples = 0;
  BasisMode mode = BasisMode::orthogonal;
  std::uint64_t seed = 0;
  bool permutations = true;
  bool jacobi_sweep = true;
  /// Points per saturating rotation in the sweep, spread over (0, g].
  std::size_t sweep_points = 32;
  double tolerance = 1e-10;
};

struct ScatterResult {
  Envelope combined;
  /// Indexed by SampleSource.
  std::array<Envelope, 3> by_source;
};

using RecordSink = std::function<void(const ScatterRecord&)>;

/// Random conjugations, then every permutation vertex, then the saturating
/// rotation sweep. Every record is passed to `sink` when given and folded
/// into the envelopes; in-regime records are checked against all bounds.
ScatterResult scatter_experiment(const WeightVector& w, const EnergySpectrum& energies,
                                 const ScatterConfig& config, const RecordSink& sink = {});

}  // namespace gok

#endif  // GOK_SAMPLER_HPP
