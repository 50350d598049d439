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

#include "gok/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gok/bounds.hpp"

namespace gok {
namespace {

constexpr std::size_t kMaxEnumerationDim = 8;
constexpr std::size_t kMaxBruteForceDim = 6;
constexpr std::size_t kMaxReferenceVertices = 40320;

Eigen::VectorXd base_of(Space space, const WeightVector& w, const EnergySpectrum& energies) {
  return space == Space::weights ? Eigen::VectorXd(w.vector()) : Eigen::VectorXd(energies.vector());
}

// Ensemble-energy error of a point of P(w) or P(E).
double ensemble_error(Space space, const Eigen::VectorXd& x, const WeightVector& w,
                      const EnergySpectrum& energies) {
  if (space == Space::weights) return (x - w.vector()).dot(energies.vector());
  return w.vector().dot(x - energies.vector());
}

// Rank of each coordinate among the distinct values of v, ascending.
std::vector<int> value_ranks(const Eigen::VectorXd& v, double tolerance) {
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct;
  for (double x : sorted) {
    if (distinct.empty() || x - distinct.back() > tolerance) distinct.push_back(x);
  }
  std::vector<int> ranks(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const auto it = std::lower_bound(distinct.begin(), distinct.end(), v(i) - tolerance);
    ranks[static_cast<std::size_t>(i)] = static_cast<int>(it - distinct.begin());
  }
  return ranks;
}

void require_same_dim(const WeightVector& w, const EnergySpectrum& energies) {
  if (w.size() != energies.size()) {
    throw DimensionMismatch("weights and spectrum have different dimensions");
  }
}

void require_regime(const WeightVector& w, const EnergySpectrum& energies, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("error level delta must be positive");
  const double g = gap_functions(w, energies).min_swap_error;
  if (delta > g * (1.0 + 1e-12)) {
    throw RegimeError("error level " + std::to_string(delta) +
                      " exceeds the validity threshold g = " + std::to_string(g));
  }
}

std::vector<Eigen::VectorXd> energy_reference_vertices(const WeightVector& w,
                                                       const EnergySpectrum& energies) {
  const std::size_t d = w.size();
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  std::size_t count = 1;
  for (std::size_t start = 0; start < d;) {
    std::size_t end = start + 1;
    while (end < d && w[end - 1] - w[end] <= w.tolerance()) ++end;
    blocks.emplace_back(start, end);
    for (std::size_t m = 2; m <= end - start; ++m) {
      count *= m;
      if (count > kMaxReferenceVertices) {
        throw EnumerationLimit("too many zero-error rearrangements to enumerate");
      }
    }
    start = end;
  }
  std::vector<Eigen::VectorXd> out{Eigen::VectorXd(energies.vector())};
  for (const auto& [start, end] : blocks) {
    if (end - start < 2) continue;
    std::vector<Eigen::VectorXd> next;
    for (const Eigen::VectorXd& x : out) {
      std::vector<double> seg(x.data() + start, x.data() + end);
      std::sort(seg.begin(), seg.end());
      do {
        Eigen::VectorXd y = x;
        for (std::size_t i = start; i < end; ++i) y(static_cast<Eigen::Index>(i)) = seg[i - start];
        next.push_back(std::move(y));
      } while (std::next_permutation(seg.begin(), seg.end()));
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

Permutation::Permutation(std::vector<std::size_t> mapping) : mapping_(std::move(mapping)) {
  std::vector<bool> seen(mapping_.size(), false);
  for (std::size_t m : mapping_) {
    if (m >= mapping_.size() || seen[m]) throw InvalidArgument("mapping is not a bijection");
    seen[m] = true;
  }
}

Permutation Permutation::identity(std::size_t dim) {
  std::vector<std::size_t> m(dim);
  std::iota(m.begin(), m.end(), std::size_t{0});
  return Permutation(std::move(m));
}

Permutation Permutation::transposition(std::size_t dim, std::size_t i, std::size_t j) {
  if (i >= dim || j >= dim) throw InvalidArgument("transposition index out of range");
  std::vector<std::size_t> m(dim);
  std::iota(m.begin(), m.end(), std::size_t{0});
  std::swap(m[i], m[j]);
  return Permutation(std::move(m));
}

Permutation Permutation::from_cycle(std::size_t dim, std::span<const std::size_t> cycle) {
  std::vector<std::size_t> m(dim);
  std::iota(m.begin(), m.end(), std::size_t{0});
  std::vector<bool> used(dim, false);
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const std::size_t from = cycle[i];
    if (from >= dim || used[from]) throw InvalidArgument("cycle entries must be distinct and in range");
    used[from] = true;
    m[from] = cycle[(i + 1) % cycle.size()];
  }
  return Permutation(std::move(m));
}

std::vector<std::vector<std::size_t>> Permutation::cycles() const {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> seen(mapping_.size(), false);
  for (std::size_t start = 0; start < mapping_.size(); ++start) {
    if (seen[start] || mapping_[start] == start) continue;
    std::vector<std::size_t> cycle;
    for (std::size_t l = start; !seen[l]; l = mapping_[l]) {
      seen[l] = true;
      cycle.push_back(l);
    }
    out.push_back(std::move(cycle));
  }
  return out;
}

Eigen::MatrixXd Permutation::matrix() const {
  const auto n = static_cast<Eigen::Index>(mapping_.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t l = 0; l < mapping_.size(); ++l) {
    p(static_cast<Eigen::Index>(mapping_[l]), static_cast<Eigen::Index>(l)) = 1.0;
  }
  return p;
}

std::vector<Eigen::VectorXd> permutohedron_vertices(const Eigen::VectorXd& v) {
  if (static_cast<std::size_t>(v.size()) > kMaxEnumerationDim) {
    throw EnumerationLimit("vertex enumeration is limited to D <= 8");
  }
  std::vector<double> entries(v.data(), v.data() + v.size());
  std::sort(entries.begin(), entries.end());
  std::vector<Eigen::VectorXd> out;
  do {
    out.push_back(Eigen::Map<const Eigen::VectorXd>(entries.data(), v.size()));
  } while (std::next_permutation(entries.begin(), entries.end()));
  return out;
}

Eigen::MatrixXd birkhoff_combination(std::span<const Permutation> perms,
                                     std::span<const double> coefficients) {
  if (perms.empty() || perms.size() != coefficients.size()) {
    throw InvalidArgument("need one coefficient per permutation");
  }
  const auto n = static_cast<Eigen::Index>(perms.front().size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < perms.size(); ++i) {
    if (coefficients[i] < 0.0) throw InvalidArgument("convex coefficients must be non-negative");
    if (static_cast<Eigen::Index>(perms[i].size()) != n) {
      throw DimensionMismatch("permutations have different sizes");
    }
    out += coefficients[i] * perms[i].matrix();
  }
  return out;
}

std::string_view to_string(Space space) {
  return space == Space::weights ? "weights" : "energies";
}

LinearTarget delta_rho_target(const WeightVector& w) {
  LinearTarget t;
  t.space = Space::weights;
  t.coeffs = -2.0 * w.vector();
  t.offset = 2.0 * w.vector().squaredNorm();
  t.name = "delta_rho_w";
  return t;
}

LinearTarget delta_E_target(std::size_t k, const EnergySpectrum& energies) {
  if (k >= energies.size()) throw InvalidArgument("energy index out of range");
  LinearTarget t;
  t.space = Space::energies;
  t.coeffs = Eigen::VectorXd::Unit(static_cast<Eigen::Index>(energies.size()),
                                   static_cast<Eigen::Index>(k));
  t.offset = -energies[k];
  t.name = "delta_E_" + std::to_string(k);
  return t;
}

LinearTarget delta_E_w_target(Space space, const WeightVector& w,
                              const EnergySpectrum& energies) {
  require_same_dim(w, energies);
  LinearTarget t;
  t.space = space;
  if (space == Space::weights) {
    t.coeffs = energies.vector();
    t.offset = -w.vector().dot(energies.vector());
  } else {
    t.coeffs = w.vector();
    t.offset = -w.vector().dot(energies.vector());
  }
  t.name = "delta_E_w";
  return t;
}

PermutohedronSlice reference_and_positive_vertices(Space space, const WeightVector& w,
                                                   const EnergySpectrum& energies,
                                                   double delta) {
  require_same_dim(w, energies);
  require_regime(w, energies, delta);
  const double err_tol = 1e-12 * std::max(1.0, gap_functions(w, energies).max_swap_error);

  PermutohedronSlice slice;
  slice.space = space;
  slice.delta = delta;
  if (space == Space::weights) {
    slice.reference_vertices.emplace_back(w.vector());
  } else {
    slice.reference_vertices = energy_reference_vertices(w, energies);
  }

  const std::size_t d = w.size();
  const double value_tol = space == Space::weights ? w.tolerance() : 0.0;
  for (std::size_t r = 0; r < slice.reference_vertices.size(); ++r) {
    const Eigen::VectorXd& x = slice.reference_vertices[r];
    const std::vector<int> ranks = value_ranks(x, value_tol);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) {
        if (std::abs(ranks[i] - ranks[j]) != 1) continue;
        Eigen::VectorXd y = x;
        std::swap(y(static_cast<Eigen::Index>(i)), y(static_cast<Eigen::Index>(j)));
        const double err = ensemble_error(space, y, w, energies);
        if (err <= err_tol) continue;
        const double p = delta / err;
        if (p > 1.0 + 1e-12) {
          throw RegimeError("error level crosses more than one edge layer");
        }
        slice.intersection_vertices.push_back(
            {slice.positive_vertices.size(), p, (1.0 - p) * x + p * y});
        slice.positive_vertices.push_back({r, i, j, std::move(y), err});
      }
    }
  }
  return slice;
}

Extrema constrained_extrema(const LinearTarget& target, const WeightVector& w,
                            const EnergySpectrum& energies, double delta) {
  if (static_cast<std::size_t>(target.coeffs.size()) != w.size()) {
    throw DimensionMismatch("target has the wrong dimension");
  }
  const PermutohedronSlice slice =
      reference_and_positive_vertices(target.space, w, energies, delta);
  if (slice.intersection_vertices.empty()) {
    throw RegimeError("slice is empty");
  }
  Extrema out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const SliceVertex& v : slice.intersection_vertices) {
    const double value = target(v.point);
    out.min = std::min(out.min, value);
    out.max = std::max(out.max, value);
  }
  return out;
}

Extrema brute_force_extrema(const LinearTarget& target, const WeightVector& w,
                            const EnergySpectrum& energies, double delta) {
  require_same_dim(w, energies);
  const std::size_t d = w.size();
  if (d > kMaxBruteForceDim) throw EnumerationLimit("brute-force oracle is limited to D <= 6");
  if (static_cast<std::size_t>(target.coeffs.size()) != d) {
    throw DimensionMismatch("target has the wrong dimension");
  }
  const Space space = target.space;
  const double err_tol = 1e-12 * std::max(1.0, std::abs(delta));
  const std::vector<Eigen::VectorXd> vertices =
      permutohedron_vertices(base_of(space, w, energies));
  const double value_tol = space == Space::weights ? w.tolerance() : 0.0;

  Extrema out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  bool found = false;
  const auto visit = [&](const Eigen::VectorXd& point) {
    const double value = target(point);
    out.min = std::min(out.min, value);
    out.max = std::max(out.max, value);
    found = true;
  };

  for (const Eigen::VectorXd& v : vertices) {
    const double fv = ensemble_error(space, v, w, energies);
    if (std::abs(fv - delta) <= err_tol) {
      visit(v);
      continue;
    }
    const std::vector<int> ranks = value_ranks(v, value_tol);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        // Each edge once: from the endpoint whose i-th value ranks just below its j-th.
        if (ranks[j] - ranks[i] != 1) continue;
        Eigen::VectorXd y = v;
        std::swap(y(static_cast<Eigen::Index>(i)), y(static_cast<Eigen::Index>(j)));
        const double fy = ensemble_error(space, y, w, energies);
        if (std::abs(fy - delta) <= err_tol) continue;
        if ((fv - delta) * (fy - delta) < 0.0) {
          const double t = (delta - fv) / (fy - fv);
          visit(v + t * (y - v));
        }
      }
    }
  }
  if (!found) throw RegimeError("error level does not meet the polytope");
  return out;
}

double gok_minimum_check(const WeightVector& w, const EnergySpectrum& energies) {
  require_same_dim(w, energies);
  const std::size_t d = w.size();
  if (d > kMaxEnumerationDim) throw EnumerationLimit("exhaustive check is limited to D <= 8");
  std::vector<std::size_t> sigma(d);
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double value = 0.0;
    for (std::size_t l = 0; l < d; ++l) value += w[l] * energies[sigma[l]];
    best = std::min(best, value);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return best;
}

CycleBoundReport cycle_bound_check(const Permutation& perm, const WeightVector& w,
                                   const EnergySpectrum& energies, double tolerance) {
  require_same_dim(w, energies);
  if (perm.size() != w.size()) throw DimensionMismatch("permutation has the wrong dimension");
  if (w.shape() == WeightShape::other) {
    throw ShapeViolation("cycle bounds need distinct positive weights followed by zeros");
  }
  const std::size_t d = w.size();
  const std::size_t positive = w.positive_count();

  CycleBoundReport report;
  for (std::size_t l = 0; l < d; ++l) {
    report.delta_E_w += w[l] * (energies[perm[l]] - energies[l]);
  }

  const std::vector<std::vector<std::size_t>> cycles = perm.cycles();
  const std::vector<std::size_t>* active = nullptr;
  for (const auto& c : cycles) {
    const bool moves_positive =
        std::any_of(c.begin(), c.end(), [&](std::size_t l) { return l < positive; });
    if (!moves_positive) continue;
    if (active != nullptr) {
      throw InvalidArgument("not a valid cycle structure: more than one cycle moves positive weights");
    }
    active = &c;
  }

  const double inf = std::numeric_limits<double>::infinity();
  report.delta_pp = inf;
  report.delta_pz = inf;
  for (std::size_t i = 0; i < positive; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const double t = (w[i] - w[j]) * (energies[j] - energies[i]);
      if (j < positive) {
        report.delta_pp = std::min(report.delta_pp, t);
      } else {
        report.delta_pz = std::min(report.delta_pz, t);
      }
    }
  }
  report.max_swap_error = (w[0] - w[d - 1]) * energies.spread();

  if (active == nullptr) {
    report.reference = true;
    report.lower_branch = "reference";
    report.lower_holds = std::abs(report.delta_E_w) <= tolerance;
    report.upper_holds = report.lower_holds;
    return report;
  }

  const std::size_t big_l = active->size();
  const auto l_prime = static_cast<std::size_t>(
      std::count_if(active->begin(), active->end(), [&](std::size_t l) { return l < positive; }));
  report.cycle_length = big_l;
  report.positive_moved = l_prime;
  report.upper_bound =
      static_cast<double>(std::min(l_prime, big_l / 2)) * report.max_swap_error;
  if (l_prime > 1 && report.delta_pp <= 2.0 * report.delta_pz) {
    report.lower_branch = "pairs";
    report.lower_bound = static_cast<double>(l_prime - 1) * report.delta_pp;
  } else {
    report.lower_branch = "mixed";
    report.lower_bound = static_cast<double>(2 * l_prime - 1) * report.delta_pz;
  }
  report.lower_holds = report.delta_E_w >= report.lower_bound - tolerance;
  report.upper_holds = report.delta_E_w <= report.upper_bound + tolerance;
  return report;
}

}  // namespace gok
