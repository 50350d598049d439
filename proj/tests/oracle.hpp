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

// Reference computations used only by the tests. They work directly with
// dense matrices and brute-force enumeration instead of the library's
// closed forms.

#ifndef GOK_TESTS_ORACLE_HPP
#define GOK_TESTS_ORACLE_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

struct Errors {
  double ensemble_energy = 0.0;
  double ensemble_state = 0.0;
  std::vector<double> state;
  std::vector<double> energy;
  double state_sum = 0.0;
  double energy_abs_sum = 0.0;
};

// Errors of the trial ensemble U diag(w) U^dagger against diag(w), with the
// Hamiltonian diag(E). Column l of U is trial state l.
inline Errors direct_errors(const Eigen::MatrixXcd& u, const std::vector<double>& w,
                            const std::vector<double>& e, std::size_t summed) {
  const auto d = static_cast<Eigen::Index>(w.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    h(k, k) = e[static_cast<std::size_t>(k)];
    rho(k, k) = w[static_cast<std::size_t>(k)];
  }
  const Eigen::MatrixXcd trial = u * rho * u.adjoint();
  Errors out;
  out.ensemble_energy = (h * trial).trace().real() - (h * rho).trace().real();
  out.ensemble_state = (trial - rho).squaredNorm();
  for (Eigen::Index k = 0; k < d; ++k) {
    const Eigen::VectorXcd col = u.col(k);
    out.state.push_back(1.0 - std::norm(u(k, k)));
    out.energy.push_back((col.adjoint() * h * col)(0, 0).real() - e[static_cast<std::size_t>(k)]);
  }
  for (std::size_t k = 0; k < summed; ++k) {
    out.state_sum += out.state[k];
    out.energy_abs_sum += std::abs(out.energy[k]);
  }
  return out;
}

// Slopes dQ/dE_w along the extreme rays P - I of the Birkhoff cone at the
// identity. For quantities linear in X these are the exact bound prefactors
// close to the exact ensemble.
struct Slopes {
  double state_lo = std::numeric_limits<double>::infinity();
  double state_hi = -std::numeric_limits<double>::infinity();
  std::vector<double> psi_hi;
  std::vector<double> energy_lo;
  std::vector<double> energy_hi;
  double psi_sum_lo = std::numeric_limits<double>::infinity();
  double psi_sum_hi = -std::numeric_limits<double>::infinity();
  double abs_sum_hi = -std::numeric_limits<double>::infinity();
};

inline Slopes permutation_slopes(const std::vector<double>& w, const std::vector<double>& e,
                                 std::size_t summed) {
  const std::size_t d = w.size();
  Slopes s;
  s.psi_hi.assign(d, -std::numeric_limits<double>::infinity());
  s.energy_lo.assign(d, std::numeric_limits<double>::infinity());
  s.energy_hi.assign(d, -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> p(d);
  std::iota(p.begin(), p.end(), 0);
  do {
    // X = P with X(p[l], l) = 1: trial state l is eigenstate p[l].
    double de = 0.0;
    double drho = 0.0;
    for (std::size_t l = 0; l < d; ++l) {
      de += w[l] * (e[p[l]] - e[l]);
      drho += (w[l] - w[p[l]]) * (w[l] - w[p[l]]);
    }
    if (de <= 1e-14) continue;
    s.state_lo = std::min(s.state_lo, drho / de);
    s.state_hi = std::max(s.state_hi, drho / de);
    double psi_sum = 0.0;
    double abs_sum = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double psi = p[k] == k ? 0.0 : 1.0;
      const double en = e[p[k]] - e[k];
      s.psi_hi[k] = std::max(s.psi_hi[k], psi / de);
      s.energy_lo[k] = std::min(s.energy_lo[k], en / de);
      s.energy_hi[k] = std::max(s.energy_hi[k], en / de);
      if (k < summed) {
        psi_sum += psi;
        abs_sum += std::abs(en);
      }
    }
    s.psi_sum_lo = std::min(s.psi_sum_lo, psi_sum / de);
    s.psi_sum_hi = std::max(s.psi_sum_hi, psi_sum / de);
    s.abs_sum_hi = std::max(s.abs_sum_hi, abs_sum / de);
  } while (std::next_permutation(p.begin(), p.end()));
  return s;
}

// Strictly decreasing positive weights summing to one.
inline std::vector<double> random_strict_weights(std::mt19937_64& rng, std::size_t d) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(d);
  double acc = 0.0;
  for (std::size_t k = d; k-- > 0;) {
    acc += u(rng);
    w[k] = acc;
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

inline std::vector<double> random_spectrum(std::mt19937_64& rng, std::size_t d) {
  std::uniform_real_distribution<double> u(0.1, 2.0);
  std::vector<double> e(d);
  e[0] = -1.0;
  for (std::size_t k = 1; k < d; ++k) e[k] = e[k - 1] + u(rng);
  return e;
}

// Plane rotation by angle in the (i, j) plane.
inline Eigen::MatrixXd rotation(std::size_t d, std::size_t i, std::size_t j, double angle) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d),
                                                static_cast<Eigen::Index>(d));
  const auto a = static_cast<Eigen::Index>(i);
  const auto b = static_cast<Eigen::Index>(j);
  r(a, a) = std::cos(angle);
  r(b, b) = std::cos(angle);
  r(b, a) = std::sin(angle);
  r(a, b) = -std::sin(angle);
  return r;
}

}  // namespace oracle

#endif  // GOK_TESTS_ORACLE_HPP
