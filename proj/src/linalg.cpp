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

#include "gok/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gok/errors.hpp"

namespace gok {

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) { return a.exp(); }

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) { return a.exp(); }

Eigen::MatrixXd expm_frechet(const Eigen::MatrixXd& a, const Eigen::MatrixXd& direction) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = a;
  block.topRightCorner(n, n) = direction;
  block.bottomRightCorner(n, n) = a;
  const Eigen::MatrixXd e = block.exp();
  return e.topRightCorner(n, n);
}

std::size_t antisymmetric_param_count(std::size_t dim) { return dim * (dim - 1) / 2; }

Eigen::MatrixXd antisymmetric_from_params(std::span<const double> params, std::size_t dim) {
  if (params.size() != antisymmetric_param_count(dim)) {
    throw InvalidArgument("expected " + std::to_string(antisymmetric_param_count(dim)) +
                          " generator parameters for dimension " + std::to_string(dim) +
                          ", got " + std::to_string(params.size()));
  }
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  std::size_t p = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      a(i, j) = params[p];
      a(j, i) = -params[p];
      ++p;
    }
  }
  return a;
}

SymmetricEigen jacobi_eigensolver(const Eigen::MatrixXd& h, double tolerance, int max_sweeps) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw InvalidArgument("eigensolver needs a non-empty square matrix");
  }
  const double scale = std::max(1.0, h.norm());
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidArgument("eigensolver input is not symmetric");
  }
  const Eigen::Index n = h.rows();
  Eigen::MatrixXd a = h;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  const auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    }
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > tolerance * scale) {
    if (sweep == max_sweeps) {
      throw Error(ErrorCategory::numerical, "Jacobi eigensolver did not converge");
    }
    ++sweep;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle that annihilates a(p, q).
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src);
    out.vectors.col(k) = v.col(src);
  }
  out.sweeps = sweep;
  return out;
}

}  // namespace gok
