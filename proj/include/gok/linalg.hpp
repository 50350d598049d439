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

#ifndef GOK_LINALG_HPP
#define GOK_LINALG_HPP

#include <Eigen/Dense>
#include <span>

namespace gok {

/// Matrix exponential (Pade approximant with scaling and squaring).
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

/// Frechet derivative of the exponential at `a` in direction `direction`,
/// read off the upper-right block of exp([[a, direction], [0, a]]).
Eigen::MatrixXd expm_frechet(const Eigen::MatrixXd& a, const Eigen::MatrixXd& direction);

/// Real antisymmetric matrix whose strict upper triangle, read row by row,
/// holds `params`.
Eigen::MatrixXd antisymmetric_from_params(std::span<const double> params, std::size_t dim);

/// D (D - 1) / 2.
std::size_t antisymmetric_param_count(std::size_t dim);

struct SymmetricEigen {
  /// Ascending.
  Eigen::VectorXd values;
  /// Column k is the eigenvector of values[k].
  Eigen::MatrixXd vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for real symmetric matrices. Iterates until the
/// off-diagonal Frobenius norm drops below `tolerance` times max(1, ||h||_F).
SymmetricEigen jacobi_eigensolver(const Eigen::MatrixXd& h, double tolerance = 1e-12,
                                  int max_sweeps = 100);

}  // namespace gok

#endif  // GOK_LINALG_HPP
