/*
 * Copyright (c) 2026 The atcbf Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "atcbf/linalg.hpp"

#include <cmath>

namespace atcbf {

namespace {
constexpr double kSymmetryTol = 1e-10;
}

double relative_asymmetry(const Matrix& matrix) {
  const double scale = matrix.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (matrix - matrix.transpose()).cwiseAbs().maxCoeff() / scale;
}

Vector solve_spd(const Matrix& matrix, const Vector& rhs) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size())
    throw Error(ErrorCode::InvalidArgument, "solve_spd: dimension mismatch");
  if (matrix.rows() == 0) return Vector();
  if (relative_asymmetry(matrix) > kSymmetryTol)
    throw Error(ErrorCode::InvalidArgument, "solve_spd: matrix is not symmetric");

  Eigen::LLT<Matrix> llt(matrix);
  if (llt.info() == Eigen::Success) {
    Vector x = llt.solve(rhs);
    if (x.allFinite()) {
      x += llt.solve(rhs - matrix * x);
      if (x.allFinite()) return x;
    }
  }

  Eigen::FullPivLU<Matrix> lu(matrix);
  if (!lu.isInvertible())
    throw Error(ErrorCode::SingularMatrix, "solve_spd: matrix is singular (insufficient diagonal loading?)");
  Vector x = lu.solve(rhs);
  x += lu.solve(rhs - matrix * x);
  if (!x.allFinite()) throw Error(ErrorCode::SingularMatrix, "solve_spd: non-finite solution");
  return x;
}

}  // namespace atcbf
