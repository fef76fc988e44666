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

#ifndef ATCBF_LINALG_HPP
#define ATCBF_LINALG_HPP

#include "atcbf/types.hpp"

namespace atcbf {

/// Solves matrix * x = rhs for a symmetric (intended positive definite)
/// matrix. Uses Cholesky, falling back to full-pivot LU when Cholesky fails,
/// followed by one step of iterative refinement.
///
/// Throws InvalidArgument when the matrix is not square or not symmetric to
/// 1e-10 relative, and SingularMatrix when both factorizations fail.
Vector solve_spd(const Matrix& matrix, const Vector& rhs);

/// Relative asymmetry max|M - M^T| / max|M| (0 for the zero matrix).
double relative_asymmetry(const Matrix& matrix);

}  // namespace atcbf

#endif  // ATCBF_LINALG_HPP
