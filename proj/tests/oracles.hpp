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

// Reference computations for the tests. They deliberately avoid Eigen's
// solvers and the library code paths: plain loops, extended precision.

#ifndef ATCBF_TESTS_ORACLES_HPP
#define ATCBF_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using LMat = std::vector<std::vector<long double>>;
using LVec = std::vector<long double>;

inline LMat to_lmat(const Eigen::MatrixXd& m) {
  LMat out(std::size_t(m.rows()), LVec(std::size_t(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[std::size_t(i)][std::size_t(j)] = m(i, j);
  return out;
}

// Gaussian elimination with partial pivoting.
inline LVec gauss_solve(LMat a, LVec b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0L) throw std::runtime_error("oracle: singular system");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const long double f = a[r][col] / a[col][col];
      if (f == 0.0L) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  LVec x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

// Gauss-Jordan inverse.
inline LMat inverse(LMat a) {
  const std::size_t n = a.size();
  LMat inv(n, LVec(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0L;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const long double d = a[col][col];
    for (std::size_t c = 0; c < n; ++c) a[col][c] /= d, inv[col][c] /= d;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const long double f = a[r][col];
      for (std::size_t c = 0; c < n; ++c) a[r][c] -= f * a[col][c], inv[r][c] -= f * inv[col][c];
    }
  }
  return inv;
}

inline long double trace(const LMat& a) {
  long double t = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

// minimize w^T R w subject to 1^T w = 1 through the augmented system
// [2R 1; 1^T 0] [w; lambda] = [0; 1], with R loaded by eps * tr(R).
inline Eigen::VectorXd kkt_weights(const Eigen::MatrixXd& r, double eps) {
  LMat rl = to_lmat(r);
  const std::size_t n = rl.size();
  const long double load = (long double)eps * trace(rl);
  LMat kkt(n + 1, LVec(n + 1, 0.0L));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) kkt[i][j] = 2.0L * rl[i][j];
    kkt[i][i] += 2.0L * load;
    kkt[i][n] = kkt[n][i] = 1.0L;
  }
  LVec rhs(n + 1, 0.0L);
  rhs[n] = 1.0L;
  const LVec sol = gauss_solve(kkt, rhs);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(Eigen::Index(n));
  for (std::size_t i = 0; i < n; ++i) w[Eigen::Index(i)] = double(sol[i]);
  return w;
}

// w^T (R + eps tr(R) I) w in extended precision.
inline long double loaded_objective(const Eigen::MatrixXd& r, double eps, const Eigen::VectorXd& w) {
  long double tr = 0.0L;
  for (Eigen::Index i = 0; i < r.rows(); ++i) tr += r(i, i);
  long double s = 0.0L;
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    long double row = 0.0L;
    for (Eigen::Index j = 0; j < r.cols(); ++j) row += (long double)r(i, j) * w[j];
    row += (long double)eps * tr * w[i];
    s += (long double)w[i] * row;
  }
  return s;
}

// Dense ATC covariance by explicit (i, j, m, n) loops.
inline Eigen::MatrixXd atc_covariance_loops(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& a) {
  const Eigen::Index m = phi.rows(), kt = phi.cols();
  Eigen::MatrixXd r(m * kt, m * kt);
  for (Eigen::Index i = 0; i < kt; ++i)
    for (Eigen::Index j = 0; j < kt; ++j)
      for (Eigen::Index p = 0; p < m; ++p)
        for (Eigen::Index q = 0; q < m; ++q) r(i * m + p, j * m + q) = a(i, j) * phi(p, i) * phi(q, j);
  return r;
}

inline Eigen::MatrixXd mv_covariance_loops(const Eigen::MatrixXd& phi) {
  const Eigen::Index m = phi.rows(), kt = phi.cols();
  Eigen::MatrixXd r(m, m);
  for (Eigen::Index p = 0; p < m; ++p)
    for (Eigen::Index q = 0; q < m; ++q) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < kt; ++k) s += phi(p, k) * phi(q, k);
      r(p, q) = s / double(kt);
    }
  return r;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = n(rng);
  return m;
}

inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, Eigen::Index n) {
  const Eigen::MatrixXd b = random_matrix(rng, n, n);
  Eigen::MatrixXd s = b * b.transpose();
  s.diagonal().array() += double(n) * 0.1;
  return 0.5 * (s + s.transpose());
}

inline double rel_err(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  return (got - want).norm() / want.norm();
}

// 64-bit FNV-1a of a byte string, used for frozen golden hashes.
inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

}  // namespace oracle

#endif  // ATCBF_TESTS_ORACLES_HPP
