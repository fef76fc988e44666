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

#include "atcbf/beamformers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "atcbf/linalg.hpp"
#include "atcbf/tof_align.hpp"

namespace atcbf {

const char* to_string(Method m) {
  switch (m) {
    case Method::Das: return "das";
    case Method::Mv: return "mv";
    case Method::Atc: return "atc";
  }
  return "?";
}

const char* to_string(ApodizationKind a) {
  switch (a) {
    case ApodizationKind::Triangular: return "triangular";
    case ApodizationKind::Ones: return "ones";
    case ApodizationKind::Custom: return "custom";
  }
  return "?";
}

void BeamformerConfig::validate() const {
  if (method != Method::Das && !(epsilon > 0.0 && std::isfinite(epsilon)))
    throw Error(ErrorCode::InvalidConfig, "beamformer epsilon must be > 0 for mv/atc");
  if (method == Method::Atc && apodization == ApodizationKind::Custom) {
    const auto k_tot = Eigen::Index(2 * half_width + 1);
    if (custom_apodization.rows() != k_tot || custom_apodization.cols() != k_tot)
      throw Error(ErrorCode::InvalidConfig, "custom apodization must be K_tot x K_tot");
  }
}

TemporalApodization BeamformerConfig::temporal_apodization() const {
  switch (apodization) {
    case ApodizationKind::Triangular: return temporal_apodization_triangular(half_width);
    case ApodizationKind::Ones: return temporal_apodization_ones(half_width);
    case ApodizationKind::Custom: return TemporalApodization(custom_apodization);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown apodization kind");
}

double das_pixel(const AlignedPatch& patch) {
  return patch.central().sum() / double(patch.num_channels());
}

Matrix mv_covariance(const AlignedPatch& patch) {
  const Matrix& phi = patch.phi();
  Matrix r = phi * phi.transpose();
  r /= double(patch.num_offsets());
  // Force exact symmetry; the product above is symmetric only to rounding.
  return (0.5 * (r + r.transpose())).eval();
}

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw Error(ErrorCode::InvalidArgument, "diagonal loading epsilon must be > 0");
}

Vector loaded_capon(const Matrix& covariance, double epsilon) {
  check_epsilon(epsilon);
  if (covariance.rows() != covariance.cols() || covariance.rows() == 0)
    throw Error(ErrorCode::InvalidArgument, "covariance must be square and non-empty");
  const double trace = covariance.trace();
  if (!(trace >= kDegenerateTrace)) throw Error(ErrorCode::DegeneratePatch, "covariance trace is zero");

  Matrix loaded = covariance;
  loaded.diagonal().array() += epsilon * trace;
  const Vector x = solve_spd(loaded, Vector::Ones(covariance.rows()));
  const double denom = x.sum();
  if (!std::isfinite(denom) || denom == 0.0)
    throw Error(ErrorCode::SingularMatrix, "constraint normalization vanished");
  return x / denom;
}

}  // namespace

WeightSet mv_weights(const Matrix& covariance, double epsilon) {
  WeightSet out;
  out.w = loaded_capon(covariance, epsilon);
  out.num_channels = std::size_t(covariance.rows());
  out.half_width = 0;
  return out;
}

TemporalApodization temporal_apodization_triangular(std::size_t half_width) {
  const int k = int(half_width);
  Matrix a(2 * k + 1, 2 * k + 1);
  for (int i = -k; i <= k; ++i)
    for (int j = -k; j <= k; ++j) a(i + k, j + k) = double(k + 1 - std::max(std::abs(i), std::abs(j)));
  return TemporalApodization(std::move(a));
}

TemporalApodization temporal_apodization_ones(std::size_t half_width) {
  const auto n = Eigen::Index(2 * half_width + 1);
  return TemporalApodization(Matrix::Ones(n, n));
}

Matrix atc_covariance(const AlignedPatch& patch, const TemporalApodization& apodization) {
  if (apodization.num_offsets() != patch.num_offsets())
    throw Error(ErrorCode::InvalidArgument, "apodization size does not match patch K_tot");
  const Matrix& phi = patch.phi();
  const Eigen::Index m = phi.rows();
  const Eigen::Index n = phi.cols();
  const Matrix& a = apodization.matrix();
  Matrix r(m * n, m * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const Matrix block = a(i, j) * (phi.col(i) * phi.col(j).transpose());
      r.block(i * m, j * m, m, m) = block;
      r.block(j * m, i * m, m, m) = block.transpose();
    }
  }
  return r;
}

WeightSet atc_weights(const Matrix& covariance, double epsilon, std::size_t half_width) {
  const std::size_t k_tot = 2 * half_width + 1;
  if (covariance.rows() == 0 || std::size_t(covariance.rows()) % k_tot != 0)
    throw Error(ErrorCode::InvalidArgument, "ATC covariance size is not a multiple of K_tot");
  WeightSet out;
  out.w = loaded_capon(covariance, epsilon);
  out.num_channels = std::size_t(covariance.rows()) / k_tot;
  out.half_width = half_width;
  return out;
}

double apply_weights(const AlignedPatch& patch, const WeightSet& weights) {
  if (weights.num_channels != patch.num_channels() || weights.half_width != patch.half_width())
    throw Error(ErrorCode::InvalidArgument, "weight set does not match patch shape");
  double z = 0.0;
  const int k = int(patch.half_width());
  for (int i = -k; i <= k; ++i) z += patch.offset(i).dot(weights.block(i));
  return z;
}

double quadratic_objective(const Matrix& covariance, const Vector& w) {
  return w.dot(covariance * w);
}

PixelOutput mv_pixel(const AlignedPatch& patch, double epsilon) {
  try {
    const WeightSet w = mv_weights(mv_covariance(patch), epsilon);
    return {patch.central().dot(w.w), false};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegeneratePatch) throw;
    return {das_pixel(patch), true};
  }
}

PixelOutput atc_pixel(const AlignedPatch& patch, const TemporalApodization& apodization,
                      double epsilon) {
  try {
    const WeightSet w =
        atc_weights(atc_covariance(patch, apodization), epsilon, patch.half_width());
    return {apply_weights(patch, w), false};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegeneratePatch) throw;
    return {0.0, true};
  }
}

// Low-rank route.
//
// Both covariances factor as R = U S U^T with U (n x r) orthonormal and
// r <= K_tot. With delta = epsilon tr(R), a_n = a - U U^T a, alpha = U^T a and
// beta = (delta I + S)^{-1} alpha:
//
//   R_DL^{-1} a = a_n / delta + U beta
//   w           = (a_n + delta U beta) / D,  D = 1^T a_n + delta alpha^T beta
//
// and for any stacked data vector phi = U f in the range of U,
//   z = phi^T w = delta f^T beta / D.
// No quantity of order 1/delta is ever formed.

namespace {

struct LowRankMv {
  Matrix basis;     // U, M x r
  Matrix coords;    // U^T Phi, r x K_tot
  Vector residual;  // a_n
  Vector alpha;
  Vector beta;
  double delta = 0.0;
  double denom = 0.0;
};

LowRankMv solve_mv_lowrank(const AlignedPatch& patch, double epsilon) {
  check_epsilon(epsilon);
  const Matrix& phi = patch.phi();
  const double k_tot = double(patch.num_offsets());
  const double trace = phi.squaredNorm() / k_tot;
  if (!(trace >= kDegenerateTrace)) throw Error(ErrorCode::DegeneratePatch, "covariance trace is zero");

  LowRankMv s;
  Eigen::ColPivHouseholderQR<Matrix> qr(phi);
  const Eigen::Index rank = std::max<Eigen::Index>(qr.rank(), 1);
  const Eigen::Index m = phi.rows();
  s.basis = qr.householderQ() * Matrix::Identity(m, rank);
  s.coords = s.basis.transpose() * phi;

  s.delta = epsilon * trace;
  Matrix inner = s.coords * s.coords.transpose() / k_tot;
  inner = (0.5 * (inner + inner.transpose())).eval();
  inner.diagonal().array() += s.delta;

  const Vector ones = Vector::Ones(m);
  s.alpha = s.basis.transpose() * ones;
  s.residual = ones - s.basis * s.alpha;
  s.beta = solve_spd(inner, s.alpha);
  // 1^T a_n rather than |a_n|^2: equal in exact arithmetic, but the sum is
  // what 1^T w actually sees once a_n is down at rounding level.
  s.denom = s.residual.sum() + s.delta * s.alpha.dot(s.beta);
  if (!(s.denom > 0.0) || !std::isfinite(s.denom))
    throw Error(ErrorCode::SingularMatrix, "constraint normalization vanished");
  return s;
}

struct LowRankAtc {
  std::vector<Eigen::Index> active;  // offsets with non-zero data
  Vector norm;                       // sqrt(g_i) over active offsets
  Vector alpha;                      // s_i / sqrt(g_i)
  Vector beta;
  double delta = 0.0;
  double denom = 0.0;
};

// For ATC the columns of the block-diagonal embedding of Phi are mutually
// orthogonal, so U is Phi_i / |Phi_i| placed in block i and
// S = G^{1/2} A G^{1/2} with G = diag(|Phi_i|^2).
LowRankAtc solve_atc_lowrank(const AlignedPatch& patch, const TemporalApodization& apodization,
                             double epsilon) {
  check_epsilon(epsilon);
  if (apodization.num_offsets() != patch.num_offsets())
    throw Error(ErrorCode::InvalidArgument, "apodization size does not match patch K_tot");
  const Matrix& phi = patch.phi();
  const Matrix& a = apodization.matrix();
  const Eigen::Index k_tot = phi.cols();
  const double m = double(phi.rows());

  Vector g(k_tot), sums(k_tot);
  double trace = 0.0;
  for (Eigen::Index i = 0; i < k_tot; ++i) {
    g(i) = phi.col(i).squaredNorm();
    sums(i) = phi.col(i).sum();
    trace += a(i, i) * g(i);
  }
  if (!(trace >= kDegenerateTrace)) throw Error(ErrorCode::DegeneratePatch, "covariance trace is zero");

  LowRankAtc s;
  s.delta = epsilon * trace;
  double residual = 0.0;
  for (Eigen::Index i = 0; i < k_tot; ++i) {
    if (g(i) > 0.0) {
      s.active.push_back(i);
      const double mean = sums(i) / m;
      // |a - Phi_i (Phi_i^T a) / g_i|^2 = M sum_m (Phi_i[m] - mean)^2 / g_i
      residual += m * (phi.col(i).array() - mean).square().sum() / g(i);
    } else {
      residual += m;
    }
  }

  const auto r = Eigen::Index(s.active.size());
  s.norm.resize(r);
  s.alpha.resize(r);
  for (Eigen::Index p = 0; p < r; ++p) {
    s.norm(p) = std::sqrt(g(s.active[std::size_t(p)]));
    s.alpha(p) = sums(s.active[std::size_t(p)]) / s.norm(p);
  }
  Matrix inner(r, r);
  for (Eigen::Index p = 0; p < r; ++p) {
    for (Eigen::Index q = p; q < r; ++q) {
      const double v = s.norm(p) * a(s.active[std::size_t(p)], s.active[std::size_t(q)]) * s.norm(q);
      inner(p, q) = v;
      inner(q, p) = v;
    }
    inner(p, p) += s.delta;
  }
  s.beta = solve_spd(inner, s.alpha);
  s.denom = residual + s.delta * s.alpha.dot(s.beta);
  if (!(s.denom > 0.0) || !std::isfinite(s.denom))
    throw Error(ErrorCode::SingularMatrix, "constraint normalization vanished");
  return s;
}

}  // namespace

WeightSet mv_weights_lowrank(const AlignedPatch& patch, double epsilon) {
  const LowRankMv s = solve_mv_lowrank(patch, epsilon);
  WeightSet out;
  out.w = (s.residual + s.delta * (s.basis * s.beta)) / s.denom;
  out.num_channels = patch.num_channels();
  out.half_width = 0;
  return out;
}

WeightSet atc_weights_lowrank(const AlignedPatch& patch, const TemporalApodization& apodization,
                              double epsilon) {
  const LowRankAtc s = solve_atc_lowrank(patch, apodization, epsilon);
  const Matrix& phi = patch.phi();
  const Eigen::Index m = phi.rows();
  WeightSet out;
  out.num_channels = std::size_t(m);
  out.half_width = patch.half_width();
  out.w = Vector::Constant(m * phi.cols(), 1.0 / s.denom);
  for (std::size_t p = 0; p < s.active.size(); ++p) {
    const Eigen::Index i = s.active[p];
    const auto col = phi.col(i);
    const double g = s.norm(Eigen::Index(p)) * s.norm(Eigen::Index(p));
    const double coef = (s.delta * s.beta(Eigen::Index(p)) / s.norm(Eigen::Index(p)) - col.sum() / g);
    out.w.segment(i * m, m) = (Vector::Ones(m) + coef * col) / s.denom;
  }
  return out;
}

PixelOutput mv_pixel_lowrank(const AlignedPatch& patch, double epsilon) {
  try {
    const LowRankMv s = solve_mv_lowrank(patch, epsilon);
    const Eigen::Index center = Eigen::Index(patch.half_width());
    return {s.delta * s.coords.col(center).dot(s.beta) / s.denom, false};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegeneratePatch) throw;
    return {das_pixel(patch), true};
  }
}

PixelOutput atc_pixel_lowrank(const AlignedPatch& patch, const TemporalApodization& apodization,
                              double epsilon) {
  try {
    const LowRankAtc s = solve_atc_lowrank(patch, apodization, epsilon);
    return {s.delta * s.norm.dot(s.beta) / s.denom, false};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegeneratePatch) throw;
    return {0.0, true};
  }
}

BeamformResult beamform_image(const RFFrame& frame, const PixelGrid& grid,
                              const BeamformerConfig& config, unsigned threads) {
  config.validate();
  grid.validate();
  const std::size_t half_width = config.method == Method::Das ? 0 : config.half_width;
  std::optional<TemporalApodization> apodization;
  if (config.method == Method::Atc) apodization = config.temporal_apodization();
  const bool dense = config.solver == SolverKind::Dense;

  const std::size_t width = grid.width;
  const std::size_t height = grid.height;
  Matrix values(Matrix::Zero(Eigen::Index(height), Eigen::Index(width)));
  std::vector<std::uint8_t> mask(width * height, 0);

  auto compute = [&](std::size_t row, std::size_t col) {
    const AlignedPatch patch = align_pixel(frame, grid.x(col), grid.z(row), half_width);
    PixelOutput out;
    switch (config.method) {
      case Method::Das: out = {das_pixel(patch), false}; break;
      case Method::Mv:
        out = dense ? mv_pixel(patch, config.epsilon) : mv_pixel_lowrank(patch, config.epsilon);
        break;
      case Method::Atc:
        out = dense ? atc_pixel(patch, *apodization, config.epsilon)
                    : atc_pixel_lowrank(patch, *apodization, config.epsilon);
        break;
    }
    values(Eigen::Index(row), Eigen::Index(col)) = out.value;
    mask[row * width + col] = out.degenerate ? 1 : 0;
  };

  // Rows are handed out dynamically; every pixel writes only its own slot.
  std::atomic<std::size_t> next_row{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::size_t first_error_row = height;
  auto worker = [&]() {
    for (;;) {
      const std::size_t row = next_row.fetch_add(1);
      if (row >= height) return;
      try {
        for (std::size_t col = 0; col < width; ++col) compute(row, col);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (row < first_error_row) {
          first_error_row = row;
          first_error = std::current_exception();
        }
      }
    }
  };

  unsigned n = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  n = unsigned(std::min<std::size_t>(n, height));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  BeamformReport report;
  report.degenerate_pixels = std::size_t(std::count(mask.begin(), mask.end(), std::uint8_t(1)));
  report.degenerate_mask = std::move(mask);
  return {BeamformedImage(grid, std::move(values)), std::move(report)};
}

}  // namespace atcbf
