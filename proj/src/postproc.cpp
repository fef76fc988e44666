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

#include "atcbf/postproc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace atcbf {

Vector analytic_magnitude(const Vector& signal) {
  const auto n = std::size_t(signal.size());
  if (n == 0) return Vector();
  if (n == 1) return signal.cwiseAbs();

  Eigen::FFT<double> fft;
  std::vector<double> in(signal.data(), signal.data() + n);
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, in);  // full n-point spectrum
  spectrum.resize(n);

  // One-sided spectrum: keep DC (and Nyquist for even n), double positive
  // frequencies, zero negative ones.
  const std::size_t half = n / 2;
  for (std::size_t k = 1; k < n; ++k) {
    if (k < (n + 1) / 2) spectrum[k] *= 2.0;
    else if (!(n % 2 == 0 && k == half)) spectrum[k] = 0.0;
  }
  std::vector<std::complex<double>> analytic;
  fft.inv(analytic, spectrum);

  Vector out(Vector::Zero(Eigen::Index(n)));
  for (std::size_t i = 0; i < n; ++i) out(Eigen::Index(i)) = std::abs(analytic[i]);
  return out;
}

BeamformedImage envelope(const BeamformedImage& image, EnvelopeMode mode) {
  const Matrix& v = image.values();
  if (mode == EnvelopeMode::AbsValue) return BeamformedImage(image.grid(), v.cwiseAbs());
  Matrix out(v.rows(), v.cols());
  for (Eigen::Index c = 0; c < v.cols(); ++c) out.col(c) = analytic_magnitude(v.col(c));
  return BeamformedImage(image.grid(), std::move(out));
}

void DisplayConfig::validate() const {
  if (!(dynamic_range_db > 0.0) || !std::isfinite(dynamic_range_db))
    throw Error(ErrorCode::InvalidConfig, "dynamic_range_db must be > 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error(ErrorCode::InvalidConfig, "gamma must be > 0");
}

BeamformedImage log_compress_gamma(const BeamformedImage& env, const DisplayConfig& cfg) {
  cfg.validate();
  const Matrix& v = env.values();
  if ((v.array() < 0.0).any()) throw Error(ErrorCode::InvalidArgument, "envelope must be non-negative");
  const double peak = v.size() ? v.maxCoeff() : 0.0;
  Matrix out = Matrix::Zero(v.rows(), v.cols());
  if (peak > 0.0) {
    const double dr = cfg.dynamic_range_db;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double e = v.data()[i];
      if (e <= 0.0) continue;
      const double db = std::clamp(20.0 * std::log10(e / peak), -dr, 0.0);
      out.data()[i] = std::pow((db + dr) / dr, cfg.gamma);
    }
  }
  return BeamformedImage(env.grid(), std::move(out));
}

}  // namespace atcbf
