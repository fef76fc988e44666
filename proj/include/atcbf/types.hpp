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

#ifndef ATCBF_TYPES_HPP
#define ATCBF_TYPES_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace atcbf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class ErrorCode {
  InvalidArgument,
  InvalidConfig,
  SingularMatrix,
  DegeneratePatch,
  ReflectorNotFound,
  NoCrossing,
  NoSecondaryLobe,
  BadMagic,
  TruncatedFile,
  SizeMismatch,
  Io,
};

const char* to_string(ErrorCode code);

/// Base exception for every failure raised by the library. The code is what
/// the C API and the CLI exit status are derived from.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Linear array of equally spaced elements, centered on x = 0, elevation 0.
class ArrayGeometry {
 public:
  static ArrayGeometry uniform(std::size_t num_elements, double pitch);

  /// Validates M >= 2, strictly increasing positions, spacing equal to
  /// `pitch` and symmetry about 0, all within 1e-12 m.
  ArrayGeometry(std::vector<double> element_x, double pitch);

  std::size_t num_elements() const noexcept { return element_x_.size(); }
  double pitch() const noexcept { return pitch_; }
  const std::vector<double>& element_x() const noexcept { return element_x_; }
  double aperture() const noexcept { return element_x_.back() - element_x_.front(); }

 private:
  std::vector<double> element_x_;
  double pitch_;
};

struct SamplingSpec {
  double fs = 0.0;  // samples / s
  double t0 = 0.0;  // time of first sample, s
  std::size_t num_samples = 0;
  double c = 1540.0;  // sound speed, m / s

  /// Throws InvalidConfig on fs <= 0, T == 0 or c <= 0.
  void validate() const;
  double last_sample_time() const { return t0 + double(num_samples - 1) / fs; }
};

/// Raw channel data, M rows (channels) by T columns (time samples).
class RFFrame {
 public:
  RFFrame(ArrayGeometry geometry, SamplingSpec sampling, Matrix data);

  const ArrayGeometry& geometry() const noexcept { return geometry_; }
  const SamplingSpec& sampling() const noexcept { return sampling_; }
  const Matrix& data() const noexcept { return data_; }
  std::size_t num_channels() const noexcept { return geometry_.num_elements(); }
  std::size_t num_samples() const noexcept { return sampling_.num_samples; }

 private:
  ArrayGeometry geometry_;
  SamplingSpec sampling_;
  Matrix data_;
};

/// TOF-aligned snippet Phi for one pixel: M rows, 2K+1 columns. Column K
/// holds the central time sample; column K+k holds offset k.
class AlignedPatch {
 public:
  AlignedPatch(Matrix phi, std::size_t half_width);

  const Matrix& phi() const noexcept { return phi_; }
  std::size_t half_width() const noexcept { return half_width_; }
  std::size_t num_offsets() const noexcept { return 2 * half_width_ + 1; }
  std::size_t num_channels() const noexcept { return std::size_t(phi_.rows()); }

  /// Time sample at offset k in [-K, K].
  Eigen::Ref<const Vector> offset(int k) const {
    return phi_.col(Eigen::Index(int(half_width_) + k));
  }
  Eigen::Ref<const Vector> central() const { return phi_.col(Eigen::Index(half_width_)); }

 private:
  Matrix phi_;
  std::size_t half_width_;
};

/// Symmetric K_tot x K_tot weighting across temporal offsets.
class TemporalApodization {
 public:
  explicit TemporalApodization(Matrix a);

  const Matrix& matrix() const noexcept { return a_; }
  std::size_t half_width() const noexcept { return std::size_t(a_.rows() / 2); }
  std::size_t num_offsets() const noexcept { return std::size_t(a_.rows()); }
  double operator()(int i, int j) const {
    const int k = int(half_width());
    return a_(i + k, j + k);
  }

 private:
  Matrix a_;
};

/// K_tot stacked blocks w_{-K}..w_{K} of M weights each.
struct WeightSet {
  Vector w;
  std::size_t num_channels = 0;
  std::size_t half_width = 0;

  std::size_t num_offsets() const { return 2 * half_width + 1; }
  Eigen::Ref<const Vector> block(int k) const {
    return w.segment(Eigen::Index((int(half_width) + k) * int(num_channels)),
                     Eigen::Index(num_channels));
  }
  double constraint_sum() const { return w.sum(); }
};

/// Image pixel lattice in meters. Pixel centers span the extents inclusively.
struct PixelGrid {
  double x_min = 0.0, x_max = 0.0;
  double z_min = 0.0, z_max = 0.0;
  std::size_t width = 1, height = 1;

  void validate() const;
  double x(std::size_t col) const;
  double z(std::size_t row) const;
  std::size_t nearest_col(double x) const;
  std::size_t nearest_row(double z) const;
  bool contains(double x, double z) const;
};

/// Raw beamformer outputs, `height` rows (depth, shallowest first) by
/// `width` columns (lateral).
class BeamformedImage {
 public:
  BeamformedImage(PixelGrid grid, Matrix values);

  const PixelGrid& grid() const noexcept { return grid_; }
  const Matrix& values() const noexcept { return values_; }
  std::size_t width() const noexcept { return grid_.width; }
  std::size_t height() const noexcept { return grid_.height; }

 private:
  PixelGrid grid_;
  Matrix values_;
};

}  // namespace atcbf

#endif  // ATCBF_TYPES_HPP
