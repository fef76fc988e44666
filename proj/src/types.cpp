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

#include "atcbf/types.hpp"

#include <cmath>
#include <sstream>

namespace atcbf {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::DegeneratePatch: return "DegeneratePatch";
    case ErrorCode::ReflectorNotFound: return "ReflectorNotFound";
    case ErrorCode::NoCrossing: return "NoCrossing";
    case ErrorCode::NoSecondaryLobe: return "NoSecondaryLobe";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

constexpr double kGeometryTol = 1e-12;

[[noreturn]] void invalid(const std::string& msg) {
  throw Error(ErrorCode::InvalidArgument, msg);
}

}  // namespace

ArrayGeometry ArrayGeometry::uniform(std::size_t num_elements, double pitch) {
  std::vector<double> x(num_elements);
  const double center = 0.5 * double(num_elements - 1);
  for (std::size_t i = 0; i < num_elements; ++i) x[i] = (double(i) - center) * pitch;
  return ArrayGeometry(std::move(x), pitch);
}

ArrayGeometry::ArrayGeometry(std::vector<double> element_x, double pitch)
    : element_x_(std::move(element_x)), pitch_(pitch) {
  const std::size_t m = element_x_.size();
  if (m < 2) invalid("array geometry needs at least 2 elements");
  if (!(pitch_ > 0.0) || !std::isfinite(pitch_)) invalid("array pitch must be positive");
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double d = element_x_[i + 1] - element_x_[i];
    if (!(d > 0.0)) invalid("element positions must be strictly increasing");
    if (std::abs(d - pitch_) > kGeometryTol) invalid("element spacing differs from pitch");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (std::abs(element_x_[i] + element_x_[m - 1 - i]) > kGeometryTol)
      invalid("element positions must be symmetric about 0");
  }
}

void SamplingSpec::validate() const {
  if (!(fs > 0.0) || !std::isfinite(fs)) throw Error(ErrorCode::InvalidConfig, "sampling fs must be > 0");
  if (num_samples == 0) throw Error(ErrorCode::InvalidConfig, "sampling window has T = 0 samples");
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorCode::InvalidConfig, "sound speed c must be > 0");
  if (!std::isfinite(t0)) throw Error(ErrorCode::InvalidConfig, "sampling t0 must be finite");
}

RFFrame::RFFrame(ArrayGeometry geometry, SamplingSpec sampling, Matrix data)
    : geometry_(std::move(geometry)), sampling_(sampling), data_(std::move(data)) {
  sampling_.validate();
  if (std::size_t(data_.rows()) != geometry_.num_elements() ||
      std::size_t(data_.cols()) != sampling_.num_samples) {
    std::ostringstream os;
    os << "RF data is " << data_.rows() << "x" << data_.cols() << ", expected "
       << geometry_.num_elements() << "x" << sampling_.num_samples;
    throw Error(ErrorCode::SizeMismatch, os.str());
  }
  if (!data_.allFinite()) invalid("RF data contains non-finite samples");
}

AlignedPatch::AlignedPatch(Matrix phi, std::size_t half_width)
    : phi_(std::move(phi)), half_width_(half_width) {
  if (std::size_t(phi_.cols()) != 2 * half_width_ + 1)
    invalid("aligned patch must have 2K+1 columns");
  if (phi_.rows() < 1) invalid("aligned patch needs at least one channel");
  if (!phi_.allFinite()) invalid("aligned patch contains non-finite values");
}

TemporalApodization::TemporalApodization(Matrix a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols() || a_.rows() % 2 != 1)
    invalid("temporal apodization must be square with an odd dimension");
  if (!a_.allFinite()) invalid("temporal apodization contains non-finite values");
  for (Eigen::Index i = 0; i < a_.rows(); ++i)
    for (Eigen::Index j = i + 1; j < a_.cols(); ++j)
      if (a_(i, j) != a_(j, i)) invalid("temporal apodization must be exactly symmetric");
}

void PixelGrid::validate() const {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(z_min) ||
      !std::isfinite(z_max))
    throw Error(ErrorCode::InvalidConfig, "grid extents must be finite");
  if (x_min > x_max || z_min > z_max) throw Error(ErrorCode::InvalidConfig, "grid extents must be ordered");
  if (width < 1 || height < 1) throw Error(ErrorCode::InvalidConfig, "grid must be at least 1x1");
}

double PixelGrid::x(std::size_t col) const {
  if (width == 1) return 0.5 * (x_min + x_max);
  return x_min + (x_max - x_min) * double(col) / double(width - 1);
}

double PixelGrid::z(std::size_t row) const {
  if (height == 1) return 0.5 * (z_min + z_max);
  return z_min + (z_max - z_min) * double(row) / double(height - 1);
}

namespace {
std::size_t nearest_index(double v, double lo, double hi, std::size_t n) {
  if (n == 1 || hi == lo) return 0;
  const double u = std::round((v - lo) / (hi - lo) * double(n - 1));
  if (u <= 0.0) return 0;
  if (u >= double(n - 1)) return n - 1;
  return std::size_t(u);
}
}  // namespace

std::size_t PixelGrid::nearest_col(double xv) const { return nearest_index(xv, x_min, x_max, width); }
std::size_t PixelGrid::nearest_row(double zv) const { return nearest_index(zv, z_min, z_max, height); }

bool PixelGrid::contains(double xv, double zv) const {
  return xv >= x_min && xv <= x_max && zv >= z_min && zv <= z_max;
}

BeamformedImage::BeamformedImage(PixelGrid grid, Matrix values)
    : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (std::size_t(values_.rows()) != grid_.height || std::size_t(values_.cols()) != grid_.width)
    throw Error(ErrorCode::SizeMismatch, "image values do not match grid dimensions");
  if (!values_.allFinite()) invalid("image contains non-finite values");
}

}  // namespace atcbf
