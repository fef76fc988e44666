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

#include "atcbf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace atcbf {

const char* to_string(PsfAxis axis) { return axis == PsfAxis::Lateral ? "lateral" : "axial"; }

PSFCut PSFCut::normalized(PsfAxis axis, std::vector<double> coordinates,
                          std::vector<double> amplitudes) {
  if (coordinates.size() != amplitudes.size() || coordinates.empty())
    throw Error(ErrorCode::InvalidArgument, "PSF cut needs matching, non-empty coordinates and amplitudes");
  for (std::size_t i = 0; i + 1 < coordinates.size(); ++i)
    if (!(coordinates[i + 1] > coordinates[i]))
      throw Error(ErrorCode::InvalidArgument, "PSF cut coordinates must be strictly increasing");
  const double peak = *std::max_element(amplitudes.begin(), amplitudes.end());
  if (!(peak > 0.0) || !std::isfinite(peak))
    throw Error(ErrorCode::InvalidArgument, "PSF cut has no positive peak");
  for (double& a : amplitudes) {
    if (a < 0.0) throw Error(ErrorCode::InvalidArgument, "PSF amplitudes must be non-negative");
    a /= peak;
  }
  return PSFCut{axis, std::move(coordinates), std::move(amplitudes)};
}

PSFCut extract_psf(const BeamformedImage& envelope, double x, double z, const PsfOptions& options) {
  const PixelGrid& grid = envelope.grid();
  if (!grid.contains(x, z)) {
    std::ostringstream os;
    os << "reflector (" << x << ", " << z << ") is outside the image grid";
    throw Error(ErrorCode::InvalidConfig, os.str());
  }
  const Matrix& v = envelope.values();
  const auto rows = Eigen::Index(grid.height);
  const auto cols = Eigen::Index(grid.width);
  const auto w = Eigen::Index(std::max<std::size_t>(options.window, 1));
  const Eigen::Index search = std::max<Eigen::Index>(w / 4, 2);

  const auto r0 = Eigen::Index(grid.nearest_row(z));
  const auto c0 = Eigen::Index(grid.nearest_col(x));
  Eigen::Index pr = r0, pc = c0;
  for (Eigen::Index r = std::max<Eigen::Index>(r0 - search, 0); r <= std::min(r0 + search, rows - 1); ++r)
    for (Eigen::Index c = std::max<Eigen::Index>(c0 - search, 0); c <= std::min(c0 + search, cols - 1); ++c)
      if (v(r, c) > v(pr, pc)) { pr = r; pc = c; }

  std::vector<double> coords, amps;
  if (options.axis == PsfAxis::Lateral) {
    for (Eigen::Index c = std::max<Eigen::Index>(pc - w, 0); c <= std::min(pc + w, cols - 1); ++c) {
      coords.push_back(grid.x(std::size_t(c)));
      amps.push_back(v(pr, c));
    }
  } else {
    for (Eigen::Index r = std::max<Eigen::Index>(pr - w, 0); r <= std::min(pr + w, rows - 1); ++r) {
      coords.push_back(grid.z(std::size_t(r)));
      amps.push_back(v(r, pc));
    }
  }
  if (coords.size() < 3) throw Error(ErrorCode::ReflectorNotFound, "PSF window has fewer than 3 samples");

  std::vector<double> sorted = amps;
  std::nth_element(sorted.begin(), sorted.begin() + std::ptrdiff_t(sorted.size() / 2), sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double peak = *std::max_element(amps.begin(), amps.end());
  if (!(peak > 0.0) || peak < 10.0 * median) {
    std::ostringstream os;
    os << "no peak above the noise floor near (" << x << ", " << z << ")";
    throw Error(ErrorCode::ReflectorNotFound, os.str());
  }
  return PSFCut::normalized(options.axis, std::move(coords), std::move(amps));
}

double fwhm(const PSFCut& cut) {
  const auto& a = cut.amplitudes;
  const auto& x = cut.coordinates;
  const std::size_t p = std::size_t(std::max_element(a.begin(), a.end()) - a.begin());
  const double half = 0.5 * a[p];

  std::size_t i = p;
  while (i > 0 && a[i - 1] >= half) --i;
  if (i == 0) throw Error(ErrorCode::NoCrossing, "PSF never falls below half maximum on the left");
  const double left = x[i - 1] + (half - a[i - 1]) / (a[i] - a[i - 1]) * (x[i] - x[i - 1]);

  std::size_t j = p;
  while (j + 1 < a.size() && a[j + 1] >= half) ++j;
  if (j + 1 == a.size()) throw Error(ErrorCode::NoCrossing, "PSF never falls below half maximum on the right");
  const double right = x[j] + (a[j] - half) / (a[j] - a[j + 1]) * (x[j + 1] - x[j]);
  return right - left;
}

LobeContrast lobe_contrast(const PSFCut& cut) {
  const auto& a = cut.amplitudes;
  const std::size_t n = a.size();
  const std::size_t p = std::size_t(std::max_element(a.begin(), a.end()) - a.begin());

  double secondary = -1.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;  // [i, j] is a plateau
    while (j + 1 < n && a[j + 1] == a[i]) ++j;
    const bool rises = i > 0 && a[i - 1] < a[i];
    const bool falls = j + 1 < n && a[j + 1] < a[i];
    const bool holds_primary = p >= i && p <= j;
    if (rises && falls && !holds_primary) secondary = std::max(secondary, a[i]);
    i = j + 1;
  }
  if (!(secondary > 0.0)) throw Error(ErrorCode::NoSecondaryLobe, "PSF has no secondary lobe");
  LobeContrast out;
  out.linear = a[p] / secondary;
  out.db = 20.0 * std::log10(out.linear);
  return out;
}

PSFMetrics psf_metrics(const PSFCut& cut) {
  PSFMetrics m;
  m.fwhm = fwhm(cut);
  m.resolution = 1.0 / m.fwhm;
  try {
    const LobeContrast c = lobe_contrast(cut);
    m.contrast_linear = c.linear;
    m.contrast_db = c.db;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoSecondaryLobe) throw;
    m.contrast_linear = std::numeric_limits<double>::infinity();
    m.contrast_db = std::numeric_limits<double>::infinity();
    m.flags.push_back("no_secondary_lobe");
  }
  return m;
}

}  // namespace atcbf
