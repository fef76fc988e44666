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

#ifndef ATCBF_METRICS_HPP
#define ATCBF_METRICS_HPP

#include <string>
#include <vector>

#include "atcbf/types.hpp"

namespace atcbf {

enum class PsfAxis { Lateral, Axial };

const char* to_string(PsfAxis axis);

/// 1-D cut through a point-spread function, normalized to max = 1.
struct PSFCut {
  PsfAxis axis = PsfAxis::Lateral;
  std::vector<double> coordinates;  // m, strictly increasing
  std::vector<double> amplitudes;   // envelope domain

  /// Validates sizes and ordering, then rescales amplitudes to max = 1.
  static PSFCut normalized(PsfAxis axis, std::vector<double> coordinates,
                           std::vector<double> amplitudes);
};

struct PsfOptions {
  PsfAxis axis = PsfAxis::Lateral;
  std::size_t window = 40;  // +- pixels around the peak
};

/// Cut through the local peak nearest (x, z) of an envelope image.
///
/// The peak is the maximum within +-max(window / 4, 2) pixels of the nominal
/// pixel on both axes; the cut runs through it along `axis` over +-window
/// pixels. Throws InvalidConfig if (x, z) is outside the grid and
/// ReflectorNotFound if the window max is below 10x the window median.
PSFCut extract_psf(const BeamformedImage& envelope, double x, double z, const PsfOptions& options);

/// Width between the half-maximum crossings around the global peak, with
/// linear interpolation between samples. Throws NoCrossing.
double fwhm(const PSFCut& cut);

struct LobeContrast {
  double linear = 0.0;
  double db = 0.0;
};

/// Primary (global peak) over the highest other local maximum; plateaus count
/// as one extremum. Throws NoSecondaryLobe.
LobeContrast lobe_contrast(const PSFCut& cut);

struct PSFMetrics {
  double fwhm = 0.0;              // m
  double resolution = 0.0;        // 1 / m
  double contrast_linear = 0.0;   // +inf when no secondary lobe
  double contrast_db = 0.0;
  std::vector<std::string> flags;  // e.g. "no_secondary_lobe"
};

/// fwhm + lobe_contrast on one cut; a missing secondary lobe becomes the +inf
/// sentinel with a flag instead of an error.
PSFMetrics psf_metrics(const PSFCut& cut);

}  // namespace atcbf

#endif  // ATCBF_METRICS_HPP
