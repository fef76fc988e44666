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

#ifndef ATCBF_POSTPROC_HPP
#define ATCBF_POSTPROC_HPP

#include "atcbf/types.hpp"

namespace atcbf {

enum class EnvelopeMode { Analytic, AbsValue };

/// Per axial line (image column): |analytic signal| via an FFT Hilbert
/// transform, or |value| in AbsValue mode.
BeamformedImage envelope(const BeamformedImage& image, EnvelopeMode mode = EnvelopeMode::Analytic);

/// Magnitude of the analytic signal of a single real sequence.
Vector analytic_magnitude(const Vector& signal);

struct DisplayConfig {
  double dynamic_range_db = 60.0;
  double gamma = 0.5;

  void validate() const;
};

/// d = 20 log10(env / max) clipped to [-DR, 0]; out = ((d + DR) / DR)^gamma.
/// An all-zero input maps to all zeros.
BeamformedImage log_compress_gamma(const BeamformedImage& env, const DisplayConfig& cfg);

}  // namespace atcbf

#endif  // ATCBF_POSTPROC_HPP
