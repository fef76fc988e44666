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

#ifndef ATCBF_TOF_ALIGN_HPP
#define ATCBF_TOF_ALIGN_HPP

#include "atcbf/simulator.hpp"
#include "atcbf/types.hpp"

namespace atcbf {

/// Reads channel `m` of `frame` at absolute time `t` by linear interpolation.
/// Times outside [t0, t0 + (T-1)/fs] read as 0.
double sample_channel(const RFFrame& frame, std::size_t m, double t);

/// Builds Phi for pixel (x, z): Phi[m, K+k] is channel m at time
/// tau_m(x, z) + delay_offset + k / fs, for k in [-K, K]. The aperture is
/// fixed; only the read time slides.
AlignedPatch align_pixel(const RFFrame& frame, double x, double z, std::size_t half_width,
                         TxModel tx = TxModel::PlaneWave0Deg, double delay_offset = 0.0);

}  // namespace atcbf

#endif  // ATCBF_TOF_ALIGN_HPP
