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

#include "atcbf/tof_align.hpp"

#include <cmath>

namespace atcbf {

double sample_channel(const RFFrame& frame, std::size_t m, double t) {
  const SamplingSpec& s = frame.sampling();
  const double u = (t - s.t0) * s.fs;
  const double last = double(s.num_samples - 1);
  if (!(u >= 0.0) || !(u <= last)) return 0.0;
  const auto row = frame.data().row(Eigen::Index(m));
  const double base = std::floor(u);
  const auto i0 = Eigen::Index(base);
  if (base >= last) return row(i0);
  const double frac = u - base;
  return row(i0) + frac * (row(i0 + 1) - row(i0));
}

AlignedPatch align_pixel(const RFFrame& frame, double x, double z, std::size_t half_width,
                         TxModel /*tx*/, double delay_offset) {
  const std::size_t m_count = frame.num_channels();
  const int k_half = int(half_width);
  const double c = frame.sampling().c;
  const double dt = 1.0 / frame.sampling().fs;
  Matrix phi(Matrix::Zero(Eigen::Index(m_count), Eigen::Index(2 * half_width + 1)));
  for (std::size_t m = 0; m < m_count; ++m) {
    const double tau = two_way_delay(x, z, frame.geometry().element_x()[m], c) + delay_offset;
    for (int k = -k_half; k <= k_half; ++k)
      phi(Eigen::Index(m), k + k_half) = sample_channel(frame, m, tau + double(k) * dt);
  }
  return AlignedPatch(std::move(phi), half_width);
}

}  // namespace atcbf
