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

#ifndef ATCBF_SIMULATOR_HPP
#define ATCBF_SIMULATOR_HPP

#include <cstdint>
#include <vector>

#include "atcbf/types.hpp"

namespace atcbf {

enum class PulseEnvelope { Gaussian, Hann };

struct PulseSpec {
  double f0 = 7.6e6;  // Hz
  double num_cycles = 2.5;
  PulseEnvelope envelope = PulseEnvelope::Gaussian;
  double amplitude = 1.0;

  void validate() const;
  /// Half-width of the waveform support in seconds; zero outside.
  double support() const;
};

/// Enveloped sin(2 pi f0 t), centered at t = 0.
///
/// The Hann envelope spans num_cycles / f0. The Gaussian envelope has
/// sigma = num_cycles / (2 f0 2.355) and is truncated at +-3 sigma.
double pulse_waveform(const PulseSpec& spec, double t);

struct Scatterer {
  double x = 0.0;  // m
  double z = 0.0;  // m, > 0 (below the array)
  double reflectivity = 1.0;
};

struct Phantom {
  std::vector<Scatterer> scatterers;

  void validate() const;
};

struct NoiseModel {
  double tof_jitter_std = 0.0;  // s, per element-scatterer path
  double additive_noise_std = 0.0;
  std::uint64_t rng_seed = 0;
  /// Added to the scatterer index when keying path jitter, so a phantom can
  /// be simulated in pieces that reproduce the jitter of the combined one.
  std::uint64_t scatterer_index_offset = 0;

  void validate() const;
};

enum class TxModel { PlaneWave0Deg };

/// Two-way plane-wave (0 deg) time of flight from the array to (x, z) and
/// back to the element at lateral position `element_x`.
inline double two_way_delay(double x, double z, double element_x, double c) {
  const double dx = x - element_x;
  return z / c + std::sqrt(dx * dx + z * z) / c;
}

/// Jitter realization for the path (element, scatterer) under `noise`.
/// Zero when tof_jitter_std == 0.
double path_jitter(const NoiseModel& noise, std::size_t element, std::size_t scatterer);

/// Pulse-echo RF data for a point phantom. Scatterers whose echoes fall
/// outside the sampling window are silently absent.
RFFrame simulate_frame(const ArrayGeometry& geometry, const SamplingSpec& sampling,
                       const PulseSpec& pulse, const Phantom& phantom,
                       const NoiseModel& noise, TxModel tx = TxModel::PlaneWave0Deg);

}  // namespace atcbf

#endif  // ATCBF_SIMULATOR_HPP
