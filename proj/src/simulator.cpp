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

#include "atcbf/simulator.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace atcbf {

namespace {

constexpr double kFwhmPerSigma = 2.355;
constexpr double kMinSpreadingRadius = 1e-3;  // m

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double gaussian_sigma(const PulseSpec& spec) {
  return spec.num_cycles / (2.0 * spec.f0 * kFwhmPerSigma);
}

}  // namespace

void PulseSpec::validate() const {
  if (!(f0 > 0.0) || !std::isfinite(f0)) throw Error(ErrorCode::InvalidConfig, "pulse f0 must be > 0");
  if (!(num_cycles > 0.0) || !std::isfinite(num_cycles))
    throw Error(ErrorCode::InvalidConfig, "pulse num_cycles must be > 0");
  if (!std::isfinite(amplitude)) throw Error(ErrorCode::InvalidConfig, "pulse amplitude must be finite");
}

double PulseSpec::support() const {
  if (envelope == PulseEnvelope::Hann) return 0.5 * num_cycles / f0;
  return 3.0 * gaussian_sigma(*this);
}

double pulse_waveform(const PulseSpec& spec, double t) {
  const double half = spec.support();
  if (!(std::abs(t) <= half)) return 0.0;
  double env;
  if (spec.envelope == PulseEnvelope::Hann) {
    env = 0.5 * (1.0 + std::cos(std::numbers::pi * t / half));
  } else {
    const double s = gaussian_sigma(spec);
    env = std::exp(-0.5 * (t * t) / (s * s));
  }
  return spec.amplitude * env * std::sin(2.0 * std::numbers::pi * spec.f0 * t);
}

void Phantom::validate() const {
  if (scatterers.empty()) throw Error(ErrorCode::InvalidConfig, "phantom has no scatterers");
  for (const auto& s : scatterers) {
    if (!std::isfinite(s.x) || !std::isfinite(s.z) || !std::isfinite(s.reflectivity))
      throw Error(ErrorCode::InvalidConfig, "scatterer fields must be finite");
    if (!(s.z > 0.0)) throw Error(ErrorCode::InvalidConfig, "scatterer depth z must be > 0");
    if (!(s.reflectivity > 0.0)) throw Error(ErrorCode::InvalidConfig, "scatterer reflectivity must be > 0");
  }
}

void NoiseModel::validate() const {
  if (!(tof_jitter_std >= 0.0) || !std::isfinite(tof_jitter_std))
    throw Error(ErrorCode::InvalidConfig, "tof_jitter_std must be >= 0");
  if (!(additive_noise_std >= 0.0) || !std::isfinite(additive_noise_std))
    throw Error(ErrorCode::InvalidConfig, "additive_noise_std must be >= 0");
}

double path_jitter(const NoiseModel& noise, std::size_t element, std::size_t scatterer) {
  if (noise.tof_jitter_std == 0.0) return 0.0;
  const std::uint64_t s = scatterer + noise.scatterer_index_offset;
  std::uint64_t key = splitmix64(noise.rng_seed ^ 0x6a09e667f3bcc908ULL);
  key = splitmix64(key ^ (std::uint64_t(element) << 32 | (s & 0xffffffffULL)));
  key = splitmix64(key ^ (s >> 32));
  std::mt19937_64 rng(key);
  std::normal_distribution<double> dist(0.0, noise.tof_jitter_std);
  return dist(rng);
}

RFFrame simulate_frame(const ArrayGeometry& geometry, const SamplingSpec& sampling,
                       const PulseSpec& pulse, const Phantom& phantom,
                       const NoiseModel& noise, TxModel /*tx*/) {
  sampling.validate();
  pulse.validate();
  phantom.validate();
  noise.validate();

  const std::size_t m_count = geometry.num_elements();
  const std::size_t t_count = sampling.num_samples;
  const double support = pulse.support();
  Matrix data = Matrix::Zero(Eigen::Index(m_count), Eigen::Index(t_count));

  for (std::size_t s = 0; s < phantom.scatterers.size(); ++s) {
    const Scatterer& sc = phantom.scatterers[s];
    for (std::size_t m = 0; m < m_count; ++m) {
      const double ex = geometry.element_x()[m];
      const double dx = sc.x - ex;
      const double r = std::sqrt(dx * dx + sc.z * sc.z);
      const double tau = sc.z / sampling.c + r / sampling.c + path_jitter(noise, m, s);
      const double gain = sc.reflectivity / std::max(r, kMinSpreadingRadius);

      const double first = std::ceil((tau - support - sampling.t0) * sampling.fs);
      const double last = std::floor((tau + support - sampling.t0) * sampling.fs);
      if (last < 0.0 || first > double(t_count - 1)) continue;
      const auto n0 = std::size_t(std::max(first, 0.0));
      const auto n1 = std::size_t(std::min(last, double(t_count - 1)));
      for (std::size_t n = n0; n <= n1; ++n) {
        const double t = sampling.t0 + double(n) / sampling.fs;
        data(Eigen::Index(m), Eigen::Index(n)) += gain * pulse_waveform(pulse, t - tau);
      }
    }
  }

  if (noise.additive_noise_std > 0.0) {
    std::mt19937_64 rng(splitmix64(noise.rng_seed ^ 0xbb67ae8584caa73bULL));
    std::normal_distribution<double> dist(0.0, noise.additive_noise_std);
    for (std::size_t m = 0; m < m_count; ++m)
      for (std::size_t n = 0; n < t_count; ++n) data(Eigen::Index(m), Eigen::Index(n)) += dist(rng);
  }

  return RFFrame(geometry, sampling, std::move(data));
}

}  // namespace atcbf
