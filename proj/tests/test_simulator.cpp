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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "atcbf/postproc.hpp"
#include "atcbf/simulator.hpp"

using namespace atcbf;

namespace {

SamplingSpec default_sampling(std::size_t t = 1200) { return {4.0 * 7.6e6, 0.0, t, 1540.0}; }

Phantom single(double x, double z, double refl = 1.0) { return Phantom{{Scatterer{x, z, refl}}}; }

}  // namespace

TEST_CASE("pulse support and symmetry") {
  PulseSpec p;
  CHECK(pulse_waveform(p, 10.0 * p.support()) == 0.0);
  CHECK(pulse_waveform(p, -1.01 * p.support()) == 0.0);
  p.envelope = PulseEnvelope::Hann;
  CHECK(pulse_waveform(p, 0.0) == 0.0);
  CHECK(p.support() == doctest::Approx(0.5 * 2.5 / 7.6e6));
  CHECK(pulse_waveform(p, 1e-8) == doctest::Approx(-pulse_waveform(p, -1e-8)));
}

TEST_CASE("gaussian envelope width follows the sigma formula") {
  PulseSpec p;
  const double sigma = p.num_cycles / (2.0 * p.f0 * 2.355);
  CHECK(p.support() == doctest::Approx(3.0 * sigma));
  // Quarter period: carrier crest, so the waveform equals the envelope.
  const double tq = 0.25 / p.f0;
  CHECK(pulse_waveform(p, tq) == doctest::Approx(std::exp(-0.5 * tq * tq / (sigma * sigma))));
}

TEST_CASE("pulse energy matches a quadrature oracle") {
  for (auto env : {PulseEnvelope::Gaussian, PulseEnvelope::Hann}) {
    PulseSpec p;
    p.envelope = env;
    const double half = p.support();
    // Oracle: composite Simpson on the closed-form envelope and carrier.
    const int n = 2 * 20000;
    const double h = 2.0 * half / n;
    auto f = [&](double t) {
      double e;
      if (env == PulseEnvelope::Hann) {
        e = 0.5 * (1.0 + std::cos(std::numbers::pi * t / half));
      } else {
        const double s = p.num_cycles / (2.0 * p.f0 * 2.355);
        e = std::exp(-0.5 * t * t / (s * s));
      }
      const double v = e * std::sin(2.0 * std::numbers::pi * p.f0 * t);
      return v * v;
    };
    double simpson = f(-half) + f(half);
    for (int i = 1; i < n; ++i) simpson += (i % 2 ? 4.0 : 2.0) * f(-half + i * h);
    simpson *= h / 3.0;
    // Rectangle rule on the waveform at 10x the default 4 f0 sampling rate.
    double fine = 0.0;
    const double dt = 1.0 / (10.0 * 4.0 * p.f0);
    for (double t = -half; t <= half; t += dt) fine += pulse_waveform(p, t) * pulse_waveform(p, t) * dt;
    CHECK(std::abs(fine - simpson) / simpson <= 1e-3);
  }
}

TEST_CASE("on-axis scatterer peaks at the two-way delay on the centre element") {
  const auto g = ArrayGeometry::uniform(129, 3e-4);  // odd count: element 64 at x = 0
  const auto s = default_sampling();
  const RFFrame f = simulate_frame(g, s, PulseSpec{}, single(0.0, 20e-3), NoiseModel{});
  const Vector env = analytic_magnitude(f.data().row(64).transpose());
  Eigen::Index peak;
  env.maxCoeff(&peak);
  const double expected = (2.0 * 20e-3 / 1540.0 - s.t0) * s.fs;
  CHECK(std::abs(double(peak) - std::round(expected)) <= 0.0);
}

TEST_CASE("per-channel envelope peaks match the closed-form delay") {
  const auto g = ArrayGeometry::uniform(128, 3e-4);
  const auto s = default_sampling();
  const double x = 1.3e-3, z = 19e-3;
  const RFFrame f = simulate_frame(g, s, PulseSpec{}, single(x, z), NoiseModel{});
  for (std::size_t m = 0; m < 128; ++m) {
    const double ex = g.element_x()[m];
    const double tau = z / s.c + std::sqrt((x - ex) * (x - ex) + z * z) / s.c;
    const Vector env = analytic_magnitude(f.data().row(Eigen::Index(m)).transpose());
    Eigen::Index peak;
    env.maxCoeff(&peak);
    CHECK(std::abs(double(peak) - (tau - s.t0) * s.fs) <= 0.5);
  }
}

TEST_CASE("identical seeds give bit-identical frames") {
  const auto g = ArrayGeometry::uniform(16, 3e-4);
  NoiseModel n{25e-9, 0.3, 99, 0};
  const Phantom ph{{Scatterer{0.0, 10e-3, 1.0}, Scatterer{1e-3, 12e-3, 0.5}}};
  const RFFrame a = simulate_frame(g, default_sampling(), PulseSpec{}, ph, n);
  const RFFrame b = simulate_frame(g, default_sampling(), PulseSpec{}, ph, n);
  CHECK(a.data() == b.data());
  n.rng_seed = 100;
  const RFFrame c = simulate_frame(g, default_sampling(), PulseSpec{}, ph, n);
  CHECK(a.data() != c.data());
}

TEST_CASE("jitter is keyed per path and fixed across calls") {
  NoiseModel n{25e-9, 0.0, 5, 0};
  CHECK(path_jitter(n, 3, 1) == path_jitter(n, 3, 1));
  CHECK(path_jitter(n, 3, 1) != path_jitter(n, 1, 3));
  NoiseModel shifted = n;
  shifted.scatterer_index_offset = 2;
  CHECK(path_jitter(shifted, 7, 0) == path_jitter(n, 7, 2));
  n.tof_jitter_std = 0.0;
  CHECK(path_jitter(n, 3, 1) == 0.0);
  // Sample std over many paths.
  NoiseModel big{25e-9, 0.0, 1, 0};
  double s2 = 0.0;
  const int count = 20000;
  for (int i = 0; i < count; ++i) s2 += std::pow(path_jitter(big, std::size_t(i % 128), std::size_t(i / 128)), 2);
  CHECK(std::sqrt(s2 / count) == doctest::Approx(25e-9).epsilon(0.03));
}

TEST_CASE("linearity over a phantom split with an index offset") {
  const auto g = ArrayGeometry::uniform(32, 3e-4);
  const Scatterer a1{0.0, 10e-3, 1.0}, a2{-1e-3, 11e-3, 0.7}, b1{0.5e-3, 10.5e-3, 2.0};
  NoiseModel joint{25e-9, 0.0, 11, 0};
  NoiseModel second = joint;
  second.scatterer_index_offset = 2;  // b1 is scatterer #2 in the union
  const auto s = default_sampling(800);
  const RFFrame uni = simulate_frame(g, s, PulseSpec{}, Phantom{{a1, a2, b1}}, joint);
  const RFFrame fa = simulate_frame(g, s, PulseSpec{}, Phantom{{a1, a2}}, joint);
  const RFFrame fb = simulate_frame(g, s, PulseSpec{}, Phantom{{b1}}, second);
  CHECK(uni.data() == fa.data() + fb.data());
}

TEST_CASE("doubling reflectivity doubles the contribution") {
  const auto g = ArrayGeometry::uniform(16, 3e-4);
  const RFFrame one = simulate_frame(g, default_sampling(), PulseSpec{}, single(0.0, 10e-3, 1.0), NoiseModel{});
  const RFFrame two = simulate_frame(g, default_sampling(), PulseSpec{}, single(0.0, 10e-3, 2.0), NoiseModel{});
  CHECK(two.data() == 2.0 * one.data());
}

TEST_CASE("echoes outside the window are absent and T = 0 is rejected") {
  const auto g = ArrayGeometry::uniform(8, 3e-4);
  const RFFrame f = simulate_frame(g, default_sampling(100), PulseSpec{}, single(0.0, 50e-3), NoiseModel{});
  CHECK(f.data().isZero(0.0));
  SamplingSpec empty = default_sampling(0);
  CHECK_THROWS_AS(simulate_frame(g, empty, PulseSpec{}, single(0.0, 1e-3), NoiseModel{}), Error);
  try {
    simulate_frame(g, empty, PulseSpec{}, single(0.0, 1e-3), NoiseModel{});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidConfig);
  }
  CHECK_THROWS_AS(simulate_frame(g, default_sampling(), PulseSpec{}, Phantom{}, NoiseModel{}), Error);
}

TEST_CASE("additive noise has the requested spread") {
  const auto g = ArrayGeometry::uniform(64, 3e-4);
  const RFFrame f = simulate_frame(g, default_sampling(), PulseSpec{}, single(0.0, 80e-3),
                                   NoiseModel{0.0, 0.5, 3, 0});
  const double mean = f.data().mean();
  const double sd = std::sqrt((f.data().array() - mean).square().mean());
  CHECK(std::abs(mean) < 0.01);
  CHECK(sd == doctest::Approx(0.5).epsilon(0.01));
}
