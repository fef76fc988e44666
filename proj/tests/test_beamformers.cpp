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

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>

#include "atcbf/beamformers.hpp"
#include "atcbf/simulator.hpp"
#include "atcbf/tof_align.hpp"
#include "oracles.hpp"

using namespace atcbf;

namespace {

AlignedPatch random_patch(std::mt19937_64& rng, Eigen::Index m, std::size_t k) {
  return AlignedPatch(oracle::random_matrix(rng, m, Eigen::Index(2 * k + 1)), k);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("das examples") {
  CHECK(das_pixel(AlignedPatch(Matrix::Ones(4, 1), 0)) == 1.0);
  Matrix m(2, 1);
  m << 1, -1;
  CHECK(das_pixel(AlignedPatch(m, 0)) == 0.0);
  std::mt19937_64 rng(1);
  const AlignedPatch p = random_patch(rng, 9, 2);
  double s = 0.0;
  for (int i = 0; i < 9; ++i) s += p.phi()(i, 2);
  CHECK(das_pixel(p) == doctest::Approx(s / 9.0).epsilon(1e-15));
}

TEST_CASE("mv covariance examples") {
  Matrix phi(2, 1);
  phi << 1, 2;
  const Matrix r = mv_covariance(AlignedPatch(phi, 0));
  CHECK(r(0, 0) == 1.0);
  CHECK(r(0, 1) == 2.0);
  CHECK(r(1, 0) == 2.0);
  CHECK(r(1, 1) == 4.0);
  CHECK(mv_covariance(AlignedPatch(Matrix::Zero(3, 3), 1)).isZero(0.0));
  std::mt19937_64 rng(2);
  const AlignedPatch p = random_patch(rng, 8, 5);
  CHECK((mv_covariance(p) - oracle::mv_covariance_loops(p.phi())).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("mv weights examples") {
  for (int m : {2, 5, 16}) {
    const WeightSet w = mv_weights(Matrix::Identity(m, m), 1e-10);
    CHECK((w.w - Vector::Constant(m, 1.0 / m)).cwiseAbs().maxCoeff() <= 1e-15);
  }
  Matrix r = Matrix::Zero(2, 2);
  r(0, 0) = 1;
  r(1, 1) = 4;
  const WeightSet small = mv_weights(r, 1e-12);
  CHECK(small.w[0] == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(small.w[1] == doctest::Approx(0.2).epsilon(1e-9));
  const WeightSet big = mv_weights(r, 1e6);
  CHECK(big.w[0] == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(big.w[1] == doctest::Approx(0.5).epsilon(1e-5));

  std::mt19937_64 rng(3);
  const Matrix spd = oracle::random_spd(rng, 16);
  const WeightSet w = mv_weights(spd, 1e-10);
  CHECK(oracle::rel_err(w.w, oracle::kkt_weights(spd, 1e-10)) <= 1e-8);
  CHECK(std::abs(w.constraint_sum() - 1.0) <= 1e-10);
  CHECK(code_of([] { mv_weights(Matrix::Zero(3, 3), 1e-10); }) == ErrorCode::DegeneratePatch);
  CHECK(code_of([&] { mv_weights(spd, 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("triangular apodization") {
  CHECK(temporal_apodization_triangular(0).matrix() == Matrix::Ones(1, 1));
  Matrix k1(3, 3);
  k1 << 1, 1, 1, 1, 2, 1, 1, 1, 1;
  CHECK(temporal_apodization_triangular(1).matrix() == k1);
  const TemporalApodization a5 = temporal_apodization_triangular(5);
  CHECK(a5(0, 0) == 6.0);
  for (int i = -5; i <= 5; ++i) {
    CHECK(a5(i, 5) == 1.0);
    CHECK(a5(-5, i) == 1.0);
  }
  CHECK(a5(2, -3) == 3.0);
}

TEST_CASE("atc covariance examples") {
  std::mt19937_64 rng(4);
  const AlignedPatch p0 = random_patch(rng, 5, 0);
  const Matrix r0 = atc_covariance(p0, temporal_apodization_triangular(0));
  CHECK((r0 - p0.central() * p0.central().transpose()).cwiseAbs().maxCoeff() == 0.0);

  const AlignedPatch p = random_patch(rng, 4, 2);
  const TemporalApodization a = temporal_apodization_triangular(2);
  const Matrix r = atc_covariance(p, a);
  CHECK((r - oracle::atc_covariance_loops(p.phi(), a.matrix())).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((r - r.transpose()).cwiseAbs().maxCoeff() <= 1e-12);

  const TemporalApodization ones = temporal_apodization_ones(2);
  const Matrix ro = atc_covariance(p, ones);
  for (int t = 0; t < 20; ++t) {
    Vector w = oracle::random_matrix(rng, 20, 1);
    w /= w.sum();
    const WeightSet ws{w, 4, 2};
    const double z = apply_weights(p, ws);
    CHECK(quadratic_objective(ro, w) == doctest::Approx(z * z).epsilon(1e-10));
  }
  CHECK(code_of([&] { atc_covariance(p, temporal_apodization_ones(1)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("atc weights examples") {
  // Covariance dominated by loading: uniform weights.
  const WeightSet iso = atc_weights(Matrix::Identity(12, 12), 1e-10, 1);
  CHECK((iso.w - Vector::Constant(12, 1.0 / 12.0)).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(iso.num_channels == 4);

  std::mt19937_64 rng(5);
  const AlignedPatch p0 = random_patch(rng, 6, 0);
  const WeightSet a0 = atc_weights(atc_covariance(p0, temporal_apodization_triangular(0)), 1e-10, 0);
  const WeightSet m0 = mv_weights(mv_covariance(p0), 1e-10);
  CHECK(a0.w == m0.w);

  const AlignedPatch p = random_patch(rng, 8, 2);
  const Matrix r = atc_covariance(p, temporal_apodization_triangular(2));
  const WeightSet w = atc_weights(r, 1e-6, 2);
  const Vector want = oracle::kkt_weights(r, 1e-6);
  CHECK(oracle::rel_err(w.w, want) <= 1e-8);
  CHECK(std::abs(w.constraint_sum() - 1.0) <= 1e-8);

  // Pixel output against the oracle weights.
  Vector stacked(40);
  for (int k = 0; k < 5; ++k) stacked.segment(8 * k, 8) = p.phi().col(k);
  const PixelOutput z = atc_pixel(p, temporal_apodization_triangular(2), 1e-6);
  CHECK(std::abs(z.value - stacked.dot(want)) <= 1e-8 * std::max(1.0, std::abs(z.value)));
}

TEST_CASE("degenerate patches") {
  const AlignedPatch zero(Matrix::Zero(4, 3), 1);
  const PixelOutput a = atc_pixel(zero, temporal_apodization_triangular(1), 1e-10);
  CHECK(a.value == 0.0);
  CHECK(a.degenerate);
  CHECK(atc_pixel_lowrank(zero, temporal_apodization_triangular(1), 1e-10).degenerate);
  const PixelOutput m = mv_pixel(zero, 1e-10);
  CHECK(m.degenerate);
  CHECK(m.value == 0.0);
  CHECK(mv_pixel_lowrank(zero, 1e-10).degenerate);
}

TEST_CASE("equal columns keep the constraint and a finite output") {
  Vector v(6);
  v << 1, -2, 0.5, 3, 0, 1;
  Matrix phi(6, 5);
  for (int k = 0; k < 5; ++k) phi.col(k) = v;
  const AlignedPatch p(phi, 2);
  const auto a = temporal_apodization_triangular(2);
  const WeightSet w = atc_weights(atc_covariance(p, a), 1e-10, 2);
  CHECK(std::abs(w.constraint_sum() - 1.0) <= 1e-8);
  CHECK(std::isfinite(atc_pixel(p, a, 1e-10).value));
  CHECK(std::isfinite(atc_pixel_lowrank(p, a, 1e-10).value));
}

TEST_CASE("low-rank weights agree with the dense route") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 60; ++t) {
    const Eigen::Index m = 4 + Eigen::Index(rng() % 20);
    const std::size_t k = rng() % 4;
    const AlignedPatch p = random_patch(rng, m, k);
    for (double eps : {1e-2, 1e-4}) {
      const WeightSet md = mv_weights(mv_covariance(p), eps);
      const WeightSet ml = mv_weights_lowrank(p, eps);
      CHECK(oracle::rel_err(ml.w, md.w) <= 1e-10);
      for (auto a : {temporal_apodization_triangular(k), temporal_apodization_ones(k)}) {
        const WeightSet ad = atc_weights(atc_covariance(p, a), eps, k);
        const WeightSet al = atc_weights_lowrank(p, a, eps);
        CHECK(oracle::rel_err(al.w, ad.w) <= 1e-10);
        const double zd = apply_weights(p, ad), zl = atc_pixel_lowrank(p, a, eps).value;
        CHECK(std::abs(zd - zl) <= 1e-9 * std::max(std::abs(zd), 1e-3));
      }
      CHECK(mv_pixel_lowrank(p, eps).value ==
            doctest::Approx(mv_pixel(p, eps).value).epsilon(1e-9).scale(1e-3));
    }
  }
}

TEST_CASE("low-rank route stays accurate at the default loading") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const AlignedPatch p = random_patch(rng, 16, 5);
    const auto a = temporal_apodization_triangular(5);
    const WeightSet al = atc_weights_lowrank(p, a, 1e-10);
    const Matrix r = atc_covariance(p, a);
    CHECK(std::abs(al.constraint_sum() - 1.0) <= 1e-8);
    // The loaded system has condition ~1e10; compare against the extended
    // precision oracle rather than the double dense route.
    CHECK(oracle::rel_err(al.w, oracle::kkt_weights(r, 1e-10)) <= 1e-5);
  }
}

TEST_CASE("beamform_image basics") {
  const auto g = ArrayGeometry::uniform(16, 3e-4);
  const SamplingSpec s{30.4e6, 0.0, 600, 1540.0};
  const RFFrame zero(g, s, Matrix::Zero(16, 600));
  const PixelGrid grid{-1e-3, 1e-3, 5e-3, 8e-3, 4, 5};
  BeamformerConfig das{"das", Method::Das};
  CHECK(beamform_image(zero, grid, das).image.values().isZero(0.0));
  BeamformerConfig atc{"atc", Method::Atc, 2};
  const auto res = beamform_image(zero, grid, atc);
  CHECK(res.report.degenerate_pixels == 20);

  const RFFrame f = simulate_frame(g, s, PulseSpec{}, Phantom{{Scatterer{0.2e-3, 6e-3, 1.0}}},
                                   NoiseModel{10e-9, 0.1, 3, 0});
  const PixelGrid one{0.1e-3, 0.1e-3, 6.1e-3, 6.1e-3, 1, 1};
  const AlignedPatch p = align_pixel(f, 0.1e-3, 6.1e-3, 2);
  CHECK(beamform_image(f, one, das).image.values()(0, 0) == das_pixel(p));
  atc.solver = SolverKind::Dense;
  CHECK(beamform_image(f, one, atc).image.values()(0, 0) ==
        atc_pixel(p, temporal_apodization_triangular(2), 1e-10).value);
  BeamformerConfig mv{"mv", Method::Mv, 2, 1e-10, ApodizationKind::Triangular, {}, SolverKind::Dense};
  CHECK(beamform_image(f, one, mv).image.values()(0, 0) == mv_pixel(p, 1e-10).value);
}

TEST_CASE("beamform_image is independent of the thread count") {
  const auto g = ArrayGeometry::uniform(32, 3e-4);
  const SamplingSpec s{30.4e6, 0.0, 700, 1540.0};
  const RFFrame f = simulate_frame(g, s, PulseSpec{}, Phantom{{Scatterer{0.0, 8e-3, 1.0}}},
                                   NoiseModel{25e-9, 0.2, 9, 0});
  const PixelGrid grid{-1e-3, 1e-3, 7e-3, 9e-3, 9, 13};
  for (Method m : {Method::Das, Method::Mv, Method::Atc}) {
    BeamformerConfig c{"x", m, 3};
    const auto one = beamform_image(f, grid, c, 1);
    const auto four = beamform_image(f, grid, c, 4);
    CHECK(one.image.values() == four.image.values());
  }
}

TEST_CASE("atc weight cost grows with K_tot") {
  std::mt19937_64 rng(8);
  std::vector<double> medians;
  for (std::size_t k : {0, 1, 3, 5}) {
    const AlignedPatch p = random_patch(rng, 16, k);
    const Matrix r = atc_covariance(p, temporal_apodization_triangular(k));
    std::vector<double> times;
    for (int rep = 0; rep < 9; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      for (int i = 0; i < 5; ++i) (void)atc_weights(r, 1e-10, k);
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    std::nth_element(times.begin(), times.begin() + 4, times.end());
    medians.push_back(times[4]);
  }
  for (std::size_t i = 1; i < medians.size(); ++i) CHECK(medians[i] >= medians[i - 1]);
}

TEST_CASE("config validation") {
  BeamformerConfig c{"atc", Method::Atc, 2};
  c.epsilon = 0.0;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidConfig);
  c.epsilon = 1e-10;
  c.apodization = ApodizationKind::Custom;
  c.custom_apodization = Matrix::Ones(3, 3);
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidConfig);
  c.custom_apodization = Matrix::Ones(5, 5);
  CHECK_NOTHROW(c.validate());
}
