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

#ifndef ATCBF_BEAMFORMERS_HPP
#define ATCBF_BEAMFORMERS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "atcbf/types.hpp"

namespace atcbf {

class RFFrame;

enum class Method { Das, Mv, Atc };
enum class ApodizationKind { Triangular, Ones, Custom };

/// How per-pixel MV/ATC weights are obtained inside beamform_image.
///
/// Dense factors the full loaded covariance. LowRank exploits that both
/// covariances have rank <= K_tot and solves the same problem exactly in a
/// K_tot-dimensional subspace; it is the only practical choice for M = 128.
enum class SolverKind { LowRank, Dense };

const char* to_string(Method m);
const char* to_string(ApodizationKind a);

struct BeamformerConfig {
  std::string name;
  Method method = Method::Atc;
  std::size_t half_width = 5;  // K
  double epsilon = 1e-10;
  ApodizationKind apodization = ApodizationKind::Triangular;
  Matrix custom_apodization;  // used when apodization == Custom
  SolverKind solver = SolverKind::LowRank;

  void validate() const;
  TemporalApodization temporal_apodization() const;
};

/// Diagonal-loading trace below which a covariance is treated as zero.
inline constexpr double kDegenerateTrace = 1e-300;

/// Uniform weights on the central column: (1/M) sum_m Phi[m, 0].
double das_pixel(const AlignedPatch& patch);

/// R_MV = (1/K_tot) sum_k Phi_k Phi_k^T.
Matrix mv_covariance(const AlignedPatch& patch);

/// Loaded Capon weights R_DL^{-1} a / (a^T R_DL^{-1} a) with
/// R_DL = R + epsilon tr(R) I. Throws DegeneratePatch when tr(R) == 0.
WeightSet mv_weights(const Matrix& covariance, double epsilon);

/// A[i][j] = K + 1 - max(|i|, |j|).
TemporalApodization temporal_apodization_triangular(std::size_t half_width);
TemporalApodization temporal_apodization_ones(std::size_t half_width);

/// Block (i, j) = A_ij Phi_i Phi_j^T, blocks ordered i = -K..K.
Matrix atc_covariance(const AlignedPatch& patch, const TemporalApodization& apodization);

/// Loaded Capon weights over the stacked (M K_tot) space; the result is
/// interpreted as K_tot blocks of M = rows / K_tot channels.
WeightSet atc_weights(const Matrix& covariance, double epsilon, std::size_t half_width);

/// sum_i Phi_i^T w_i.
double apply_weights(const AlignedPatch& patch, const WeightSet& weights);

/// w^T R w.
double quadratic_objective(const Matrix& covariance, const Vector& w);

struct PixelOutput {
  double value = 0.0;
  bool degenerate = false;
};

/// Dense reference paths. MV weights only the central column.
PixelOutput mv_pixel(const AlignedPatch& patch, double epsilon);
PixelOutput atc_pixel(const AlignedPatch& patch, const TemporalApodization& apodization,
                      double epsilon);

/// Weights identical (to rounding) to mv_weights(mv_covariance(patch)) and
/// atc_weights(atc_covariance(patch, A)) but computed in the rank <= K_tot
/// signal subspace. Throw DegeneratePatch like their dense counterparts.
WeightSet mv_weights_lowrank(const AlignedPatch& patch, double epsilon);
WeightSet atc_weights_lowrank(const AlignedPatch& patch, const TemporalApodization& apodization,
                              double epsilon);

PixelOutput mv_pixel_lowrank(const AlignedPatch& patch, double epsilon);
PixelOutput atc_pixel_lowrank(const AlignedPatch& patch, const TemporalApodization& apodization,
                              double epsilon);

struct BeamformReport {
  std::size_t degenerate_pixels = 0;
  std::vector<std::uint8_t> degenerate_mask;  // row-major, height x width
};

struct BeamformResult {
  BeamformedImage image;
  BeamformReport report;
};

/// Forms every pixel of `grid` independently. `threads` == 0 picks the
/// hardware concurrency. Output does not depend on the thread count.
BeamformResult beamform_image(const RFFrame& frame, const PixelGrid& grid,
                              const BeamformerConfig& config, unsigned threads = 1);

}  // namespace atcbf

#endif  // ATCBF_BEAMFORMERS_HPP
