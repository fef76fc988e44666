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

#ifndef ATCBF_IO_FORMATS_HPP
#define ATCBF_IO_FORMATS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "atcbf/metrics.hpp"
#include "atcbf/types.hpp"

namespace atcbf {

// RF file: "ATCRF1\0\0", M (u32), T (u32), fs, t0, c, pitch (f64), then M*T
// f64 samples, channel-major. Everything little-endian.
inline constexpr std::string_view kRfMagic{"ATCRF1\0\0", 8};

// Raw image file: "ATCIMG1\0", width (u32), height (u32), x_min, x_max,
// z_min, z_max (f64), then height*width f64 values row-major, top row
// shallowest. Little-endian.
inline constexpr std::string_view kImageMagic{"ATCIMG1\0", 8};

std::string encode_rf(const RFFrame& frame);
RFFrame decode_rf(std::string_view bytes);
void write_rf(const std::string& path, const RFFrame& frame);
RFFrame read_rf(const std::string& path);

std::string encode_image(const BeamformedImage& image);
BeamformedImage decode_image(std::string_view bytes);
void write_image(const std::string& path, const BeamformedImage& image);
BeamformedImage read_image(const std::string& path);

/// 16-bit binary PGM (P5, maxval 65535, big-endian samples as the format
/// requires), value = round(pixel * 65535). Pixels must lie in [0, 1].
std::string encode_pgm(const BeamformedImage& display);
void write_image_pgm(const std::string& path, const BeamformedImage& display);

struct MetricsRow {
  std::string method;
  double reflector_x = 0.0;
  double reflector_z = 0.0;
  PsfAxis axis = PsfAxis::Lateral;
  PSFMetrics metrics;
};

/// Floats with 9 significant digits; infinities as "inf".
std::string format_number(double v);

inline constexpr std::string_view kMetricsCsvHeader{
    "method,reflector_x_m,reflector_z_m,axis,fwhm_m,resolution_per_m,contrast_linear,contrast_db,flags"};

std::string encode_metrics_csv(const std::vector<MetricsRow>& rows);
void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows);

/// Resolution and contrast of every row divided by the row of the
/// first-listed method for the same reflector.
std::string encode_ratio_csv(const std::vector<MetricsRow>& rows);

/// Whole-file helpers; failures raise ErrorCode::Io.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

}  // namespace atcbf

#endif  // ATCBF_IO_FORMATS_HPP
