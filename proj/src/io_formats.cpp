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

#include "atcbf/io_formats.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace atcbf {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xffu));
}

void put_f64(std::string& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xffu));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view take(std::size_t n) {
    if (bytes_.size() - pos_ < n) throw Error(ErrorCode::TruncatedFile, "file is truncated");
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint32_t u32() {
    const auto s = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(s[std::size_t(i)])) << (8 * i);
    return v;
  }
  double f64() {
    const auto s = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(s[std::size_t(i)])) << (8 * i);
    return std::bit_cast<double>(v);
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

void check_magic(Reader& r, std::string_view magic) {
  if (r.remaining() < magic.size()) throw Error(ErrorCode::TruncatedFile, "file is shorter than its magic");
  if (r.take(magic.size()) != magic) throw Error(ErrorCode::BadMagic, "unrecognized file magic");
}

void check_payload(const Reader& r, std::uint64_t count) {
  const std::uint64_t need = count * 8;
  if (r.remaining() < need) throw Error(ErrorCode::TruncatedFile, "payload is truncated");
  if (r.remaining() > need) throw Error(ErrorCode::SizeMismatch, "payload is longer than the declared size");
}

}  // namespace

std::string encode_rf(const RFFrame& frame) {
  const SamplingSpec& s = frame.sampling();
  std::string out(kRfMagic);
  put_u32(out, std::uint32_t(frame.num_channels()));
  put_u32(out, std::uint32_t(frame.num_samples()));
  put_f64(out, s.fs);
  put_f64(out, s.t0);
  put_f64(out, s.c);
  put_f64(out, frame.geometry().pitch());
  out.reserve(out.size() + 8 * std::size_t(frame.data().size()));
  for (Eigen::Index m = 0; m < frame.data().rows(); ++m)
    for (Eigen::Index t = 0; t < frame.data().cols(); ++t) put_f64(out, frame.data()(m, t));
  return out;
}

RFFrame decode_rf(std::string_view bytes) {
  Reader r(bytes);
  check_magic(r, kRfMagic);
  const std::uint32_t m = r.u32();
  const std::uint32_t t = r.u32();
  SamplingSpec s;
  s.fs = r.f64();
  s.t0 = r.f64();
  s.c = r.f64();
  const double pitch = r.f64();
  s.num_samples = t;
  check_payload(r, std::uint64_t(m) * t);
  Matrix data(Matrix::Zero(Eigen::Index(m), Eigen::Index(t)));
  for (Eigen::Index i = 0; i < data.rows(); ++i)
    for (Eigen::Index j = 0; j < data.cols(); ++j) data(i, j) = r.f64();
  return RFFrame(ArrayGeometry::uniform(m, pitch), s, std::move(data));
}

void write_rf(const std::string& path, const RFFrame& frame) { write_file(path, encode_rf(frame)); }
RFFrame read_rf(const std::string& path) { return decode_rf(read_file(path)); }

std::string encode_image(const BeamformedImage& image) {
  const PixelGrid& g = image.grid();
  std::string out(kImageMagic);
  put_u32(out, std::uint32_t(g.width));
  put_u32(out, std::uint32_t(g.height));
  put_f64(out, g.x_min);
  put_f64(out, g.x_max);
  put_f64(out, g.z_min);
  put_f64(out, g.z_max);
  for (Eigen::Index r = 0; r < image.values().rows(); ++r)
    for (Eigen::Index c = 0; c < image.values().cols(); ++c) put_f64(out, image.values()(r, c));
  return out;
}

BeamformedImage decode_image(std::string_view bytes) {
  Reader r(bytes);
  check_magic(r, kImageMagic);
  PixelGrid g;
  g.width = r.u32();
  g.height = r.u32();
  g.x_min = r.f64();
  g.x_max = r.f64();
  g.z_min = r.f64();
  g.z_max = r.f64();
  check_payload(r, std::uint64_t(g.width) * g.height);
  Matrix values(Matrix::Zero(Eigen::Index(g.height), Eigen::Index(g.width)));
  for (Eigen::Index i = 0; i < values.rows(); ++i)
    for (Eigen::Index j = 0; j < values.cols(); ++j) values(i, j) = r.f64();
  return BeamformedImage(g, std::move(values));
}

void write_image(const std::string& path, const BeamformedImage& image) {
  write_file(path, encode_image(image));
}
BeamformedImage read_image(const std::string& path) { return decode_image(read_file(path)); }

std::string encode_pgm(const BeamformedImage& display) {
  const Matrix& v = display.values();
  std::string out = "P5\n" + std::to_string(display.width()) + " " + std::to_string(display.height()) +
                    "\n65535\n";
  out.reserve(out.size() + 2 * std::size_t(v.size()));
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
      const double p = v(r, c);
      if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "display pixel outside [0, 1]");
      const auto q = std::uint16_t(std::lround(p * 65535.0));
      out.push_back(char(q >> 8));
      out.push_back(char(q & 0xffu));
    }
  }
  return out;
}

void write_image_pgm(const std::string& path, const BeamformedImage& display) {
  write_file(path, encode_pgm(display));
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string encode_metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out(kMetricsCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    std::string flags;
    for (const auto& f : r.metrics.flags) flags += (flags.empty() ? "" : "|") + f;
    out += r.method + ',' + format_number(r.reflector_x) + ',' + format_number(r.reflector_z) + ',' +
           to_string(r.axis) + ',' + format_number(r.metrics.fwhm) + ',' +
           format_number(r.metrics.resolution) + ',' + format_number(r.metrics.contrast_linear) + ',' +
           format_number(r.metrics.contrast_db) + ',' + flags + '\n';
  }
  return out;
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows) {
  write_file(path, encode_metrics_csv(rows));
}

std::string encode_ratio_csv(const std::vector<MetricsRow>& rows) {
  std::string out = "method,reflector_x_m,reflector_z_m,resolution_ratio,contrast_ratio\n";
  if (rows.empty()) return out;
  const std::string& reference = rows.front().method;
  for (const auto& r : rows) {
    const MetricsRow* base = nullptr;
    for (const auto& b : rows)
      if (b.method == reference && b.reflector_x == r.reflector_x && b.reflector_z == r.reflector_z) {
        base = &b;
        break;
      }
    const double res = base ? r.metrics.resolution / base->metrics.resolution : std::nan("");
    const double con = base ? r.metrics.contrast_linear / base->metrics.contrast_linear : std::nan("");
    out += r.method + ',' + format_number(r.reflector_x) + ',' + format_number(r.reflector_z) + ',' +
           format_number(res) + ',' + format_number(con) + '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "read failed on '" + path + "'");
  return ss.str();
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed on '" + path + "'");
}

}  // namespace atcbf
