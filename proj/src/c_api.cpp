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

#include "atcbf/atcbf.h"

#include <new>
#include <optional>
#include <string>
#include <vector>

#include "atcbf/experiment.hpp"

using namespace atcbf;

struct atcbf_experiment {
  ExperimentConfig cfg;
};

struct atcbf_frame {
  RFFrame frame;
};

struct atcbf_image {
  BeamformedImage image;
};

namespace {

thread_local std::string g_last_error;

atcbf_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return ATCBF_E_INVALID_ARGUMENT;
    case ErrorCode::InvalidConfig: return ATCBF_E_INVALID_CONFIG;
    case ErrorCode::SingularMatrix: return ATCBF_E_SINGULAR_MATRIX;
    case ErrorCode::DegeneratePatch: return ATCBF_E_DEGENERATE_PATCH;
    case ErrorCode::ReflectorNotFound: return ATCBF_E_REFLECTOR_NOT_FOUND;
    case ErrorCode::NoCrossing: return ATCBF_E_NO_CROSSING;
    case ErrorCode::NoSecondaryLobe: return ATCBF_E_NO_SECONDARY_LOBE;
    case ErrorCode::BadMagic: return ATCBF_E_BAD_MAGIC;
    case ErrorCode::TruncatedFile: return ATCBF_E_TRUNCATED_FILE;
    case ErrorCode::SizeMismatch: return ATCBF_E_SIZE_MISMATCH;
    case ErrorCode::Io: return ATCBF_E_IO;
  }
  return ATCBF_E_INTERNAL;
}

atcbf_status fail(atcbf_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
atcbf_status guarded(F&& f) {
  try {
    f();
    return ATCBF_OK;
  } catch (const Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ATCBF_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ATCBF_E_INTERNAL, e.what());
  } catch (...) {
    return fail(ATCBF_E_INTERNAL, "unknown error");
  }
}

#define ATCBF_REQUIRE(cond, what) \
  if (!(cond)) return fail(ATCBF_E_INVALID_ARGUMENT, what)

void report(const std::vector<std::string>& paths, atcbf_file_callback cb, void* user) {
  if (!cb) return;
  for (const auto& p : paths) cb(p.c_str(), user);
}

std::string out_dir_or(const atcbf_experiment* exp, const char* dir) {
  return dir ? std::string(dir) : exp->cfg.output_dir;
}

AlignedPatch make_patch(const double* phi, size_t channels, size_t half_width) {
  const Eigen::Index kt = Eigen::Index(2 * half_width + 1);
  Matrix m(Matrix::Zero(Eigen::Index(channels), kt));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < kt; ++c) m(r, c) = phi[r * kt + c];
  return AlignedPatch(std::move(m), half_width);
}

TemporalApodization make_apodization(const double* a, size_t half_width) {
  if (!a) return temporal_apodization_triangular(half_width);
  const Eigen::Index kt = Eigen::Index(2 * half_width + 1);
  Matrix m(Matrix::Zero(kt, kt));
  for (Eigen::Index i = 0; i < kt; ++i)
    for (Eigen::Index j = 0; j < kt; ++j) m(i, j) = a[i * kt + j];
  return TemporalApodization(std::move(m));
}

}  // namespace

extern "C" {

const char* atcbf_version(void) { return "1.0.0"; }

const char* atcbf_status_string(atcbf_status status) {
  switch (status) {
    case ATCBF_OK: return "ok";
    case ATCBF_E_INVALID_ARGUMENT: return "invalid argument";
    case ATCBF_E_INVALID_CONFIG: return "invalid config";
    case ATCBF_E_SINGULAR_MATRIX: return "singular matrix";
    case ATCBF_E_DEGENERATE_PATCH: return "degenerate patch";
    case ATCBF_E_REFLECTOR_NOT_FOUND: return "reflector not found";
    case ATCBF_E_NO_CROSSING: return "no half-maximum crossing";
    case ATCBF_E_NO_SECONDARY_LOBE: return "no secondary lobe";
    case ATCBF_E_BAD_MAGIC: return "bad magic";
    case ATCBF_E_TRUNCATED_FILE: return "truncated file";
    case ATCBF_E_SIZE_MISMATCH: return "size mismatch";
    case ATCBF_E_IO: return "I/O error";
    case ATCBF_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* atcbf_last_error(void) { return g_last_error.c_str(); }

int atcbf_exit_code(atcbf_status status) {
  switch (status) {
    case ATCBF_OK: return 0;
    case ATCBF_E_INVALID_ARGUMENT:
    case ATCBF_E_INVALID_CONFIG: return 2;
    case ATCBF_E_SINGULAR_MATRIX:
    case ATCBF_E_DEGENERATE_PATCH:
    case ATCBF_E_REFLECTOR_NOT_FOUND:
    case ATCBF_E_NO_CROSSING:
    case ATCBF_E_NO_SECONDARY_LOBE: return 3;
    case ATCBF_E_BAD_MAGIC:
    case ATCBF_E_TRUNCATED_FILE:
    case ATCBF_E_SIZE_MISMATCH:
    case ATCBF_E_IO: return 4;
    case ATCBF_E_INTERNAL: return 1;
  }
  return 1;
}

atcbf_status atcbf_experiment_load(const char* path, atcbf_experiment** out) {
  ATCBF_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new atcbf_experiment{ExperimentConfig::load(path)}; });
}

atcbf_status atcbf_experiment_parse(const char* text, atcbf_experiment** out) {
  ATCBF_REQUIRE(text && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new atcbf_experiment{ExperimentConfig::parse(text)}; });
}

void atcbf_experiment_free(atcbf_experiment* exp) { delete exp; }

atcbf_status atcbf_experiment_set_seed(atcbf_experiment* exp, uint64_t seed) {
  ATCBF_REQUIRE(exp, "null experiment");
  exp->cfg.simulator.noise.rng_seed = seed;
  return ATCBF_OK;
}

atcbf_status atcbf_experiment_set_output_dir(atcbf_experiment* exp, const char* dir) {
  ATCBF_REQUIRE(exp && dir && *dir, "null or empty argument");
  return guarded([&] { exp->cfg.output_dir = dir; });
}

const char* atcbf_experiment_output_dir(const atcbf_experiment* exp) {
  return exp ? exp->cfg.output_dir.c_str() : nullptr;
}

size_t atcbf_experiment_num_beamformers(const atcbf_experiment* exp) {
  return exp ? exp->cfg.beamformers.size() : 0;
}

const char* atcbf_experiment_beamformer_name(const atcbf_experiment* exp, size_t index) {
  if (!exp || index >= exp->cfg.beamformers.size()) return nullptr;
  return exp->cfg.beamformers[index].name.c_str();
}

atcbf_status atcbf_experiment_resolved(const atcbf_experiment* exp, char* buffer, size_t capacity,
                                       size_t* needed) {
  ATCBF_REQUIRE(exp && needed, "null argument");
  return guarded([&] {
    const std::string doc = exp->cfg.to_yaml();
    *needed = doc.size() + 1;
    if (buffer && capacity >= doc.size() + 1) doc.copy(buffer, doc.size()), buffer[doc.size()] = '\0';
    else if (buffer) throw Error(ErrorCode::InvalidArgument, "buffer too small for resolved config");
  });
}

atcbf_status atcbf_simulate(const atcbf_experiment* exp, atcbf_frame** out) {
  ATCBF_REQUIRE(exp && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new atcbf_frame{simulate(exp->cfg)}; });
}

atcbf_status atcbf_frame_read(const char* path, atcbf_frame** out) {
  ATCBF_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new atcbf_frame{read_rf(path)}; });
}

atcbf_status atcbf_frame_write(const atcbf_frame* frame, const char* path) {
  ATCBF_REQUIRE(frame && path, "null argument");
  return guarded([&] { write_rf(path, frame->frame); });
}

atcbf_status atcbf_frame_shape(const atcbf_frame* frame, size_t* channels, size_t* samples) {
  ATCBF_REQUIRE(frame && channels && samples, "null argument");
  *channels = frame->frame.num_channels();
  *samples = frame->frame.num_samples();
  return ATCBF_OK;
}

atcbf_status atcbf_frame_copy_data(const atcbf_frame* frame, double* out, size_t count) {
  ATCBF_REQUIRE(frame && out, "null argument");
  const Matrix& d = frame->frame.data();
  ATCBF_REQUIRE(count == size_t(d.size()), "count does not match frame size");
  for (Eigen::Index m = 0; m < d.rows(); ++m)
    for (Eigen::Index t = 0; t < d.cols(); ++t) *out++ = d(m, t);
  return ATCBF_OK;
}

void atcbf_frame_free(atcbf_frame* frame) { delete frame; }

atcbf_status atcbf_beamform(const atcbf_experiment* exp, const atcbf_frame* frame, size_t index,
                            unsigned threads, atcbf_image** out) {
  ATCBF_REQUIRE(exp && frame && out, "null argument");
  ATCBF_REQUIRE(index < exp->cfg.beamformers.size(), "beamformer index out of range");
  *out = nullptr;
  return guarded([&] {
    auto r = beamform_image(frame->frame, exp->cfg.grid, exp->cfg.beamformers[index], threads);
    *out = new atcbf_image{std::move(r.image)};
  });
}

atcbf_status atcbf_image_read(const char* path, atcbf_image** out) {
  ATCBF_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new atcbf_image{read_image(path)}; });
}

atcbf_status atcbf_image_write(const atcbf_image* image, const char* path) {
  ATCBF_REQUIRE(image && path, "null argument");
  return guarded([&] { write_image(path, image->image); });
}

atcbf_status atcbf_image_shape(const atcbf_image* image, size_t* width, size_t* height) {
  ATCBF_REQUIRE(image && width && height, "null argument");
  *width = image->image.width();
  *height = image->image.height();
  return ATCBF_OK;
}

atcbf_status atcbf_image_copy_values(const atcbf_image* image, double* out, size_t count) {
  ATCBF_REQUIRE(image && out, "null argument");
  const Matrix& v = image->image.values();
  ATCBF_REQUIRE(count == size_t(v.size()), "count does not match image size");
  for (Eigen::Index r = 0; r < v.rows(); ++r)
    for (Eigen::Index c = 0; c < v.cols(); ++c) *out++ = v(r, c);
  return ATCBF_OK;
}

void atcbf_image_free(atcbf_image* image) { delete image; }

atcbf_status atcbf_cmd_simulate(const atcbf_experiment* exp, const char* out_dir,
                                atcbf_file_callback cb, void* user) {
  ATCBF_REQUIRE(exp, "null experiment");
  return guarded([&] { report(cmd_simulate(exp->cfg, out_dir_or(exp, out_dir)), cb, user); });
}

atcbf_status atcbf_cmd_beamform(const atcbf_experiment* exp, const char* rf_path, const char* out_dir,
                                unsigned threads, atcbf_file_callback cb, void* user) {
  ATCBF_REQUIRE(exp && rf_path, "null argument");
  return guarded(
      [&] { report(cmd_beamform(exp->cfg, rf_path, out_dir_or(exp, out_dir), threads), cb, user); });
}

atcbf_status atcbf_cmd_metrics(const atcbf_experiment* exp, const char* const* image_paths,
                               size_t num_images, const char* out_dir, atcbf_file_callback cb,
                               void* user) {
  ATCBF_REQUIRE(exp && (image_paths || num_images == 0), "null argument");
  return guarded([&] {
    std::vector<std::string> paths(image_paths, image_paths + num_images);
    report(cmd_metrics(exp->cfg, paths, out_dir_or(exp, out_dir)), cb, user);
  });
}

atcbf_status atcbf_cmd_ksweep(const atcbf_experiment* exp, const char* rf_path, const size_t* k_list,
                              size_t num_k, const char* out_dir, unsigned threads,
                              atcbf_file_callback cb, void* user) {
  ATCBF_REQUIRE(exp && rf_path, "null argument");
  return guarded([&] {
    const std::vector<size_t> ks = k_list ? std::vector<size_t>(k_list, k_list + num_k) : exp->cfg.ksweep_k;
    report(cmd_ksweep(exp->cfg, rf_path, ks, out_dir_or(exp, out_dir), threads), cb, user);
  });
}

atcbf_status atcbf_mv_weights(const double* phi, size_t channels, size_t half_width, double epsilon,
                              double* weights_out) {
  ATCBF_REQUIRE(phi && weights_out && channels > 0, "null argument or empty patch");
  return guarded([&] {
    const WeightSet w = mv_weights(mv_covariance(make_patch(phi, channels, half_width)), epsilon);
    for (Eigen::Index i = 0; i < w.w.size(); ++i) weights_out[i] = w.w[i];
  });
}

atcbf_status atcbf_atc_weights(const double* phi, size_t channels, size_t half_width,
                               const double* apodization, double epsilon, double* weights_out) {
  ATCBF_REQUIRE(phi && weights_out && channels > 0, "null argument or empty patch");
  return guarded([&] {
    const AlignedPatch patch = make_patch(phi, channels, half_width);
    const WeightSet w =
        atc_weights(atc_covariance(patch, make_apodization(apodization, half_width)), epsilon, half_width);
    for (Eigen::Index i = 0; i < w.w.size(); ++i) weights_out[i] = w.w[i];
  });
}

atcbf_status atcbf_atc_pixel(const double* phi, size_t channels, size_t half_width,
                             const double* apodization, double epsilon, double* value_out) {
  ATCBF_REQUIRE(phi && value_out && channels > 0, "null argument or empty patch");
  return guarded([&] {
    const AlignedPatch patch = make_patch(phi, channels, half_width);
    *value_out = atc_pixel_lowrank(patch, make_apodization(apodization, half_width), epsilon).value;
  });
}

}  // extern "C"
