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

#ifndef ATCBF_ATCBF_H
#define ATCBF_ATCBF_H

/*
 * C interface to the atcbf library. Every function returns an atcbf_status;
 * on failure a message for the calling thread is available from
 * atcbf_last_error() until the next failing call on that thread.
 * Handles are opaque and owned by the caller once returned.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ATCBF_BUILDING_LIBRARY)
#    define ATCBF_API __declspec(dllexport)
#  else
#    define ATCBF_API __declspec(dllimport)
#  endif
#else
#  define ATCBF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum atcbf_status {
  ATCBF_OK = 0,
  ATCBF_E_INVALID_ARGUMENT = 1,
  ATCBF_E_INVALID_CONFIG = 2,
  ATCBF_E_SINGULAR_MATRIX = 3,
  ATCBF_E_DEGENERATE_PATCH = 4,
  ATCBF_E_REFLECTOR_NOT_FOUND = 5,
  ATCBF_E_NO_CROSSING = 6,
  ATCBF_E_NO_SECONDARY_LOBE = 7,
  ATCBF_E_BAD_MAGIC = 8,
  ATCBF_E_TRUNCATED_FILE = 9,
  ATCBF_E_SIZE_MISMATCH = 10,
  ATCBF_E_IO = 11,
  ATCBF_E_INTERNAL = 12
} atcbf_status;

typedef struct atcbf_experiment atcbf_experiment;
typedef struct atcbf_frame atcbf_frame;
typedef struct atcbf_image atcbf_image;

/* Called once per file written by the atcbf_cmd_* functions. */
typedef void (*atcbf_file_callback)(const char* path, void* user);

ATCBF_API const char* atcbf_version(void);
ATCBF_API const char* atcbf_status_string(atcbf_status status);
ATCBF_API const char* atcbf_last_error(void);

/* Process exit status for a result: 0 ok, 2 config, 3 numeric, 4 I/O, 1 other. */
ATCBF_API int atcbf_exit_code(atcbf_status status);

/* Experiments */
ATCBF_API atcbf_status atcbf_experiment_load(const char* path, atcbf_experiment** out);
ATCBF_API atcbf_status atcbf_experiment_parse(const char* text, atcbf_experiment** out);
ATCBF_API void atcbf_experiment_free(atcbf_experiment* exp);
ATCBF_API atcbf_status atcbf_experiment_set_seed(atcbf_experiment* exp, uint64_t seed);
ATCBF_API atcbf_status atcbf_experiment_set_output_dir(atcbf_experiment* exp, const char* dir);
/* Pointer stays valid until the next call that modifies `exp`. */
ATCBF_API const char* atcbf_experiment_output_dir(const atcbf_experiment* exp);
ATCBF_API size_t atcbf_experiment_num_beamformers(const atcbf_experiment* exp);
ATCBF_API const char* atcbf_experiment_beamformer_name(const atcbf_experiment* exp, size_t index);
/* Copies the resolved YAML document (NUL-terminated) when `capacity` is
 * large enough; `*needed` always receives the required size in bytes. */
ATCBF_API atcbf_status atcbf_experiment_resolved(const atcbf_experiment* exp, char* buffer,
                                                 size_t capacity, size_t* needed);

/* RF frames */
ATCBF_API atcbf_status atcbf_simulate(const atcbf_experiment* exp, atcbf_frame** out);
ATCBF_API atcbf_status atcbf_frame_read(const char* path, atcbf_frame** out);
ATCBF_API atcbf_status atcbf_frame_write(const atcbf_frame* frame, const char* path);
ATCBF_API atcbf_status atcbf_frame_shape(const atcbf_frame* frame, size_t* channels, size_t* samples);
/* Channel-major copy; `count` must equal channels * samples. */
ATCBF_API atcbf_status atcbf_frame_copy_data(const atcbf_frame* frame, double* out, size_t count);
ATCBF_API void atcbf_frame_free(atcbf_frame* frame);

/* Images (raw beamformer output) */
ATCBF_API atcbf_status atcbf_beamform(const atcbf_experiment* exp, const atcbf_frame* frame,
                                      size_t beamformer_index, unsigned threads, atcbf_image** out);
ATCBF_API atcbf_status atcbf_image_read(const char* path, atcbf_image** out);
ATCBF_API atcbf_status atcbf_image_write(const atcbf_image* image, const char* path);
ATCBF_API atcbf_status atcbf_image_shape(const atcbf_image* image, size_t* width, size_t* height);
/* Row-major copy, top row shallowest; `count` must equal width * height. */
ATCBF_API atcbf_status atcbf_image_copy_values(const atcbf_image* image, double* out, size_t count);
ATCBF_API void atcbf_image_free(atcbf_image* image);

/* Pipeline commands. A NULL out_dir means the configured output directory. */
ATCBF_API atcbf_status atcbf_cmd_simulate(const atcbf_experiment* exp, const char* out_dir,
                                          atcbf_file_callback cb, void* user);
ATCBF_API atcbf_status atcbf_cmd_beamform(const atcbf_experiment* exp, const char* rf_path,
                                          const char* out_dir, unsigned threads,
                                          atcbf_file_callback cb, void* user);
ATCBF_API atcbf_status atcbf_cmd_metrics(const atcbf_experiment* exp, const char* const* image_paths,
                                         size_t num_images, const char* out_dir,
                                         atcbf_file_callback cb, void* user);
/* k_list == NULL uses the configured list. */
ATCBF_API atcbf_status atcbf_cmd_ksweep(const atcbf_experiment* exp, const char* rf_path,
                                        const size_t* k_list, size_t num_k, const char* out_dir,
                                        unsigned threads, atcbf_file_callback cb, void* user);

/*
 * Per-pixel kernels. `phi` holds an aligned patch of `channels` rows and
 * 2K+1 columns, channel-major: phi[m * (2K+1) + (k + K)].
 * `apodization` is a (2K+1)^2 row-major matrix, or NULL for triangular.
 * Weight outputs hold (2K+1) blocks of `channels` values, offsets -K..K
 * (MV writes `channels` values).
 */
ATCBF_API atcbf_status atcbf_mv_weights(const double* phi, size_t channels, size_t half_width,
                                        double epsilon, double* weights_out);
ATCBF_API atcbf_status atcbf_atc_weights(const double* phi, size_t channels, size_t half_width,
                                         const double* apodization, double epsilon,
                                         double* weights_out);
ATCBF_API atcbf_status atcbf_atc_pixel(const double* phi, size_t channels, size_t half_width,
                                       const double* apodization, double epsilon, double* value_out);

#ifdef __cplusplus
}
#endif

#endif /* ATCBF_ATCBF_H */
