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

#ifndef ATCBF_EXPERIMENT_HPP
#define ATCBF_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "atcbf/beamformers.hpp"
#include "atcbf/io_formats.hpp"
#include "atcbf/metrics.hpp"
#include "atcbf/postproc.hpp"
#include "atcbf/simulator.hpp"
#include "atcbf/types.hpp"

namespace atcbf {

struct SimulatorSection {
  std::size_t num_elements = 128;
  double pitch = 3e-4;
  SamplingSpec sampling{4.0 * 7.6e6, 0.0, 2048, 1540.0};
  PulseSpec pulse;
  Phantom phantom;
  NoiseModel noise;
  TxModel tx = TxModel::PlaneWave0Deg;

  ArrayGeometry geometry() const { return ArrayGeometry::uniform(num_elements, pitch); }
};

struct Reflector {
  double x = 0.0;
  double z = 0.0;
};

struct MetricsSection {
  PsfOptions psf;
  std::vector<Reflector> reflectors;
};

/// Everything one experiment needs. Loaded from a YAML document with the
/// sections simulator, grid, beamformers, display, metrics, ksweep, output.
/// Unknown keys and out-of-range values are InvalidConfig errors that carry
/// the source line.
struct ExperimentConfig {
  SimulatorSection simulator;
  PixelGrid grid;
  std::vector<BeamformerConfig> beamformers;
  DisplayConfig display;
  MetricsSection metrics;
  std::vector<std::size_t> ksweep_k{0, 1, 3, 5};
  std::string output_dir = "out";

  static ExperimentConfig parse(const std::string& text, const std::string& source = "<config>");
  static ExperimentConfig load(const std::string& path);

  /// Resolved document with every default materialized; parse(to_yaml())
  /// reproduces the config.
  std::string to_yaml() const;

  /// First beamformer with method atc; throws InvalidConfig if none.
  const BeamformerConfig& atc_beamformer() const;
};

/// Rejects duplicate K values and lists without K = 0.
void validate_k_list(const std::vector<std::size_t>& k_list);

RFFrame simulate(const ExperimentConfig& cfg);

struct NamedImage {
  std::string method;
  BeamformedImage image;  // raw beamformer output
};

/// Envelope-domain metrics for every (image, reflector) pair, in input order.
/// ReflectorNotFound and friends are rethrown with method + reflector context.
std::vector<MetricsRow> measure(const ExperimentConfig& cfg, const std::vector<NamedImage>& images);

struct KSweepRow {
  std::size_t half_width = 0;
  Reflector reflector;
  PSFMetrics metrics;
  double resolution_ratio = 1.0;  // relative to K = 0, same reflector
  /// Set when the PSF could not be measured; metrics are NaN and the flags
  /// name the failure.
  std::optional<Error> error;
};

/// One row per (K, reflector). PSF measurement failures do not stop the
/// sweep; they are recorded in the row.
std::vector<KSweepRow> ksweep(const ExperimentConfig& cfg, const RFFrame& frame,
                              const std::vector<std::size_t>& k_list, unsigned threads);
std::string encode_ksweep_csv(const std::vector<KSweepRow>& rows, PsfAxis axis);

// File-level commands. Each writes into `out_dir` (created if missing) and
// returns the paths it wrote.

/// rf.bin and rf.resolved.cfg.
std::vector<std::string> cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir);

/// <name>.img (raw values) and <name>.pgm (display) per configured beamformer.
std::vector<std::string> cmd_beamform(const ExperimentConfig& cfg, const std::string& rf_path,
                                      const std::string& out_dir, unsigned threads);

/// metrics.csv and metrics_ratios.csv. Method names are the image file stems.
std::vector<std::string> cmd_metrics(const ExperimentConfig& cfg,
                                     const std::vector<std::string>& image_paths,
                                     const std::string& out_dir);

/// ksweep.csv. Written even when some rows failed; the first failure is
/// then rethrown.
std::vector<std::string> cmd_ksweep(const ExperimentConfig& cfg, const std::string& rf_path,
                                    const std::vector<std::size_t>& k_list,
                                    const std::string& out_dir, unsigned threads);

}  // namespace atcbf

#endif  // ATCBF_EXPERIMENT_HPP
