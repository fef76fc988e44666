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

// atcbf command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atcbf/atcbf.h"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string rf;
  std::vector<std::string> images;
  std::vector<std::size_t> k;
  bool quiet = false;
};

void print_path(const char* path, void* user) {
  if (!*static_cast<bool*>(user)) std::printf("wrote %s\n", path);
}

int report(atcbf_status s) {
  if (s != ATCBF_OK) std::fprintf(stderr, "atcbf: error: %s: %s\n", atcbf_status_string(s), atcbf_last_error());
  return atcbf_exit_code(s);
}

class Experiment {
 public:
  ~Experiment() { atcbf_experiment_free(exp_); }
  atcbf_status open(const Options& o) {
    atcbf_status s = atcbf_experiment_load(o.config.c_str(), &exp_);
    if (s == ATCBF_OK && o.seed) s = atcbf_experiment_set_seed(exp_, *o.seed);
    if (s == ATCBF_OK && !o.out.empty()) s = atcbf_experiment_set_output_dir(exp_, o.out.c_str());
    return s;
  }
  atcbf_experiment* get() const { return exp_; }
  std::string path(const std::string& file) const {
    return std::string(atcbf_experiment_output_dir(exp_)) + "/" + file;
  }

 private:
  atcbf_experiment* exp_ = nullptr;
};

std::string rf_path(const Options& o, const Experiment& e) { return o.rf.empty() ? e.path("rf.bin") : o.rf; }

atcbf_status do_simulate(const Options& o, const Experiment& e) {
  bool quiet = o.quiet;
  return atcbf_cmd_simulate(e.get(), nullptr, print_path, &quiet);
}

atcbf_status do_beamform(const Options& o, const Experiment& e) {
  bool quiet = o.quiet;
  return atcbf_cmd_beamform(e.get(), rf_path(o, e).c_str(), nullptr, o.threads, print_path, &quiet);
}

atcbf_status do_metrics(const Options& o, const Experiment& e) {
  std::vector<std::string> images = o.images;
  if (images.empty())
    for (std::size_t i = 0; i < atcbf_experiment_num_beamformers(e.get()); ++i)
      images.push_back(e.path(std::string(atcbf_experiment_beamformer_name(e.get(), i)) + ".img"));
  std::vector<const char*> ptrs;
  for (const auto& s : images) ptrs.push_back(s.c_str());
  bool quiet = o.quiet;
  return atcbf_cmd_metrics(e.get(), ptrs.data(), ptrs.size(), nullptr, print_path, &quiet);
}

atcbf_status do_ksweep(const Options& o, const Experiment& e) {
  bool quiet = o.quiet;
  return atcbf_cmd_ksweep(e.get(), rf_path(o, e).c_str(), o.k.empty() ? nullptr : o.k.data(), o.k.size(),
                          nullptr, o.threads, print_path, &quiet);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive time-channel beamforming toolkit"};
  app.set_version_flag("--version", std::string(atcbf_version()));
  app.require_subcommand(1);

  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Experiment config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory (overrides the config)");
    sub->add_option("--seed", o.seed, "RNG seed override (u64)");
    sub->add_option("--threads", o.threads, "Worker threads, 0 = all cores (speed only)");
    sub->add_flag("--quiet,-q", o.quiet, "Do not list written files");
  };

  auto* sim = app.add_subcommand("simulate", "Simulate an RF frame (rf.bin + resolved config)");
  common(sim);
  auto* bf = app.add_subcommand("beamform", "Form one image per configured beamformer");
  common(bf);
  bf->add_option("--rf", o.rf, "RF file (default <out>/rf.bin)");
  auto* met = app.add_subcommand("metrics", "PSF metrics CSV and the ratio table");
  common(met);
  met->add_option("--images", o.images, "Raw image files (default: <out>/<name>.img per beamformer)");
  auto* ks = app.add_subcommand("ksweep", "ATC resolution for several K, normalized to K = 0");
  common(ks);
  ks->add_option("--rf", o.rf, "RF file (default <out>/rf.bin)");
  ks->add_option("--k", o.k, "K values (default: config ksweep.k_list)")->delimiter(',');
  auto* run = app.add_subcommand("run", "simulate, beamform, metrics and ksweep in sequence");
  common(run);

  CLI11_PARSE(app, argc, argv);

  Experiment e;
  if (atcbf_status s = e.open(o); s != ATCBF_OK) return report(s);

  atcbf_status s = ATCBF_OK;
  if (sim->parsed()) s = do_simulate(o, e);
  else if (bf->parsed()) s = do_beamform(o, e);
  else if (met->parsed()) s = do_metrics(o, e);
  else if (ks->parsed()) s = do_ksweep(o, e);
  else if (run->parsed()) {
    o.rf.clear();
    s = do_simulate(o, e);
    if (s == ATCBF_OK) s = do_beamform(o, e);
    if (s == ATCBF_OK) s = do_metrics(o, e);
    if (s == ATCBF_OK) s = do_ksweep(o, e);
  }
  return report(s);
}
