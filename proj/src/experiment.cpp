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

#include "atcbf/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace atcbf {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_error(const std::string& source, const YAML::Mark& mark, const std::string& msg) {
  std::ostringstream os;
  os << source;
  if (!mark.is_null()) os << ":" << mark.line + 1 << ":" << mark.column + 1;
  os << ": " << msg;
  throw Error(ErrorCode::InvalidConfig, os.str());
}

bool present(const YAML::Node& n) { return n.IsDefined() && !n.IsNull(); }

YAML::Node lookup(const YAML::Node& map, const std::string& key) {
  if (!present(map) || !map.IsMap()) return YAML::Node(YAML::NodeType::Undefined);
  const YAML::Node& cmap = map;
  return cmap[key];
}

// A mapping node whose keys are consumed one by one; finish() rejects
// whatever is left over.
class Section {
 public:
  Section(YAML::Node node, std::string path, const std::string& source)
      : node_(std::move(node)), path_(std::move(path)), source_(source) {
    if (present(node_) && !node_.IsMap()) config_error(source_, node_.Mark(), "section '" + path_ + "' must be a mapping");
  }

  bool has(const std::string& key) const { return present(lookup(node_, key)); }

  YAML::Node child(const std::string& key) {
    seen_.insert(key);
    return lookup(node_, key);
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    const YAML::Node n = child(key);
    if (!present(n)) return fallback;
    return convert<T>(n, key);
  }

  template <class T>
  T require(const std::string& key) {
    const YAML::Node n = child(key);
    if (!present(n)) config_error(source_, present(node_) ? node_.Mark() : YAML::Mark::null_mark(),
                         "missing required field '" + field(key) + "'");
    return convert<T>(n, key);
  }

  double positive(const std::string& key, double fallback) {
    const double v = get<double>(key, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) fail(key, "must be a finite value > 0");
    return v;
  }

  double non_negative(const std::string& key, double fallback) {
    const double v = get<double>(key, fallback);
    if (!(v >= 0.0) || !std::isfinite(v)) fail(key, "must be a finite value >= 0");
    return v;
  }

  std::size_t count(const std::string& key, std::size_t fallback, std::size_t min_value) {
    const long long v = get<long long>(key, (long long)fallback);
    if (v < (long long)min_value) fail(key, "must be an integer >= " + std::to_string(min_value));
    return std::size_t(v);
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) {
    const YAML::Node n = lookup(node_, key);
    config_error(source_, present(n) ? n.Mark() : YAML::Mark::null_mark(), "field '" + field(key) + "' " + msg);
  }

  void finish() const {
    if (!present(node_)) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) config_error(source_, kv.first.Mark(), "unknown key '" + field(key) + "'");
    }
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const std::string& source() const { return source_; }

 private:
  template <class T>
  T convert(const YAML::Node& n, const std::string& key) {
    try {
      if (!n.IsScalar()) throw YAML::Exception(n.Mark(), "expected a scalar");
      return n.as<T>();
    } catch (const YAML::Exception&) {
      config_error(source_, n.Mark(), "field '" + field(key) + "' has an invalid value");
    }
  }

  YAML::Node node_;
  std::string path_;
  const std::string& source_;
  std::set<std::string> seen_;
};

PulseEnvelope parse_envelope(Section& s) {
  const auto v = s.get<std::string>("envelope", "gaussian");
  if (v == "gaussian") return PulseEnvelope::Gaussian;
  if (v == "hann") return PulseEnvelope::Hann;
  s.fail("envelope", "must be 'gaussian' or 'hann'");
}

Method parse_method(Section& s) {
  const auto v = s.require<std::string>("method");
  if (v == "das") return Method::Das;
  if (v == "mv") return Method::Mv;
  if (v == "atc") return Method::Atc;
  s.fail("method", "must be one of das, mv, atc");
}

PsfAxis parse_axis(Section& s) {
  const auto v = s.get<std::string>("axis", "lateral");
  if (v == "lateral") return PsfAxis::Lateral;
  if (v == "axial") return PsfAxis::Axial;
  s.fail("axis", "must be 'lateral' or 'axial'");
}

std::size_t parse_k(const YAML::Node& n, const std::string& source) {
  try {
    const long long v = n.as<long long>();
    if (v >= 0) return std::size_t(v);
  } catch (const YAML::Exception&) {
  }
  config_error(source, n.Mark(), "K values must be non-negative integers");
}

void parse_simulator(const YAML::Node& node, const std::string& source, SimulatorSection& sim) {
  Section s(node, "simulator", source);

  Section geo(s.child("geometry"), "simulator.geometry", source);
  sim.num_elements = geo.count("num_elements", sim.num_elements, 2);
  sim.pitch = geo.positive("pitch", sim.pitch);
  geo.finish();

  Section pulse(s.child("pulse"), "simulator.pulse", source);
  sim.pulse.f0 = pulse.positive("f0", sim.pulse.f0);
  sim.pulse.num_cycles = pulse.positive("num_cycles", sim.pulse.num_cycles);
  sim.pulse.envelope = parse_envelope(pulse);
  sim.pulse.amplitude = pulse.get<double>("amplitude", sim.pulse.amplitude);
  pulse.finish();

  Section samp(s.child("sampling"), "simulator.sampling", source);
  sim.sampling.fs = samp.positive("fs", 4.0 * sim.pulse.f0);
  sim.sampling.t0 = samp.get<double>("t0", sim.sampling.t0);
  sim.sampling.num_samples = samp.count("num_samples", sim.sampling.num_samples, 1);
  sim.sampling.c = samp.positive("c", sim.sampling.c);
  samp.finish();

  if (!s.has("phantom")) config_error(source, present(node) ? node.Mark() : YAML::Mark::null_mark(),
                                      "missing required section 'simulator.phantom'");
  Section ph(s.child("phantom"), "simulator.phantom", source);
  const YAML::Node list = ph.child("scatterers");
  if (!present(list) || !list.IsSequence() || list.size() == 0)
    config_error(source, present(list) ? list.Mark() : YAML::Mark::null_mark(),
                 "simulator.phantom.scatterers must be a non-empty list");
  sim.phantom.scatterers.clear();
  for (std::size_t i = 0; i < list.size(); ++i) {
    Section sc(list[i], "simulator.phantom.scatterers[" + std::to_string(i) + "]", source);
    Scatterer v;
    v.x = sc.require<double>("x");
    v.z = sc.require<double>("z");
    if (!(v.z > 0.0)) sc.fail("z", "must be > 0 (below the array)");
    v.reflectivity = sc.positive("reflectivity", 1.0);
    sc.finish();
    sim.phantom.scatterers.push_back(v);
  }
  ph.finish();

  Section noise(s.child("noise"), "simulator.noise", source);
  sim.noise.tof_jitter_std = noise.non_negative("tof_jitter_std", sim.noise.tof_jitter_std);
  sim.noise.additive_noise_std = noise.non_negative("additive_noise_std", sim.noise.additive_noise_std);
  sim.noise.rng_seed = noise.get<std::uint64_t>("seed", sim.noise.rng_seed);
  noise.finish();

  const auto tx = s.get<std::string>("tx_model", "plane_wave_0deg");
  if (tx != "plane_wave_0deg") s.fail("tx_model", "must be 'plane_wave_0deg'");
  s.finish();
}

BeamformerConfig parse_beamformer(const YAML::Node& node, const std::string& path, const std::string& source) {
  Section s(node, path, source);
  BeamformerConfig b;
  b.method = parse_method(s);
  b.name = s.get<std::string>("name", to_string(b.method));
  b.half_width = s.count("K", b.half_width, 0);
  b.epsilon = s.positive("epsilon", b.epsilon);
  const YAML::Node apod = s.child("apodization");
  if (present(apod) && apod.IsSequence()) {
    b.apodization = ApodizationKind::Custom;
    const auto n = Eigen::Index(apod.size());
    b.custom_apodization.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const YAML::Node row = apod[std::size_t(i)];
      if (!row.IsSequence() || Eigen::Index(row.size()) != n)
        config_error(source, row.Mark(), "field '" + s.field("apodization") + "' must be a square matrix");
      for (Eigen::Index j = 0; j < n; ++j) {
        try {
          b.custom_apodization(i, j) = row[std::size_t(j)].as<double>();
        } catch (const YAML::Exception&) {
          config_error(source, row[std::size_t(j)].Mark(), "apodization entries must be numbers");
        }
      }
    }
  } else if (present(apod)) {
    const auto v = apod.IsScalar() ? apod.as<std::string>() : std::string();
    if (v == "triangular") b.apodization = ApodizationKind::Triangular;
    else if (v == "ones") b.apodization = ApodizationKind::Ones;
    else s.fail("apodization", "must be 'triangular', 'ones' or a K_tot x K_tot matrix");
  }
  const auto solver = s.get<std::string>("solver", "lowrank");
  if (solver == "lowrank") b.solver = SolverKind::LowRank;
  else if (solver == "dense") b.solver = SolverKind::Dense;
  else s.fail("solver", "must be 'lowrank' or 'dense'");
  s.finish();

  if (b.name.empty() || b.name.find_first_of("/\\ ") != std::string::npos)
    config_error(source, node.Mark(), "beamformer name must be non-empty without '/' or spaces");
  try {
    b.validate();
    if (b.method == Method::Atc) (void)b.temporal_apodization();
  } catch (const Error& e) {
    config_error(source, node.Mark(), std::string(path) + ": " + e.what());
  }
  return b;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    config_error(source, e.mark, "YAML syntax error: " + e.msg);
  }
  if (!present(root) || !root.IsMap()) config_error(source, YAML::Mark::null_mark(), "config must be a YAML mapping");

  ExperimentConfig cfg;
  Section top(root, "", source);

  if (!top.has("simulator")) config_error(source, root.Mark(), "missing required section 'simulator'");
  parse_simulator(top.child("simulator"), source, cfg.simulator);

  if (!top.has("grid")) config_error(source, root.Mark(), "missing required section 'grid'");
  Section grid(top.child("grid"), "grid", source);
  cfg.grid.x_min = grid.require<double>("x_min");
  cfg.grid.x_max = grid.require<double>("x_max");
  cfg.grid.z_min = grid.require<double>("z_min");
  cfg.grid.z_max = grid.require<double>("z_max");
  cfg.grid.width = grid.count("width", 128, 1);
  cfg.grid.height = grid.count("height", 256, 1);
  grid.finish();
  try {
    cfg.grid.validate();
  } catch (const Error& e) {
    config_error(source, lookup(root, "grid").Mark(), e.what());
  }

  const YAML::Node bfs = top.child("beamformers");
  if (!present(bfs) || !bfs.IsSequence() || bfs.size() == 0)
    config_error(source, present(bfs) ? bfs.Mark() : root.Mark(), "'beamformers' must be a non-empty list");
  std::set<std::string> names;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    cfg.beamformers.push_back(parse_beamformer(bfs[i], "beamformers[" + std::to_string(i) + "]", source));
    if (!names.insert(cfg.beamformers.back().name).second)
      config_error(source, bfs[i].Mark(), "duplicate beamformer name '" + cfg.beamformers.back().name + "'");
  }

  Section disp(top.child("display"), "display", source);
  cfg.display.dynamic_range_db = disp.positive("dynamic_range_db", cfg.display.dynamic_range_db);
  cfg.display.gamma = disp.positive("gamma", cfg.display.gamma);
  const auto norm = disp.get<std::string>("normalization", "global_max");
  if (norm != "global_max") disp.fail("normalization", "must be 'global_max'");
  disp.finish();

  Section met(top.child("metrics"), "metrics", source);
  cfg.metrics.psf.axis = parse_axis(met);
  cfg.metrics.psf.window = met.count("window", cfg.metrics.psf.window, 1);
  const YAML::Node refl = met.child("reflectors");
  if (present(refl)) {
    if (!refl.IsSequence()) config_error(source, refl.Mark(), "'metrics.reflectors' must be a list");
    for (std::size_t i = 0; i < refl.size(); ++i) {
      Section r(refl[i], "metrics.reflectors[" + std::to_string(i) + "]", source);
      Reflector v{r.require<double>("x"), r.require<double>("z")};
      r.finish();
      if (!cfg.grid.contains(v.x, v.z))
        config_error(source, refl[i].Mark(), "reflector lies outside the image grid");
      cfg.metrics.reflectors.push_back(v);
    }
  }
  met.finish();

  Section sweep(top.child("ksweep"), "ksweep", source);
  const YAML::Node ks = sweep.child("k_list");
  if (present(ks)) {
    if (!ks.IsSequence()) config_error(source, ks.Mark(), "'ksweep.k_list' must be a list");
    cfg.ksweep_k.clear();
    for (const auto& k : ks) cfg.ksweep_k.push_back(parse_k(k, source));
    try {
      validate_k_list(cfg.ksweep_k);
    } catch (const Error& e) {
      config_error(source, ks.Mark(), e.what());
    }
  }
  sweep.finish();

  Section out(top.child("output"), "output", source);
  cfg.output_dir = out.get<std::string>("directory", cfg.output_dir);
  out.finish();

  top.finish();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  return parse(read_file(path), path);
}

std::string ExperimentConfig::to_yaml() const {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;

  const auto& sim = simulator;
  e << YAML::Key << "simulator" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap << YAML::Key << "num_elements"
    << YAML::Value << sim.num_elements << YAML::Key << "pitch" << YAML::Value << sim.pitch << YAML::EndMap;
  e << YAML::Key << "sampling" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "fs" << YAML::Value << sim.sampling.fs;
  e << YAML::Key << "t0" << YAML::Value << sim.sampling.t0;
  e << YAML::Key << "num_samples" << YAML::Value << sim.sampling.num_samples;
  e << YAML::Key << "c" << YAML::Value << sim.sampling.c << YAML::EndMap;
  e << YAML::Key << "pulse" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "f0" << YAML::Value << sim.pulse.f0;
  e << YAML::Key << "num_cycles" << YAML::Value << sim.pulse.num_cycles;
  e << YAML::Key << "envelope" << YAML::Value
    << (sim.pulse.envelope == PulseEnvelope::Hann ? "hann" : "gaussian");
  e << YAML::Key << "amplitude" << YAML::Value << sim.pulse.amplitude << YAML::EndMap;
  e << YAML::Key << "phantom" << YAML::Value << YAML::BeginMap << YAML::Key << "scatterers" << YAML::Value
    << YAML::BeginSeq;
  for (const auto& s : sim.phantom.scatterers)
    e << YAML::Flow << YAML::BeginMap << YAML::Key << "x" << YAML::Value << s.x << YAML::Key << "z"
      << YAML::Value << s.z << YAML::Key << "reflectivity" << YAML::Value << s.reflectivity << YAML::EndMap;
  e << YAML::EndSeq << YAML::EndMap;
  e << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "tof_jitter_std" << YAML::Value << sim.noise.tof_jitter_std;
  e << YAML::Key << "additive_noise_std" << YAML::Value << sim.noise.additive_noise_std;
  e << YAML::Key << "seed" << YAML::Value << sim.noise.rng_seed << YAML::EndMap;
  e << YAML::Key << "tx_model" << YAML::Value << "plane_wave_0deg";
  e << YAML::EndMap;

  e << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "x_min" << YAML::Value << grid.x_min << YAML::Key << "x_max" << YAML::Value << grid.x_max;
  e << YAML::Key << "z_min" << YAML::Value << grid.z_min << YAML::Key << "z_max" << YAML::Value << grid.z_max;
  e << YAML::Key << "width" << YAML::Value << grid.width << YAML::Key << "height" << YAML::Value << grid.height;
  e << YAML::EndMap;

  e << YAML::Key << "beamformers" << YAML::Value << YAML::BeginSeq;
  for (const auto& b : beamformers) {
    e << YAML::BeginMap;
    e << YAML::Key << "name" << YAML::Value << b.name;
    e << YAML::Key << "method" << YAML::Value << to_string(b.method);
    e << YAML::Key << "K" << YAML::Value << b.half_width;
    e << YAML::Key << "epsilon" << YAML::Value << b.epsilon;
    e << YAML::Key << "apodization" << YAML::Value;
    if (b.apodization == ApodizationKind::Custom) {
      e << YAML::BeginSeq;
      for (Eigen::Index i = 0; i < b.custom_apodization.rows(); ++i) {
        e << YAML::Flow << YAML::BeginSeq;
        for (Eigen::Index j = 0; j < b.custom_apodization.cols(); ++j) e << b.custom_apodization(i, j);
        e << YAML::EndSeq;
      }
      e << YAML::EndSeq;
    } else {
      e << to_string(b.apodization);
    }
    e << YAML::Key << "solver" << YAML::Value << (b.solver == SolverKind::Dense ? "dense" : "lowrank");
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;

  e << YAML::Key << "display" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "dynamic_range_db" << YAML::Value << display.dynamic_range_db;
  e << YAML::Key << "gamma" << YAML::Value << display.gamma;
  e << YAML::Key << "normalization" << YAML::Value << "global_max" << YAML::EndMap;

  e << YAML::Key << "metrics" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "axis" << YAML::Value << to_string(metrics.psf.axis);
  e << YAML::Key << "window" << YAML::Value << metrics.psf.window;
  e << YAML::Key << "reflectors" << YAML::Value << YAML::BeginSeq;
  for (const auto& r : metrics.reflectors)
    e << YAML::Flow << YAML::BeginMap << YAML::Key << "x" << YAML::Value << r.x << YAML::Key << "z"
      << YAML::Value << r.z << YAML::EndMap;
  e << YAML::EndSeq << YAML::EndMap;

  e << YAML::Key << "ksweep" << YAML::Value << YAML::BeginMap << YAML::Key << "k_list" << YAML::Value
    << YAML::Flow << ksweep_k << YAML::EndMap;
  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap << YAML::Key << "directory" << YAML::Value
    << output_dir << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

const BeamformerConfig& ExperimentConfig::atc_beamformer() const {
  for (const auto& b : beamformers)
    if (b.method == Method::Atc) return b;
  throw Error(ErrorCode::InvalidConfig, "config has no atc beamformer");
}

void validate_k_list(const std::vector<std::size_t>& k_list) {
  if (k_list.empty()) throw Error(ErrorCode::InvalidConfig, "K list is empty");
  std::set<std::size_t> seen;
  for (std::size_t k : k_list)
    if (!seen.insert(k).second) throw Error(ErrorCode::InvalidConfig, "duplicate K value " + std::to_string(k));
  if (!seen.count(0)) throw Error(ErrorCode::InvalidConfig, "K list must contain 0 (the normalization reference)");
}

RFFrame simulate(const ExperimentConfig& cfg) {
  const auto& s = cfg.simulator;
  return simulate_frame(s.geometry(), s.sampling, s.pulse, s.phantom, s.noise, s.tx);
}

namespace {

std::string reflector_label(const Reflector& r) {
  std::ostringstream os;
  os << "(" << format_number(r.x) << ", " << format_number(r.z) << ")";
  return os.str();
}

PSFMetrics measure_one(const BeamformedImage& env, const Reflector& r, const PsfOptions& psf,
                       const std::string& who) {
  try {
    return psf_metrics(extract_psf(env, r.x, r.z, psf));
  } catch (const Error& e) {
    throw Error(e.code(), who + ", reflector " + reflector_label(r) + ": " + e.what());
  }
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create directory '" + dir + "': " + ec.message());
  return fs::path(dir);
}

}  // namespace

std::vector<MetricsRow> measure(const ExperimentConfig& cfg, const std::vector<NamedImage>& images) {
  if (cfg.metrics.reflectors.empty()) throw Error(ErrorCode::InvalidConfig, "metrics.reflectors is empty");
  std::vector<MetricsRow> rows;
  for (const auto& img : images) {
    const BeamformedImage env = envelope(img.image);
    for (const auto& r : cfg.metrics.reflectors) {
      if (!env.grid().contains(r.x, r.z))
        throw Error(ErrorCode::InvalidConfig,
                    "method " + img.method + ": reflector " + reflector_label(r) + " is outside the image grid");
      rows.push_back({img.method, r.x, r.z, cfg.metrics.psf.axis,
                      measure_one(env, r, cfg.metrics.psf, "method " + img.method)});
    }
  }
  return rows;
}

std::vector<KSweepRow> ksweep(const ExperimentConfig& cfg, const RFFrame& frame,
                              const std::vector<std::size_t>& k_list, unsigned threads) {
  validate_k_list(k_list);
  if (cfg.metrics.reflectors.empty()) throw Error(ErrorCode::InvalidConfig, "metrics.reflectors is empty");
  BeamformerConfig base = cfg.atc_beamformer();
  if (base.apodization == ApodizationKind::Custom)
    throw Error(ErrorCode::InvalidConfig, "K sweep needs a generated (triangular or ones) apodization");

  std::vector<KSweepRow> rows;
  for (std::size_t k : k_list) {
    BeamformerConfig b = base;
    b.half_width = k;
    const BeamformedImage env = envelope(beamform_image(frame, cfg.grid, b, threads).image);
    for (const auto& r : cfg.metrics.reflectors) {
      KSweepRow row{k, r, {}, 1.0, std::nullopt};
      try {
        row.metrics = measure_one(env, r, cfg.metrics.psf, "atc K=" + std::to_string(k));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ReflectorNotFound && e.code() != ErrorCode::NoCrossing) throw;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.metrics = PSFMetrics{nan, nan, nan, nan,
                                 {e.code() == ErrorCode::NoCrossing ? "no_crossing" : "reflector_not_found"}};
        row.error = e;
      }
      rows.push_back(std::move(row));
    }
  }
  for (auto& row : rows) {
    for (const auto& ref : rows)
      if (ref.half_width == 0 && ref.reflector.x == row.reflector.x && ref.reflector.z == row.reflector.z)
        row.resolution_ratio = row.metrics.resolution / ref.metrics.resolution;
  }
  return rows;
}

std::string encode_ksweep_csv(const std::vector<KSweepRow>& rows, PsfAxis axis) {
  std::string out = "K,reflector_x_m,reflector_z_m,axis,fwhm_m,resolution_per_m,resolution_ratio,flags\n";
  for (const auto& r : rows) {
    std::string flags;
    for (const auto& f : r.metrics.flags) flags += (flags.empty() ? "" : "|") + f;
    out += std::to_string(r.half_width) + ',' + format_number(r.reflector.x) + ',' +
           format_number(r.reflector.z) + ',' + to_string(axis) + ',' + format_number(r.metrics.fwhm) + ',' +
           format_number(r.metrics.resolution) + ',' + format_number(r.resolution_ratio) + ',' + flags + '\n';
  }
  return out;
}

std::vector<std::string> cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir) {
  const fs::path dir = ensure_dir(out_dir);
  const RFFrame frame = simulate(cfg);
  const std::string rf = (dir / "rf.bin").string();
  const std::string echo = (dir / "rf.resolved.cfg").string();
  write_rf(rf, frame);
  write_file(echo, cfg.to_yaml());
  return {rf, echo};
}

std::vector<std::string> cmd_beamform(const ExperimentConfig& cfg, const std::string& rf_path,
                                      const std::string& out_dir, unsigned threads) {
  const RFFrame frame = read_rf(rf_path);
  const fs::path dir = ensure_dir(out_dir);
  std::vector<std::string> written;
  for (const auto& b : cfg.beamformers) {
    const BeamformResult result = beamform_image(frame, cfg.grid, b, threads);
    const std::string raw = (dir / (b.name + ".img")).string();
    const std::string pgm = (dir / (b.name + ".pgm")).string();
    write_image(raw, result.image);
    write_image_pgm(pgm, log_compress_gamma(envelope(result.image), cfg.display));
    written.push_back(raw);
    written.push_back(pgm);
  }
  return written;
}

std::vector<std::string> cmd_metrics(const ExperimentConfig& cfg,
                                     const std::vector<std::string>& image_paths,
                                     const std::string& out_dir) {
  if (image_paths.empty()) throw Error(ErrorCode::InvalidConfig, "no images given");
  std::vector<NamedImage> images;
  for (const auto& p : image_paths) images.push_back({fs::path(p).stem().string(), read_image(p)});
  const std::vector<MetricsRow> rows = measure(cfg, images);
  const fs::path dir = ensure_dir(out_dir);
  const std::string csv = (dir / "metrics.csv").string();
  const std::string ratios = (dir / "metrics_ratios.csv").string();
  write_metrics_csv(csv, rows);
  write_file(ratios, encode_ratio_csv(rows));
  return {csv, ratios};
}

std::vector<std::string> cmd_ksweep(const ExperimentConfig& cfg, const std::string& rf_path,
                                    const std::vector<std::size_t>& k_list,
                                    const std::string& out_dir, unsigned threads) {
  validate_k_list(k_list);
  const RFFrame frame = read_rf(rf_path);
  const auto rows = ksweep(cfg, frame, k_list, threads);
  const fs::path dir = ensure_dir(out_dir);
  const std::string csv = (dir / "ksweep.csv").string();
  write_file(csv, encode_ksweep_csv(rows, cfg.metrics.psf.axis));
  for (const auto& r : rows)
    if (r.error) throw *r.error;
  return {csv};
}

}  // namespace atcbf
