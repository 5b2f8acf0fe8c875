// Copyright 2026 The BiSELD Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Uses only the public C API.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "biseld/biseld.h"

namespace {

struct Failure {
  int code;
};

struct Deleter {
  void operator()(biseld_config* p) const { biseld_config_free(p); }
  void operator()(biseld_graph* p) const { biseld_graph_free(p); }
  void operator()(biseld_weights* p) const { biseld_weights_free(p); }
};
using ConfigPtr = std::unique_ptr<biseld_config, Deleter>;
using GraphPtr = std::unique_ptr<biseld_graph, Deleter>;
using WeightsPtr = std::unique_ptr<biseld_weights, Deleter>;

std::string g_command;

void Check(biseld_status s) {
  if (s == BISELD_OK) return;
  std::cerr << "biseld " << g_command << ": " << biseld_status_name(s) << ": "
            << biseld_last_error() << "\n";
  throw Failure{1};
}

// Prints and releases a JSON string returned by the library.
void Print(char* json) {
  if (!json) return;
  std::cout << json << "\n";
  biseld_string_free(json);
}

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

ConfigPtr MakeConfig(const Globals& g) {
  biseld_config* c = nullptr;
  Check(g.config_path.empty() ? biseld_config_default(&c)
                              : biseld_config_load(g.config_path.c_str(), &c));
  ConfigPtr cfg(c);
  if (g.seed) Check(biseld_config_set_seed(cfg.get(), *g.seed));
  return cfg;
}

// "default" selects the built-in network.
GraphPtr MakeGraph(const std::string& spec) {
  biseld_graph* g = nullptr;
  Check(spec == "default" ? biseld_graph_default(&g) : biseld_graph_load(spec.c_str(), &g));
  return GraphPtr(g);
}

WeightsPtr MakeWeights(const biseld_graph* g, const std::string& path) {
  biseld_weights* w = nullptr;
  Check(biseld_weights_load(g, path.c_str(), &w));
  return WeightsPtr(w);
}

std::string StripExtension(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binaural sound event localization and detection toolkit"};
  app.set_version_flag("--version", std::string("biseld ") + biseld_version());
  app.require_subcommand(1);
  app.fallthrough();

  Globals globals;
  app.add_option("--config", globals.config_path, "JSON configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", globals.seed, "Overrides the configured seed");

  std::string a, b, c, out;
  std::string oir, events, noise, ref, pred, tsp, pivot;
  std::optional<double> veg, vbox, dist;
  bool csv = false;
  int class_index = 0;
  std::size_t frames = 0;

  auto* derive = app.add_subcommand("derive-hrtf", "Derive HRIR files from raw responses");
  derive->add_option("--bir", a, "Directory of raw binaural responses")->required()
      ->check(CLI::ExistingDirectory);
  derive->add_option("--oir", oir, "Origin response file or per-elevation directory")
      ->required()->check(CLI::ExistingPath);
  derive->add_option("--out", out, "Output HRIR directory")->required();

  auto* cues = app.add_subcommand("analyze-cues", "ITD, ILD, spectral cue and HPD tables");
  cues->add_option("hrir_dir", a, "HRIR database directory")->required()
      ->check(CLI::ExistingDirectory);
  cues->add_option("--out", out, "Output directory")->required();

  auto* btff = app.add_subcommand("extract-btff", "Binaural time-frequency features of a WAV");
  btff->add_option("input", a, "Two-channel WAV file")->required()->check(CLI::ExistingFile);
  btff->add_option("output", out, "Feature file")->required();
  btff->add_flag("--csv", csv, "Also write one CSV per channel next to the output");

  auto* synth = app.add_subcommand("synth-dataset", "Synthesize the binaural dataset");
  synth->add_option("--events", events, "Event clip directory")->required()
      ->check(CLI::ExistingDirectory);
  synth->add_option("--noise", noise, "Noise directory (SNR mode)")
      ->check(CLI::ExistingDirectory);
  synth->add_option("--hrir", b, "HRIR database directory (overrides paths.hrir_dir)")
      ->check(CLI::ExistingDirectory);
  synth->add_option("--out", out, "Output directory")->required();

  auto* speaker = app.add_subcommand("simulate-speaker", "Sealed speaker frequency responses");
  speaker->add_option("--tsp", tsp, "Thiele-Small parameter JSON")->check(CLI::ExistingFile);
  speaker->add_option("--veg", veg, "Drive voltage, V");
  speaker->add_option("--vbox", vbox, "Box volume, cc");
  speaker->add_option("--r", dist, "Measurement distance, m");
  speaker->add_option("--out", out, "Output directory")->required();

  auto* count = app.add_subcommand("count-params", "Parameter counts of a network graph");
  count->add_option("graph", a, "Graph JSON, or 'default'")->required();
  count->add_option("--frames", frames, "Input frames for the shape column");

  auto* init = app.add_subcommand("init-weights", "Seeded random weights for a graph");
  init->add_option("graph", a, "Graph JSON, or 'default'")->required();
  init->add_option("--out", out, "Weight file")->required();

  auto* infer = app.add_subcommand("infer", "Run a network on a feature file");
  infer->add_option("graph", a, "Graph JSON, or 'default'")->required();
  infer->add_option("weights", b, "Weight file")->required()->check(CLI::ExistingFile);
  infer->add_option("btff", c, "Feature file")->required()->check(CLI::ExistingFile);
  infer->add_option("--out", out, "Events CSV")->required();

  auto* eval = app.add_subcommand("evaluate", "SELD metrics over label directories");
  eval->add_option("--ref", ref, "Reference label directory")->required()
      ->check(CLI::ExistingDirectory);
  eval->add_option("--pred", pred, "Predicted label directory")->required()
      ->check(CLI::ExistingDirectory);
  eval->add_option("--out", out, "Report JSON")->required();

  auto* vam = app.add_subcommand("vam", "Vector activation map of one class");
  vam->add_option("graph", a, "Graph JSON, or 'default'")->required();
  vam->add_option("weights", b, "Weight file")->required()->check(CLI::ExistingFile);
  vam->add_option("btff", c, "Feature file")->required()->check(CLI::ExistingFile);
  vam->add_option("--class", class_index, "Class index")->required()->check(CLI::Range(0, 11));
  vam->add_option("--pivot", pivot, "Pivot layer (default: the graph's first pivot)");
  vam->add_option("--out", out, "Map CSV; a JSON sidecar is written beside it")->required();

  auto* show = app.add_subcommand("print-config", "Print the effective configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (auto* sub : app.get_subcommands()) g_command = sub->get_name();
    ConfigPtr cfg = MakeConfig(globals);
    char* json = nullptr;
    if (*derive) {
      Check(biseld_derive_hrtf(cfg.get(), a.c_str(), oir.c_str(), out.c_str(), &json));
    } else if (*cues) {
      Check(biseld_analyze_cues(cfg.get(), a.c_str(), out.c_str(), &json));
    } else if (*btff) {
      const std::string prefix = StripExtension(out);
      Check(biseld_extract_btff(cfg.get(), a.c_str(), out.c_str(),
                                csv ? prefix.c_str() : nullptr, &json));
    } else if (*synth) {
      if (!b.empty()) Check(biseld_config_set_hrir_dir(cfg.get(), b.c_str()));
      Check(biseld_synth_dataset(cfg.get(), events.c_str(), noise.empty() ? nullptr : noise.c_str(),
                                 out.c_str(), &json));
    } else if (*speaker) {
      if (!tsp.empty()) Check(biseld_config_set_tsp_file(cfg.get(), tsp.c_str()));
      Check(biseld_config_set_speaker(cfg.get(), veg.value_or(NAN), vbox.value_or(NAN),
                                      dist.value_or(NAN)));
      Check(biseld_simulate_speaker(cfg.get(), out.c_str(), &json));
    } else if (*count) {
      GraphPtr g = MakeGraph(a);
      Check(biseld_graph_summary(g.get(), frames, &json));
    } else if (*init) {
      GraphPtr g = MakeGraph(a);
      std::uint64_t seed = 0;
      Check(biseld_config_get_seed(cfg.get(), &seed));
      biseld_weights* w = nullptr;
      Check(biseld_weights_random(g.get(), seed, &w));
      WeightsPtr wp(w);
      Check(biseld_weights_save(wp.get(), out.c_str()));
      std::cout << "{\n  \"weights\": \"" << out << "\",\n  \"seed\": " << seed << "\n}\n";
    } else if (*infer) {
      GraphPtr g = MakeGraph(a);
      WeightsPtr w = MakeWeights(g.get(), b);
      Check(biseld_infer(cfg.get(), g.get(), w.get(), c.c_str(), out.c_str(), &json));
    } else if (*eval) {
      Check(biseld_evaluate(cfg.get(), ref.c_str(), pred.c_str(), out.c_str(), &json));
    } else if (*vam) {
      GraphPtr g = MakeGraph(a);
      WeightsPtr w = MakeWeights(g.get(), b);
      Check(biseld_vam(cfg.get(), g.get(), w.get(), c.c_str(), class_index,
                       pivot.empty() ? nullptr : pivot.c_str(), out.c_str(), &json));
    } else if (*show) {
      Check(biseld_config_to_json(cfg.get(), &json));
    }
    Print(json);
  } catch (const Failure& f) {
    return f.code;
  }
  return 0;
}
