// Copyright 2026 The AtlasKit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ATLAS_TOOLS_COMMANDS_H_
#define ATLAS_TOOLS_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "atlas/serialize.h"
#include "output.h"

namespace atlas::cli {

// Bad flag combinations found after parsing; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string out;
  std::uint64_t seed = 0;
  bool emit_plot_data = false;
};

struct LawSelection {
  std::string law = "atlas_full";
  std::vector<std::string> targets;
  std::vector<std::string> transfer_set;
  std::size_t transfer_k = 3;
  int grid_starts = 12;
  int random_starts = 8;
  double huber_delta = 1e-3;
};

struct FitOptions {
  CommonOptions common;
  std::string runs;
  std::string catalog;
  LawSelection law;
  bool capacity = false;
};

struct EvalOptions {
  CommonOptions common;
  std::string runs;
  std::string catalog;
  LawSelection law;
  std::string params;
  std::vector<std::string> axes{"random", "n", "d", "c", "m"};
  double fraction = 0.2;
  std::vector<double> held_scales;
  std::vector<std::string> held_mixtures;
  std::string averaging = "per_language";
};

struct TransferOptions {
  CommonOptions common;
  std::string curves;
  std::vector<std::string> languages;
  double d_mono = 42e9;
  std::optional<double> d_max;
  std::size_t trees = 300;
  std::size_t cv_folds = 0;
};

struct PlanOptions {
  CommonOptions common;
  std::string params;
  double r = 0.0;
  std::optional<double> phi_alpha, psi_beta;
  std::optional<double> alpha, beta, phi, psi;
  std::optional<double> baseline_k, baseline_n, baseline_d;
  std::vector<double> sweep;
};

struct CrossoverOptions {
  CommonOptions common;
  std::string curves;
  std::string target;
  std::optional<double> budget;
  std::optional<double> n_params;
};

struct SynthOptions {
  CommonOptions common;
  std::string preset;
  double noise = 0.01;
  std::string format = "jsonl";
  std::vector<std::string> languages{"ar", "de", "en", "es", "fr", "hi", "sw", "yo", "zh"};
  std::vector<double> n_values;
  std::string target = "sw";
};

// Effective configuration, echoed into every report.
Json ConfigJson(const FitOptions& o);
Json ConfigJson(const EvalOptions& o);
Json ConfigJson(const TransferOptions& o);
Json ConfigJson(const PlanOptions& o);
Json ConfigJson(const CrossoverOptions& o);
Json ConfigJson(const SynthOptions& o);

// Flag checks that need no input data; throw UsageError.
void Validate(const EvalOptions& o);
void Validate(const PlanOptions& o);
void Validate(const CrossoverOptions& o);
void Validate(const SynthOptions& o);

void RunFit(const FitOptions& o, OutputDir& dir, std::ostream& out);
void RunEval(const EvalOptions& o, OutputDir& dir, std::ostream& out);
void RunTransfer(const TransferOptions& o, OutputDir& dir, std::ostream& out);
void RunPlan(const PlanOptions& o, OutputDir& dir, std::ostream& out);
void RunCrossover(const CrossoverOptions& o, OutputDir& dir, std::ostream& out);
void RunSynth(const SynthOptions& o, OutputDir& dir, std::ostream& out);

}  // namespace atlas::cli

#endif  // ATLAS_TOOLS_COMMANDS_H_
