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

#include "cli.h"

#include <functional>
#include <ostream>

#include "CLI11.hpp"
#include "commands.h"

namespace atlas::cli {
namespace {

void AddCommon(CLI::App* sub, CommonOptions& c) {
  sub->add_option("--out", c.out, "Output directory for reports")->required();
  sub->add_option("--seed", c.seed, "Seed for every random choice")->capture_default_str();
  sub->add_flag("--emit-plot-data", c.emit_plot_data, "Also write CSVs shaped for plotting");
}

void AddLawSelection(CLI::App* sub, LawSelection& l) {
  sub->add_option("--law", l.law, "bsl, atlas_target, atlas_other or atlas_full")
      ->capture_default_str();
  sub->add_option("--target", l.targets, "Target languages (default: all eval languages)")
      ->delimiter(',');
  sub->add_option("--transfer-set", l.transfer_set,
                  "Transfer languages for atlas_full (default: most co-sampled)")
      ->delimiter(',');
  sub->add_option("--transfer-k", l.transfer_k, "Size of the automatic transfer set")
      ->capture_default_str();
  sub->add_option("--grid-starts", l.grid_starts, "Grid points refined by local search")
      ->capture_default_str();
  sub->add_option("--random-starts", l.random_starts, "Seeded random starts")
      ->capture_default_str();
  sub->add_option("--huber-delta", l.huber_delta, "Huber threshold on log residuals")
      ->capture_default_str();
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scaling-law toolkit for multilingual pretraining runs", "atlaskit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");
  app.set_version_flag("--version", "atlaskit 0.1.0");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a scaling law per target language");
  AddCommon(fit_cmd, fit.common);
  fit_cmd->add_option("--runs", fit.runs, "Runs table (.csv or .jsonl)")->required();
  fit_cmd->add_option("--catalog", fit.catalog, "Unique-token catalog (.csv or .jsonl)");
  AddLawSelection(fit_cmd, fit.law);
  fit_cmd->add_flag("--capacity", fit.capacity,
                    "Fit the language-count capacity law on evenly sampled mixtures");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Held-out R2 along split axes");
  AddCommon(eval_cmd, eval.common);
  eval_cmd->add_option("--runs", eval.runs, "Runs table")->required();
  eval_cmd->add_option("--catalog", eval.catalog, "Unique-token catalog")->required();
  AddLawSelection(eval_cmd, eval.law);
  eval_cmd->add_option("--params", eval.params,
                       "Law set JSON to evaluate as is instead of refitting per split");
  eval_cmd->add_option("--axes", eval.axes, "Split axes: random, n, d, c, m")
      ->delimiter(',')
      ->capture_default_str();
  eval_cmd->add_option("--fraction", eval.fraction, "Held-out share for random, d and c")
      ->capture_default_str();
  eval_cmd->add_option("--held-scales", eval.held_scales,
                       "Model sizes held out on axis n (default: two largest)")
      ->delimiter(',');
  eval_cmd->add_option("--held-mixtures", eval.held_mixtures,
                       "Mixture ids held out on axis m (default: 3+ languages, not unimax)")
      ->delimiter(',');
  eval_cmd->add_option("--averaging", eval.averaging, "per_language or pooled")
      ->capture_default_str();

  TransferOptions transfer;
  auto* transfer_cmd = app.add_subcommand(
      "transfer", "Bilingual transfer scores and a forest-completed transfer matrix");
  AddCommon(transfer_cmd, transfer.common);
  transfer_cmd
      ->add_option("--curves", transfer.curves,
                   "Curves with regimes mono, bi:<src>, base and ft:<src>")
      ->required();
  transfer_cmd->add_option("--languages", transfer.languages, "Matrix languages, in order")
      ->delimiter(',');
  transfer_cmd->add_option("--d-mono", transfer.d_mono, "Step of the monolingual reference")
      ->capture_default_str();
  transfer_cmd->add_option("--d-max", transfer.d_max,
                           "Finetuning budget (default: shortest ft curve)");
  transfer_cmd->add_option("--trees", transfer.trees, "Forest size")->capture_default_str();
  transfer_cmd->add_option("--cv", transfer.cv_folds, "k-fold CV of the forest (0 = off)")
      ->capture_default_str();

  PlanOptions plan;
  auto* plan_cmd = app.add_subcommand("plan", "Compute-optimal scaling when adding languages");
  AddCommon(plan_cmd, plan.common);
  plan_cmd->add_option("--r", plan.r, "Language-count multiplier K'/K")->required();
  plan_cmd->add_option("--params", plan.params, "Capacity law JSON (fit --capacity output)");
  plan_cmd->add_option("--phi-alpha", plan.phi_alpha, "Exponent ratio phi/alpha");
  plan_cmd->add_option("--psi-beta", plan.psi_beta, "Exponent ratio psi/beta");
  plan_cmd->add_option("--alpha", plan.alpha, "Model-size exponent");
  plan_cmd->add_option("--beta", plan.beta, "Data exponent");
  plan_cmd->add_option("--phi", plan.phi, "Language-count exponent of the model term");
  plan_cmd->add_option("--psi", plan.psi, "Language-count exponent of the data term");
  plan_cmd->add_option("--baseline-k", plan.baseline_k, "Current language count");
  plan_cmd->add_option("--baseline-n", plan.baseline_n, "Current model size");
  plan_cmd->add_option("--baseline-d", plan.baseline_d, "Current tokens per language");
  plan_cmd->add_option("--sweep", plan.sweep, "Model-size multipliers to trace")
      ->delimiter(',');

  CrossoverOptions cross;
  auto* cross_cmd = app.add_subcommand(
      "crossover", "When pretraining from scratch beats finetuning a multilingual model");
  AddCommon(cross_cmd, cross.common);
  cross_cmd->add_option("--curves", cross.curves, "Curves pretrain@<N> and finetune@<N>")
      ->required();
  cross_cmd->add_option("--target", cross.target, "Eval language when curves hold several");
  cross_cmd->add_option("--budget", cross.budget, "Compute budget C for a decision");
  cross_cmd->add_option("--n-params", cross.n_params, "Model size for a decision");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic data from a known law");
  AddCommon(synth_cmd, synth.common);
  synth_cmd
      ->add_option("--preset", synth.preset,
                   "recovery, saturation, capacity, transfer or crossover")
      ->required();
  synth_cmd->add_option("--noise", synth.noise, "Lognormal noise sigma")->capture_default_str();
  synth_cmd->add_option("--format", synth.format, "csv or jsonl")->capture_default_str();
  synth_cmd->add_option("--languages", synth.languages, "Languages of the transfer preset")
      ->delimiter(',')
      ->capture_default_str();
  synth_cmd->add_option("--n-values", synth.n_values, "Model sizes of the crossover preset")
      ->delimiter(',');
  synth_cmd->add_option("--target", synth.target, "Language of the crossover preset")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  std::string out_dir;
  std::function<void(OutputDir&)> body;
  try {
    if (fit_cmd->parsed()) {
      out_dir = fit.common.out;
      body = [&](OutputDir& d) { RunFit(fit, d, out); };
    } else if (eval_cmd->parsed()) {
      Validate(eval);
      out_dir = eval.common.out;
      body = [&](OutputDir& d) { RunEval(eval, d, out); };
    } else if (transfer_cmd->parsed()) {
      out_dir = transfer.common.out;
      body = [&](OutputDir& d) { RunTransfer(transfer, d, out); };
    } else if (plan_cmd->parsed()) {
      Validate(plan);
      out_dir = plan.common.out;
      body = [&](OutputDir& d) { RunPlan(plan, d, out); };
    } else if (cross_cmd->parsed()) {
      Validate(cross);
      out_dir = cross.common.out;
      body = [&](OutputDir& d) { RunCrossover(cross, d, out); };
    } else {
      Validate(synth);
      out_dir = synth.common.out;
      body = [&](OutputDir& d) { RunSynth(synth, d, out); };
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::optional<OutputDir> dir;
  try {
    dir.emplace(out_dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  try {
    body(*dir);
    dir->Succeed();
    return kExitOk;
  } catch (const UsageError& e) {
    dir->Fail(std::string("usage error: ") + e.what());
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    dir->Fail(std::string("error: ") + e.what());
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
}

}  // namespace atlas::cli
