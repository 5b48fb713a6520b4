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

#include "atlas/serialize.h"

#include <cmath>
#include <ostream>
#include <set>

#include "atlas/error.h"
#include "atlas/table_io.h"

namespace atlas {
namespace {

void CheckKeys(const Json& j, const std::string& what,
               const std::set<std::string>& required,
               const std::set<std::string>& optional) {
  if (!j.is_object()) throw DataError(what + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!required.count(key) && !optional.count(key)) {
      throw DataError(what + ": unknown key '" + key + "'");
    }
  }
  for (const auto& key : required) {
    if (!j.contains(key)) throw DataError(what + ": missing key '" + key + "'");
  }
}

double GetNumber(const Json& j, const std::string& what, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw DataError(what + ": key '" + key + "' must be a number");
  return v.get<double>();
}

void CheckSchema(const Json& j, const std::string& what, const std::string& kind) {
  if (j.contains("schema_version") && j["schema_version"] != kSchemaVersion) {
    throw DataError(what + ": unsupported schema_version " + j["schema_version"].dump());
  }
  if (j.contains("kind") && j["kind"] != kind) {
    throw DataError(what + ": expected kind '" + kind + "', got " + j["kind"].dump());
  }
}

Json WeightsJson(const TermWeights& w) { return {{"w_n", w.w_n}, {"w_d", w.w_d}}; }

}  // namespace

Json NumberOrNull(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json ToJson(const LawSpec& spec) {
  return {{"variant", std::string(LawVariantName(spec.variant))},
          {"target_language", spec.target_language},
          {"transfer_set", spec.transfer_set}};
}

Json ToJson(const LawParams& p) {
  Json j{{"schema_version", kSchemaVersion},
         {"kind", "atlas_law"},
         {"variant", std::string(LawVariantName(p.variant))},
         {"e_irreducible", p.e_irreducible},
         {"log_a", p.log_a},
         {"log_b", p.log_b},
         {"alpha", p.alpha},
         {"beta", p.beta}};
  if (UsesSaturation(p.variant)) j["lambda"] = p.lambda;
  if (UsesTransferTerms(p.variant)) j["tau_transfer"] = p.tau_transfer;
  if (UsesOtherTerm(p.variant)) j["tau_other"] = p.tau_other;
  return j;
}

Json ToJson(const CapacityParams& p) {
  return {{"schema_version", kSchemaVersion},
          {"kind", "capacity_law"},
          {"l_inf", p.l_inf},
          {"log_a", p.log_a},
          {"log_b", p.log_b},
          {"alpha", p.alpha},
          {"beta", p.beta},
          {"phi", p.phi},
          {"psi", p.psi}};
}

Json ToJson(const FitConfig& c) {
  Json grid = Json::object();
  for (const auto& [name, values] : c.init_grid) grid[name] = values;
  return {{"n_grid_starts", c.n_grid_starts},
          {"n_random_starts", c.n_random_starts},
          {"huber_delta", c.huber_delta},
          {"max_iters", c.max_iters},
          {"convergence_tol", c.convergence_tol},
          {"seed", c.seed},
          {"init_grid", grid},
          {"tau_init", c.tau_init}};
}

Json ToJson(const EvalReport& report) {
  Json axes = Json::array();
  for (const auto& a : report.axes) {
    Json langs = Json::object();
    for (const auto& [l, s] : a.per_language) {
      langs[l] = {{"r2", s.r2}, {"n_train", s.n_train}, {"n_test", s.n_test}};
    }
    axes.push_back({{"axis", std::string(SplitAxisName(a.axis))},
                    {"label", SplitAxisLabel(a.axis)},
                    {"r2", NumberOrNull(a.r2)},
                    {"mean_r2", NumberOrNull(a.mean_r2)},
                    {"pooled_r2", NumberOrNull(a.pooled_r2)},
                    {"per_language", langs},
                    {"skipped", a.skipped}});
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "eval_report"},
          {"variant", std::string(LawVariantName(report.variant))},
          {"averaging", report.averaging == Averaging::kPooled ? "pooled" : "per_language"},
          {"axes", axes}};
}

Json ToJson(const PlanReport& report) {
  Json frontier = Json::array();
  for (const auto& f : report.frontier) {
    frontier.push_back({{"s", f.s}, {"t", f.t}, {"d_tot_ratio", f.d_tot_ratio},
                        {"c_ratio", f.c_ratio}});
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "plan_report"},
          {"r", report.r},
          {"weights", WeightsJson(report.weights)},
          {"optimum",
           {{"n_ratio", report.optimum.n_ratio},
            {"d_t_ratio", report.optimum.d_t_ratio},
            {"d_tot_ratio", report.optimum.d_tot_ratio},
            {"c_ratio", report.optimum.c_ratio}}},
          {"frontier", frontier}};
}

Json ToJson(const CrossoverFit& fit) {
  return {{"schema_version", kSchemaVersion},
          {"kind", "crossover_fit"},
          {"coeff", fit.coeff},
          {"exponent", fit.exponent},
          {"sse", fit.sse}};
}

LawSpec LawSpecFromJson(const Json& j) {
  const std::string what = "law spec";
  CheckKeys(j, what, {"variant", "target_language"}, {"transfer_set"});
  LawSpec spec;
  spec.variant = ParseLawVariant(j.at("variant").get<std::string>());
  spec.target_language = j.at("target_language").get<std::string>();
  if (j.contains("transfer_set")) {
    spec.transfer_set = j["transfer_set"].get<std::vector<Language>>();
  }
  spec.Validate();
  return spec;
}

LawParams LawParamsFromJson(const Json& j) {
  const std::string what = "law params";
  CheckKeys(j, what, {"variant", "e_irreducible", "log_a", "log_b", "alpha", "beta"},
            {"schema_version", "kind", "lambda", "tau_transfer", "tau_other"});
  CheckSchema(j, what, "atlas_law");
  try {
    LawParams p;
    p.variant = ParseLawVariant(j.at("variant").get<std::string>());
    p.e_irreducible = GetNumber(j, what, "e_irreducible");
    p.log_a = GetNumber(j, what, "log_a");
    p.log_b = GetNumber(j, what, "log_b");
    p.alpha = GetNumber(j, what, "alpha");
    p.beta = GetNumber(j, what, "beta");
    if (j.contains("lambda")) p.lambda = GetNumber(j, what, "lambda");
    if (j.contains("tau_other")) p.tau_other = GetNumber(j, what, "tau_other");
    if (j.contains("tau_transfer")) {
      p.tau_transfer = j["tau_transfer"].get<std::map<Language, double>>();
    }
    p.Validate();
    return p;
  } catch (const Json::exception& e) {
    throw DataError(what + ": " + e.what());
  }
}

CapacityParams CapacityParamsFromJson(const Json& j) {
  const std::string what = "capacity params";
  CheckKeys(j, what, {"l_inf", "log_a", "log_b", "alpha", "beta", "phi", "psi"},
            {"schema_version", "kind"});
  CheckSchema(j, what, "capacity_law");
  CapacityParams p;
  p.l_inf = GetNumber(j, what, "l_inf");
  p.log_a = GetNumber(j, what, "log_a");
  p.log_b = GetNumber(j, what, "log_b");
  p.alpha = GetNumber(j, what, "alpha");
  p.beta = GetNumber(j, what, "beta");
  p.phi = GetNumber(j, what, "phi");
  p.psi = GetNumber(j, what, "psi");
  p.Validate();
  return p;
}

Json LawSetToJson(const std::vector<FittedLaw>& laws) {
  Json arr = Json::array();
  for (const auto& l : laws) {
    arr.push_back({{"spec", ToJson(l.spec)},
                   {"params", ToJson(l.fit.params)},
                   {"fit",
                    {{"objective", l.fit.objective},
                     {"n_starts_tried", l.fit.n_starts_tried},
                     {"best_start_index", l.fit.best_start_index},
                     {"converged", l.fit.converged},
                     {"train_r2", NumberOrNull(l.fit.train_r2)}}}});
  }
  return {{"schema_version", kSchemaVersion}, {"kind", "atlas_law_set"}, {"laws", arr}};
}

std::vector<AtlasTruth> LawSetFromJson(const Json& j) {
  const std::string what = "law set";
  CheckKeys(j, what, {"laws"}, {"schema_version", "kind", "config"});
  CheckSchema(j, what, "atlas_law_set");
  if (!j["laws"].is_array()) throw DataError(what + ": 'laws' must be an array");
  std::vector<AtlasTruth> out;
  for (const auto& entry : j["laws"]) {
    CheckKeys(entry, what + " entry", {"spec", "params"}, {"fit"});
    AtlasTruth t{LawSpecFromJson(entry["spec"]), LawParamsFromJson(entry["params"])};
    if (t.spec.variant != t.params.variant) {
      throw DataError(what + ": spec and params variants differ for '" +
                      t.spec.target_language + "'");
    }
    out.push_back(std::move(t));
  }
  return out;
}

Json ToJson(const FitResult<CapacityParams>& fit) {
  return {{"schema_version", kSchemaVersion},
          {"kind", "capacity_fit"},
          {"params", ToJson(fit.params)},
          {"fit",
           {{"objective", fit.objective},
            {"n_starts_tried", fit.n_starts_tried},
            {"best_start_index", fit.best_start_index},
            {"converged", fit.converged},
            {"train_r2", NumberOrNull(fit.train_r2)}}}};
}

void WriteTransferMatrixCsv(std::ostream& out, const TransferMatrix& m) {
  std::vector<std::string> header{"source"};
  header.insert(header.end(), m.languages.begin(), m.languages.end());
  WriteCsvRecord(out, header);
  for (std::size_t s = 0; s < m.languages.size(); ++s) {
    std::vector<std::string> row{m.languages[s]};
    for (std::size_t t = 0; t < m.languages.size(); ++t) {
      row.push_back(m.provenance[s][t] == CellProvenance::kNotApplicable
                        ? ""
                        : FormatDouble(m.scores[s][t]));
    }
    WriteCsvRecord(out, row);
  }
}

Json TransferProvenanceJson(const TransferMatrix& m) {
  Json cells = Json::array();
  for (std::size_t s = 0; s < m.languages.size(); ++s) {
    Json row = Json::array();
    for (std::size_t t = 0; t < m.languages.size(); ++t) {
      row.push_back(CellProvenanceName(m.provenance[s][t]));
    }
    cells.push_back(row);
  }
  Json j{{"schema_version", kSchemaVersion},
         {"kind", "transfer_provenance"},
         {"languages", m.languages},
         {"provenance", cells}};
  if (m.forest_seed) {
    j["forest"] = {{"seed", *m.forest_seed}, {"n_trees", m.forest_trees}};
  } else {
    j["forest"] = nullptr;
  }
  return j;
}

}  // namespace atlas
