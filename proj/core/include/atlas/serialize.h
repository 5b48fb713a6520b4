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

#ifndef ATLAS_SERIALIZE_H_
#define ATLAS_SERIALIZE_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "atlas/capacity.h"
#include "atlas/crossover.h"
#include "atlas/fitter.h"
#include "atlas/holdout_eval.h"
#include "atlas/laws.h"
#include "atlas/synth.h"
#include "atlas/transfer.h"
#include "json.hpp"

namespace atlas {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "atlaskit/1";

// Non-finite values become null.
Json NumberOrNull(double v);

Json ToJson(const LawSpec& spec);
Json ToJson(const LawParams& params);
Json ToJson(const CapacityParams& params);
Json ToJson(const FitConfig& config);
Json ToJson(const EvalReport& report);
Json ToJson(const PlanReport& report);
Json ToJson(const CrossoverFit& fit);

// Parsers reject unknown keys and missing required keys with DataError.
LawSpec LawSpecFromJson(const Json& j);
LawParams LawParamsFromJson(const Json& j);
CapacityParams CapacityParamsFromJson(const Json& j);

// A fitted law with its fit diagnostics.
struct FittedLaw {
  LawSpec spec;
  FitResult<LawParams> fit;
};

// {"schema_version", "kind": "atlas_law_set", "laws": [...]}.
Json LawSetToJson(const std::vector<FittedLaw>& laws);
// Reads spec and params of every entry; diagnostics are ignored.
std::vector<AtlasTruth> LawSetFromJson(const Json& j);

Json ToJson(const FitResult<CapacityParams>& fit);

// Row = source, column = target; diagonal cells are empty.
void WriteTransferMatrixCsv(std::ostream& out, const TransferMatrix& m);
Json TransferProvenanceJson(const TransferMatrix& m);

}  // namespace atlas

#endif  // ATLAS_SERIALIZE_H_
