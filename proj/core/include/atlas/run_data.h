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

#ifndef ATLAS_RUN_DATA_H_
#define ATLAS_RUN_DATA_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "atlas/error.h"

namespace atlas {

using Language = std::string;
// Token counts reach the trillions; always 64-bit.
using TokenCount = std::int64_t;

enum class TableFormat { kCsv, kJsonl };

// Throws DataError on anything other than "csv" or "jsonl".
TableFormat ParseTableFormat(std::string_view tag);
std::string_view TableFormatName(TableFormat format);

// Whether per-language cumulative tokens were logged by the trainer or
// reconstructed afterwards from sampling weights times steps.
enum class TokenProvenance { kLogged, kReconstructed };

struct RunRecord {
  std::string run_id;
  std::int64_t n_params = 0;
  std::string mixture_id;
  std::map<Language, double> sampling_weights;
  std::map<Language, TokenCount> cumulative_tokens;
  TokenCount total_tokens = 0;
  Language eval_language;
  double loss = 0.0;
  TokenProvenance token_provenance = TokenProvenance::kLogged;

  // Languages with a positive sampling weight, in code order.
  std::vector<Language> MixtureLanguages() const;
  bool InMixture(const Language& language) const;
  // Absent languages count as zero tokens.
  TokenCount TokensFor(const Language& language) const;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct ValidationConfig {
  // Relative slack allowed between sum(cumulative_tokens) and total_tokens.
  double token_slack = 1e-6;
  double weight_tolerance = 1e-9;
};

// A record that violates an invariant. `field()` names the offending column.
class RecordError : public DataError {
 public:
  RecordError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Throws RecordError.
void ValidateRecord(const RunRecord& record, const ValidationConfig& config);

// Validated, immutable table of run observations. Row order is preserved.
class RunSet {
 public:
  RunSet() = default;
  explicit RunSet(std::vector<RunRecord> records,
                  const ValidationConfig& config = {});

  std::span<const RunRecord> records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const RunRecord& operator[](std::size_t i) const { return records_[i]; }
  auto begin() const { return records_.begin(); }
  auto end() const { return records_.end(); }

  // Rows at `indices`, in the order given. Rows are already valid.
  RunSet Subset(std::span<const std::size_t> indices) const;

  // Distinct eval languages in first-appearance order.
  std::vector<Language> EvalLanguages() const;

  friend bool operator==(const RunSet&, const RunSet&) = default;

 private:
  struct Trusted {};
  RunSet(Trusted, std::vector<RunRecord> records)
      : records_(std::move(records)) {}

  std::vector<RunRecord> records_;
};

// Parses the runs table. Errors name the 1-based data row and the field.
RunSet ParseRuns(std::istream& in, TableFormat format,
                 const ValidationConfig& config = {});
void WriteRuns(std::ostream& out, const RunSet& runs, TableFormat format);

class CorpusCatalog {
 public:
  CorpusCatalog() = default;
  // Throws DataError if any count is not positive.
  explicit CorpusCatalog(std::map<Language, TokenCount> unique_tokens);

  bool Contains(const Language& language) const;
  // Throws DataError naming the language when absent.
  TokenCount UniqueTokens(const Language& language) const;
  const std::map<Language, TokenCount>& entries() const { return entries_; }

 private:
  std::map<Language, TokenCount> entries_;
};

CorpusCatalog ParseCatalog(std::istream& in, TableFormat format);
void WriteCatalog(std::ostream& out, const CorpusCatalog& catalog,
                  TableFormat format);

struct CurvePoint {
  double tokens = 0.0;
  double loss = 0.0;
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

// Loss as a function of tokens seen for one (regime, eval language) pair.
// Tokens are strictly increasing and nonnegative, losses positive, and there
// are at least two points.
class LearningCurve {
 public:
  LearningCurve(std::string regime_id, Language eval_language,
                std::vector<CurvePoint> points);

  const std::string& regime_id() const { return regime_id_; }
  const Language& eval_language() const { return eval_language_; }
  std::span<const CurvePoint> points() const { return points_; }
  double first_tokens() const { return points_.front().tokens; }
  double last_tokens() const { return points_.back().tokens; }

  friend bool operator==(const LearningCurve&, const LearningCurve&) = default;

 private:
  std::string regime_id_;
  Language eval_language_;
  std::vector<CurvePoint> points_;
};

// One curve per (regime_id, eval_language), in first-appearance order. Points
// may arrive in any order; duplicate token counts are an error.
std::vector<LearningCurve> ParseCurves(std::istream& in, TableFormat format);
void WriteCurves(std::ostream& out, std::span<const LearningCurve> curves,
                 TableFormat format);

// Token split of one run relative to a target language and transfer set.
struct TokenBreakdown {
  Language target;
  TokenCount d_target = 0;
  // In transfer-set order.
  std::vector<std::pair<Language, TokenCount>> d_transfer;
  TokenCount d_other = 0;
  // Languages pooled into d_other (positive token count), in code order.
  std::vector<Language> other_languages;

  TokenCount Total() const;
};

// d_other = total_tokens - d_target - sum(d_transfer), exactly.
TokenBreakdown TokenAccounting(const RunRecord& record, const Language& target,
                               std::span<const Language> transfer_set);

// The k languages most co-sampled with `target`: summed cumulative tokens over
// runs whose mixture contains the target. Ties go to the smaller code.
std::vector<Language> SelectTransferSet(const RunSet& runs,
                                        const Language& target,
                                        std::size_t k = 3);

}  // namespace atlas

#endif  // ATLAS_RUN_DATA_H_
