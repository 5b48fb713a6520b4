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

#include "atlas/run_data.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "atlas/table_io.h"
#include "json.hpp"

namespace atlas {
namespace {

using nlohmann::json;

constexpr const char* kRunColumns[] = {
    "run_id",      "n_params",     "mixture_id",       "eval_language",
    "loss",        "total_tokens", "sampling_weights", "cumulative_tokens"};
constexpr const char* kProvenanceColumn = "token_provenance";

std::string RowPrefix(std::size_t row) {
  return "row " + std::to_string(row) + ": ";
}

TokenProvenance ParseProvenance(std::string_view text) {
  if (text.empty() || text == "logged") return TokenProvenance::kLogged;
  if (text == "reconstructed") return TokenProvenance::kReconstructed;
  throw RecordError(kProvenanceColumn,
                    "expected 'logged' or 'reconstructed', got '" +
                        std::string(text) + "'");
}

std::string_view ProvenanceName(TokenProvenance p) {
  return p == TokenProvenance::kLogged ? "logged" : "reconstructed";
}

double JsonNumber(const json& value, const std::string& field) {
  if (!value.is_number()) throw RecordError(field, "expected a number");
  return value.get<double>();
}

std::int64_t JsonCount(const json& value, const std::string& field) {
  if (value.is_number_integer()) return value.get<std::int64_t>();
  if (value.is_number_float()) {
    const double d = value.get<double>();
    if (d == std::floor(d) && std::fabs(d) < 9.2e18) {
      return static_cast<std::int64_t>(d);
    }
  }
  if (value.is_string()) {
    try {
      return ParseInt64(value.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
  }
  throw RecordError(field, "expected an integer count");
}

std::string JsonString(const json& value, const std::string& field) {
  if (!value.is_string()) throw RecordError(field, "expected a string");
  return value.get<std::string>();
}

std::map<Language, double> WeightsFromJson(const json& value) {
  if (!value.is_object()) {
    throw RecordError("sampling_weights", "expected a JSON object");
  }
  std::map<Language, double> out;
  for (const auto& [lang, w] : value.items()) {
    out[lang] = JsonNumber(w, "sampling_weights");
  }
  return out;
}

std::map<Language, TokenCount> TokensFromJson(const json& value) {
  if (!value.is_object()) {
    throw RecordError("cumulative_tokens", "expected a JSON object");
  }
  std::map<Language, TokenCount> out;
  for (const auto& [lang, n] : value.items()) {
    out[lang] = JsonCount(n, "cumulative_tokens");
  }
  return out;
}

json WeightsToJson(const std::map<Language, double>& weights) {
  json out = json::object();
  for (const auto& [lang, w] : weights) out[lang] = w;
  return out;
}

json TokensToJson(const std::map<Language, TokenCount>& tokens) {
  json out = json::object();
  for (const auto& [lang, n] : tokens) out[lang] = n;
  return out;
}

json ParseEmbeddedJson(const std::string& text, const std::string& field) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    throw RecordError(field, "not valid JSON");
  }
}

RunRecord RecordFromJson(const json& row) {
  if (!row.is_object()) throw RecordError("<row>", "expected a JSON object");
  std::set<std::string> known(std::begin(kRunColumns), std::end(kRunColumns));
  known.insert(kProvenanceColumn);
  for (const auto& [key, _] : row.items()) {
    if (!known.contains(key)) throw RecordError(key, "unknown key");
  }
  for (const char* key : kRunColumns) {
    if (!row.contains(key)) throw RecordError(key, "missing");
  }
  RunRecord r;
  r.run_id = JsonString(row["run_id"], "run_id");
  r.n_params = JsonCount(row["n_params"], "n_params");
  r.mixture_id = JsonString(row["mixture_id"], "mixture_id");
  r.eval_language = JsonString(row["eval_language"], "eval_language");
  r.loss = JsonNumber(row["loss"], "loss");
  r.total_tokens = JsonCount(row["total_tokens"], "total_tokens");
  r.sampling_weights = WeightsFromJson(row["sampling_weights"]);
  r.cumulative_tokens = TokensFromJson(row["cumulative_tokens"]);
  if (row.contains(kProvenanceColumn)) {
    r.token_provenance = ParseProvenance(
        JsonString(row[kProvenanceColumn], kProvenanceColumn));
  }
  return r;
}

template <typename T, typename Parse>
T ParseField(const std::string& text, const std::string& field, Parse parse) {
  try {
    return static_cast<T>(parse(text));
  } catch (const std::invalid_argument& e) {
    throw RecordError(field, e.what());
  }
}

RunRecord RecordFromCsv(const std::vector<std::string>& fields,
                        const std::map<std::string, std::size_t>& columns) {
  auto get = [&](const char* name) -> const std::string& {
    return fields[columns.at(name)];
  };
  RunRecord r;
  r.run_id = get("run_id");
  r.n_params = ParseField<std::int64_t>(get("n_params"), "n_params",
                                        [](const std::string& s) {
                                          return ParseInt64(s);
                                        });
  r.mixture_id = get("mixture_id");
  r.eval_language = get("eval_language");
  r.loss = ParseField<double>(get("loss"), "loss",
                              [](const std::string& s) { return ParseDouble(s); });
  r.total_tokens = ParseField<TokenCount>(
      get("total_tokens"), "total_tokens",
      [](const std::string& s) { return ParseInt64(s); });
  r.sampling_weights = WeightsFromJson(
      ParseEmbeddedJson(get("sampling_weights"), "sampling_weights"));
  r.cumulative_tokens = TokensFromJson(
      ParseEmbeddedJson(get("cumulative_tokens"), "cumulative_tokens"));
  if (auto it = columns.find(kProvenanceColumn); it != columns.end()) {
    r.token_provenance = ParseProvenance(fields[it->second]);
  }
  return r;
}

// Header -> column index; rejects unknown and missing columns.
std::map<std::string, std::size_t> IndexHeader(
    const std::vector<std::string>& header,
    std::span<const std::string> required,
    std::span<const std::string> optional) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string& name = header[i];
    const bool known =
        std::find(required.begin(), required.end(), name) != required.end() ||
        std::find(optional.begin(), optional.end(), name) != optional.end();
    if (!known) throw DataError("header: unknown column '" + name + "'");
    if (!index.emplace(name, i).second) {
      throw DataError("header: duplicate column '" + name + "'");
    }
  }
  for (const auto& name : required) {
    if (!index.contains(name)) {
      throw DataError("header: missing column '" + name + "'");
    }
  }
  return index;
}

// Calls fn(row_number, fields) for every CSV data row after the header.
template <typename Fn>
void ForEachCsvRow(std::istream& in, std::span<const std::string> required,
                   std::span<const std::string> optional, Fn fn) {
  std::vector<std::string> fields;
  bool have_header = false;
  try {
    have_header = ReadCsvRecord(in, fields);
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("header: ") + e.what());
  }
  if (!have_header) throw DataError("header: missing");
  const auto columns = IndexHeader(fields, required, optional);
  std::size_t row = 0;
  while (true) {
    try {
      if (!ReadCsvRecord(in, fields)) break;
    } catch (const std::invalid_argument& e) {
      throw DataError(RowPrefix(row + 1) + e.what());
    }
    ++row;
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != columns.size()) {
      throw DataError(RowPrefix(row) + "expected " +
                      std::to_string(columns.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    fn(row, fields, columns);
  }
}

// Calls fn(line_number, object) for every non-blank JSONL line.
template <typename Fn>
void ForEachJsonLine(std::istream& in, Fn fn) {
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json value;
    try {
      value = json::parse(line);
    } catch (const json::parse_error&) {
      throw DataError(RowPrefix(row) + "not valid JSON");
    }
    fn(row, value);
  }
}

std::vector<std::string> ToStrings(std::initializer_list<const char*> names) {
  return {names.begin(), names.end()};
}

}  // namespace

TableFormat ParseTableFormat(std::string_view tag) {
  if (tag == "csv") return TableFormat::kCsv;
  if (tag == "jsonl") return TableFormat::kJsonl;
  throw DataError("unknown format tag '" + std::string(tag) +
                  "' (expected csv or jsonl)");
}

std::string_view TableFormatName(TableFormat format) {
  return format == TableFormat::kCsv ? "csv" : "jsonl";
}

std::vector<Language> RunRecord::MixtureLanguages() const {
  std::vector<Language> out;
  for (const auto& [lang, w] : sampling_weights) {
    if (w > 0.0) out.push_back(lang);
  }
  return out;
}

bool RunRecord::InMixture(const Language& language) const {
  auto it = sampling_weights.find(language);
  return it != sampling_weights.end() && it->second > 0.0;
}

TokenCount RunRecord::TokensFor(const Language& language) const {
  auto it = cumulative_tokens.find(language);
  return it == cumulative_tokens.end() ? 0 : it->second;
}

RecordError::RecordError(std::string field, const std::string& message)
    : DataError("field '" + field + "': " + message), field_(std::move(field)) {}

void ValidateRecord(const RunRecord& r, const ValidationConfig& config) {
  if (r.run_id.empty()) throw RecordError("run_id", "empty");
  if (r.eval_language.empty()) throw RecordError("eval_language", "empty");
  if (r.n_params <= 0) throw RecordError("n_params", "must be positive");
  if (!(r.loss > 0.0) || !std::isfinite(r.loss)) {
    throw RecordError("loss", "must be positive and finite");
  }
  if (r.total_tokens < 0) throw RecordError("total_tokens", "negative");
  if (r.sampling_weights.empty()) throw RecordError("sampling_weights", "empty");
  double weight_sum = 0.0;
  for (const auto& [lang, w] : r.sampling_weights) {
    if (lang.empty()) throw RecordError("sampling_weights", "empty language");
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw RecordError("sampling_weights", "weight for '" + lang +
                                                "' must be nonnegative");
    }
    weight_sum += w;
  }
  if (std::fabs(weight_sum - 1.0) > config.weight_tolerance) {
    std::ostringstream msg;
    msg << "weights sum to " << weight_sum << ", expected 1";
    throw RecordError("sampling_weights", msg.str());
  }
  TokenCount token_sum = 0;
  for (const auto& [lang, n] : r.cumulative_tokens) {
    if (lang.empty()) throw RecordError("cumulative_tokens", "empty language");
    if (n < 0) {
      throw RecordError("cumulative_tokens", "negative count for '" + lang + "'");
    }
    token_sum += n;
  }
  const double slack =
      config.token_slack * static_cast<double>(std::max<TokenCount>(r.total_tokens, 1));
  if (std::fabs(static_cast<double>(token_sum - r.total_tokens)) > slack) {
    throw RecordError("cumulative_tokens",
                      "sum " + std::to_string(token_sum) +
                          " does not match total_tokens " +
                          std::to_string(r.total_tokens));
  }
}

RunSet::RunSet(std::vector<RunRecord> records, const ValidationConfig& config)
    : records_(std::move(records)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    try {
      ValidateRecord(records_[i], config);
    } catch (const RecordError& e) {
      throw RecordError(e.field(), RowPrefix(i + 1) + "run '" +
                                       records_[i].run_id + "': " + e.what());
    }
  }
}

RunSet RunSet::Subset(std::span<const std::size_t> indices) const {
  std::vector<RunRecord> rows;
  rows.reserve(indices.size());
  for (std::size_t i : indices) rows.push_back(records_.at(i));
  return RunSet(Trusted{}, std::move(rows));
}

std::vector<Language> RunSet::EvalLanguages() const {
  std::vector<Language> out;
  for (const auto& r : records_) {
    if (std::find(out.begin(), out.end(), r.eval_language) == out.end()) {
      out.push_back(r.eval_language);
    }
  }
  return out;
}

RunSet ParseRuns(std::istream& in, TableFormat format,
                 const ValidationConfig& config) {
  std::vector<RunRecord> rows;
  auto check = [&](std::size_t row, RunRecord record) {
    try {
      ValidateRecord(record, config);
    } catch (const RecordError& e) {
      throw RecordError(e.field(), RowPrefix(row) + e.what());
    }
    rows.push_back(std::move(record));
  };
  if (format == TableFormat::kCsv) {
    const auto required = ToStrings(
        {"run_id", "n_params", "mixture_id", "eval_language", "loss",
         "total_tokens", "sampling_weights", "cumulative_tokens"});
    const auto optional = ToStrings({kProvenanceColumn});
    ForEachCsvRow(in, required, optional,
                  [&](std::size_t row, const std::vector<std::string>& fields,
                      const std::map<std::string, std::size_t>& columns) {
                    RunRecord record;
                    try {
                      record = RecordFromCsv(fields, columns);
                    } catch (const RecordError& e) {
                      throw RecordError(e.field(), RowPrefix(row) + e.what());
                    }
                    check(row, std::move(record));
                  });
  } else {
    ForEachJsonLine(in, [&](std::size_t row, const json& value) {
      RunRecord record;
      try {
        record = RecordFromJson(value);
      } catch (const RecordError& e) {
        throw RecordError(e.field(), RowPrefix(row) + e.what());
      }
      check(row, std::move(record));
    });
  }
  return RunSet(std::move(rows), config);
}

void WriteRuns(std::ostream& out, const RunSet& runs, TableFormat format) {
  if (format == TableFormat::kCsv) {
    WriteCsvRecord(out, {"run_id", "n_params", "mixture_id", "eval_language",
                         "loss", "total_tokens", "sampling_weights",
                         "cumulative_tokens", kProvenanceColumn});
    for (const auto& r : runs) {
      WriteCsvRecord(out, {r.run_id, std::to_string(r.n_params), r.mixture_id,
                           r.eval_language, FormatDouble(r.loss),
                           std::to_string(r.total_tokens),
                           WeightsToJson(r.sampling_weights).dump(),
                           TokensToJson(r.cumulative_tokens).dump(),
                           std::string(ProvenanceName(r.token_provenance))});
    }
    return;
  }
  for (const auto& r : runs) {
    json row = json::object();
    row["run_id"] = r.run_id;
    row["n_params"] = r.n_params;
    row["mixture_id"] = r.mixture_id;
    row["eval_language"] = r.eval_language;
    row["loss"] = r.loss;
    row["total_tokens"] = r.total_tokens;
    row["sampling_weights"] = WeightsToJson(r.sampling_weights);
    row["cumulative_tokens"] = TokensToJson(r.cumulative_tokens);
    row[kProvenanceColumn] = std::string(ProvenanceName(r.token_provenance));
    out << row.dump() << '\n';
  }
}

CorpusCatalog::CorpusCatalog(std::map<Language, TokenCount> unique_tokens)
    : entries_(std::move(unique_tokens)) {
  for (const auto& [lang, u] : entries_) {
    if (u <= 0) {
      throw DataError("catalog: unique_tokens for '" + lang +
                      "' must be positive");
    }
  }
}

bool CorpusCatalog::Contains(const Language& language) const {
  return entries_.contains(language);
}

TokenCount CorpusCatalog::UniqueTokens(const Language& language) const {
  auto it = entries_.find(language);
  if (it == entries_.end()) {
    throw DataError("catalog: no unique_tokens entry for language '" +
                    language + "'");
  }
  return it->second;
}

CorpusCatalog ParseCatalog(std::istream& in, TableFormat format) {
  std::map<Language, TokenCount> entries;
  auto add = [&](std::size_t row, const std::string& lang, TokenCount u) {
    if (lang.empty()) throw DataError(RowPrefix(row) + "field 'language': empty");
    if (!entries.emplace(lang, u).second) {
      throw DataError(RowPrefix(row) + "field 'language': duplicate '" + lang +
                      "'");
    }
  };
  if (format == TableFormat::kCsv) {
    const auto required = ToStrings({"language", "unique_tokens"});
    ForEachCsvRow(in, required, {},
                  [&](std::size_t row, const std::vector<std::string>& fields,
                      const std::map<std::string, std::size_t>& columns) {
                    TokenCount u = 0;
                    try {
                      u = ParseInt64(fields[columns.at("unique_tokens")]);
                    } catch (const std::invalid_argument& e) {
                      throw DataError(RowPrefix(row) +
                                      "field 'unique_tokens': " + e.what());
                    }
                    add(row, fields[columns.at("language")], u);
                  });
  } else {
    ForEachJsonLine(in, [&](std::size_t row, const json& value) {
      try {
        if (!value.is_object() || !value.contains("language") ||
            !value.contains("unique_tokens")) {
          throw RecordError("language", "expected language and unique_tokens");
        }
        add(row, JsonString(value["language"], "language"),
            JsonCount(value["unique_tokens"], "unique_tokens"));
      } catch (const RecordError& e) {
        throw DataError(RowPrefix(row) + e.what());
      }
    });
  }
  return CorpusCatalog(std::move(entries));
}

void WriteCatalog(std::ostream& out, const CorpusCatalog& catalog,
                  TableFormat format) {
  if (format == TableFormat::kCsv) {
    WriteCsvRecord(out, {"language", "unique_tokens"});
    for (const auto& [lang, u] : catalog.entries()) {
      WriteCsvRecord(out, {lang, std::to_string(u)});
    }
    return;
  }
  for (const auto& [lang, u] : catalog.entries()) {
    out << json{{"language", lang}, {"unique_tokens", u}}.dump() << '\n';
  }
}

LearningCurve::LearningCurve(std::string regime_id, Language eval_language,
                             std::vector<CurvePoint> points)
    : regime_id_(std::move(regime_id)),
      eval_language_(std::move(eval_language)),
      points_(std::move(points)) {
  const std::string name = "curve '" + regime_id_ + "'/'" + eval_language_ + "'";
  if (points_.size() < 2) throw DataError(name + ": needs at least 2 points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!(p.tokens >= 0.0) || !std::isfinite(p.tokens)) {
      throw DataError(name + ": tokens must be nonnegative");
    }
    if (!(p.loss > 0.0) || !std::isfinite(p.loss)) {
      throw DataError(name + ": loss must be positive");
    }
    if (i > 0 && !(p.tokens > points_[i - 1].tokens)) {
      throw DataError(name + ": tokens must be strictly increasing");
    }
  }
}

std::vector<LearningCurve> ParseCurves(std::istream& in, TableFormat format) {
  using Key = std::pair<std::string, Language>;
  std::vector<Key> order;
  std::map<Key, std::vector<CurvePoint>> groups;
  auto add = [&](Key key, CurvePoint p) {
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(p);
  };
  if (format == TableFormat::kCsv) {
    const auto required =
        ToStrings({"regime_id", "eval_language", "tokens", "loss"});
    ForEachCsvRow(in, required, {},
                  [&](std::size_t row, const std::vector<std::string>& fields,
                      const std::map<std::string, std::size_t>& columns) {
                    CurvePoint p;
                    for (const char* f : {"tokens", "loss"}) {
                      try {
                        const double v = ParseDouble(fields[columns.at(f)]);
                        (std::string_view(f) == "tokens" ? p.tokens : p.loss) = v;
                      } catch (const std::invalid_argument& e) {
                        throw DataError(RowPrefix(row) + "field '" + f +
                                        "': " + e.what());
                      }
                    }
                    add({fields[columns.at("regime_id")],
                         fields[columns.at("eval_language")]},
                        p);
                  });
  } else {
    ForEachJsonLine(in, [&](std::size_t row, const json& value) {
      try {
        for (const char* key : {"regime_id", "eval_language", "tokens", "loss"}) {
          if (!value.is_object() || !value.contains(key)) {
            throw RecordError(key, "missing");
          }
        }
        add({JsonString(value["regime_id"], "regime_id"),
             JsonString(value["eval_language"], "eval_language")},
            {JsonNumber(value["tokens"], "tokens"),
             JsonNumber(value["loss"], "loss")});
      } catch (const RecordError& e) {
        throw DataError(RowPrefix(row) + e.what());
      }
    });
  }
  std::vector<LearningCurve> curves;
  curves.reserve(order.size());
  for (const auto& key : order) {
    auto points = std::move(groups[key]);
    std::stable_sort(points.begin(), points.end(),
                     [](const CurvePoint& a, const CurvePoint& b) {
                       return a.tokens < b.tokens;
                     });
    curves.emplace_back(key.first, key.second, std::move(points));
  }
  return curves;
}

void WriteCurves(std::ostream& out, std::span<const LearningCurve> curves,
                 TableFormat format) {
  if (format == TableFormat::kCsv) {
    WriteCsvRecord(out, {"regime_id", "eval_language", "tokens", "loss"});
  }
  for (const auto& c : curves) {
    for (const auto& p : c.points()) {
      if (format == TableFormat::kCsv) {
        WriteCsvRecord(out, {c.regime_id(), c.eval_language(),
                             FormatDouble(p.tokens), FormatDouble(p.loss)});
      } else {
        out << json{{"regime_id", c.regime_id()},
                    {"eval_language", c.eval_language()},
                    {"tokens", p.tokens},
                    {"loss", p.loss}}
                   .dump()
            << '\n';
      }
    }
  }
}

TokenCount TokenBreakdown::Total() const {
  TokenCount total = d_target + d_other;
  for (const auto& [_, n] : d_transfer) total += n;
  return total;
}

TokenBreakdown TokenAccounting(const RunRecord& record, const Language& target,
                               std::span<const Language> transfer_set) {
  std::set<Language> seen;
  for (const auto& lang : transfer_set) {
    if (lang == target) {
      throw DataError("transfer set contains the target language '" + target +
                      "'");
    }
    if (!seen.insert(lang).second) {
      throw DataError("transfer set lists '" + lang + "' twice");
    }
  }
  TokenBreakdown b;
  b.target = target;
  b.d_target = record.TokensFor(target);
  TokenCount named = b.d_target;
  for (const auto& lang : transfer_set) {
    const TokenCount n = record.TokensFor(lang);
    b.d_transfer.emplace_back(lang, n);
    named += n;
  }
  b.d_other = record.total_tokens - named;
  if (b.d_other < 0) {
    throw DataError("run '" + record.run_id +
                    "': named languages exceed total_tokens by " +
                    std::to_string(-b.d_other));
  }
  for (const auto& [lang, n] : record.cumulative_tokens) {
    if (n > 0 && lang != target && !seen.contains(lang)) {
      b.other_languages.push_back(lang);
    }
  }
  return b;
}

std::vector<Language> SelectTransferSet(const RunSet& runs,
                                        const Language& target, std::size_t k) {
  std::map<Language, TokenCount> exposure;
  for (const auto& r : runs) {
    if (!r.InMixture(target)) continue;
    for (const auto& [lang, n] : r.cumulative_tokens) {
      if (lang != target && n > 0) exposure[lang] += n;
    }
  }
  std::vector<std::pair<Language, TokenCount>> ranked(exposure.begin(),
                                                      exposure.end());
  // std::map iteration is already in code order; stable_sort keeps it for ties.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<Language> out;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) {
    out.push_back(ranked[i].first);
  }
  return out;
}

}  // namespace atlas
