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

#ifndef ATLAS_TABLE_IO_H_
#define ATLAS_TABLE_IO_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace atlas {

// Minimal RFC 4180 reader: quoted fields may hold commas, doubled quotes and
// newlines. Returns false at end of input. A trailing '\r' is dropped.
bool ReadCsvRecord(std::istream& in, std::vector<std::string>& fields);

// Quotes the field only when needed.
std::string CsvEscape(std::string_view field);
void WriteCsvRecord(std::ostream& out, const std::vector<std::string>& fields);

// Shortest text that parses back to the same double.
std::string FormatDouble(double value);

// Strict parsers: the whole string must be consumed. Throw std::invalid_argument.
double ParseDouble(std::string_view text);
long long ParseInt64(std::string_view text);

// Splits "a,b,c" into trimmed, non-empty parts.
std::vector<std::string> SplitList(std::string_view text, char sep = ',');

}  // namespace atlas

#endif  // ATLAS_TABLE_IO_H_
