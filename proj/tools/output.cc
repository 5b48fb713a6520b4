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

#include "output.h"

#include <ctime>
#include <iomanip>
#include <sstream>

#include "atlas/error.h"

namespace atlas::cli {
namespace {

std::string Iso8601(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

OutputDir::OutputDir(std::filesystem::path path)
    : path_(std::move(path)), started_(std::chrono::system_clock::now()) {
  std::error_code ec;
  std::filesystem::create_directories(path_, ec);
  if (ec) throw DataError("cannot create output directory '" + path_.string() + "': " + ec.message());
  std::ofstream marker(path_ / kFailedMarker, std::ios::trunc);
  if (!marker) throw DataError("cannot write to output directory '" + path_.string() + "'");
  marker << "incomplete: the run has not finished\n";
}

std::ofstream OutputDir::Open(const std::string& name) {
  std::ofstream f(path_ / name, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot open '" + (path_ / name).string() + "' for writing");
  written_.push_back(name);
  return f;
}

void OutputDir::WriteJson(const std::string& name, const Json& report) {
  auto f = Open(name);
  f << report.dump(2) << '\n';
}

void OutputDir::WriteText(const std::string& name, const std::string& text) {
  auto f = Open(name);
  f << text;
}

void OutputDir::WriteMeta(const std::string& status) {
  const auto now = std::chrono::system_clock::now();
  Json meta{{"schema_version", kSchemaVersion},
            {"kind", "run_meta"},
            {"status", status},
            {"started_at", Iso8601(started_)},
            {"finished_at", Iso8601(now)},
            {"elapsed_seconds", std::chrono::duration<double>(now - started_).count()},
            {"files", written_}};
  std::ofstream f(path_ / kMetaSidecar, std::ios::trunc);
  f << meta.dump(2) << '\n';
}

void OutputDir::Succeed() {
  WriteMeta("ok");
  std::error_code ec;
  std::filesystem::remove(path_ / kFailedMarker, ec);
}

void OutputDir::Fail(const std::string& message) {
  std::ofstream marker(path_ / kFailedMarker, std::ios::trunc);
  marker << message << '\n';
  WriteMeta("failed");
}

}  // namespace atlas::cli
