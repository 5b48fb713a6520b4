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

#ifndef ATLAS_TOOLS_OUTPUT_H_
#define ATLAS_TOOLS_OUTPUT_H_

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "atlas/serialize.h"

namespace atlas::cli {

// Marker present while a run is in progress or after it failed.
inline constexpr const char* kFailedMarker = "FAILED";
// Wall-clock metadata lives here so reports stay byte-identical across reruns.
inline constexpr const char* kMetaSidecar = "run_meta.json";

class OutputDir {
 public:
  // Creates the directory and plants the failure marker until Succeed().
  explicit OutputDir(std::filesystem::path path);

  const std::filesystem::path& path() const { return path_; }
  void WriteJson(const std::string& name, const Json& report);
  void WriteText(const std::string& name, const std::string& text);
  // Throws DataError when the file cannot be opened.
  std::ofstream Open(const std::string& name);

  void Succeed();
  void Fail(const std::string& message);

 private:
  void WriteMeta(const std::string& status);

  std::filesystem::path path_;
  std::chrono::system_clock::time_point started_;
  std::vector<std::string> written_;
};

}  // namespace atlas::cli

#endif  // ATLAS_TOOLS_OUTPUT_H_
