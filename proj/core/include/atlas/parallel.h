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

#ifndef ATLAS_PARALLEL_H_
#define ATLAS_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace atlas {

// Worker count: hardware concurrency, capped by ATLAS_KIT_THREADS when set.
std::size_t WorkerCount();

// Runs fn(i) for i in [0, count). Each index runs exactly once; callers write
// into pre-sized slots so the reduction order never depends on scheduling.
// The first exception thrown by any task is rethrown after all workers join.
void ParallelFor(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace atlas

#endif  // ATLAS_PARALLEL_H_
