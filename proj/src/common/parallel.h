// Copyright 2026 The BiSELD Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BISELD_COMMON_PARALLEL_H_
#define BISELD_COMMON_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace biseld {

// Worker count: BISELD_THREADS if set and positive, otherwise the hardware
// concurrency (at least 1).
std::size_t ThreadCount();

// Runs body(i) for i in [0, n) on up to ThreadCount() threads. Each index is
// executed exactly once; callers write results into preallocated slots so the
// outcome does not depend on scheduling. The first exception thrown by any
// body is rethrown after all workers join.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace biseld

#endif  // BISELD_COMMON_PARALLEL_H_
