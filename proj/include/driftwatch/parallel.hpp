/*
 * Copyright 2026 The driftwatch authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <functional>

namespace driftwatch {

// Resolves the worker count for per-dimension work. `requested` = 0 means
// "pick automatically"; the DRIFTWATCH_THREADS environment variable caps
// the result (0 or unset = no cap).
std::size_t resolve_thread_count(std::size_t requested);

// Runs fn(i) for i in [begin, end) on `threads` workers using contiguous
// block partitioning. Each index is visited exactly once; the caller is
// responsible for making iterations independent. Exceptions from fn are
// rethrown on the calling thread.
void parallel_for(std::size_t begin, std::size_t end, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace driftwatch
