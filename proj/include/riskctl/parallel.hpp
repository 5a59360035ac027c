/*
 Copyright 2026 riskctl contributors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef RISKCTL_PARALLEL_HPP
#define RISKCTL_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace riskctl {

/// Global worker-thread count (1 = serial). Settable from the CLI; results
/// must not depend on it: parallel loops write to disjoint, preallocated
/// ranges and all floating-point reductions happen afterwards in index order.
int thread_count();
void set_thread_count(int n);

/// Runs fn(begin, end) over a static partition of [0, n) on thread_count()
/// threads. Exceptions from workers are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace riskctl

#endif // RISKCTL_PARALLEL_HPP
