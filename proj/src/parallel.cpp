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

#include "riskctl/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace riskctl {

namespace {
std::atomic<int> g_threads{1};
}

int thread_count() { return g_threads.load(); }

void set_thread_count(int n) {
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    g_threads.store(std::max(1, n));
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    const int nt = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
    if (nt <= 1) {
        if (n > 0) fn(0, n);
        return;
    }
    const std::size_t chunk = (n + nt - 1) / nt;
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(nt));
    workers.reserve(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) {
        const std::size_t b = static_cast<std::size_t>(t) * chunk;
        const std::size_t e = std::min(n, b + chunk);
        workers.emplace_back([&, t, b, e] {
            try {
                if (b < e) fn(b, e);
            } catch (...) {
                errs[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (auto& err : errs)
        if (err) std::rethrow_exception(err);
}

} // namespace riskctl
