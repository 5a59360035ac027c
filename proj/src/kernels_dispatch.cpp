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

#include "riskctl/kernels.hpp"

#include "riskctl/detail/kernel_loops.hpp"
#include "riskctl/errors.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace riskctl::kernels {

namespace {

bool cpu_has_avx2_fma() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend default_backend() {
    if (const char* env = std::getenv("RISKCTL_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (!cpu_has_avx2_fma())
                throw ConfigError("RISKCTL_KERNELS=avx2 but this CPU lacks AVX2+FMA");
            return Backend::avx2;
        }
        // anything else (including "auto") falls through
    }
    return cpu_has_avx2_fma() ? Backend::avx2 : Backend::scalar;
}

std::atomic<const detail::KernelFns*> g_fns{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

const detail::KernelFns& fns() {
    const detail::KernelFns* f = g_fns.load(std::memory_order_acquire);
    if (!f) {
        set_backend_auto();
        f = g_fns.load(std::memory_order_acquire);
    }
    return *f;
}

} // namespace

bool avx2_supported() { return cpu_has_avx2_fma(); }

Backend active_backend() {
    fns();
    return g_backend.load();
}

void set_backend(Backend b) {
    if (b == Backend::avx2 && !cpu_has_avx2_fma())
        throw ConfigError("AVX2 kernel backend requested but this CPU lacks AVX2+FMA");
    g_backend.store(b);
    g_fns.store(b == Backend::avx2 ? &detail::avx2_kernel_fns() : &detail::scalar_kernel_fns(),
                std::memory_order_release);
}

void set_backend_auto() { set_backend(default_backend()); }

std::string backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

void fill_normals(std::uint64_t seed, std::uint64_t path_begin, std::size_t n_paths,
                  std::uint64_t step, std::size_t k, double* out) {
    if (n_paths == 0 || k == 0) return;
    fns().fill_normals(seed, path_begin, n_paths, step, k, out);
}

void philox_block(std::uint64_t seed, std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                  std::uint32_t c3, std::uint32_t out[4]) {
    detail::philox_block_scalar(seed, c0, c1, c2, c3, out);
}

void vexp(const double* x, double* out, std::size_t n) { fns().vexp(x, out, n); }
void vlog(const double* x, double* out, std::size_t n) { fns().vlog(x, out, n); }
void vnorm_icdf(const double* u, double* out, std::size_t n) { fns().vnorm_icdf(u, out, n); }
double reduce_sum(const double* x, std::size_t n) { return fns().reduce_sum(x, n); }
double reduce_dot(const double* x, const double* y, std::size_t n) {
    return fns().reduce_dot(x, y, n);
}

} // namespace riskctl::kernels
