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

#ifndef RISKCTL_DETAIL_KERNEL_LOOPS_HPP
#define RISKCTL_DETAIL_KERNEL_LOOPS_HPP

#include "riskctl/detail/kernel_ops.hpp"

#include <cstddef>
#include <cstdint>

namespace riskctl::kernels::detail {

struct KernelFns {
    void (*fill_normals)(std::uint64_t seed, std::uint64_t path_begin, std::size_t n_paths,
                         std::uint64_t step, std::size_t k, double* out);
    void (*vexp)(const double* x, double* out, std::size_t n);
    void (*vlog)(const double* x, double* out, std::size_t n);
    void (*vnorm_icdf)(const double* u, double* out, std::size_t n);
    double (*reduce_sum)(const double* x, std::size_t n);
    double (*reduce_dot)(const double* x, const double* y, std::size_t n);
};

const KernelFns& scalar_kernel_fns();
const KernelFns& avx2_kernel_fns();
void philox_block_scalar(std::uint64_t seed, std::uint32_t c0, std::uint32_t c1,
                         std::uint32_t c2, std::uint32_t c3, std::uint32_t out[4]);

// Arch provides:
//   F       double-lane policy, F::width lanes
//   U32     u32-lane policy (philox), U32::width lanes = blocks per call
//   normals_block(seed, path0, step, j, z): philox+icdf for U32::width
//       consecutive path indices, writing z[2b], z[2b+1] per block b
//   load/store/load1 partial helpers for F

template <class Arch>
void run_fill_normals(std::uint64_t seed, std::uint64_t path_begin, std::size_t n_paths,
                      std::uint64_t step, std::size_t k, double* out) {
    constexpr std::size_t B = Arch::U32::width;
    const std::size_t n_pairs = (k + 1) / 2;
    double z[2 * B];
    for (std::size_t j = 0; j < n_pairs; ++j) {
        for (std::size_t p0 = 0; p0 < n_paths; p0 += B) {
            Arch::normals_block(seed, path_begin + p0, step, static_cast<std::uint32_t>(j), z);
            const std::size_t lim = (n_paths - p0 < B) ? (n_paths - p0) : B;
            for (std::size_t b = 0; b < lim; ++b) {
                double* row = out + (p0 + b) * k;
                row[2 * j] = z[2 * b];
                if (2 * j + 1 < k) row[2 * j + 1] = z[2 * b + 1];
            }
        }
    }
}

template <class Arch, class Core>
void run_elementwise(const double* x, double* out, std::size_t n, Core core) {
    using F = typename Arch::F;
    constexpr std::size_t W = F::width;
    std::size_t i = 0;
    for (; i + W <= n; i += W) F::store(out + i, core(F::load(x + i)));
    if (i < n) {
        double tmp[W];
        for (std::size_t l = 0; l < W; ++l) tmp[l] = (i + l < n) ? x[i + l] : 1.0;
        F::store(tmp, core(F::load(tmp)));
        for (std::size_t l = 0; i + l < n; ++l) out[i + l] = tmp[l];
    }
}

// Both reductions accumulate into 4 interleaved partials (lane l holds
// indices congruent to l mod 4) and combine as (a0+a2)+(a1+a3); the scalar
// arm mirrors this exactly, so results match the AVX2 arm bit for bit.
template <class Arch>
double run_reduce_sum(const double* x, std::size_t n) {
    double acc[4];
    std::size_t i = Arch::sum_main(x, n, acc);
    for (std::size_t l = 0; i + l < n; ++l) acc[l] += x[i + l];
    return combine4(acc);
}

template <class Arch>
double run_reduce_dot(const double* x, const double* y, std::size_t n) {
    double acc[4];
    std::size_t i = Arch::dot_main(x, y, n, acc);
    for (std::size_t l = 0; i + l < n; ++l) acc[l] = __builtin_fma(x[i + l], y[i + l], acc[l]);
    return combine4(acc);
}

template <class Arch>
KernelFns make_kernel_fns() {
    KernelFns fns;
    fns.fill_normals = &run_fill_normals<Arch>;
    fns.vexp = [](const double* x, double* out, std::size_t n) {
        run_elementwise<Arch>(x, out, n,
                              [](typename Arch::F::reg v) { return exp_core<typename Arch::F>(v); });
    };
    fns.vlog = [](const double* x, double* out, std::size_t n) {
        run_elementwise<Arch>(x, out, n,
                              [](typename Arch::F::reg v) { return log_core<typename Arch::F>(v); });
    };
    fns.vnorm_icdf = [](const double* x, double* out, std::size_t n) {
        run_elementwise<Arch>(x, out, n, [](typename Arch::F::reg v) {
            return norm_icdf_core<typename Arch::F>(v);
        });
    };
    fns.reduce_sum = &run_reduce_sum<Arch>;
    fns.reduce_dot = &run_reduce_dot<Arch>;
    return fns;
}

} // namespace riskctl::kernels::detail

#endif // RISKCTL_DETAIL_KERNEL_LOOPS_HPP
