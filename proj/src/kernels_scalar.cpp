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

// Scalar reference arm. Built for baseline x86-64 / any architecture; the
// AVX2 arm must match it bit for bit.

#include "riskctl/detail/kernel_loops.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

namespace riskctl::kernels::detail {

namespace {

struct ScalarF {
    using reg = double;
    using ivec = std::int32_t;
    using mask = bool;
    using bits = std::uint64_t;
    static constexpr std::size_t width = 1;

    static reg set1(double v) { return v; }
    static reg load(const double* p) { return *p; }
    static void store(double* p, reg v) { *p = v; }

    static reg add(reg a, reg b) { return a + b; }
    static reg sub(reg a, reg b) { return a - b; }
    static reg mul(reg a, reg b) { return a * b; }
    static reg div(reg a, reg b) { return a / b; }
    static reg fma(reg a, reg b, reg c) { return std::fma(a, b, c); }
    static reg neg(reg a) { return -a; }
    static reg abs(reg a) { return std::bit_cast<double>(std::bit_cast<std::uint64_t>(a) & 0x7fffffffffffffffull); }
    static reg sqrt(reg a) { return std::sqrt(a); }
    // (a < b) ? a : b, matching MINPD's unordered behavior
    static reg min(reg a, reg b) { return a < b ? a : b; }
    static reg max(reg a, reg b) { return a > b ? a : b; }
    static reg round_nearest(reg a) { return std::nearbyint(a); }

    static mask lt(reg a, reg b) { return a < b; }
    static mask le(reg a, reg b) { return a <= b; }
    static mask gt(reg a, reg b) { return a > b; }
    static reg select(mask m, reg a, reg b) { return m ? a : b; }

    static bits to_bits(reg a) { return std::bit_cast<bits>(a); }
    static reg from_bits(bits b) { return std::bit_cast<reg>(b); }
    static bits bits_set1(std::uint64_t v) { return v; }
    static bits bits_shr(bits a, int s) { return a >> s; }
    static bits bits_and(bits a, bits b) { return a & b; }
    static bits bits_or(bits a, bits b) { return a | b; }
    static reg i64lo_to_f64(bits a) { return static_cast<double>(static_cast<std::int64_t>(a)); }

    static ivec f64_to_i32(reg a) { return static_cast<std::int32_t>(a); }
    static ivec i_sar1(ivec a) { return a >> 1; }
    static ivec i_sub(ivec a, ivec b) { return a - b; }
    static reg pow2i(ivec k) {
        return std::bit_cast<double>(static_cast<std::uint64_t>(k + 1023) << 52);
    }
};

struct ScalarU32 {
    using reg = std::uint32_t;
    static constexpr std::size_t width = 1;
    static reg set1(std::uint32_t v) { return v; }
    static reg mullo(reg a, reg b) { return a * b; }
    static reg mulhi(reg a, reg b) {
        return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) >> 32);
    }
    static reg xor_(reg a, reg b) { return a ^ b; }
    static reg add(reg a, reg b) { return a + b; }
};

struct ScalarArch {
    using F = ScalarF;
    using U32 = ScalarU32;

    static void normals_block(std::uint64_t seed, std::uint64_t path0, std::uint64_t step,
                              std::uint32_t j, double* z) {
        PhiloxState<U32> s;
        s.x0 = static_cast<std::uint32_t>(step);
        s.x1 = j;
        s.x2 = static_cast<std::uint32_t>(path0);
        s.x3 = static_cast<std::uint32_t>(path0 >> 32);
        philox10<U32>(s, static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32));
        const std::uint64_t a = s.x0 | (static_cast<std::uint64_t>(s.x1) << 32);
        const std::uint64_t b = s.x2 | (static_cast<std::uint64_t>(s.x3) << 32);
        z[0] = norm_icdf_core<F>(u64_to_unit_double(a));
        z[1] = norm_icdf_core<F>(u64_to_unit_double(b));
    }

    static std::size_t sum_main(const double* x, std::size_t n, double acc[4]) {
        for (int l = 0; l < 4; ++l) acc[l] = 0.0;
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4)
            for (int l = 0; l < 4; ++l) acc[l] += x[i + l];
        return i;
    }

    static std::size_t dot_main(const double* x, const double* y, std::size_t n, double acc[4]) {
        for (int l = 0; l < 4; ++l) acc[l] = 0.0;
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4)
            for (int l = 0; l < 4; ++l) acc[l] = std::fma(x[i + l], y[i + l], acc[l]);
        return i;
    }
};

} // namespace

const KernelFns& scalar_kernel_fns() {
    static const KernelFns fns = make_kernel_fns<ScalarArch>();
    return fns;
}

void philox_block_scalar(std::uint64_t seed, std::uint32_t c0, std::uint32_t c1,
                         std::uint32_t c2, std::uint32_t c3, std::uint32_t out[4]) {
    PhiloxState<ScalarU32> s{c0, c1, c2, c3};
    philox10<ScalarU32>(s, static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32));
    out[0] = s.x0;
    out[1] = s.x1;
    out[2] = s.x2;
    out[3] = s.x3;
}

} // namespace riskctl::kernels::detail
