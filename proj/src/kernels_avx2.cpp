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

// AVX2+FMA arm. This translation unit is the only one compiled with
// -mavx2 -mfma; it is reached solely through the runtime dispatcher.

#include "riskctl/detail/kernel_loops.hpp"

#ifdef __AVX2__

#include <immintrin.h>

#include <cstdint>

namespace riskctl::kernels::detail {

namespace {

struct Avx2F {
    using reg = __m256d;
    using ivec = __m128i;
    using mask = __m256d;
    using bits = __m256i;
    static constexpr std::size_t width = 4;

    static reg set1(double v) { return _mm256_set1_pd(v); }
    static reg load(const double* p) { return _mm256_loadu_pd(p); }
    static void store(double* p, reg v) { _mm256_storeu_pd(p, v); }

    static reg add(reg a, reg b) { return _mm256_add_pd(a, b); }
    static reg sub(reg a, reg b) { return _mm256_sub_pd(a, b); }
    static reg mul(reg a, reg b) { return _mm256_mul_pd(a, b); }
    static reg div(reg a, reg b) { return _mm256_div_pd(a, b); }
    static reg fma(reg a, reg b, reg c) { return _mm256_fmadd_pd(a, b, c); }
    static reg neg(reg a) { return _mm256_xor_pd(a, _mm256_set1_pd(-0.0)); }
    static reg abs(reg a) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), a); }
    static reg sqrt(reg a) { return _mm256_sqrt_pd(a); }
    static reg min(reg a, reg b) { return _mm256_min_pd(a, b); }
    static reg max(reg a, reg b) { return _mm256_max_pd(a, b); }
    static reg round_nearest(reg a) {
        return _mm256_round_pd(a, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    }

    static mask lt(reg a, reg b) { return _mm256_cmp_pd(a, b, _CMP_LT_OQ); }
    static mask le(reg a, reg b) { return _mm256_cmp_pd(a, b, _CMP_LE_OQ); }
    static mask gt(reg a, reg b) { return _mm256_cmp_pd(a, b, _CMP_GT_OQ); }
    static reg select(mask m, reg a, reg b) { return _mm256_blendv_pd(b, a, m); }

    static bits to_bits(reg a) { return _mm256_castpd_si256(a); }
    static reg from_bits(bits b) { return _mm256_castsi256_pd(b); }
    static bits bits_set1(std::uint64_t v) {
        return _mm256_set1_epi64x(static_cast<long long>(v));
    }
    static bits bits_shr(bits a, int s) { return _mm256_srli_epi64(a, s); }
    static bits bits_and(bits a, bits b) { return _mm256_and_si256(a, b); }
    static bits bits_or(bits a, bits b) { return _mm256_or_si256(a, b); }
    // exact for 0 <= value < 2^52 (magic-number conversion)
    static reg i64lo_to_f64(bits a) {
        const bits magic_i = bits_set1(0x4330000000000000ull);
        const reg magic_d = _mm256_set1_pd(0x1p52);
        return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(a, magic_i)), magic_d);
    }

    static ivec f64_to_i32(reg a) { return _mm256_cvtpd_epi32(a); }
    static ivec i_sar1(ivec a) { return _mm_srai_epi32(a, 1); }
    static ivec i_sub(ivec a, ivec b) { return _mm_sub_epi32(a, b); }
    static reg pow2i(ivec k) {
        const __m256i k64 = _mm256_cvtepi32_epi64(k);
        const __m256i biased = _mm256_add_epi64(k64, _mm256_set1_epi64x(1023));
        return _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));
    }
};

struct Avx2U32 {
    using reg = __m256i;
    static constexpr std::size_t width = 8;
    static reg set1(std::uint32_t v) { return _mm256_set1_epi32(static_cast<int>(v)); }
    static reg mullo(reg a, reg b) { return _mm256_mullo_epi32(a, b); }
    static reg mulhi(reg a, reg b) {
        const __m256i even = _mm256_mul_epu32(a, b);
        const __m256i odd =
            _mm256_mul_epu32(_mm256_srli_epi64(a, 32), _mm256_srli_epi64(b, 32));
        const __m256i hi_mask = _mm256_set1_epi64x(static_cast<long long>(0xffffffff00000000ull));
        return _mm256_or_si256(_mm256_srli_epi64(even, 32), _mm256_and_si256(odd, hi_mask));
    }
    static reg xor_(reg a, reg b) { return _mm256_xor_si256(a, b); }
    static reg add(reg a, reg b) { return _mm256_add_epi32(a, b); }
};

// u64 lanes -> (0,1) doubles via the same (v>>12 + 0.5) * 2^-52 path as the
// scalar arm (exact in both).
inline __m256d unit_from_u64(__m256i v) {
    const __m256i top52 = _mm256_srli_epi64(v, 12);
    const __m256d d = Avx2F::i64lo_to_f64(top52);
    return _mm256_mul_pd(_mm256_add_pd(d, _mm256_set1_pd(0.5)),
                         _mm256_set1_pd(0x1p-52));
}

struct Avx2Arch {
    using F = Avx2F;
    using U32 = Avx2U32;

    static void normals_block(std::uint64_t seed, std::uint64_t path0, std::uint64_t step,
                              std::uint32_t j, double* z) {
        alignas(32) std::uint32_t plo[8];
        alignas(32) std::uint32_t phi[8];
        for (int l = 0; l < 8; ++l) {
            const std::uint64_t p = path0 + static_cast<std::uint64_t>(l);
            plo[l] = static_cast<std::uint32_t>(p);
            phi[l] = static_cast<std::uint32_t>(p >> 32);
        }
        PhiloxState<U32> s;
        s.x0 = U32::set1(static_cast<std::uint32_t>(step));
        s.x1 = U32::set1(j);
        s.x2 = _mm256_load_si256(reinterpret_cast<const __m256i*>(plo));
        s.x3 = _mm256_load_si256(reinterpret_cast<const __m256i*>(phi));
        philox10<U32>(s, static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32));

        // interleave (x0,x1) -> u64 a-words, (x2,x3) -> u64 b-words; the
        // unpack keeps 128-bit halves, so lanes come out as blocks
        // {0,1,4,5} and {2,3,6,7}
        const __m256i a_lo = _mm256_unpacklo_epi32(s.x0, s.x1);
        const __m256i a_hi = _mm256_unpackhi_epi32(s.x0, s.x1);
        const __m256i b_lo = _mm256_unpacklo_epi32(s.x2, s.x3);
        const __m256i b_hi = _mm256_unpackhi_epi32(s.x2, s.x3);

        const __m256d za_lo = norm_icdf_core<F>(unit_from_u64(a_lo));
        const __m256d za_hi = norm_icdf_core<F>(unit_from_u64(a_hi));
        const __m256d zb_lo = norm_icdf_core<F>(unit_from_u64(b_lo));
        const __m256d zb_hi = norm_icdf_core<F>(unit_from_u64(b_hi));

        static constexpr int kLoBlocks[4] = {0, 1, 4, 5};
        static constexpr int kHiBlocks[4] = {2, 3, 6, 7};
        alignas(32) double tmp[4];
        _mm256_store_pd(tmp, za_lo);
        for (int l = 0; l < 4; ++l) z[2 * kLoBlocks[l]] = tmp[l];
        _mm256_store_pd(tmp, za_hi);
        for (int l = 0; l < 4; ++l) z[2 * kHiBlocks[l]] = tmp[l];
        _mm256_store_pd(tmp, zb_lo);
        for (int l = 0; l < 4; ++l) z[2 * kLoBlocks[l] + 1] = tmp[l];
        _mm256_store_pd(tmp, zb_hi);
        for (int l = 0; l < 4; ++l) z[2 * kHiBlocks[l] + 1] = tmp[l];
    }

    static std::size_t sum_main(const double* x, std::size_t n, double acc[4]) {
        __m256d vacc = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4) vacc = _mm256_add_pd(vacc, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(acc, vacc);
        return i;
    }

    static std::size_t dot_main(const double* x, const double* y, std::size_t n, double acc[4]) {
        __m256d vacc = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4)
            vacc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), vacc);
        _mm256_storeu_pd(acc, vacc);
        return i;
    }
};

} // namespace

const KernelFns& avx2_kernel_fns() {
    static const KernelFns fns = make_kernel_fns<Avx2Arch>();
    return fns;
}

} // namespace riskctl::kernels::detail

#else

namespace riskctl::kernels::detail {
const KernelFns& avx2_kernel_fns() { return scalar_kernel_fns(); }
} // namespace riskctl::kernels::detail

#endif
