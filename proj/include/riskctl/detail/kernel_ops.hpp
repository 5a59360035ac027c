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

#ifndef RISKCTL_DETAIL_KERNEL_OPS_HPP
#define RISKCTL_DETAIL_KERNEL_OPS_HPP

// Lane-generic bodies for the numeric kernels. Each algorithm is written
// once against an Ops policy (scalar double or a SIMD register) and must be
// expressed purely in IEEE-exact primitives: +, -, *, /, sqrt, fma, compares
// and bit manipulation. Under that discipline the scalar and SIMD arms
// produce bit-identical results lane by lane. Compile every including TU
// with -ffp-contract=off.

#include <cstdint>
#include <cstddef>

namespace riskctl::kernels::detail {

// ---------------------------------------------------------------------------
// Philox 4x32-10 (Salmon et al., counter-based RNG)
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

// U32: policy with u32 lanes (mullo32/mulhi32/xor/add).
template <class U32>
struct PhiloxState {
    typename U32::reg x0, x1, x2, x3;
};

template <class U32>
inline void philox_round(PhiloxState<U32>& s, typename U32::reg k0, typename U32::reg k1) {
    const auto m0 = U32::set1(kPhiloxM0);
    const auto m1 = U32::set1(kPhiloxM1);
    const auto lo0 = U32::mullo(s.x0, m0);
    const auto hi0 = U32::mulhi(s.x0, m0);
    const auto lo1 = U32::mullo(s.x2, m1);
    const auto hi1 = U32::mulhi(s.x2, m1);
    const auto y0 = U32::xor_(U32::xor_(hi1, s.x1), k0);
    const auto y2 = U32::xor_(U32::xor_(hi0, s.x3), k1);
    s.x0 = y0;
    s.x1 = lo1;
    s.x2 = y2;
    s.x3 = lo0;
}

template <class U32>
inline void philox10(PhiloxState<U32>& s, std::uint32_t key0, std::uint32_t key1) {
    auto k0 = U32::set1(key0);
    auto k1 = U32::set1(key1);
    const auto w0 = U32::set1(kPhiloxW0);
    const auto w1 = U32::set1(kPhiloxW1);
    for (int r = 0; r < 10; ++r) {
        philox_round<U32>(s, k0, k1);
        k0 = U32::add(k0, w0);
        k1 = U32::add(k1, w1);
    }
}

// ---------------------------------------------------------------------------
// Elementwise transforms on F lanes
// ---------------------------------------------------------------------------

// Horner with explicit fma; coefficients highest degree first.
template <class F, std::size_t N>
inline typename F::reg polevl(typename F::reg x, const double (&c)[N]) {
    auto acc = F::set1(c[0]);
    for (std::size_t i = 1; i < N; ++i) acc = F::fma(acc, x, F::set1(c[i]));
    return acc;
}

// exp(x), Cephes-style: x = k*ln2 + r, exp(r) = 1 + 2r P(r^2)/(Q(r^2) - r P(r^2)).
// Underflows to +0 below ~-708.4, saturates to +inf above ~709.8.
template <class F>
inline typename F::reg exp_core(typename F::reg x) {
    using R = typename F::reg;
    static constexpr double P[] = {1.26177193074810590878e-4, 3.02994407707441961300e-2,
                                   9.99999999999999999910e-1};
    static constexpr double Q[] = {3.00198505138664455042e-6, 2.52448340349684104192e-3,
                                   2.27265548208155028766e-1, 2.00000000000000000005e0};
    const R log2e = F::set1(1.4426950408889634073599);
    const R c1 = F::set1(6.93145751953125e-1);
    const R c2 = F::set1(1.42860682030941723212e-6);

    const R fk = F::round_nearest(F::mul(x, log2e));
    R r = F::fma(fk, F::neg(c1), x);
    r = F::fma(fk, F::neg(c2), r);
    const R r2 = F::mul(r, r);
    const R px = F::mul(r, polevl<F>(r2, P));
    const R qx = polevl<F>(r2, Q);
    R e = F::add(F::set1(1.0), F::div(F::mul(F::set1(2.0), px), F::sub(qx, px)));
    // scale by 2^k in two halves so the exponent field never saturates
    const auto ki = F::f64_to_i32(fk);
    const auto ka = F::i_sar1(ki);
    const auto kb = F::i_sub(ki, ka);
    e = F::mul(F::mul(e, F::pow2i(ka)), F::pow2i(kb));
    e = F::select(F::lt(x, F::set1(-708.396418532264078749)), F::set1(0.0), e);
    e = F::select(F::gt(x, F::set1(709.782712893383996843)),
                  F::set1(__builtin_huge_val()), e);
    return e;
}

// log(x) for normal positive doubles via the atanh form:
// x = m * 2^e, s = (m-1)/(m+1), log m = 2s + 2s z P(z) with z = s^2.
// log(0) = -inf, log(negative) = NaN, log(inf) = inf; denormal inputs are
// treated as 0.
template <class F>
inline typename F::reg log_core(typename F::reg x) {
    using R = typename F::reg;
    // minimax fit of (atanh(s)/s - 1)/z on z in [0, 0.029438], |err| < 1.1e-18
    static constexpr double P[] = {6.5433131443506500316e-2, 6.6343865625937741928e-2,
                                   7.6931198516588017704e-2, 9.0908978200618297838e-2,
                                   1.1111111195857001988e-1, 1.4285714285401805715e-1,
                                   2.0000000000000438492e-1, 3.3333333333333333232e-1};

    // decompose x = m * 2^e with m in [0.5, 1)
    const auto bits = F::to_bits(x);
    const auto expfield = F::bits_shr(bits, 52);
    const R e_raw = F::i64lo_to_f64(F::bits_and(expfield, F::bits_set1(0x7ff)));
    R e = F::sub(e_raw, F::set1(1022.0));
    const auto mant_bits =
        F::bits_or(F::bits_and(bits, F::bits_set1(0x000fffffffffffffull)),
                   F::bits_set1(0x3fe0000000000000ull));
    R m = F::from_bits(mant_bits);

    // normalize m into [sqrt(1/2), sqrt(2))
    const auto below = F::lt(m, F::set1(0.70710678118654752440));
    m = F::select(below, F::add(m, m), m);
    e = F::select(below, F::sub(e, F::set1(1.0)), e);

    const R s = F::div(F::sub(m, F::set1(1.0)), F::add(m, F::set1(1.0)));
    const R z = F::mul(s, s);
    const R w = F::add(s, F::mul(s, F::mul(z, polevl<F>(z, P))));
    // e * ln2_hi is exact (both factors have few mantissa bits)
    R result = F::add(w, w);
    result = F::fma(e, F::set1(-2.121944400546905827679e-4), result);
    result = F::fma(e, F::set1(0.693359375), result);

    // edge lanes
    const R nan = F::set1(__builtin_nan(""));
    const R ninf = F::set1(-__builtin_huge_val());
    const R pinf = F::set1(__builtin_huge_val());
    result = F::select(F::lt(x, F::set1(2.2250738585072014e-308)), ninf, result);
    result = F::select(F::lt(x, F::set1(0.0)), nan, result);
    result = F::select(F::gt(x, F::set1(1.7976931348623157e308)), pinf, result);
    return result;
}

// Inverse standard normal CDF for u in (0,1): Wichura's AS 241 (PPND16).
// All three branches are evaluated and blended so every lane follows the
// same instruction stream.
template <class F>
inline typename F::reg norm_icdf_core(typename F::reg u) {
    using R = typename F::reg;
    static constexpr double A[] = {2.5090809287301226727e3, 3.3430575583588128105e4,
                                   6.7265770927008700853e4, 4.5921953931549871457e4,
                                   1.3731693765509461125e4, 1.9715909503065514427e3,
                                   1.3314166789178437745e2, 3.3871328727963666080e0};
    static constexpr double B[] = {5.2264952788528545610e3, 2.8729085735721942674e4,
                                   3.9307895800092710610e4, 2.1213794301586595867e4,
                                   5.3941960214247511077e3, 6.8718700749205790830e2,
                                   4.2313330701600911252e1, 1.0};
    static constexpr double C[] = {7.74545014278341407640e-4, 2.27238449892691845833e-2,
                                   2.41780725177450611770e-1, 1.27045825245236838258e0,
                                   3.64784832476320460504e0,  5.76949722146069140550e0,
                                   4.63033784615654529590e0,  1.42343711074968357734e0};
    static constexpr double D[] = {1.05075007164441684324e-9, 5.47593808499534494600e-4,
                                   1.51986665636164571966e-2, 1.48103976427480074590e-1,
                                   6.89767334985100004550e-1, 1.67638483018380384940e0,
                                   2.05319162663775882187e0,  1.0};
    static constexpr double E[] = {2.01033439929228813265e-7, 2.71155556874348757815e-5,
                                   1.24266094738807843860e-3, 2.65321895265761230930e-2,
                                   2.96560571828504891230e-1, 1.78482653991729133580e0,
                                   5.46378491116411436990e0,  6.65790464350110377720e0};
    static constexpr double FF[] = {2.04426310338993978564e-15, 1.42151175831644588870e-7,
                                    1.84631831751005468180e-5,  7.86869131145613259100e-4,
                                    1.48753612908506148525e-2,  1.36929880922735805310e-1,
                                    5.99832206555887937690e-1,  1.0};

    const R half = F::set1(0.5);
    const R q = F::sub(u, half);

    // central branch: |q| <= 0.425
    const R rc = F::sub(F::set1(0.180625), F::mul(q, q));
    const R central = F::mul(q, F::div(polevl<F>(rc, A), polevl<F>(rc, B)));

    // tail branches operate on min(u, 1-u), clamped to the normal range so
    // the log stays finite
    const R umin_raw = F::min(u, F::sub(F::set1(1.0), u));
    const R umin = F::max(umin_raw, F::set1(2.2250738585072014e-308));
    R r = F::sqrt(F::neg(log_core<F>(umin)));

    const auto near = F::le(r, F::set1(5.0));
    const R r1 = F::sub(r, F::set1(1.6));
    const R r2 = F::sub(r, F::set1(5.0));
    const R tail_near = F::div(polevl<F>(r1, C), polevl<F>(r1, D));
    const R tail_far = F::div(polevl<F>(r2, E), polevl<F>(r2, FF));
    R tail = F::select(near, tail_near, tail_far);
    tail = F::select(F::lt(q, F::set1(0.0)), F::neg(tail), tail);

    const auto central_mask = F::le(F::abs(q), F::set1(0.425));
    return F::select(central_mask, central, tail);
}

// (0,1) uniform from the top 52 bits of a u64, exclusive at both ends:
// u = (bits >> 12 + 0.5) * 2^-52.
inline double u64_to_unit_double(std::uint64_t v) {
    const double d = static_cast<double>(v >> 12);
    return (d + 0.5) * 0x1p-52;
}

// ---------------------------------------------------------------------------
// Reduction combine order shared by both arms
// ---------------------------------------------------------------------------

inline double combine4(const double acc[4]) {
    return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

} // namespace riskctl::kernels::detail

#endif // RISKCTL_DETAIL_KERNEL_OPS_HPP
