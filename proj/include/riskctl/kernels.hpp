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

#ifndef RISKCTL_KERNELS_HPP
#define RISKCTL_KERNELS_HPP

#include <cstddef>
#include <cstdint>
#include <string>

namespace riskctl::kernels {

// Numeric inner loops come in two interchangeable arms: a scalar reference
// and an AVX2 variant. Both execute the same IEEE-754 operation sequence
// (explicit fma, fixed accumulator interleave), so they agree bit for bit;
// the equivalence tests assert exact equality, not tolerances.

enum class Backend { scalar, avx2 };

/// Backend currently in use.
Backend active_backend();

/// True if this CPU supports the AVX2+FMA arm.
bool avx2_supported();

/// Force a backend (throws ConfigError if unsupported). The default is the
/// best supported arm, overridable with RISKCTL_KERNELS=scalar|avx2|auto.
void set_backend(Backend b);
void set_backend_auto();

std::string backend_name(Backend b);

/// Standard normal draws from a counter-based stream: the value at
/// (seed, path, step, i) is a pure function of its indices, so batches are
/// reproducible at any parallelism level and in any evaluation order.
/// Fills out[p * k + i] for p in [0, n_paths), i in [0, k),
/// path index = path_begin + p.
void fill_normals(std::uint64_t seed, std::uint64_t path_begin, std::size_t n_paths,
                  std::uint64_t step, std::size_t k, double* out);

/// Raw Philox4x32-10 block (exposed for tests): counter (c0..c3), key from seed.
void philox_block(std::uint64_t seed, std::uint32_t c0, std::uint32_t c1,
                  std::uint32_t c2, std::uint32_t c3, std::uint32_t out[4]);

/// Elementwise natural exp / log. Accuracy ~1 ulp over the normal range;
/// exp underflows to 0 below -708.39, log of a nonpositive input yields
/// -inf (zero) or NaN (negative).
void vexp(const double* x, double* out, std::size_t n);
void vlog(const double* x, double* out, std::size_t n);

/// Standard normal inverse CDF applied elementwise to u in (0,1).
void vnorm_icdf(const double* u, double* out, std::size_t n);

/// Reductions with a fixed 4-way accumulator interleave (identical in both
/// arms and independent of n's alignment).
double reduce_sum(const double* x, std::size_t n);
double reduce_dot(const double* x, const double* y, std::size_t n);

} // namespace riskctl::kernels

#endif // RISKCTL_KERNELS_HPP
