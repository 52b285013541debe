// Copyright 2026 The biphoton Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <span>
#include <string_view>

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation and, on x86-64, an AVX2+FMA variant chosen at runtime.
// Variants must agree with the reference to rounding (see kernels_test).

namespace biphoton::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);

/// True if this build contains the variant and the CPU can run it.
bool isa_available(Isa isa);

/// Best available ISA, unless overridden by set_isa_override or the
/// BIPHOTON_ISA environment variable ("scalar" or "avx2").
Isa active_isa();

/// Forces a particular ISA for subsequent calls (nullopt restores detection).
/// Throws std::invalid_argument if the requested ISA is unavailable.
void set_isa_override(std::optional<Isa> isa);

/// Component-major batch of `count` complex vectors of length `dim`:
/// element i of vector k lives at re[i * count + k], im[i * count + k].
struct ComplexBatch {
    std::span<const double> re;
    std::span<const double> im;
    int dim = 0;
    int count = 0;
};

/// out[k] = Re(phi_k^dag M phi_k), with M given row-major as (m_re, m_im).
void hermitian_forms(std::span<const double> m_re, std::span<const double> m_im, const ComplexBatch &phis,
                     std::span<double> out, std::optional<Isa> isa = std::nullopt);

/// Structure-of-arrays cloud of real 3-vectors.
struct PointCloud3 {
    std::span<const double> x;
    std::span<const double> y;
    std::span<const double> z;
};

/// out[t] = max over points p of |target_t . p|. Targets are packed xyz.
void max_abs_dot3(const PointCloud3 &cloud, std::span<const double> targets_xyz, std::span<double> out,
                  std::optional<Isa> isa = std::nullopt);

namespace scalar {
void hermitian_forms(const double *m_re, const double *m_im, const ComplexBatch &phis, double *out);
void max_abs_dot3(const PointCloud3 &cloud, const double *targets_xyz, int n_targets, double *out);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define BIPHOTON_HAVE_AVX2_KERNELS 1
namespace avx2 {
void hermitian_forms(const double *m_re, const double *m_im, const ComplexBatch &phis, double *out);
void max_abs_dot3(const PointCloud3 &cloud, const double *targets_xyz, int n_targets, double *out);
}  // namespace avx2
#endif

}  // namespace biphoton::kernels
