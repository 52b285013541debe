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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "biphoton/kernels.hpp"

namespace biphoton::kernels {

namespace {

// -1: no override; otherwise the Isa value.
std::atomic<int> g_override{-1};

Isa detect() {
    if (const char *env = std::getenv("BIPHOTON_ISA")) {
        std::string v(env);
        if (v == "scalar") {
            return Isa::kScalar;
        }
        if (v == "avx2" && isa_available(Isa::kAvx2)) {
            return Isa::kAvx2;
        }
    }
    return isa_available(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
}

Isa resolve(std::optional<Isa> isa) {
    Isa chosen = isa ? *isa : active_isa();
    if (!isa_available(chosen)) {
        throw std::invalid_argument("kernel ISA " + std::string(isa_name(chosen)) + " is not available");
    }
    return chosen;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::kScalar:
            return "scalar";
        case Isa::kAvx2:
            return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::kScalar:
            return true;
        case Isa::kAvx2:
#ifdef BIPHOTON_HAVE_AVX2_KERNELS
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

Isa active_isa() {
    int o = g_override.load(std::memory_order_relaxed);
    if (o >= 0) {
        return static_cast<Isa>(o);
    }
    static const Isa detected = detect();
    return detected;
}

void set_isa_override(std::optional<Isa> isa) {
    if (isa && !isa_available(*isa)) {
        throw std::invalid_argument("kernel ISA " + std::string(isa_name(*isa)) + " is not available");
    }
    g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

void hermitian_forms(std::span<const double> m_re, std::span<const double> m_im, const ComplexBatch &phis,
                     std::span<double> out, std::optional<Isa> isa) {
    const auto d = static_cast<std::size_t>(phis.dim);
    const auto n = static_cast<std::size_t>(phis.count);
    if (m_re.size() != d * d || m_im.size() != d * d || phis.re.size() != d * n || phis.im.size() != d * n ||
        out.size() != n) {
        throw std::invalid_argument("hermitian_forms: inconsistent buffer sizes");
    }
    switch (resolve(isa)) {
#ifdef BIPHOTON_HAVE_AVX2_KERNELS
        case Isa::kAvx2:
            avx2::hermitian_forms(m_re.data(), m_im.data(), phis, out.data());
            return;
#endif
        default:
            scalar::hermitian_forms(m_re.data(), m_im.data(), phis, out.data());
    }
}

void max_abs_dot3(const PointCloud3 &cloud, std::span<const double> targets_xyz, std::span<double> out,
                  std::optional<Isa> isa) {
    if (cloud.y.size() != cloud.x.size() || cloud.z.size() != cloud.x.size() || targets_xyz.size() % 3 != 0 ||
        out.size() != targets_xyz.size() / 3) {
        throw std::invalid_argument("max_abs_dot3: inconsistent buffer sizes");
    }
    const int n_targets = static_cast<int>(out.size());
    switch (resolve(isa)) {
#ifdef BIPHOTON_HAVE_AVX2_KERNELS
        case Isa::kAvx2:
            avx2::max_abs_dot3(cloud, targets_xyz.data(), n_targets, out.data());
            return;
#endif
        default:
            scalar::max_abs_dot3(cloud, targets_xyz.data(), n_targets, out.data());
    }
}

}  // namespace biphoton::kernels
