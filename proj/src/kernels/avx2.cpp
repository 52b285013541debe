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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "biphoton/kernels.hpp"

namespace biphoton::kernels::avx2 {

namespace {

inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d m = _mm_max_pd(lo, hi);
    m = _mm_max_sd(m, _mm_unpackhi_pd(m, m));
    return _mm_cvtsd_f64(m);
}

}  // namespace

void hermitian_forms(const double *m_re, const double *m_im, const ComplexBatch &phis, double *out) {
    const int d = phis.dim;
    const int n = phis.count;
    const double *re = phis.re.data();
    const double *im = phis.im.data();

    int k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (int i = 0; i < d; ++i) {
            const __m256d pi_re = _mm256_loadu_pd(re + i * n + k);
            const __m256d pi_im = _mm256_loadu_pd(im + i * n + k);
            for (int j = 0; j < d; ++j) {
                const __m256d a_re = _mm256_set1_pd(m_re[i * d + j]);
                const __m256d a_im = _mm256_set1_pd(m_im[i * d + j]);
                const __m256d pj_re = _mm256_loadu_pd(re + j * n + k);
                const __m256d pj_im = _mm256_loadu_pd(im + j * n + k);
                const __m256d t_re = _mm256_fmsub_pd(a_re, pj_re, _mm256_mul_pd(a_im, pj_im));
                const __m256d t_im = _mm256_fmadd_pd(a_re, pj_im, _mm256_mul_pd(a_im, pj_re));
                acc = _mm256_fmadd_pd(pi_re, t_re, acc);
                acc = _mm256_fmadd_pd(pi_im, t_im, acc);
            }
        }
        _mm256_storeu_pd(out + k, acc);
    }
    for (; k < n; ++k) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                const double a_re = m_re[i * d + j];
                const double a_im = m_im[i * d + j];
                const double t_re = a_re * re[j * n + k] - a_im * im[j * n + k];
                const double t_im = a_re * im[j * n + k] + a_im * re[j * n + k];
                acc += re[i * n + k] * t_re + im[i * n + k] * t_im;
            }
        }
        out[k] = acc;
    }
}

void max_abs_dot3(const PointCloud3 &cloud, const double *targets_xyz, int n_targets, double *out) {
    const std::size_t n = cloud.x.size();
    const double *xs = cloud.x.data();
    const double *ys = cloud.y.data();
    const double *zs = cloud.z.data();
    for (int t = 0; t < n_targets; ++t) {
        const double tx = targets_xyz[3 * t];
        const double ty = targets_xyz[3 * t + 1];
        const double tz = targets_xyz[3 * t + 2];
        const __m256d vx = _mm256_set1_pd(tx);
        const __m256d vy = _mm256_set1_pd(ty);
        const __m256d vz = _mm256_set1_pd(tz);
        __m256d best = _mm256_setzero_pd();
        std::size_t p = 0;
        for (; p + 4 <= n; p += 4) {
            __m256d dot = _mm256_mul_pd(vx, _mm256_loadu_pd(xs + p));
            dot = _mm256_fmadd_pd(vy, _mm256_loadu_pd(ys + p), dot);
            dot = _mm256_fmadd_pd(vz, _mm256_loadu_pd(zs + p), dot);
            best = _mm256_max_pd(best, abs_pd(dot));
        }
        double b = hmax(best);
        for (; p < n; ++p) {
            b = std::max(b, std::abs(tx * xs[p] + ty * ys[p] + tz * zs[p]));
        }
        out[t] = b;
    }
}

}  // namespace biphoton::kernels::avx2
