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

#include <algorithm>
#include <cmath>

#include "biphoton/kernels.hpp"

namespace biphoton::kernels::scalar {

void hermitian_forms(const double *m_re, const double *m_im, const ComplexBatch &phis, double *out) {
    const int d = phis.dim;
    const int n = phis.count;
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i) {
            const double pi_re = phis.re[i * n + k];
            const double pi_im = phis.im[i * n + k];
            for (int j = 0; j < d; ++j) {
                const double a_re = m_re[i * d + j];
                const double a_im = m_im[i * d + j];
                const double pj_re = phis.re[j * n + k];
                const double pj_im = phis.im[j * n + k];
                const double t_re = a_re * pj_re - a_im * pj_im;
                const double t_im = a_re * pj_im + a_im * pj_re;
                acc += pi_re * t_re + pi_im * t_im;
            }
        }
        out[k] = acc;
    }
}

void max_abs_dot3(const PointCloud3 &cloud, const double *targets_xyz, int n_targets, double *out) {
    const std::size_t n = cloud.x.size();
    for (int t = 0; t < n_targets; ++t) {
        const double tx = targets_xyz[3 * t];
        const double ty = targets_xyz[3 * t + 1];
        const double tz = targets_xyz[3 * t + 2];
        double best = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            best = std::max(best, std::abs(tx * cloud.x[p] + ty * cloud.y[p] + tz * cloud.z[p]));
        }
        out[t] = best;
    }
}

}  // namespace biphoton::kernels::scalar
