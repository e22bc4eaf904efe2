/*
Copyright 2026 The Foakit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

// AVX2/FMA variants of the inner loops. Compiled only on x86-64 with
// -mavx2 -mfma; selected at runtime when the CPU reports both features.

#include "foa/kernels.hpp"

#if defined(FOA_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace foa::kernels {

namespace {

inline double HSum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

void AxpyAvx2(size_t n, double a, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(a);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void ScaleAvx2(size_t n, double a, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(a);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] = a * x[i];
}

double DotAvx2(size_t n, const double* x, const double* y) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i] * y[i];
  return HSum(acc) + tail;
}

double SumsqAvx2(size_t n, const double* x) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i] * x[i];
  return HSum(acc) + tail;
}

void ApplyMat4Avx2(size_t n, const double* m, const double* const* in,
                   double* const* out) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(in[0] + i);
    const __m256d b = _mm256_loadu_pd(in[1] + i);
    const __m256d c = _mm256_loadu_pd(in[2] + i);
    const __m256d d = _mm256_loadu_pd(in[3] + i);
    for (int r = 0; r < 4; ++r) {
      __m256d acc = _mm256_mul_pd(_mm256_set1_pd(m[r * 4 + 0]), a);
      acc = _mm256_fmadd_pd(_mm256_set1_pd(m[r * 4 + 1]), b, acc);
      acc = _mm256_fmadd_pd(_mm256_set1_pd(m[r * 4 + 2]), c, acc);
      acc = _mm256_fmadd_pd(_mm256_set1_pd(m[r * 4 + 3]), d, acc);
      _mm256_storeu_pd(out[r] + i, acc);
    }
  }
  for (; i < n; ++i) {
    const double a = in[0][i], b = in[1][i], c = in[2][i], d = in[3][i];
    for (int r = 0; r < 4; ++r) {
      out[r][i] =
          m[r * 4 + 0] * a + m[r * 4 + 1] * b + m[r * 4 + 2] * c + m[r * 4 + 3] * d;
    }
  }
}

void CmulAvx2(size_t n, const std::complex<double>* a,
              const std::complex<double>* b, std::complex<double>* out) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  size_t i = 0;
  // Two complex values per 256-bit vector: [re0 im0 re1 im1].
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    const __m256d br = _mm256_movedup_pd(vb);          // [br0 br0 br1 br1]
    const __m256d bi = _mm256_permute_pd(vb, 0xF);     // [bi0 bi0 bi1 bi1]
    const __m256d a_swap = _mm256_permute_pd(va, 0x5); // [im re im re]
    const __m256d t = _mm256_mul_pd(a_swap, bi);
    _mm256_storeu_pd(po + 2 * i, _mm256_addsub_pd(_mm256_mul_pd(va, br), t));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br - ai * bi, ar * bi + ai * br};
  }
}

// Four independent rotor chains (16 bins per outer iteration) hide the
// FMA latency of the phase recurrence. Lane anchors and the block step are
// derived from two sin/cos calls by complex products; callers sweep the
// spectrum in cache-sized chunks so the drift stays at the few-ulp level.
void PathAccumAvx2(const PathAccum& p) {
  const size_t n16 = p.n & ~size_t{15};
  __m256d g[4];
  for (int c = 0; c < 4; ++c) g[c] = _mm256_set1_pd(p.amp * p.sh[c]);

  alignas(32) double cs[16], ss[16];
  const double cd = std::cos(p.dphase);
  const double sd = std::sin(p.dphase);
  cs[0] = std::cos(p.phase0);
  ss[0] = std::sin(p.phase0);
  for (int j = 1; j < 16; ++j) {
    cs[j] = cs[j - 1] * cd - ss[j - 1] * sd;
    ss[j] = cs[j - 1] * sd + ss[j - 1] * cd;
  }
  // Block step (cd, sd)^16 by four squarings.
  double bc = cd, bs = sd;
  for (int sq = 0; sq < 4; ++sq) {
    const double c2 = bc * bc - bs * bs;
    bs = 2.0 * bc * bs;
    bc = c2;
  }
  const __m256d step_c = _mm256_set1_pd(bc);
  const __m256d step_s = _mm256_set1_pd(bs);

  __m256d cr[4], sr[4];
  for (int b = 0; b < 4; ++b) {
    cr[b] = _mm256_load_pd(cs + 4 * b);
    sr[b] = _mm256_load_pd(ss + 4 * b);
  }

  for (size_t k = 0; k < n16; k += 16) {
    for (int b = 0; b < 4; ++b) {
      const size_t kb = k + 4 * static_cast<size_t>(b);
      __m256d re = cr[b], im = sr[b];
      for (int f = 0; f < p.num_filters; ++f) {
        const __m256d fr = _mm256_loadu_pd(p.filt_re[f] + kb);
        const __m256d fi = _mm256_loadu_pd(p.filt_im[f] + kb);
        const __m256d t = _mm256_fmsub_pd(re, fr, _mm256_mul_pd(im, fi));
        im = _mm256_fmadd_pd(re, fi, _mm256_mul_pd(im, fr));
        re = t;
      }
      for (int c = 0; c < 4; ++c) {
        _mm256_storeu_pd(
            p.out_re[c] + kb,
            _mm256_fmadd_pd(g[c], re, _mm256_loadu_pd(p.out_re[c] + kb)));
        _mm256_storeu_pd(
            p.out_im[c] + kb,
            _mm256_fmadd_pd(g[c], im, _mm256_loadu_pd(p.out_im[c] + kb)));
      }
      const __m256d t = _mm256_fmsub_pd(cr[b], step_c, _mm256_mul_pd(sr[b], step_s));
      sr[b] = _mm256_fmadd_pd(cr[b], step_s, _mm256_mul_pd(sr[b], step_c));
      cr[b] = t;
    }
  }

  // Scalar tail with exact anchors.
  for (size_t k = n16; k < p.n; ++k) {
    const double ph = p.phase0 + static_cast<double>(k) * p.dphase;
    double re = std::cos(ph), im = std::sin(ph);
    for (int f = 0; f < p.num_filters; ++f) {
      const double fr = p.filt_re[f][k];
      const double fi = p.filt_im[f][k];
      const double t = re * fr - im * fi;
      im = re * fi + im * fr;
      re = t;
    }
    for (int c = 0; c < 4; ++c) {
      const double gc = p.amp * p.sh[c];
      p.out_re[c][k] += gc * re;
      p.out_im[c][k] += gc * im;
    }
  }
}

const Ops kAvx2Ops = {
    "avx2",    AxpyAvx2, ScaleAvx2,     DotAvx2,
    SumsqAvx2, ApplyMat4Avx2, CmulAvx2, PathAccumAvx2,
};

bool CpuHasAvx2Fma() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace

const Ops* Avx2() {
  static const Ops* ops = CpuHasAvx2Fma() ? &kAvx2Ops : nullptr;
  return ops;
}

}  // namespace foa::kernels

#endif  // FOA_HAVE_AVX2
