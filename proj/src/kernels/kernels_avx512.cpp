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

// AVX-512 variants of the inner loops (8 doubles per vector). Compiled only
// with -mavx512f -mavx512dq; selected at runtime ahead of AVX2 when the CPU
// reports the features.

#include "foa/kernels.hpp"

#if defined(FOA_HAVE_AVX512)

#include <immintrin.h>

#include <cmath>

namespace foa::kernels {

namespace {

void AxpyAvx512(size_t n, double a, const double* x, double* y) {
  const __m512d va = _mm512_set1_pd(a);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m512d vy = _mm512_loadu_pd(y + i);
    _mm512_storeu_pd(y + i, _mm512_fmadd_pd(va, _mm512_loadu_pd(x + i), vy));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void ScaleAvx512(size_t n, double a, const double* x, double* y) {
  const __m512d va = _mm512_set1_pd(a);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm512_storeu_pd(y + i, _mm512_mul_pd(va, _mm512_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] = a * x[i];
}

double DotAvx512(size_t n, const double* x, const double* y) {
  __m512d acc = _mm512_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc = _mm512_fmadd_pd(_mm512_loadu_pd(x + i), _mm512_loadu_pd(y + i), acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i] * y[i];
  return _mm512_reduce_add_pd(acc) + tail;
}

double SumsqAvx512(size_t n, const double* x) {
  __m512d acc = _mm512_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m512d v = _mm512_loadu_pd(x + i);
    acc = _mm512_fmadd_pd(v, v, acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i] * x[i];
  return _mm512_reduce_add_pd(acc) + tail;
}

void ApplyMat4Avx512(size_t n, const double* m, const double* const* in,
                     double* const* out) {
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m512d a = _mm512_loadu_pd(in[0] + i);
    const __m512d b = _mm512_loadu_pd(in[1] + i);
    const __m512d c = _mm512_loadu_pd(in[2] + i);
    const __m512d d = _mm512_loadu_pd(in[3] + i);
    for (int r = 0; r < 4; ++r) {
      __m512d acc = _mm512_mul_pd(_mm512_set1_pd(m[r * 4 + 0]), a);
      acc = _mm512_fmadd_pd(_mm512_set1_pd(m[r * 4 + 1]), b, acc);
      acc = _mm512_fmadd_pd(_mm512_set1_pd(m[r * 4 + 2]), c, acc);
      acc = _mm512_fmadd_pd(_mm512_set1_pd(m[r * 4 + 3]), d, acc);
      _mm512_storeu_pd(out[r] + i, acc);
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

void CmulAvx512(size_t n, const std::complex<double>* a,
                const std::complex<double>* b, std::complex<double>* out) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  size_t i = 0;
  // Four complex values per 512-bit vector.
  for (; i + 4 <= n; i += 4) {
    const __m512d va = _mm512_loadu_pd(pa + 2 * i);
    const __m512d vb = _mm512_loadu_pd(pb + 2 * i);
    const __m512d br = _mm512_movedup_pd(vb);
    const __m512d bi = _mm512_permute_pd(vb, 0xFF);
    const __m512d a_swap = _mm512_permute_pd(va, 0x55);
    const __m512d t = _mm512_mul_pd(a_swap, bi);
    // even lanes: va*br - t (real), odd lanes: va*br + t (imag)
    _mm512_storeu_pd(po + 2 * i, _mm512_fmaddsub_pd(va, br, t));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br - ai * bi, ar * bi + ai * br};
  }
}

// Two independent rotor chains (16 bins per outer iteration). Lane anchors
// and the block step come from two sin/cos calls via complex products;
// callers sweep the spectrum in cache-sized chunks so the drift stays at
// the few-ulp level.
void PathAccumAvx512(const PathAccum& p) {
  const size_t n16 = p.n & ~size_t{15};
  __m512d g[4];
  for (int c = 0; c < 4; ++c) g[c] = _mm512_set1_pd(p.amp * p.sh[c]);

  alignas(64) double cs[16], ss[16];
  const double cd = std::cos(p.dphase);
  const double sd = std::sin(p.dphase);
  cs[0] = std::cos(p.phase0);
  ss[0] = std::sin(p.phase0);
  for (int j = 1; j < 16; ++j) {
    cs[j] = cs[j - 1] * cd - ss[j - 1] * sd;
    ss[j] = cs[j - 1] * sd + ss[j - 1] * cd;
  }
  double bc = cd, bs = sd;
  for (int sq = 0; sq < 4; ++sq) {
    const double c2 = bc * bc - bs * bs;
    bs = 2.0 * bc * bs;
    bc = c2;
  }
  const __m512d step_c = _mm512_set1_pd(bc);
  const __m512d step_s = _mm512_set1_pd(bs);

  __m512d cr[2], sr[2];
  for (int b = 0; b < 2; ++b) {
    cr[b] = _mm512_load_pd(cs + 8 * b);
    sr[b] = _mm512_load_pd(ss + 8 * b);
  }

  for (size_t k = 0; k < n16; k += 16) {
    for (int b = 0; b < 2; ++b) {
      const size_t kb = k + 8 * static_cast<size_t>(b);
      __m512d re = cr[b], im = sr[b];
      for (int f = 0; f < p.num_filters; ++f) {
        const __m512d fr = _mm512_loadu_pd(p.filt_re[f] + kb);
        const __m512d fi = _mm512_loadu_pd(p.filt_im[f] + kb);
        const __m512d t = _mm512_fmsub_pd(re, fr, _mm512_mul_pd(im, fi));
        im = _mm512_fmadd_pd(re, fi, _mm512_mul_pd(im, fr));
        re = t;
      }
      for (int c = 0; c < 4; ++c) {
        _mm512_storeu_pd(
            p.out_re[c] + kb,
            _mm512_fmadd_pd(g[c], re, _mm512_loadu_pd(p.out_re[c] + kb)));
        _mm512_storeu_pd(
            p.out_im[c] + kb,
            _mm512_fmadd_pd(g[c], im, _mm512_loadu_pd(p.out_im[c] + kb)));
      }
      const __m512d t =
          _mm512_fmsub_pd(cr[b], step_c, _mm512_mul_pd(sr[b], step_s));
      sr[b] = _mm512_fmadd_pd(cr[b], step_s, _mm512_mul_pd(sr[b], step_c));
      cr[b] = t;
    }
  }

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

const Ops kAvx512Ops = {
    "avx512",      AxpyAvx512, ScaleAvx512,     DotAvx512,
    SumsqAvx512, ApplyMat4Avx512, CmulAvx512, PathAccumAvx512,
};

bool CpuHasAvx512() {
  return __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("avx512dq");
}

}  // namespace

const Ops* Avx512() {
  static const Ops* ops = CpuHasAvx512() ? &kAvx512Ops : nullptr;
  return ops;
}

}  // namespace foa::kernels

#endif  // FOA_HAVE_AVX512
