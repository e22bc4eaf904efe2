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

#include "foa/kernels.hpp"

#include <atomic>
#include <cmath>

#include "foa/error.hpp"

namespace foa::kernels {

namespace {

void AxpyScalar(size_t n, double a, const double* x, double* y) {
  for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void ScaleScalar(size_t n, double a, const double* x, double* y) {
  for (size_t i = 0; i < n; ++i) y[i] = a * x[i];
}

double DotScalar(size_t n, const double* x, const double* y) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double SumsqScalar(size_t n, const double* x) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void ApplyMat4Scalar(size_t n, const double* m, const double* const* in,
                     double* const* out) {
  for (size_t i = 0; i < n; ++i) {
    const double a = in[0][i], b = in[1][i], c = in[2][i], d = in[3][i];
    out[0][i] = m[0] * a + m[1] * b + m[2] * c + m[3] * d;
    out[1][i] = m[4] * a + m[5] * b + m[6] * c + m[7] * d;
    out[2][i] = m[8] * a + m[9] * b + m[10] * c + m[11] * d;
    out[3][i] = m[12] * a + m[13] * b + m[14] * c + m[15] * d;
  }
}

void CmulScalar(size_t n, const std::complex<double>* a,
                const std::complex<double>* b, std::complex<double>* out) {
  for (size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br - ai * bi, ar * bi + ai * br};
  }
}

// The phase rotor steps by complex multiplication along four independent
// chains, which hides the recurrence latency. Only two sin/cos calls are
// made per invocation; lane anchors and the block step derive from them by
// complex products. Callers sweep the spectrum in cache-sized chunks, so
// the multiplicative drift stays at the few-ulp level.

void PathAccumScalar(const PathAccum& p) {
  const size_t n4 = p.n & ~size_t{3};
  const double g[4] = {p.amp * p.sh[0], p.amp * p.sh[1], p.amp * p.sh[2],
                       p.amp * p.sh[3]};

  const double cd = std::cos(p.dphase);
  const double sd = std::sin(p.dphase);
  double cr[4], sr[4];
  cr[0] = std::cos(p.phase0);
  sr[0] = std::sin(p.phase0);
  for (int j = 1; j < 4; ++j) {
    cr[j] = cr[j - 1] * cd - sr[j - 1] * sd;
    sr[j] = cr[j - 1] * sd + sr[j - 1] * cd;
  }
  // Block step: (cd, sd)^4 by two squarings.
  double step_c = cd * cd - sd * sd, step_s = 2.0 * cd * sd;
  {
    const double c2 = step_c * step_c - step_s * step_s;
    step_s = 2.0 * step_c * step_s;
    step_c = c2;
  }

  for (size_t k = 0; k < n4; k += 4) {
    for (int j = 0; j < 4; ++j) {
      const size_t kj = k + static_cast<size_t>(j);
      double re = cr[j], im = sr[j];
      for (int f = 0; f < p.num_filters; ++f) {
        const double fr = p.filt_re[f][kj];
        const double fi = p.filt_im[f][kj];
        const double t = re * fr - im * fi;
        im = re * fi + im * fr;
        re = t;
      }
      for (int c = 0; c < 4; ++c) {
        p.out_re[c][kj] += g[c] * re;
        p.out_im[c][kj] += g[c] * im;
      }
      const double t = cr[j] * step_c - sr[j] * step_s;
      sr[j] = cr[j] * step_s + sr[j] * step_c;
      cr[j] = t;
    }
  }
  for (size_t k = n4; k < p.n; ++k) {
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
      p.out_re[c][k] += g[c] * re;
      p.out_im[c][k] += g[c] * im;
    }
  }
}

const Ops kScalarOps = {
    "scalar",    AxpyScalar, ScaleScalar,     DotScalar,
    SumsqScalar, ApplyMat4Scalar, CmulScalar, PathAccumScalar,
};

std::atomic<const Ops*> g_active{nullptr};

const Ops* Detect() {
  if (const Ops* avx512 = Avx512()) return avx512;
  if (const Ops* avx2 = Avx2()) return avx2;
  return &kScalarOps;
}

}  // namespace

const Ops& Scalar() { return kScalarOps; }

#if !defined(FOA_HAVE_AVX2)
const Ops* Avx2() { return nullptr; }
#endif

#if !defined(FOA_HAVE_AVX512)
const Ops* Avx512() { return nullptr; }
#endif

const Ops& Active() {
  const Ops* ops = g_active.load(std::memory_order_acquire);
  if (ops == nullptr) {
    ops = Detect();
    g_active.store(ops, std::memory_order_release);
  }
  return *ops;
}

Backend ActiveBackend() {
  const Ops* active = &Active();
  if (active == Avx512()) return Backend::kAvx512;
  if (active == Avx2()) return Backend::kAvx2;
  return Backend::kScalar;
}

void SetBackend(Backend b) {
  switch (b) {
    case Backend::kAuto:
      g_active.store(Detect(), std::memory_order_release);
      break;
    case Backend::kScalar:
      g_active.store(&kScalarOps, std::memory_order_release);
      break;
    case Backend::kAvx2: {
      const Ops* avx2 = Avx2();
      if (avx2 == nullptr) {
        throw ConfigError("AVX2 kernel backend is not available on this CPU");
      }
      g_active.store(avx2, std::memory_order_release);
      break;
    }
    case Backend::kAvx512: {
      const Ops* avx512 = Avx512();
      if (avx512 == nullptr) {
        throw ConfigError("AVX-512 kernel backend is not available on this CPU");
      }
      g_active.store(avx512, std::memory_order_release);
      break;
    }
  }
}

}  // namespace foa::kernels
