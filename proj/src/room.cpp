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

#include "foa/room.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>

#include "foa/error.hpp"
#include "foa/fft.hpp"
#include "foa/kernels.hpp"

namespace foa {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double Dist(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace

bool Material::IsIdentity() const {
  if (fir.empty() || fir[0] != 1.0) return false;
  for (size_t i = 1; i < fir.size(); ++i) {
    if (fir[i] != 0.0) return false;
  }
  return true;
}

int Material::GroupDelaySamples() const {
  if (IsIdentity()) return 0;
  return static_cast<int>((fir.size() - 1) / 2);
}

std::vector<std::complex<double>> Material::Response(
    std::span<const double> freqs_hz, double fs) const {
  std::vector<std::complex<double>> out(freqs_hz.size());
  for (size_t i = 0; i < freqs_hz.size(); ++i) {
    const double w = kTwoPi * freqs_hz[i] / fs;
    std::complex<double> acc = 0.0;
    for (size_t k = 0; k < fir.size(); ++k) {
      const double ph = -w * static_cast<double>(k);
      acc += fir[k] * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    out[i] = acc;
  }
  return out;
}

Material Material::FromOctaveAbsorption(const std::string& name,
                                        const std::array<double, 6>& absorption,
                                        int taps, double fs) {
  if (taps < 8 || taps > 64) {
    throw ConfigError("material FIR length must be in [8, 64] taps");
  }
  static const std::array<double, 6> kBands = {125, 250, 500, 1000, 2000, 4000};

  // Target reflection magnitude, interpolated linearly in log-frequency and
  // held flat outside the tabulated bands.
  auto target = [&](double f) {
    std::array<double, 6> mag;
    for (int b = 0; b < 6; ++b) {
      mag[b] = std::sqrt(std::max(0.0, 1.0 - absorption[b]));
    }
    if (f <= kBands.front()) return mag.front();
    if (f >= kBands.back()) return mag.back();
    for (int b = 0; b < 5; ++b) {
      if (f <= kBands[b + 1]) {
        const double t = (std::log(f) - std::log(kBands[b])) /
                         (std::log(kBands[b + 1]) - std::log(kBands[b]));
        return mag[b] + t * (mag[b + 1] - mag[b]);
      }
    }
    return mag.back();
  };

  // Frequency sampling on a small grid, zero-phase inverse transform,
  // Hann-windowed truncation to a symmetric (linear phase) FIR.
  const size_t design_n = 256;
  std::vector<std::complex<double>> spec(design_n / 2 + 1);
  for (size_t k = 0; k < spec.size(); ++k) {
    const double f = static_cast<double>(k) * fs / static_cast<double>(design_n);
    spec[k] = target(f);
  }
  std::vector<double> ir = fft::RealInverse(spec, design_n);

  Material m;
  m.name = name;
  m.fir.assign(taps, 0.0);
  const int half = (taps - 1) / 2;
  for (int i = 0; i < taps; ++i) {
    const int lag = i - half;  // symmetric around the center tap
    const double src = ir[(lag + design_n) % design_n];
    const double w =
        0.5 - 0.5 * std::cos(kTwoPi * (i + 1) / static_cast<double>(taps + 1));
    m.fir[i] = src * w;
  }

  // Enforce passivity: |H| <= 1 on a dense grid.
  std::vector<double> dense(512);
  for (size_t i = 0; i < dense.size(); ++i) {
    dense[i] = static_cast<double>(i) * (fs / 2.0) / (dense.size() - 1);
  }
  double peak = 0.0;
  for (const auto& h : m.Response(dense, fs)) peak = std::max(peak, std::abs(h));
  if (peak > 1.0) {
    for (double& t : m.fir) t /= peak * (1.0 + 1e-12);
  }
  return m;
}

const MaterialBank& MaterialBank::Presets() {
  static const MaterialBank bank = [] {
    MaterialBank b;
    Material rigid;
    rigid.name = "rigid";
    rigid.fir.assign(8, 0.0);
    rigid.fir[0] = 1.0;
    b.Add(rigid);
    b.Add(Material::FromOctaveAbsorption(
        "concrete", {0.01, 0.01, 0.02, 0.02, 0.02, 0.03}));
    b.Add(Material::FromOctaveAbsorption(
        "plaster", {0.14, 0.10, 0.06, 0.05, 0.04, 0.03}));
    b.Add(Material::FromOctaveAbsorption(
        "glass", {0.35, 0.25, 0.18, 0.12, 0.07, 0.04}));
    b.Add(Material::FromOctaveAbsorption(
        "carpet", {0.02, 0.06, 0.14, 0.37, 0.60, 0.65}));
    b.Add(Material::FromOctaveAbsorption(
        "curtain", {0.07, 0.31, 0.49, 0.75, 0.70, 0.60}));
    return b;
  }();
  return bank;
}

const Material& MaterialBank::Get(const std::string& name) const {
  for (const auto& m : materials_) {
    if (m.name == name) return m;
  }
  throw ConfigError("unknown material: " + name);
}

bool MaterialBank::Has(const std::string& name) const {
  for (const auto& m : materials_) {
    if (m.name == name) return true;
  }
  return false;
}

std::vector<std::string> MaterialBank::Names() const {
  std::vector<std::string> out;
  out.reserve(materials_.size());
  for (const auto& m : materials_) out.push_back(m.name);
  return out;
}

void MaterialBank::Add(Material m) { materials_.push_back(std::move(m)); }

namespace {

// Image position along one axis for lattice index m: even indices keep the
// source coordinate, odd indices mirror it, both shifted by m room lengths.
double ImageCoord(int m, double source, double length) {
  const double base = (m % 2 == 0) ? source : length - source;
  return static_cast<double>(m) * length + base;
}

// Reflections along one axis alternate between the two opposing surfaces;
// |m| is the total count, split depending on the unfolding direction.
void AxisWallCounts(int m, int* lo_count, int* hi_count) {
  const int n = std::abs(m);
  if (m >= 0) {
    *hi_count = (n + 1) / 2;
    *lo_count = n / 2;
  } else {
    *lo_count = (n + 1) / 2;
    *hi_count = n / 2;
  }
}

constexpr std::array<std::array<uint8_t, 2>, 3> kAxisSurfaces = {{
    {kWallX0, kWallX1},
    {kWallY0, kWallY1},
    {kFloor, kCeiling},
}};

uint64_t PackLatticeIndex(int mx, int my, int mz) {
  const uint64_t bias = 1u << 20;
  return ((static_cast<uint64_t>(mx) + bias) << 42) |
         ((static_cast<uint64_t>(my) + bias) << 21) |
         (static_cast<uint64_t>(mz) + bias);
}

}  // namespace

std::vector<ImagePath> EnumerateImageSources(const Room& room, const Vec3& src,
                                             const Vec3& recv, int max_order,
                                             double jitter_m, Rng& rng) {
  if (max_order < 0) throw ConfigError("max_order must be >= 0");
  for (int a = 0; a < 3; ++a) {
    if (!(room.dims[a] > 0.0)) throw ConfigError("room dimensions must be positive");
  }
  if (Dist(src, recv) < 1e-9) {
    throw DataError("image source enumeration: source coincides with receiver");
  }

  std::vector<ImagePath> paths;
  for (int mx = -max_order; mx <= max_order; ++mx) {
    const int rem_x = max_order - std::abs(mx);
    for (int my = -rem_x; my <= rem_x; ++my) {
      const int rem_y = rem_x - std::abs(my);
      for (int mz = -rem_y; mz <= rem_y; ++mz) {
        ImagePath p;
        p.order = std::abs(mx) + std::abs(my) + std::abs(mz);
        p.image_pos = {ImageCoord(mx, src[0], room.dims[0]),
                       ImageCoord(my, src[1], room.dims[1]),
                       ImageCoord(mz, src[2], room.dims[2])};

        if (p.order > 0 && jitter_m > 0.0) {
          // Jitter stream derived per lattice index the same way Rng::Fork
          // seeds a child, but without paying an engine construction for
          // each of the ~1e5 paths.
          uint64_t h = SplitMix64(
              rng.seed() ^
              SplitMix64(PackLatticeIndex(mx, my, mz) + 0x632BE59BD9B4E019ULL));
          const double mag = jitter_m * static_cast<double>(p.order);
          for (int a = 0; a < 3; ++a) {
            h = SplitMix64(h);
            const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
            p.image_pos[a] += mag * (2.0 * u - 1.0);
          }
        }

        const int ms[3] = {mx, my, mz};
        for (int a = 0; a < 3; ++a) {
          int lo = 0, hi = 0;
          AxisWallCounts(ms[a], &lo, &hi);
          p.wall_sequence.insert(p.wall_sequence.end(), lo, kAxisSurfaces[a][0]);
          p.wall_sequence.insert(p.wall_sequence.end(), hi, kAxisSurfaces[a][1]);
        }

        const double d = Dist(p.image_pos, recv);
        if (d < 1e-9) {
          throw DataError("image source coincides with receiver after jitter");
        }
        p.delay_s = d / kSpeedOfSound;
        p.gain = 1.0 / std::max(d, kMinAttenuationDistance);
        p.direction = Direction::FromUnitVector({(p.image_pos[0] - recv[0]) / d,
                                                 (p.image_pos[1] - recv[1]) / d,
                                                 (p.image_pos[2] - recv[2]) / d});
        paths.push_back(std::move(p));
      }
    }
  }
  return paths;
}

std::vector<std::complex<double>> PathSpectrum(const ImagePath& path,
                                               std::span<const double> freqs_hz,
                                               const Room& room,
                                               const MaterialBank& bank,
                                               double fs) {
  for (double f : freqs_hz) {
    if (f < 0.0 || f > fs / 2.0 + 1e-9) {
      throw ConfigError("PathSpectrum: frequency outside [0, fs/2]");
    }
  }
  // Hit counts per surface.
  std::array<int, 6> counts{};
  for (uint8_t s : path.wall_sequence) {
    if (s >= 6) throw ConfigError("PathSpectrum: bad surface index");
    counts[s]++;
  }

  std::vector<std::complex<double>> out(freqs_hz.size());
  for (size_t i = 0; i < out.size(); ++i) {
    const double ph = -kTwoPi * freqs_hz[i] * path.delay_s;
    out[i] = path.gain * std::complex<double>(std::cos(ph), std::sin(ph));
  }
  for (int s = 0; s < 6; ++s) {
    if (counts[s] == 0) continue;
    const Material& mat = bank.Get(room.surface_materials[s]);
    if (mat.IsIdentity()) continue;
    const auto resp = mat.Response(freqs_hz, fs);
    for (int rep = 0; rep < counts[s]; ++rep) {
      for (size_t i = 0; i < out.size(); ++i) out[i] *= resp[i];
    }
  }
  return out;
}

namespace {

// Split-storage complex array, the layout the accumulation kernel consumes.
struct ComplexSoA {
  std::vector<double> re, im;
  explicit ComplexSoA(size_t n) : re(n, 0.0), im(n, 0.0) {}
};

// Lazily built per-axis products H_lo^a * H_hi^b over the bin grid.
// Identity materials contribute no factor; a fully rigid axis stays null.
class AxisProductCache {
 public:
  AxisProductCache(const std::complex<double>* lo, const std::complex<double>* hi,
                   size_t n)
      : lo_(lo), hi_(hi), n_(n) {}

  // Returns nullptr when the product is identically one.
  const ComplexSoA* Get(int a, int b) {
    if (lo_ == nullptr) a = 0;
    if (hi_ == nullptr) b = 0;
    if (a == 0 && b == 0) return nullptr;
    const uint32_t key = (static_cast<uint32_t>(a) << 16) | static_cast<uint32_t>(b);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second.get();

    auto prod = std::make_unique<ComplexSoA>(n_);
    const std::complex<double>* factor = nullptr;
    const ComplexSoA* base = nullptr;
    if (a > 0) {
      base = Get(a - 1, b);
      factor = lo_;
    } else {
      base = Get(a, b - 1);
      factor = hi_;
    }
    if (base == nullptr) {
      for (size_t i = 0; i < n_; ++i) {
        prod->re[i] = factor[i].real();
        prod->im[i] = factor[i].imag();
      }
    } else {
      for (size_t i = 0; i < n_; ++i) {
        const double br = base->re[i], bi = base->im[i];
        const double fr = factor[i].real(), fi = factor[i].imag();
        prod->re[i] = br * fr - bi * fi;
        prod->im[i] = br * fi + bi * fr;
      }
    }
    const ComplexSoA* raw = prod.get();
    cache_.emplace(key, std::move(prod));
    return raw;
  }

 private:
  const std::complex<double>* lo_;
  const std::complex<double>* hi_;
  size_t n_;
  std::map<uint32_t, std::unique_ptr<ComplexSoA>> cache_;
};

}  // namespace

AmbisonicRir SimulateRir(const Room& room, const Vec3& src, const Vec3& recv,
                         const SimConfig& cfg, const MaterialBank& bank) {
  if (!(cfg.fs > 0.0)) throw ConfigError("SimulateRir: fs must be positive");
  const size_t rir_len = static_cast<size_t>(std::llround(cfg.rir_seconds * cfg.fs));
  if (rir_len == 0) throw ConfigError("SimulateRir: rir length is zero");

  const size_t nfft = fft::NextPow2(rir_len);
  const size_t nbins = nfft / 2 + 1;

  // Resolve materials once; identity (rigid) surfaces carry no response array.
  std::array<const Material*, 6> mats{};
  std::array<std::vector<std::complex<double>>, 6> resp;
  std::array<int, 6> group_delay{};
  {
    std::vector<double> freqs(nbins);
    for (size_t k = 0; k < nbins; ++k) {
      freqs[k] = static_cast<double>(k) * cfg.fs / static_cast<double>(nfft);
    }
    for (int s = 0; s < 6; ++s) {
      mats[s] = &bank.Get(room.surface_materials[s]);
      group_delay[s] = mats[s]->GroupDelaySamples();
      if (!mats[s]->IsIdentity()) resp[s] = mats[s]->Response(freqs, cfg.fs);
    }
  }

  Rng jitter_rng(cfg.seed);
  const std::vector<ImagePath> paths = EnumerateImageSources(
      room, src, recv, cfg.max_order, cfg.jitter_m, jitter_rng);

  // The direct path must land inside the RIR window.
  {
    const double direct_delay = Dist(src, recv) / kSpeedOfSound;
    const size_t need =
        static_cast<size_t>(std::floor(direct_delay * cfg.fs)) + 1;
    if (need > rir_len) {
      throw ConfigError("SimulateRir: rir length " + std::to_string(rir_len) +
                        " samples does not cover the direct path; need at least " +
                        std::to_string(need));
    }
  }

  std::array<ComplexSoA, 4> acc = {ComplexSoA(nbins), ComplexSoA(nbins),
                                   ComplexSoA(nbins), ComplexSoA(nbins)};

  AxisProductCache axis_x(resp[kWallX0].empty() ? nullptr : resp[kWallX0].data(),
                          resp[kWallX1].empty() ? nullptr : resp[kWallX1].data(),
                          nbins);
  AxisProductCache axis_y(resp[kWallY0].empty() ? nullptr : resp[kWallY0].data(),
                          resp[kWallY1].empty() ? nullptr : resp[kWallY1].data(),
                          nbins);
  AxisProductCache axis_z(resp[kFloor].empty() ? nullptr : resp[kFloor].data(),
                          resp[kCeiling].empty() ? nullptr : resp[kCeiling].data(),
                          nbins);

  // Per-path parameters are resolved once; the accumulation then sweeps the
  // spectrum in bin chunks with paths grouped by filter signature, so the
  // chunk of accumulators and filter products stays cache-resident across
  // the whole path set instead of streaming ~2 MB per path.
  struct PathRecord {
    double dphase;
    double amp;
    std::array<double, 4> sh;
    const ComplexSoA* filt[3];
    int num_filters;
    uint64_t group_key;  // deterministic filter-signature ordering
  };
  std::vector<PathRecord> records;
  records.reserve(paths.size());
  for (const ImagePath& p : paths) {
    std::array<int, 6> counts{};
    int filter_delay = 0;
    for (uint8_t s : p.wall_sequence) {
      counts[s]++;
      filter_delay += group_delay[s];
    }
    // Order and RIR length bound each other: arrivals (including the wall
    // filters' group delay) past the window are dropped.
    const double arrival = p.delay_s * cfg.fs + static_cast<double>(filter_delay);
    if (static_cast<size_t>(std::floor(arrival)) >= rir_len) continue;

    PathRecord rec;
    rec.dphase = -kTwoPi * cfg.fs * p.delay_s / static_cast<double>(nfft);
    rec.amp = p.gain;
    const FoaGains sh = ShEval(p.direction);
    for (int c = 0; c < 4; ++c) rec.sh[static_cast<size_t>(c)] = sh[c];
    rec.filt[0] = axis_x.Get(counts[kWallX0], counts[kWallX1]);
    rec.filt[1] = axis_y.Get(counts[kWallY0], counts[kWallY1]);
    rec.filt[2] = axis_z.Get(counts[kFloor], counts[kCeiling]);
    rec.num_filters = 0;
    for (int a = 0; a < 3; ++a) {
      if (rec.filt[a] != nullptr) rec.filt[rec.num_filters++] = rec.filt[a];
    }
    for (int a = rec.num_filters; a < 3; ++a) rec.filt[a] = nullptr;
    rec.group_key = 0;
    for (const int c : {counts[kWallX0], counts[kWallX1], counts[kWallY0],
                        counts[kWallY1], counts[kFloor], counts[kCeiling]}) {
      rec.group_key = (rec.group_key << 8) | static_cast<uint64_t>(c & 0xFF);
    }
    records.push_back(rec);
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const PathRecord& a, const PathRecord& b) {
                     return a.group_key < b.group_key;
                   });

  const auto& ops = kernels::Active();
  constexpr size_t kChunk = 512;
  for (size_t start = 0; start < nbins; start += kChunk) {
    const size_t len = std::min(kChunk, nbins - start);
    for (const PathRecord& rec : records) {
      kernels::PathAccum pa;
      pa.n = len;
      pa.phase0 = rec.dphase * static_cast<double>(start);
      pa.dphase = rec.dphase;
      pa.amp = rec.amp;
      for (int c = 0; c < 4; ++c) pa.sh[c] = rec.sh[static_cast<size_t>(c)];
      pa.num_filters = rec.num_filters;
      for (int f = 0; f < rec.num_filters; ++f) {
        pa.filt_re[f] = rec.filt[f]->re.data() + start;
        pa.filt_im[f] = rec.filt[f]->im.data() + start;
      }
      for (int c = 0; c < 4; ++c) {
        pa.out_re[c] = acc[c].re.data() + start;
        pa.out_im[c] = acc[c].im.data() + start;
      }
      ops.path_accum(pa);
    }
  }

  AmbisonicRir rir(rir_len, cfg.fs);
  std::vector<std::complex<double>> bins(nbins);
  for (int c = 0; c < 4; ++c) {
    for (size_t k = 0; k < nbins; ++k) bins[k] = {acc[c].re[k], acc[c].im[k]};
    double residue = 0.0;
    const std::vector<double> time = fft::RealInverse(bins, nfft, &residue);
    if (residue > 1e-9) {
      throw DataError("SimulateRir: inverse FFT imaginary residue " +
                      std::to_string(residue));
    }
    std::copy(time.begin(), time.begin() + static_cast<long>(rir_len),
              rir.channel(c).begin());
  }
  return rir;
}

SceneGeometry SampleSceneGeometry(Rng& rng, int n_sources) {
  if (n_sources < 1) throw ConfigError("SampleSceneGeometry: n_sources must be >= 1");

  SceneGeometry scene;
  Rng dims_rng = rng.Fork(0);
  Rng mat_rng = rng.Fork(1);
  Rng recv_rng = rng.Fork(2);

  for (int a = 0; a < 3; ++a) scene.room.dims[a] = dims_rng.Uniform(2.0, 15.0);

  const auto names = MaterialBank::Presets().Names();
  for (int s = 0; s < 6; ++s) {
    scene.room.surface_materials[s] =
        names[static_cast<size_t>(mat_rng.UniformInt(0, static_cast<int64_t>(names.size()) - 1))];
  }

  for (int a = 0; a < 3; ++a) {
    const double l = scene.room.dims[a];
    scene.receiver[a] = 0.5 * l + recv_rng.Uniform(-0.1 * l, 0.1 * l);
  }

  constexpr int kMaxTries = 10000;
  for (int i = 0; i < n_sources; ++i) {
    Rng src_rng = rng.Fork(10 + static_cast<uint64_t>(i));
    bool placed = false;
    for (int t = 0; t < kMaxTries && !placed; ++t) {
      const Direction dir = SampleUniformDirection(src_rng);
      const double dist = src_rng.Uniform(0.6, 5.0);
      const auto u = dir.UnitVector();
      const Vec3 pos = {scene.receiver[0] + dist * u[0],
                        scene.receiver[1] + dist * u[1],
                        scene.receiver[2] + dist * u[2]};
      bool inside = true;
      for (int a = 0; a < 3; ++a) {
        if (!(pos[a] > 0.0 && pos[a] < scene.room.dims[a])) inside = false;
      }
      if (inside) {
        scene.sources.push_back({pos, dist, dir});
        placed = true;
      }
    }
    if (!placed) {
      throw DataError("SampleSceneGeometry: retry cap exhausted placing source " +
                      std::to_string(i));
    }
  }
  return scene;
}

}  // namespace foa
