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

#include "foa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "foa/error.hpp"
#include "foa/fft.hpp"
#include "foa/kernels.hpp"

namespace foa {

namespace {

// Reflect padding without edge duplication; indices bounce off both ends.
size_t ReflectIndex(long i, size_t n) {
  if (n == 1) return 0;
  const long period = 2 * (static_cast<long>(n) - 1);
  long j = i % period;
  if (j < 0) j += period;
  if (j >= static_cast<long>(n)) j = period - j;
  return static_cast<size_t>(j);
}

std::vector<double> HannPeriodic(size_t n) {
  std::vector<double> w(n);
  for (size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n));
  }
  return w;
}

}  // namespace

Spectrogram Stft(std::span<const double> x, double sample_rate,
                 const StftConfig& cfg) {
  if (cfg.fft_size == 0 || (cfg.fft_size & (cfg.fft_size - 1)) != 0) {
    throw ConfigError("Stft: fft_size must be a power of two");
  }
  if (cfg.hop == 0) throw ConfigError("Stft: hop must be positive");
  if (x.empty()) throw DataError("Stft: empty signal");

  const size_t n = cfg.fft_size;
  const size_t pad = n / 2;
  const std::vector<double> window = HannPeriodic(n);

  Spectrogram spec;
  spec.num_frames = x.size() / cfg.hop + 1;
  spec.num_bins = n / 2 + 1;
  spec.sample_rate = sample_rate;
  spec.bins.resize(spec.num_frames * spec.num_bins);

  std::vector<std::complex<double>> frame(n);
  for (size_t m = 0; m < spec.num_frames; ++m) {
    const long start = static_cast<long>(m * cfg.hop) - static_cast<long>(pad);
    for (size_t i = 0; i < n; ++i) {
      const long src = start + static_cast<long>(i);
      const double v = (src >= 0 && src < static_cast<long>(x.size()))
                           ? x[static_cast<size_t>(src)]
                           : x[ReflectIndex(src, x.size())];
      frame[i] = v * window[i];
    }
    fft::Forward(frame);
    for (size_t k = 0; k < spec.num_bins; ++k) spec.at(m, k) = frame[k];
  }
  return spec;
}

std::vector<double> Istft(const Spectrogram& spec, size_t length,
                          const StftConfig& cfg) {
  if (spec.num_bins != cfg.fft_size / 2 + 1) {
    throw ConfigError("Istft: spectrogram bins do not match fft_size");
  }
  const size_t n = cfg.fft_size;
  const size_t pad = n / 2;
  const std::vector<double> window = HannPeriodic(n);

  const size_t padded_len = pad + length + pad + n;
  std::vector<double> acc(padded_len, 0.0);
  std::vector<double> wsum(padded_len, 0.0);

  std::vector<std::complex<double>> bins(spec.num_bins);
  for (size_t m = 0; m < spec.num_frames; ++m) {
    for (size_t k = 0; k < spec.num_bins; ++k) bins[k] = spec.at(m, k);
    const std::vector<double> frame = fft::RealInverse(bins, n);
    const size_t start = m * cfg.hop;
    for (size_t i = 0; i < n && start + i < padded_len; ++i) {
      acc[start + i] += frame[i] * window[i];
      wsum[start + i] += window[i] * window[i];
    }
  }

  std::vector<double> out(length, 0.0);
  for (size_t i = 0; i < length; ++i) {
    const double w = wsum[pad + i];
    out[i] = w > 1e-12 ? acc[pad + i] / w : 0.0;
  }
  return out;
}

double StftL1Loss(const FoaSignal& y, const FoaSignal& y_hat,
                  const StftConfig& cfg) {
  if (y.frames() != y_hat.frames()) {
    throw DataError("StftL1Loss: signal length mismatch");
  }
  double total = 0.0;
  for (int c = 0; c < kNumFoaChannels; ++c) {
    const Spectrogram a = Stft(y.channel(c), y.sample_rate(), cfg);
    const Spectrogram b = Stft(y_hat.channel(c), y_hat.sample_rate(), cfg);
    for (size_t i = 0; i < a.bins.size(); ++i) {
      total += std::abs(a.bins[i] - b.bins[i]);
    }
  }
  return total / kNumFoaChannels;
}

double SiSdrDb(std::span<const double> est, std::span<const double> ref) {
  if (est.size() != ref.size()) throw DataError("SiSdr: length mismatch");
  if (est.empty()) throw DataError("SiSdr: empty signals");
  const auto& ops = kernels::Active();
  const double ref_energy = ops.sumsq(ref.size(), ref.data());
  if (ref_energy <= 0.0) throw DataError("SiSdr: zero-energy reference");
  const double est_energy = ops.sumsq(est.size(), est.data());
  if (est_energy <= 0.0) return -kSiSdrClampDb;

  const double alpha = ops.dot(est.size(), est.data(), ref.data()) / ref_energy;
  const double target_energy = alpha * alpha * ref_energy;
  // ||e||^2 = ||est||^2 - 2a<est,ref> + a^2||ref||^2 = ||est||^2 - a^2||ref||^2
  const double err_energy = est_energy - target_energy;
  if (target_energy <= 0.0) return -kSiSdrClampDb;
  if (err_energy <= 0.0) return kSiSdrClampDb;
  const double db = 10.0 * std::log10(target_energy / err_energy);
  return std::clamp(db, -kSiSdrClampDb, kSiSdrClampDb);
}

PairScore ScorePair(const FoaSignal& mixture, const FoaSignal& target,
                    const Direction& target_dir,
                    std::span<const SecondaryInfo> secondaries,
                    const FoaSignal& est) {
  if (est.frames() != target.frames() || mixture.frames() != target.frames()) {
    throw DataError("ScorePair: signal length mismatch");
  }
  const auto& ops = kernels::Active();

  PairScore score;
  score.channels_used = 0;
  double sum_mix = 0.0, sum_est = 0.0;
  for (int c = 0; c < kNumFoaChannels; ++c) {
    const auto& ref = target.channel(c);
    if (ops.sumsq(ref.size(), ref.data()) <= 0.0) continue;  // silent channel
    sum_mix += SiSdrDb(mixture.channel(c), ref);
    sum_est += SiSdrDb(est.channel(c), ref);
    score.channels_used++;
  }
  if (score.channels_used == 0) {
    throw DataError("ScorePair: target has no energy in any channel");
  }
  score.si_sdr_mix_db = sum_mix / score.channels_used;
  score.si_sdr_est_db = sum_est / score.channels_used;
  score.si_sdri_db = score.si_sdr_est_db - score.si_sdr_mix_db;

  const double close_rad = kCloseSecondaryDeg * std::numbers::pi / 180.0;
  for (const SecondaryInfo& s : secondaries) {
    if (s.silenced) continue;
    if (GreatCircleDistance(s.direction, target_dir) <= close_rad + 1e-12) {
      score.close_secondary = true;
      break;
    }
  }
  return score;
}

ScoreAggregate Aggregate(std::span<const PairScore> scores) {
  if (scores.empty()) throw DataError("Aggregate: no scores");
  ScoreAggregate agg;
  double sum_all = 0.0, sum_close = 0.0, sum_far = 0.0;
  size_t n_close = 0, n_far = 0;
  for (const PairScore& s : scores) {
    sum_all += s.si_sdri_db;
    if (s.close_secondary) {
      sum_close += s.si_sdri_db;
      n_close++;
    } else {
      sum_far += s.si_sdri_db;
      n_far++;
    }
  }
  agg.all = {scores.size(), sum_all / static_cast<double>(scores.size())};
  if (n_close > 0) {
    agg.close = BucketStats{n_close, sum_close / static_cast<double>(n_close)};
  }
  if (n_far > 0) {
    agg.no_close = BucketStats{n_far, sum_far / static_cast<double>(n_far)};
  }
  return agg;
}

std::string EvalReport::ToTable() const {
  std::ostringstream os;
  auto cell = [](const std::optional<BucketStats>& b) {
    if (!b.has_value()) return std::string("     --        ");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%7.2f (%5zu)", b->mean_si_sdri_db, b->count);
    return std::string(buf);
  };
  os << "Algorithm                        |  SI-SDRi [dB] all | only close secondary |  no close secondary\n";
  os << "---------------------------------+-------------------+----------------------+--------------------\n";
  for (const EvalRow& row : rows) {
    char head[64];
    std::snprintf(head, sizeof(head), "%-33s", row.algorithm.c_str());
    os << head << "|   " << cell(std::optional<BucketStats>(row.scores.all))
       << " |      " << cell(row.scores.close) << " |     " << cell(row.scores.no_close)
       << "\n";
  }
  os << "pairs scored: " << pairs_scored << ", skipped: " << pairs_skipped << "\n";
  return os.str();
}

}  // namespace foa
