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

#ifndef FOA_METRICS_HPP_
#define FOA_METRICS_HPP_

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "foa/sh.hpp"
#include "foa/signal.hpp"

namespace foa {

// Secondary sources within this great-circle angle of the target define the
// close-secondary evaluation bucket.
inline constexpr double kCloseSecondaryDeg = 15.0;

// SI-SDR values are clamped to this magnitude so perfect and degenerate
// estimates stay finite.
inline constexpr double kSiSdrClampDb = 100.0;

struct StftConfig {
  size_t fft_size = 1024;  // Hann window of the same length
  size_t hop = 256;
};

// Complex magnitude spectrogram data, frames-major.
struct Spectrogram {
  size_t num_frames = 0;
  size_t num_bins = 0;  // fft_size / 2 + 1
  double sample_rate = 0.0;
  std::vector<std::complex<double>> bins;  // [frame * num_bins + bin]

  std::complex<double>& at(size_t frame, size_t bin) {
    return bins[frame * num_bins + bin];
  }
  const std::complex<double>& at(size_t frame, size_t bin) const {
    return bins[frame * num_bins + bin];
  }
};

// STFT with periodic-Hann analysis window and reflect-padded centering;
// num_frames = floor(T / hop) + 1.
Spectrogram Stft(std::span<const double> x, double sample_rate,
                 const StftConfig& cfg = {});

// Weighted overlap-add inverse with the analysis window, cropped to
// `length` output samples.
std::vector<double> Istft(const Spectrogram& spec, size_t length,
                          const StftConfig& cfg = {});

// Mean over the four channels of the entrywise L1 distance between the
// complex STFTs of the two signals. Throws DataError on length mismatch.
double StftL1Loss(const FoaSignal& y, const FoaSignal& y_hat,
                  const StftConfig& cfg = {});

// Scale-invariant SDR in dB, clamped to +-kSiSdrClampDb. A zero-energy
// reference throws DataError; a zero-energy estimate returns the negative
// clamp. No mean removal is applied.
double SiSdrDb(std::span<const double> est, std::span<const double> ref);

// Minimal view of the pair metadata the scorer needs.
struct SecondaryInfo {
  Direction direction;
  bool silenced = false;
};

struct PairScore {
  double si_sdr_mix_db = 0.0;
  double si_sdr_est_db = 0.0;
  double si_sdri_db = 0.0;
  bool close_secondary = false;
  // Channels with an all-zero target are excluded from the average.
  int channels_used = 4;
};

// Per-channel SI-SDR improvement of the estimate over the mixture against
// the target, averaged across channels; the close-secondary flag is
// recomputed from the directions (non-silenced secondaries only).
PairScore ScorePair(const FoaSignal& mixture, const FoaSignal& target,
                    const Direction& target_dir,
                    std::span<const SecondaryInfo> secondaries,
                    const FoaSignal& est);

struct BucketStats {
  size_t count = 0;
  double mean_si_sdri_db = 0.0;
};

// Mean SI-SDRi per bucket. Empty buckets are reported absent.
struct ScoreAggregate {
  BucketStats all;
  std::optional<BucketStats> close;
  std::optional<BucketStats> no_close;
};

// Aggregates pair scores into the all / only-close-secondary /
// no-close-secondary buckets. Throws DataError on empty input.
ScoreAggregate Aggregate(std::span<const PairScore> scores);

// One evaluated algorithm with its bucketed scores.
struct EvalRow {
  std::string algorithm;
  ScoreAggregate scores;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  size_t pairs_scored = 0;
  size_t pairs_skipped = 0;

  std::string ToTable() const;
};

}  // namespace foa

#endif  // FOA_METRICS_HPP_
