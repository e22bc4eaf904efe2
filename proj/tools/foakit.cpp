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

// Command-line front end: RIR bank generation, mixture dataset synthesis,
// target extraction and SI-SDRi evaluation.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "foa/error.hpp"
#include "foa/kernels.hpp"
#include "foa/parallel.hpp"
#include "foa/pipeline.hpp"
#include "foa/wav.hpp"

namespace {

using namespace foa;

void ApplyKernelFlag(const std::string& kernel) {
  if (kernel == "auto") {
    kernels::SetBackend(kernels::Backend::kAuto);
  } else if (kernel == "scalar") {
    kernels::SetBackend(kernels::Backend::kScalar);
  } else if (kernel == "avx2") {
    kernels::SetBackend(kernels::Backend::kAvx2);
  } else if (kernel == "avx512") {
    kernels::SetBackend(kernels::Backend::kAvx512);
  } else {
    throw ConfigError("unknown kernel backend: " + kernel);
  }
}

int Run(int argc, char** argv) {
  CLI::App app{"First-order ambisonic sound-field toolkit"};
  app.require_subcommand(1);

  std::string kernel = "auto";
  app.add_option("--kernel", kernel, "Kernel backend: auto, scalar, avx2, avx512")
      ->capture_default_str();

  // gen-rirs
  auto* gen_rirs = app.add_subcommand(
      "gen-rirs", "Simulate a bank of ambisonic room impulse responses");
  RirGenConfig rir_cfg;
  gen_rirs->add_option("--out", rir_cfg.out_dir, "Output directory")->required();
  gen_rirs->add_option("--count", rir_cfg.count, "Number of RIRs")->required();
  gen_rirs->add_option("--seed", rir_cfg.seed, "Random seed")
      ->capture_default_str();
  gen_rirs->add_option("--fs", rir_cfg.sim.fs, "Sample rate in Hz")
      ->capture_default_str();
  gen_rirs->add_option("--max-order", rir_cfg.sim.max_order,
                       "Maximum reflection order")
      ->capture_default_str();
  gen_rirs->add_option("--jitter", rir_cfg.sim.jitter_m,
                       "Image-source jitter in meters per reflection order")
      ->capture_default_str();
  gen_rirs->add_option("--rir-seconds", rir_cfg.sim.rir_seconds,
                       "RIR length in seconds")
      ->capture_default_str();
  gen_rirs->add_option("--sources-per-scene", rir_cfg.sources_per_scene,
                       "Sources sharing each sampled room")
      ->capture_default_str();
  gen_rirs->add_option("--threads", rir_cfg.threads, "Worker threads (0 = all)")
      ->capture_default_str();

  // gen-mixtures
  auto* gen_mix = app.add_subcommand(
      "gen-mixtures", "Render a (mixture, target, metadata) pair dataset");
  MixGenConfig mix_cfg;
  gen_mix->add_option("--rirs", mix_cfg.rir_dir, "RIR bank directory")->required();
  gen_mix->add_option("--clips", mix_cfg.clips_dir, "Mono clip directory")
      ->required();
  gen_mix->add_option("--out", mix_cfg.out_dir, "Output directory")->required();
  gen_mix->add_option("--count", mix_cfg.count, "Number of pairs")->required();
  gen_mix->add_option("--seed", mix_cfg.seed, "Random seed")->capture_default_str();
  gen_mix->add_option("--near-prob", mix_cfg.pair.near_prob,
                      "Probability of placing a secondary near the target")
      ->capture_default_str();
  gen_mix->add_option("--silence-prob", mix_cfg.pair.silence_prob,
                      "Probability of silencing each secondary")
      ->capture_default_str();
  gen_mix->add_option("--gain-range-db", mix_cfg.pair.gain_range_db,
                      "Per-source gain range (uniform in +-range)")
      ->capture_default_str();
  gen_mix->add_option("--threads", mix_cfg.threads, "Worker threads (0 = all)")
      ->capture_default_str();

  // extract
  auto* extract = app.add_subcommand(
      "extract", "Run a target extractor over a 4-channel FOA wav");
  std::string algo_name = "loudness";
  std::string in_path, out_path;
  double az_deg = 0.0, el_deg = 0.0;
  ExtractorConfig ex_cfg;
  extract->add_option("--algo", algo_name,
                      "identity, loudness, max-di or max-re")
      ->capture_default_str();
  extract->add_option("--in", in_path, "Input 4-channel wav")->required();
  extract->add_option("--out", out_path, "Output wav")->required();
  extract->add_option("--az", az_deg, "Target azimuth in degrees")->required();
  extract->add_option("--el", el_deg, "Target elevation in degrees")->required();
  extract->add_option("--spread-deg", ex_cfg.cap_spread_deg,
                      "Loudness cap spread (full width, degrees)")
      ->capture_default_str();
  extract->add_option("--out-gain", ex_cfg.out_gain,
                      "Loudness gain outside the cap")
      ->capture_default_str();
  extract->add_option("--grid-size", ex_cfg.grid_size,
                      "Loudness transform grid size")
      ->capture_default_str();

  // evaluate
  auto* evaluate = app.add_subcommand(
      "evaluate", "Score extractors on a pair dataset (SI-SDRi buckets)");
  EvalConfig eval_cfg;
  std::string algos_csv = "identity,loudness,max-di,max-re";
  std::string json_path, table_path;
  evaluate->add_option("--pairs", eval_cfg.pairs_dir, "Dataset directory")
      ->required();
  evaluate->add_option("--algos", algos_csv, "Comma-separated algorithm list")
      ->capture_default_str();
  evaluate->add_option("--json", json_path, "Write the report as JSON here");
  evaluate->add_option("--table", table_path, "Write the text table here");
  evaluate->add_option("--spread-deg", eval_cfg.loudness_spread_deg,
                       "Loudness cap spread (full width, degrees)")
      ->capture_default_str();
  evaluate->add_option("--grid-size", eval_cfg.loudness_grid_size,
                       "Loudness transform grid size")
      ->capture_default_str();
  evaluate->add_option("--threads", eval_cfg.threads, "Worker threads (0 = all)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // Help/version exit cleanly; anything else is a configuration error.
    return code == 0 ? 0 : static_cast<int>(ExitCode::kConfig);
  }

  ApplyKernelFlag(kernel);

  if (gen_rirs->parsed()) {
    const RirBank bank = GenRirs(rir_cfg);
    std::printf("wrote %zu RIRs (%zu scenes) to %s\n", bank.entries().size(),
                bank.num_scenes(), rir_cfg.out_dir.string().c_str());
    return 0;
  }

  if (gen_mix->parsed()) {
    const DatasetStats stats = GenMixtures(mix_cfg);
    std::printf(
        "wrote %zu pairs to %s (close-secondary: %zu, fraction %.3f; "
        "near-placed: %zu)\n",
        stats.pairs, mix_cfg.out_dir.string().c_str(),
        stats.close_secondary_pairs, stats.CloseFraction(),
        stats.near_placed_pairs);
    return 0;
  }

  if (extract->parsed()) {
    const auto algo = AlgoFromName(algo_name);
    if (!algo.has_value()) {
      std::fprintf(stderr, "unknown algorithm '%s'; expected one of",
                   algo_name.c_str());
      for (ExtractorAlgo a : AllAlgos()) std::fprintf(stderr, " %s", AlgoName(a));
      std::fprintf(stderr, "\n%s", extract->help().c_str());
      return static_cast<int>(ExitCode::kConfig);
    }
    ex_cfg.algorithm = *algo;
    ex_cfg.target_dir = Direction::FromDegrees(az_deg, el_deg);
    const FoaSignal input = ReadFoaWav(in_path);
    const FoaSignal output = RunExtractor(ex_cfg, input);
    WriteFoaWav(out_path, output);
    std::printf("wrote %s (%zu samples, algo %s)\n", out_path.c_str(),
                output.frames(), AlgoName(*algo));
    return 0;
  }

  if (evaluate->parsed()) {
    eval_cfg.algos.clear();
    std::stringstream ss(algos_csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
      if (token.empty()) continue;
      const auto algo = AlgoFromName(token);
      if (!algo.has_value()) {
        std::fprintf(stderr, "unknown algorithm '%s'\n", token.c_str());
        return static_cast<int>(ExitCode::kConfig);
      }
      eval_cfg.algos.push_back(*algo);
    }
    if (eval_cfg.algos.empty()) {
      std::fprintf(stderr, "no algorithms selected\n");
      return static_cast<int>(ExitCode::kConfig);
    }
    const EvalReport report = EvaluateDataset(eval_cfg);
    const std::string table = report.ToTable();
    std::fputs(table.c_str(), stdout);
    if (!json_path.empty()) WriteReportJson(json_path, report);
    if (!table_path.empty()) {
      std::ofstream out(table_path, std::ios::trunc);
      if (!out) throw IoError("cannot write: " + table_path);
      out << table;
    }
    return 0;
  }

  return static_cast<int>(ExitCode::kConfig);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return static_cast<int>(ExitCode::kConfig);
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return static_cast<int>(ExitCode::kIo);
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return static_cast<int>(ExitCode::kData);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(ExitCode::kFailure);
  }
}
