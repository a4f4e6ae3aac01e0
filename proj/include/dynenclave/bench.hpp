// Copyright 2026 The dynenclave Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DYNENCLAVE_BENCH_HPP_
#define DYNENCLAVE_BENCH_HPP_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "dynenclave/client.hpp"

namespace dynenclave {

enum class BenchMode { kDirect, kChannel, kChannelRa };
enum class Workload { kSumArray, kFibonacci };

std::string_view mode_name(BenchMode m);      // direct, channel, channel+RA
std::string_view workload_name(Workload w);   // sum_array, recursive_fibonacci
// Throws Usage. "fib" is accepted for recursive_fibonacci.
BenchMode parse_mode(std::string_view s);
Workload parse_workload(std::string_view s);

struct BenchPoint {
  Workload workload = Workload::kFibonacci;
  std::uint64_t parameter = 0;  // MiB for sum_array, n for fibonacci
  BenchMode mode = BenchMode::kDirect;
  std::vector<std::int64_t> samples_ns;
  std::string error;  // nonempty: the point failed

  bool failed() const { return !error.empty(); }
};

// Middle sample, or the mean of the two middle ones. Throws InvalidConfig
// on an empty input.
std::int64_t median(std::vector<std::int64_t> samples);

// Fibonacci and sum_array reference values.
std::int64_t fibonacci(std::int64_t n);
std::int64_t sum_array_expected(std::int64_t mib);

inline constexpr std::uint64_t kDefaultMaxFibN = 35;

struct BenchConfig {
  std::vector<Workload> workloads;
  std::vector<std::uint64_t> sizes_mib = {2, 4, 8, 16, 32, 64, 128, 256};
  std::vector<std::uint64_t> ns = {1, 5, 10, 15, 20, 25, 30, 35};
  std::size_t runs = 30;
  std::vector<BenchMode> modes = {BenchMode::kDirect, BenchMode::kChannel,
                                  BenchMode::kChannelRa};
  bool allow_large_n = false;
  ClientConfig client;  // unused when only direct mode is requested
  Toolchain toolchain;  // sum_array only
  std::filesystem::path corpus_dir;
  std::ostream* log = nullptr;

  // Throws Usage.
  void validate() const;
};

// Samples every (workload, parameter, mode). A failing point is recorded
// and the sweep goes on; setup failures (attestation, missing fixtures,
// the fib(10) gate) throw.
std::vector<BenchPoint> run_bench(const BenchConfig& config);

// CSV with header workload,parameter,mode,runs,median_ns,min_ns,max_ns and,
// if `with_ratio`, ratio_vs_direct. Failed points have empty statistics.
std::string summarize_csv(const std::vector<BenchPoint>& points, bool with_ratio = false);

}  // namespace dynenclave

#endif  // DYNENCLAVE_BENCH_HPP_
