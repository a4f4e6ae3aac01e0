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

#include "dynenclave/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <memory>
#include <optional>
#include <sstream>

#include "dynenclave/corpus.hpp"
#include "dynenclave/native_code.hpp"

namespace dynenclave {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ns(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count();
}

bool wants(const BenchConfig& c, BenchMode m) {
  return std::find(c.modes.begin(), c.modes.end(), m) != c.modes.end();
}

bool wants_remote(const BenchConfig& c) {
  return wants(c, BenchMode::kChannel) || wants(c, BenchMode::kChannelRa);
}

// Everything needed to call one workload in each mode.
class Target {
 public:
  Target(Workload w, const BenchConfig& config, const Corpus& corpus)
      : workload_(w), config_(config) {
    if (w == Workload::kFibonacci)
      setup_fibonacci(corpus);
    else
      setup_sum_array(corpus);
  }

  ~Target() {
    if (!client_) return;
    for (auto it = loaded_.rbegin(); it != loaded_.rend(); ++it) {
      try {
        client_->unload(*it);
      } catch (const std::exception&) {
      }
    }
  }

  // One timed call; returns {result, latency}.
  std::pair<std::int64_t, std::int64_t> sample(BenchMode mode, std::uint64_t param) {
    std::int64_t arg = static_cast<std::int64_t>(param);
    switch (mode) {
      case BenchMode::kDirect: {
        if (!direct_) fail(ErrorCode::kInvalidConfig, "direct mode not prepared");
        CallWords words{static_cast<std::uint64_t>(arg), 0, 0, 0};
        auto t0 = Clock::now();
        std::uint64_t r = (*direct_)(words);
        std::int64_t ns = elapsed_ns(t0);
        return {static_cast<std::int64_t>(r), ns};
      }
      case BenchMode::kChannel: {
        auto t0 = Clock::now();
        protocol::ExecResultMsg r = client_->exec(remote_id_, {ArgValue::integer(arg)});
        std::int64_t ns = elapsed_ns(t0);
        return {r.return_word.value_or(0), ns};
      }
      case BenchMode::kChannelRa: {
        auto t0 = Clock::now();
        Client fresh = Client::attest(config_.client);
        protocol::ExecResultMsg r = fresh.exec(remote_id_, {ArgValue::integer(arg)});
        std::int64_t ns = elapsed_ns(t0);
        return {r.return_word.value_or(0), ns};
      }
    }
    fail(ErrorCode::kInvalidConfig, "unknown mode");
  }

  std::int64_t expected(std::uint64_t param) const {
    auto p = static_cast<std::int64_t>(param);
    return workload_ == Workload::kFibonacci ? fibonacci(p) : sum_array_expected(p);
  }

 private:
  void setup_fibonacci(const Corpus& corpus) {
    const CorpusEntry& e = corpus.get("recursive_fibonacci");
    Bytes code = corpus.fixture_bytes(e);
    if (wants(config_, BenchMode::kDirect)) direct_.emplace(code);
    if (wants_remote(config_)) {
      client_.emplace(Client::attest(config_.client));
      remote_id_ = client_->load(e.function, e.descriptor, code);
      loaded_.push_back(remote_id_);
    }
  }

  void setup_sum_array(const Corpus& corpus) {
    const CorpusEntry& gen = corpus.get("array_gen");
    const CorpusEntry& sum = corpus.get("sum_array");
    Bytes gen_code = corpus.fixture_bytes(gen);
    std::string source = corpus.source_text(sum);
    if (wants(config_, BenchMode::kDirect)) {
      helper_.emplace(gen_code);
      AddressMap local;
      for (const RuntimeEntry& r : default_runtime_table())
        local.add({r.name, r.return_type, r.address});
      local.add({gen.function, SignatureDescriptor::parse(gen.descriptor).c_return_type(),
                 helper_->entry()});
      BuiltPayload p = build_payload(source, sum.function, local, config_.toolchain);
      direct_.emplace(p.function.bytes);
    }
    if (wants_remote(config_)) {
      client_.emplace(Client::attest(config_.client));
      loaded_.push_back(client_->load(gen.function, gen.descriptor, gen_code));
      BuiltPayload p = build_payload(source, sum.function, client_->address_map(), config_.toolchain);
      remote_id_ = client_->load(sum.function, sum.descriptor, p.function.bytes);
      loaded_.push_back(remote_id_);
    }
  }

  Workload workload_;
  const BenchConfig& config_;
  std::optional<DirectFunction> helper_;
  std::optional<DirectFunction> direct_;
  std::optional<Client> client_;
  FunctionId remote_id_ = 0;
  std::vector<FunctionId> loaded_;
};

void log_line(const BenchConfig& c, const std::string& line) {
  if (c.log != nullptr) *c.log << line << '\n' << std::flush;
}

}  // namespace

std::string_view mode_name(BenchMode m) {
  switch (m) {
    case BenchMode::kDirect: return "direct";
    case BenchMode::kChannel: return "channel";
    case BenchMode::kChannelRa: return "channel+RA";
  }
  return "?";
}

std::string_view workload_name(Workload w) {
  return w == Workload::kSumArray ? "sum_array" : "recursive_fibonacci";
}

BenchMode parse_mode(std::string_view s) {
  if (s == "direct") return BenchMode::kDirect;
  if (s == "channel") return BenchMode::kChannel;
  if (s == "channel+RA" || s == "channel+ra") return BenchMode::kChannelRa;
  fail(ErrorCode::kUsage, "unknown mode '" + std::string(s) + "' (direct, channel, channel+RA)");
}

Workload parse_workload(std::string_view s) {
  if (s == "sum_array") return Workload::kSumArray;
  if (s == "fib" || s == "recursive_fibonacci") return Workload::kFibonacci;
  fail(ErrorCode::kUsage, "unknown workload '" + std::string(s) + "' (sum_array, fib)");
}

std::int64_t median(std::vector<std::int64_t> samples) {
  if (samples.empty()) fail(ErrorCode::kInvalidConfig, "median of no samples");
  std::sort(samples.begin(), samples.end());
  std::size_t mid = samples.size() / 2;
  if (samples.size() % 2 == 1) return samples[mid];
  return samples[mid - 1] + (samples[mid] - samples[mid - 1]) / 2;
}

std::int64_t fibonacci(std::int64_t n) {
  std::int64_t a = 0, b = 1;
  for (std::int64_t i = 0; i < n; ++i) {
    std::int64_t t = a + b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t sum_array_expected(std::int64_t mib) {
  std::int64_t n = mib * static_cast<std::int64_t>(kMiB / sizeof(int));
  return n * (n - 1) / 2;
}

void BenchConfig::validate() const {
  if (workloads.empty()) fail(ErrorCode::kUsage, "no workload selected");
  if (modes.empty()) fail(ErrorCode::kUsage, "no mode selected");
  if (runs == 0) fail(ErrorCode::kUsage, "--runs must be at least 1");
  for (Workload w : workloads) {
    if (w == Workload::kFibonacci) {
      if (ns.empty()) fail(ErrorCode::kUsage, "no n values");
      for (auto n : ns)
        if (n > kDefaultMaxFibN && !allow_large_n)
          fail(ErrorCode::kUsage, "n=" + std::to_string(n) + " exceeds " +
                                      std::to_string(kDefaultMaxFibN) + "; pass --allow-large-n");
    } else {
      if (sizes_mib.empty()) fail(ErrorCode::kUsage, "no array sizes");
      for (auto s : sizes_mib)
        if (s == 0 || s > 4096) fail(ErrorCode::kUsage, "array size out of range: " + std::to_string(s));
    }
  }
}

std::vector<BenchPoint> run_bench(const BenchConfig& config) {
  config.validate();
  Corpus corpus = Corpus::load(config.corpus_dir);
  std::vector<BenchPoint> points;
  for (Workload w : config.workloads) {
    Target target(w, config, corpus);
    const auto& params = w == Workload::kFibonacci ? config.ns : config.sizes_mib;

    // Correctness gate before anything is timed.
    std::uint64_t gate = w == Workload::kFibonacci ? 10 : 1;
    for (BenchMode m : config.modes) {
      std::int64_t got = target.sample(m, gate).first;
      if (got != target.expected(gate))
        fail(ErrorCode::kInvalidConfig, std::string(workload_name(w)) + "(" + std::to_string(gate) +
                                            ") returned " + std::to_string(got) + " in " +
                                            std::string(mode_name(m)) + " mode");
    }

    for (std::uint64_t p : params) {
      for (BenchMode m : config.modes) {
        BenchPoint pt{w, p, m, {}, {}};
        std::int64_t want = target.expected(p);
        try {
          for (std::size_t i = 0; i < config.runs; ++i) {
            auto [got, ns] = target.sample(m, p);
            if (got != want) {
              pt.error = "returned " + std::to_string(got) + ", expected " + std::to_string(want);
              break;
            }
            pt.samples_ns.push_back(ns);
          }
        } catch (const std::exception& e) {
          pt.error = e.what();
        }
        std::ostringstream line;
        line << workload_name(w) << ' ' << p << ' ' << mode_name(m) << ": ";
        if (pt.failed())
          line << "FAILED " << pt.error;
        else
          line << "median " << median(pt.samples_ns) << " ns";
        log_line(config, line.str());
        points.push_back(std::move(pt));
      }
    }
  }
  return points;
}

std::string summarize_csv(const std::vector<BenchPoint>& points, bool with_ratio) {
  std::ostringstream out;
  out << "workload,parameter,mode,runs,median_ns,min_ns,max_ns";
  if (with_ratio) out << ",ratio_vs_direct";
  out << '\n';
  for (const BenchPoint& p : points) {
    out << workload_name(p.workload) << ',' << p.parameter << ',' << mode_name(p.mode) << ',';
    if (p.failed() || p.samples_ns.empty()) {
      out << p.samples_ns.size() << ",,,";
      if (with_ratio) out << ',';
      out << '\n';
      continue;
    }
    auto [lo, hi] = std::minmax_element(p.samples_ns.begin(), p.samples_ns.end());
    std::int64_t med = median(p.samples_ns);
    out << p.samples_ns.size() << ',' << med << ',' << *lo << ',' << *hi;
    if (with_ratio) {
      out << ',';
      for (const BenchPoint& d : points) {
        if (d.workload == p.workload && d.parameter == p.parameter &&
            d.mode == BenchMode::kDirect && !d.failed() && !d.samples_ns.empty()) {
          std::int64_t dm = median(d.samples_ns);
          if (dm > 0) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", static_cast<double>(med) / static_cast<double>(dm));
            out << buf;
          }
          break;
        }
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace dynenclave
