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

#include "dynenclave/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>

#include "CLI11.hpp"
#include "dynenclave/bench.hpp"
#include "dynenclave/client.hpp"
#include "dynenclave/corpus.hpp"
#include "dynenclave/hexstring.hpp"

namespace dynenclave {

namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

bool is_hex_of_length(std::string_view s, std::size_t n) {
  return s.size() == n && std::all_of(s.begin(), s.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); });
}

std::string trimmed(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

// Hex inline, or a file holding it.
std::string hex_arg(const std::string& value, std::size_t hex_len, const char* what) {
  if (value.empty()) fail(ErrorCode::kUsage, std::string("missing ") + what);
  if (is_hex_of_length(value, hex_len)) return value;
  std::string text;
  try {
    text = trimmed(read_text_file(value));
  } catch (const Error&) {
    fail(ErrorCode::kUsage, std::string(what) + ": neither " + std::to_string(hex_len) +
                                " hex digits nor a readable file: " + value);
  }
  if (!is_hex_of_length(text, hex_len))
    fail(ErrorCode::kUsage, std::string(what) + ": " + value + " does not hold " +
                                std::to_string(hex_len) + " hex digits");
  return text;
}

struct Globals {
  std::string server = env_or("DYNENCLAVE_SERVER", "127.0.0.1:7878");
  std::string pinned_key = env_or("DYNENCLAVE_PINNED_KEY", "");
  std::string measurement = env_or("DYNENCLAVE_MEASUREMENT", "");
  std::string cc = env_or("DYNENCLAVE_CC", "cc");
  std::string workdir;

  ClientConfig client_config() const {
    ClientConfig c;
    c.server = Endpoint::parse(server);
    c.pinned_verify_key = verify_key_from_hex(hex_arg(pinned_key, 2 * kVerifyKeySize, "--pinned-key"));
    c.expected_measurement =
        measurement_from_hex(hex_arg(measurement, 2 * std::tuple_size_v<Measurement>, "--expected-measurement"));
    return c;
  }

  Toolchain toolchain() const {
    Toolchain t;
    t.cc = cc;
    t.workdir = workdir;
    return t;
  }
};

void print_map(std::ostream& out, const AddressMap& map) {
  for (const AddressMapEntry& e : map.entries()) {
    char hex[32];
    std::snprintf(hex, sizeof hex, "0x%llx", static_cast<unsigned long long>(e.address));
    out << e.name << '\t' << e.return_type << '\t' << hex << '\n';
  }
}

std::vector<std::string> split_commas(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  for (const auto& s : in) {
    std::size_t start = 0;
    while (start <= s.size()) {
      std::size_t comma = s.find(',', start);
      std::string part = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!part.empty()) out.push_back(part);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size())
    fail(ErrorCode::kUsage, std::string("bad ") + what + " '" + s + "'");
  return v;
}

}  // namespace

int exit_code_for(const Error& e) {
  if (dynamic_cast<const RemoteError*>(&e) != nullptr) return kExitRemote;
  if (dynamic_cast<const StageError*>(&e) != nullptr) return kExitPipeline;
  switch (e.code()) {
    case ErrorCode::kUsage:
      return kExitUsage;
    case ErrorCode::kInvalidPublicKey:
    case ErrorCode::kBadSignature:
    case ErrorCode::kNonceMismatch:
    case ErrorCode::kMeasurementMismatch:
    case ErrorCode::kDegenerateSecret:
      return kExitAttestation;
    case ErrorCode::kTransportError:
    case ErrorCode::kBindFailure:
      return kExitTransport;
    case ErrorCode::kAuthFailure:
    case ErrorCode::kReplayOrReorder:
    case ErrorCode::kMalformedFrame:
    case ErrorCode::kUnknownType:
    case ErrorCode::kSequenceExhausted:
    case ErrorCode::kProtocolViolation:
      return kExitChannel;
    case ErrorCode::kNotAnObject:
    case ErrorCode::kTruncatedObject:
    case ErrorCode::kUnsupportedClass:
    case ErrorCode::kSymbolNotFound:
    case ErrorCode::kNotAFunction:
    case ErrorCode::kZeroSize:
    case ErrorCode::kBadHexstring:
    case ErrorCode::kMalformedMap:
    case ErrorCode::kBadCastString:
    case ErrorCode::kUnbalancedSource:
    case ErrorCode::kExternalSymbolUnresolved:
    case ErrorCode::kToolchainFailure:
    case ErrorCode::kIoError:
      return kExitPipeline;
    default:
      return kExitFailure;
  }
}

int run_client_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Client for a dynenclave server: attest, load, run and unload C functions.",
               "dynenclave"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--server", g.server, "server host:port (env DYNENCLAVE_SERVER)")
      ->capture_default_str();
  app.add_option("--pinned-key", g.pinned_key,
                 "enclave verify key: 64 hex digits or a file (env DYNENCLAVE_PINNED_KEY)");
  app.add_option("--expected-measurement", g.measurement,
                 "expected measurement: 64 hex digits or a file (env DYNENCLAVE_MEASUREMENT)");
  app.add_option("--cc", g.cc, "C compiler command (env DYNENCLAVE_CC)")->capture_default_str();
  app.add_option("--workdir", g.workdir, "keep compiler inputs and outputs here");

  auto* attest = app.add_subcommand("attest", "verify the enclave and print its address map");

  std::string file, fn, descriptor;
  auto* load = app.add_subcommand("load", "build a .c file (or read a .hex fixture) and load it");
  load->add_option("file", file, "C source, or a hexstring fixture ending in .hex")->required();
  load->add_option("function", fn, "function name")->required();
  load->add_option("descriptor", descriptor, "signature descriptor, e.g. i(ii)")->required();

  std::string id_text;
  std::vector<std::string> exec_args;
  auto* exec = app.add_subcommand("exec", "call a loaded function");
  exec->add_option("id", id_text, "function id")->required();
  exec->add_option("args", exec_args,
                   "integers, \"quoted\" strings or hex:<digits> buffers (use -- before negatives)");

  auto* unload = app.add_subcommand("unload", "unload a function");
  unload->add_option("id", id_text, "function id")->required();
  auto* clear = app.add_subcommand("clear", "unload every function");
  auto* list = app.add_subcommand("list", "print the address map");

  std::string map_file;
  auto* build = app.add_subcommand("build", "build a payload locally and print its hexstring");
  build->add_option("file", file, "C source")->required()->check(CLI::ExistingFile);
  build->add_option("function", fn, "function name")->required();
  build->add_option("--map", map_file, "address map JSON to link against")->check(CLI::ExistingFile);

  std::vector<std::string> workloads{"fib"}, sizes, ns, modes{"direct,channel,channel+RA"};
  std::size_t runs = 30;
  std::string csv_out, corpus_dir = default_corpus_dir().string();
  bool allow_large_n = false, ratio = false;
  auto* bench = app.add_subcommand("bench", "latency sweep; CSV on stdout or --out");
  bench->add_option("--workload", workloads, "fib, sum_array (comma separated)")->delimiter(',');
  bench->add_option("--sizes", sizes, "sum_array sizes in MiB")->delimiter(',');
  bench->add_option("--ns", ns, "fibonacci n values")->delimiter(',');
  bench->add_option("--runs", runs, "samples per point")->capture_default_str();
  bench->add_option("--modes", modes, "direct, channel, channel+RA")->delimiter(',');
  bench->add_option("--out", csv_out, "write the CSV here");
  bench->add_option("--corpus", corpus_dir, "corpus directory")->capture_default_str();
  bench->add_flag("--allow-large-n", allow_large_n, "permit n above 35");
  bench->add_flag("--ratio", ratio, "add a ratio_vs_direct column");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build) {
      AddressMap map;
      if (!map_file.empty()) map = parse_map_json(read_text_file(map_file));
      BuiltPayload p = build_payload(read_text_file(file), fn, map, g.toolchain());
      out << to_hexstring(p.function.bytes) << '\n';
      return kExitOk;
    }

    if (*bench) {
      BenchConfig cfg;
      cfg.workloads.clear();
      for (const auto& w : split_commas(workloads)) cfg.workloads.push_back(parse_workload(w));
      if (!sizes.empty()) {
        cfg.sizes_mib.clear();
        for (const auto& s : split_commas(sizes)) cfg.sizes_mib.push_back(parse_u64(s, "size"));
      }
      if (!ns.empty()) {
        cfg.ns.clear();
        for (const auto& s : split_commas(ns)) cfg.ns.push_back(parse_u64(s, "n"));
      }
      cfg.modes.clear();
      for (const auto& m : split_commas(modes)) cfg.modes.push_back(parse_mode(m));
      cfg.runs = runs;
      cfg.allow_large_n = allow_large_n;
      cfg.corpus_dir = corpus_dir;
      cfg.toolchain = g.toolchain();
      cfg.log = &err;
      cfg.validate();
      bool remote = std::any_of(cfg.modes.begin(), cfg.modes.end(),
                                [](BenchMode m) { return m != BenchMode::kDirect; });
      if (remote) cfg.client = g.client_config();
      std::vector<BenchPoint> points = run_bench(cfg);
      std::string csv = summarize_csv(points, ratio);
      if (csv_out.empty()) {
        out << csv;
      } else {
        std::ofstream f(csv_out, std::ios::trunc);
        if (!f) fail(ErrorCode::kIoError, "cannot write " + csv_out);
        f << csv;
        err << "wrote " << points.size() << " rows to " << csv_out << '\n';
      }
      bool any_failed = std::any_of(points.begin(), points.end(),
                                    [](const BenchPoint& p) { return p.failed(); });
      return any_failed ? kExitBench : kExitOk;
    }

    ClientConfig cfg = g.client_config();
    Client client = Client::attest(cfg);

    if (*attest) {
      out << "attested " << cfg.server.str() << '\n';
      out << "measurement " << to_hex(client.report().measurement) << '\n';
      print_map(out, client.address_map());
    } else if (*load) {
      FunctionId id = 0;
      Bytes code;
      if (file.size() > 4 && file.ends_with(".hex")) {
        try {
          code = from_hexstring(trimmed(read_text_file(file)));
        } catch (const Error& e) {
          throw StageError("read", e);
        }
        id = client.load(fn, descriptor, code);
      } else {
        ProvisionResult r = provision_function(client, file, fn, descriptor, g.toolchain());
        id = r.id;
        code = r.payload.function.bytes;
      }
      out << "id " << id << '\n' << to_hexstring(code) << '\n';
    } else if (*exec) {
      std::vector<ArgValue> values;
      for (const auto& a : exec_args) values.push_back(parse_cli_arg(a));
      protocol::ExecResultMsg r = client.exec(parse_u64(id_text, "id"), values);
      out << "return " << (r.return_word ? std::to_string(*r.return_word) : "void") << '\n';
      out << "wall_ns " << r.wall_ns << '\n';
    } else if (*unload) {
      FunctionId id = parse_u64(id_text, "id");
      client.unload(id);
      out << "unloaded " << id << '\n';
    } else if (*clear) {
      out << client.clear() << '\n';
    } else if (*list) {
      print_map(out, client.list());
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error [" << error_name(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace dynenclave
