// Copyright 2026 The Bloomier Authors.
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


#include "cli.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "bloomier/corpus.h"
#include "bloomier/error.h"
#include "bloomier/hashing.h"

namespace bloomier::cli {
namespace {

constexpr uint64_t kCorpusStream = 1;
constexpr uint64_t kTrialStream = 2;
constexpr uint64_t kProbeStream = 3;

uint64_t table_bits(const AnyFilter& filter) {
  struct {
    uint64_t operator()(const GraphFilter& f) const { return f.table().bit_size(); }
    uint64_t operator()(const SparseFilter& f) const { return f.table().bit_size(); }
    uint64_t operator()(const BucketedFilter& f) const { return f.table_bits(); }
  } visitor;
  return std::visit(visitor, filter);
}

double bits_per_key(uint64_t bits, uint64_t n) {
  return n == 0 ? 0.0 : static_cast<double>(bits) / static_cast<double>(n);
}

void add_scheme_options(CLI::App* cmd, SchemeOptions& o) {
  cmd->add_option("--scheme", o.scheme, "graph, sparse or bucketed")
      ->required()
      ->check(CLI::IsMember({"graph", "sparse", "bucketed"}));
  cmd->add_option("--k", o.k, "value bits");
  cmd->add_option("--c", o.c, "graph: vertices per key (2.5); bucketed: bucket scale (4)");
  cmd->add_option("--m", o.m, "graph ring modulus")->capture_default_str();
  cmd->add_option("--s", o.s, "nonzeros per sparse equation")->capture_default_str();
  cmd->add_option("--eps", o.eps, "sparse table slack")->capture_default_str();
  cmd->add_option("--mbits", o.mbits, "bits of the sparse field prime")->capture_default_str();
  cmd->add_option("--delta", o.delta, "bucket size slack")->capture_default_str();
  cmd->add_option("--max-tries", o.max_tries, "graph generation budget")->capture_default_str();
  cmd->add_option("--threads", o.threads, "bucket build threads")->capture_default_str();
}

SparseParams sparse_params(const SchemeOptions& o) {
  SparseParams p;
  p.s = o.s;
  p.epsilon = o.eps;
  p.m_bits = o.mbits;
  p.k = o.k;
  return p;
}

BucketParams bucket_params(const SchemeOptions& o) {
  BucketParams p;
  p.c_bucket = o.c.value_or(4.0);
  p.delta = o.delta;
  p.inner = sparse_params(o);
  return p;
}

GraphParams graph_params(const SchemeOptions& o) {
  GraphParams p;
  p.c = o.c.value_or(2.5);
  p.m = o.m;
  p.k = o.k;
  p.max_tries = o.max_tries;
  return p;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw std::runtime_error("cannot read " + path);
  return bytes;
}

std::vector<KeyValue> read_corpus(const std::string& path, unsigned k) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input " + path);
  return read_tsv(in, k);
}

AnyFilter load_filter(const std::string& path) { return decode(read_file(path)); }

// Runs `body`, mapping library exceptions onto exit codes.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedSize& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BuildFailure& e) {
    err << "build failed after " << e.attempts() << " attempts: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int cmd_build(const SchemeOptions& o, const std::string& input, const std::string& out_path,
              uint64_t seed, std::ostream& out, std::ostream& err) {
  const auto pairs = read_corpus(input, o.k);
  const BuiltFilter built = build_filter(o, pairs, seed);
  const std::string bytes = encode(built.filter);
  {
    std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
    file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!file) {
      err << "error: cannot write " << out_path << "\n";
      return kExitFailure;
    }
  }
  const uint64_t bits = table_bits(built.filter);
  nlohmann::json summary = {
      {"command", "build"},
      {"scheme", o.scheme},
      {"n", pairs.size()},
      {"seed", seed},
      {"params", params_json(o, built.filter)},
      {"attempts", built.attempts},
      {"retries", built.attempts == 0 ? 0 : built.attempts - 1},
      {"blocks", built.blocks},
      {"rebuilds", built.rebuilds},
      {"serialized_bits", bits},
      {"bits_per_key", bits_per_key(bits, pairs.size())},
      {"file_bytes", bytes.size()},
  };
  out << summary.dump() << "\n";
  return kExitOk;
}

int cmd_query(const std::string& filter_path, std::istream& in, std::ostream& out) {
  const AnyFilter filter = load_filter(filter_path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const QueryResult r = query(filter, line);
    if (r) {
      out << *r << "\n";
    } else {
      out << "BOT\n";
    }
  }
  return kExitOk;
}

int cmd_fprate(const std::string& filter_path, uint64_t samples, uint64_t seed,
               const std::string& input, std::ostream& out) {
  if (samples < 1) throw InputError("--samples must be >= 1");
  const AnyFilter filter = load_filter(filter_path);
  std::unordered_set<std::string> stored;
  if (!input.empty()) {
    std::ifstream in(input);
    if (!in) throw InputError("cannot open input " + input);
    for (auto& kv : read_tsv(in, 64)) stored.insert(std::move(kv.key));
  }
  const FpEstimate est = measure_fp_rate(filter, samples, seed, stored);
  nlohmann::json j = to_json(est);
  j["command"] = "fprate";
  j["scheme"] = scheme_name(scheme_of(filter));
  j["n"] = key_count(filter);
  j["seed"] = seed;
  out << j.dump() << "\n";
  return kExitOk;
}

uint64_t bench_limit(const std::string& scheme) {
  if (scheme == "graph") return kGraphBenchLimit;
  if (scheme == "sparse") return kSparseBenchLimit;
  return kBucketedBenchLimit;
}

int cmd_bench(const SchemeOptions& o, const std::vector<uint64_t>& sizes, unsigned trials,
              uint64_t seed, uint64_t fp_samples, std::ostream& out) {
  if (trials < 1) throw InputError("--trials must be >= 1");
  if (sizes.empty()) throw InputError("--sizes must list at least one size");
  for (uint64_t n : sizes) {
    if (n > bench_limit(o.scheme)) {
      throw InputError("size " + std::to_string(n) + " exceeds the " + o.scheme +
                       " bench limit of " + std::to_string(bench_limit(o.scheme)));
    }
  }
  nlohmann::json reports = nlohmann::json::array();
  for (uint64_t n : sizes) {
    const auto pairs = synthetic_corpus(n, o.k, derive_seed(seed, kCorpusStream, n));
    double seconds = 0, attempts = 0, blocks = 0, rebuilds = 0;
    std::optional<BuiltFilter> first;
    // Trial 0 warms caches and the allocator; it is not reported.
    for (unsigned t = 0; t <= trials; ++t) {
      const auto start = std::chrono::steady_clock::now();
      BuiltFilter built = build_filter(o, pairs, derive_seed(seed, kTrialStream, t));
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      if (t == 0) continue;
      seconds += elapsed.count();
      attempts += static_cast<double>(built.attempts);
      blocks += static_cast<double>(built.blocks);
      rebuilds += static_cast<double>(built.rebuilds);
      if (!first) first = std::move(built);
    }
    const uint64_t bits = table_bits(first->filter);
    const FpEstimate fp =
        fp_samples == 0 ? FpEstimate{}
                        : measure_fp_rate(first->filter, fp_samples,
                                          derive_seed(seed, kProbeStream, n));
    reports.push_back({
        {"scheme", o.scheme},
        {"n", n},
        {"trials", trials},
        {"params", params_json(o, first->filter)},
        {"build_seconds", seconds / trials},
        {"attempts", attempts / trials},
        {"retries", std::max(0.0, attempts / trials - 1)},
        {"blocks", blocks / trials},
        {"rebuilds", rebuilds / trials},
        {"serialized_bits", bits},
        {"bits_per_key", bits_per_key(bits, n)},
        {"fp", to_json(fp)},
    });
  }
  out << reports.dump() << "\n";
  return kExitOk;
}

}  // namespace

BuiltFilter build_filter(const SchemeOptions& o, std::span<const KeyValue> pairs,
                         uint64_t seed) {
  BuiltFilter built;
  if (o.scheme == "graph") {
    GraphFilter f = GraphFilter::build(pairs, graph_params(o), seed);
    built.attempts = f.attempts();
    built.filter = std::move(f);
  } else if (o.scheme == "sparse") {
    VerifiedSparseFilter f = build_verified(pairs, sparse_params(o), seed);
    built.attempts = pairs.empty() ? 0 : 1;
    built.blocks = f.filter().block_count();
    built.rebuilds = f.iterations() == 0 ? 0 : f.iterations() - 1;
    built.filter = f.filter();
  } else if (o.scheme == "bucketed") {
    BucketBuildInfo info;
    BucketedFilter f = BucketedFilter::build(pairs, bucket_params(o), seed, &info, o.threads);
    built.attempts = info.bucket_hash_tries;
    built.blocks = f.max_block_count();
    for (uint32_t it : info.iterations) built.rebuilds += it == 0 ? 0 : it - 1;
    built.filter = std::move(f);
  } else {
    throw InputError("unknown scheme " + o.scheme);
  }
  return built;
}

nlohmann::json params_json(const SchemeOptions& o, const AnyFilter& filter) {
  struct {
    const SchemeOptions& o;
    nlohmann::json operator()(const GraphFilter& f) const {
      return {{"c", o.c.value_or(2.5)},
              {"m", f.modulus()},
              {"k", f.value_bits()},
              {"vertices", f.vertex_count()}};
    }
    nlohmann::json operator()(const SparseFilter& f) const {
      return {{"k", f.value_bits()}, {"s", f.s()},           {"eps", o.eps},
              {"mbits", f.m_bits()}, {"p", f.prime()},        {"q", f.table_length()}};
    }
    nlohmann::json operator()(const BucketedFilter& f) const {
      return {{"k", f.value_bits()}, {"s", f.s()},         {"eps", o.eps},
              {"mbits", f.m_bits()}, {"c", o.c.value_or(4.0)}, {"delta", o.delta},
              {"buckets", f.bucket_count()}};
    }
  } visitor{o};
  return std::visit(visitor, filter);
}

FpEstimate measure_fp_rate(const AnyFilter& filter, uint64_t samples, uint64_t seed,
                           const std::unordered_set<std::string>& stored) {
  FpEstimate est;
  est.samples = samples;
  uint64_t i = 0;
  for (uint64_t drawn = 0; drawn < samples; ++i) {
    const std::string key = probe_key(seed, i);
    if (stored.contains(key)) continue;
    ++drawn;
    est.hits += query(filter, key).has_value();
  }
  est.rate = static_cast<double>(est.hits) / static_cast<double>(samples);
  est.sigma = std::sqrt(est.rate * (1 - est.rate) / static_cast<double>(samples));
  return est;
}

nlohmann::json to_json(const FpEstimate& e) {
  return {{"samples", e.samples},
          {"hits", e.hits},
          {"rate", e.rate},
          {"sigma", e.sigma},
          {"lo", std::max(0.0, e.rate - 3 * e.sigma)},
          {"hi", std::min(1.0, e.rate + 3 * e.sigma)}};
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Build and query Bloomier filters"};
  app.require_subcommand(1);

  SchemeOptions build_opts;
  std::string input, out_path, filter_path, fp_input;
  uint64_t build_seed = 0;
  auto* build = app.add_subcommand("build", "build a filter from a TSV corpus");
  add_scheme_options(build, build_opts);
  build->get_option("--k")->required();
  build->add_option("--input", input, "key<TAB>value file")->required();
  build->add_option("--out", out_path, "filter file to write")->required();
  build->add_option("--seed", build_seed, "master seed")->capture_default_str();

  auto* query_cmd = app.add_subcommand("query", "look up keys read from standard input");
  query_cmd->add_option("--filter", filter_path, "filter file")->required();

  uint64_t samples = 1000000, fp_seed = 0;
  auto* fprate = app.add_subcommand("fprate", "measure the non-member acceptance rate");
  fprate->add_option("--filter", filter_path, "filter file")->required();
  fprate->add_option("--samples", samples, "probe count")->capture_default_str();
  fprate->add_option("--seed", fp_seed, "probe seed")->capture_default_str();
  fprate->add_option("--input", fp_input, "stored corpus; probes found in it are skipped");

  SchemeOptions bench_opts;
  std::vector<uint64_t> sizes;
  unsigned trials = 3;
  uint64_t bench_seed = 0, fp_samples = 100000;
  auto* bench = app.add_subcommand("bench", "time builds on synthetic corpora");
  add_scheme_options(bench, bench_opts);
  bench->add_option("--sizes", sizes, "corpus sizes")->required()->delimiter(',');
  bench->add_option("--trials", trials, "timed trials per size")->capture_default_str();
  bench->add_option("--seed", bench_seed, "master seed")->capture_default_str();
  bench->add_option("--fp-samples", fp_samples, "probes per size, 0 to skip")
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << sub->help();
    } else {
      err << app.help();
    }
    return kExitUsage;
  }

  return guarded(err, [&] {
    if (*build) return cmd_build(build_opts, input, out_path, build_seed, out, err);
    if (*query_cmd) return cmd_query(filter_path, in, out);
    if (*fprate) return cmd_fprate(filter_path, samples, fp_seed, fp_input, out);
    return cmd_bench(bench_opts, sizes, trials, bench_seed, fp_samples, out);
  });
}

}  // namespace bloomier::cli
