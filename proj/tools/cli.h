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


// Command-line front end: build, query, fprate and bench subcommands.
// run() is the whole program minus process plumbing so tests can drive it
// with in-memory streams.

#ifndef BLOOMIER_TOOLS_CLI_H_
#define BLOOMIER_TOOLS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "bloomier/codec.h"
#include "bloomier/key_value.h"
#include "json.hpp"

namespace bloomier::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFailure = 3;

// Largest corpus a single bench build may use, per scheme.
inline constexpr uint64_t kGraphBenchLimit = 1000000;
inline constexpr uint64_t kSparseBenchLimit = 10000;
inline constexpr uint64_t kBucketedBenchLimit = 1000000;

struct SchemeOptions {
  std::string scheme = "graph";
  unsigned k = 8;
  std::optional<double> c;  // graph: vertices per key; bucketed: bucket scale
  uint64_t m = 65536;
  size_t s = 2;
  double eps = 0.05;
  unsigned mbits = 31;
  double delta = 5.0;
  unsigned max_tries = 64;
  unsigned threads = 1;
};

struct BuiltFilter {
  AnyFilter filter;
  uint64_t attempts = 0;  // graph generations or bucket-hash draws
  uint64_t blocks = 0;    // hash blocks used (largest bucket for bucketed)
  uint64_t rebuilds = 0;  // extra verified-build passes, summed over buckets
};

BuiltFilter build_filter(const SchemeOptions& options, std::span<const KeyValue> pairs,
                         uint64_t seed);

nlohmann::json params_json(const SchemeOptions& options, const AnyFilter& filter);

struct FpEstimate {
  uint64_t samples = 0;
  uint64_t hits = 0;
  double rate = 0;
  double sigma = 0;
};

// Queries `samples` probe keys derived from `seed`, skipping any probe that
// appears in `stored`.
FpEstimate measure_fp_rate(const AnyFilter& filter, uint64_t samples, uint64_t seed,
                           const std::unordered_set<std::string>& stored = {});

nlohmann::json to_json(const FpEstimate& estimate);

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace bloomier::cli

#endif  // BLOOMIER_TOOLS_CLI_H_
