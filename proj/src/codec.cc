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

#include "bloomier/codec.h"

#include <charconv>
#include <cstring>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "bloomier/error.h"

namespace bloomier {
namespace {

struct Header {
  Scheme scheme;
  uint64_t n, table_len, modulus, q, k, s, seed, aux, count;
};

class Writer {
 public:
  void u8(uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u64(uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<uint8_t>(v >> (8 * i)));
  }

  void header(const Header& h) {
    out_.append(kFilterMagic, sizeof(kFilterMagic));
    u8(kFilterVersion);
    u8(static_cast<uint8_t>(h.scheme));
    for (uint64_t v : {h.n, h.table_len, h.modulus, h.q, h.k, h.s, h.seed, h.aux, h.count}) {
      u64(v);
    }
  }

  // MSB-first bit stream, zero padded to the next byte.
  void table(const PackedVector& t) {
    const unsigned width = t.width();
    uint8_t current = 0;
    unsigned filled = 0;
    for (size_t i = 0; i < t.size(); ++i) {
      const uint64_t v = t.get(i);
      for (int b = static_cast<int>(width) - 1; b >= 0; --b) {
        current = static_cast<uint8_t>(current << 1 | ((v >> b) & 1));
        if (++filled == 8) {
          u8(current);
          current = 0;
          filled = 0;
        }
      }
    }
    if (filled > 0) u8(static_cast<uint8_t>(current << (8 - filled)));
  }

  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  size_t offset() const { return pos_; }
  size_t remaining() const { return bytes_.size() - pos_; }

  uint8_t u8(const char* what) {
    if (remaining() < 1) throw FormatError(std::string("truncated ") + what, pos_);
    return static_cast<uint8_t>(bytes_[pos_++]);
  }

  uint64_t u64(const char* what) {
    if (remaining() < 8) throw FormatError(std::string("truncated ") + what, pos_);
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = v << 8 | static_cast<uint8_t>(bytes_[pos_ + i]);
    pos_ += 8;
    return v;
  }

  Header header() {
    if (bytes_.size() < sizeof(kFilterMagic) ||
        std::memcmp(bytes_.data(), kFilterMagic, sizeof(kFilterMagic)) != 0) {
      throw FormatError("bad magic", 0);
    }
    pos_ = sizeof(kFilterMagic);
    const uint8_t version = u8("header");
    if (version != kFilterVersion) {
      throw FormatError("unsupported version " + std::to_string(version), pos_ - 1);
    }
    const uint8_t scheme = u8("header");
    if (scheme < 1 || scheme > 3) {
      throw UnsupportedScheme("unknown filter scheme " + std::to_string(scheme));
    }
    Header h;
    h.scheme = static_cast<Scheme>(scheme);
    for (uint64_t* f : {&h.n, &h.table_len, &h.modulus, &h.q, &h.k, &h.s, &h.seed, &h.aux,
                        &h.count}) {
      *f = u64("header");
    }
    return h;
  }

  // Bytes occupied by `count` entries of `width` bits; checks they exist.
  size_t table_bytes(uint64_t count, unsigned width) const {
    if (width == 0 || width > 64) throw FormatError("bad entry width", pos_);
    if (count > remaining() * 8 / width) throw FormatError("truncated payload", pos_);
    return (count * width + 7) / 8;
  }

  PackedVector table(uint64_t count, unsigned width, uint64_t modulus) {
    const size_t nbytes = table_bytes(count, width);
    PackedVector t(count, width);
    const auto* data = reinterpret_cast<const uint8_t*>(bytes_.data() + pos_);
    uint64_t bit = 0;
    for (uint64_t i = 0; i < count; ++i) {
      uint64_t v = 0;
      for (unsigned b = 0; b < width; ++b, ++bit) {
        v = v << 1 | ((data[bit / 8] >> (7 - bit % 8)) & 1);
      }
      if (modulus != 0 && v >= modulus) {
        throw FormatError("table entry out of range", pos_ + bit / 8);
      }
      t.set(i, v);
    }
    pos_ += nbytes;
    return t;
  }

  void skip_table(uint64_t count, unsigned width) { pos_ += table_bytes(count, width); }

  void expect_end() const {
    if (remaining() != 0) throw FormatError("trailing bytes after payload", pos_);
  }

 private:
  std::string_view bytes_;
  size_t pos_ = 0;
};

void check_graph_header(const Header& h) {
  if (h.q != 0 || h.s != 0 || h.count != 0) throw FormatError("bad graph header", 6);
  if (h.modulus < 2 || h.k < 1 || h.k > 63) throw FormatError("bad graph modulus", 6);
}

void check_sparse_header(const Header& h) {
  if (h.aux < 2 || h.aux > 63) throw FormatError("bad m_bits", 6);
  if (h.k < 1 || h.k > h.aux || h.s < 2 || h.s > 1024) throw FormatError("bad sparse header", 6);
}

template <class F>
auto rethrow_as_format(size_t offset, F&& f) {
  try {
    return f();
  } catch (const InputError& e) {
    throw FormatError(e.what(), offset);
  }
}

}  // namespace

std::string encode(const GraphFilter& filter) {
  Writer w;
  w.header(Header{Scheme::kGraph, filter.size(), filter.vertex_count(), filter.modulus(), 0,
                  filter.value_bits(), 0, filter.seed(), filter.attempt(), 0});
  w.table(filter.table());
  return w.take();
}

std::string encode(const SparseFilter& filter) {
  Writer w;
  w.header(Header{Scheme::kSparse, filter.size(), filter.table_length(), filter.prime(),
                  filter.table_length(), filter.value_bits(), filter.s(), filter.seed(),
                  filter.m_bits(), filter.block_count()});
  w.table(filter.table());
  return w.take();
}

std::string encode(const BucketedFilter& filter) {
  uint64_t entries = 0;
  for (size_t i = 0; i < filter.bucket_count(); ++i) entries += filter.bucket(i).table_length();
  Writer w;
  w.header(Header{Scheme::kBucketed, filter.size(), entries, 0, 0, filter.value_bits(),
                  filter.s(), filter.bucket_seed(), filter.m_bits(), filter.bucket_count()});
  for (size_t i = 0; i < filter.bucket_count(); ++i) {
    const SparseFilter& b = filter.bucket(i);
    w.u64(b.size());
    w.u64(b.table_length());
    w.u64(b.prime());
    w.u64(b.seed());
    w.u64(b.block_count());
    w.table(b.table());
  }
  return w.take();
}

std::string encode(const AnyFilter& filter) {
  return std::visit([](const auto& f) { return encode(f); }, filter);
}

AnyFilter decode(std::string_view bytes) {
  Reader r(bytes);
  const Header h = r.header();
  switch (h.scheme) {
    case Scheme::kGraph: {
      check_graph_header(h);
      PackedVector table = r.table(h.table_len, bits_for_modulus(h.modulus), h.modulus);
      r.expect_end();
      if (h.aux > UINT32_MAX) throw FormatError("bad attempt index", 6);
      return rethrow_as_format(6, [&] {
        return GraphFilter::from_parts(h.n, h.table_len, h.modulus,
                                       static_cast<unsigned>(h.k), h.seed,
                                       static_cast<uint32_t>(h.aux), std::move(table));
      });
    }
    case Scheme::kSparse: {
      check_sparse_header(h);
      if (h.q != h.table_len) throw FormatError("sparse table length mismatch", 6);
      const auto m_bits = static_cast<unsigned>(h.aux);
      PackedVector table = r.table(h.table_len, m_bits, h.modulus);
      r.expect_end();
      return rethrow_as_format(6, [&] {
        return SparseFilter::from_parts(h.n, h.q, h.modulus, m_bits,
                                        static_cast<unsigned>(h.k), h.s, h.seed, h.count,
                                        std::move(table));
      });
    }
    case Scheme::kBucketed: {
      check_sparse_header(h);
      if (h.modulus != 0 || h.q != 0) throw FormatError("bad bucketed header", 6);
      if (h.count == 0 || h.count > r.remaining() / kBucketHeaderBytes) {
        throw FormatError("bad bucket count", r.offset());
      }
      const auto m_bits = static_cast<unsigned>(h.aux);
      std::vector<SparseFilter> buckets;
      buckets.reserve(h.count);
      uint64_t entries = 0;
      for (uint64_t i = 0; i < h.count; ++i) {
        const size_t at = r.offset();
        const uint64_t n = r.u64("bucket header");
        const uint64_t q = r.u64("bucket header");
        const uint64_t p = r.u64("bucket header");
        const uint64_t seed = r.u64("bucket header");
        const uint64_t blocks = r.u64("bucket header");
        PackedVector table = r.table(q, m_bits, p);
        entries += q;
        buckets.push_back(rethrow_as_format(at, [&] {
          return SparseFilter::from_parts(n, q, p, m_bits, static_cast<unsigned>(h.k), h.s,
                                          seed, blocks, std::move(table));
        }));
      }
      r.expect_end();
      if (entries != h.table_len) throw FormatError("bucket table lengths disagree", 6);
      return rethrow_as_format(6, [&] {
        return BucketedFilter::from_parts(h.n, static_cast<unsigned>(h.k), h.s, m_bits,
                                          h.seed, std::move(buckets));
      });
    }
  }
  throw UnsupportedScheme("unknown filter scheme");
}

ImageSummary inspect(std::string_view bytes) {
  Reader r(bytes);
  const Header h = r.header();
  ImageSummary summary{h.scheme, h.n, h.table_len, 0, 0};
  switch (h.scheme) {
    case Scheme::kGraph: {
      check_graph_header(h);
      const unsigned width = bits_for_modulus(h.modulus);
      r.skip_table(h.table_len, width);
      summary.table_bits = h.table_len * width;
      break;
    }
    case Scheme::kSparse:
      check_sparse_header(h);
      r.skip_table(h.table_len, static_cast<unsigned>(h.aux));
      summary.table_bits = h.table_len * h.aux;
      break;
    case Scheme::kBucketed:
      check_sparse_header(h);
      if (h.count == 0 || h.count > r.remaining() / kBucketHeaderBytes) {
        throw FormatError("bad bucket count", r.offset());
      }
      for (uint64_t i = 0; i < h.count; ++i) {
        r.u64("bucket header");
        const uint64_t q = r.u64("bucket header");
        r.u64("bucket header");
        r.u64("bucket header");
        r.u64("bucket header");
        r.skip_table(q, static_cast<unsigned>(h.aux));
        summary.table_bits += q * h.aux;
      }
      break;
  }
  r.expect_end();
  summary.payload_bytes = bytes.size() - kHeaderBytes;
  return summary;
}

QueryResult query(const AnyFilter& filter, std::string_view key) {
  return std::visit([&](const auto& f) { return f.query(key); }, filter);
}

Scheme scheme_of(const AnyFilter& filter) {
  return static_cast<Scheme>(filter.index() + 1);
}

const char* scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::kGraph: return "graph";
    case Scheme::kSparse: return "sparse";
    case Scheme::kBucketed: return "bucketed";
  }
  return "unknown";
}

uint64_t key_count(const AnyFilter& filter) {
  return std::visit([](const auto& f) { return f.size(); }, filter);
}

std::vector<KeyValue> read_tsv(std::istream& in, unsigned k) {
  std::vector<KeyValue> pairs;
  std::unordered_set<std::string> seen;
  const uint64_t limit = value_limit(k);
  std::string line;
  for (uint64_t line_no = 1; std::getline(in, line); ++line_no) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) throw InputError(where + "expected key<TAB>value");
    const std::string_view digits = std::string_view(line).substr(tab + 1);
    uint64_t value = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (digits.empty() || ec != std::errc() || end != digits.data() + digits.size()) {
      throw InputError(where + "value is not a nonnegative decimal integer");
    }
    if (k < 64 && value >= limit) {
      throw InputError(where + "value does not fit in " + std::to_string(k) + " bits");
    }
    std::string key = line.substr(0, tab);
    if (!seen.insert(key).second) throw InputError(where + "duplicate key");
    pairs.push_back(KeyValue{std::move(key), value});
  }
  return pairs;
}

void write_tsv(std::ostream& out, std::span<const KeyValue> pairs) {
  for (const auto& kv : pairs) out << kv.key << '\t' << kv.value << '\n';
}

}  // namespace bloomier
