// Copyright 2026 unihpf contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "unihpf/common.hpp"

namespace unihpf {

// Fixed id layout. Sub-word pieces learned from a corpus start at kFirstTextId;
// everything below is reserved and never produced by text matching.
inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr int kClsId = 2;
inline constexpr int kSepId = 3;
inline constexpr int kMaskId = 4;
inline constexpr int kTimeBase = 5;
inline constexpr int kNumTimeBuckets = 20;
inline constexpr int kDpeBase = kTimeBase + kNumTimeBuckets;  // 25
inline constexpr int kDpeMinPlace = -4;
inline constexpr int kDpeMaxPlace = 6;
inline constexpr int kNumDpe = 10 * (kDpeMaxPlace - kDpeMinPlace + 1);  // 110
inline constexpr int kNegId = kDpeBase + kNumDpe;                       // 135
inline constexpr int kFirstTextId = kNegId + 1;                         // 136

inline int dpe_id(int digit, int place) { return kDpeBase + (place - kDpeMinPlace) * 10 + digit; }
inline int time_id(int bucket) { return kTimeBase + bucket; }

inline std::vector<std::string> reserved_token_strings() {
  std::vector<std::string> out = {"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"};
  for (int b = 0; b < kNumTimeBuckets; ++b) out.push_back("[TIME_" + std::to_string(b) + "]");
  for (int p = kDpeMinPlace; p <= kDpeMaxPlace; ++p)
    for (int d = 0; d < 10; ++d)
      out.push_back("[DPE_" + std::to_string(d) + "_" + std::to_string(p) + "]");
  out.push_back("[NEG]");
  return out;
}

class Vocab {
 public:
  Vocab() : tokens_(reserved_token_strings()) {}

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::string& token(int id) const { return tokens_.at(static_cast<size_t>(id)); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  int piece_id(const std::string& piece) const {
    auto it = piece_ids_.find(piece);
    return it == piece_ids_.end() ? -1 : it->second;
  }

  int add_piece(const std::string& piece) {
    auto it = piece_ids_.find(piece);
    if (it != piece_ids_.end()) return it->second;
    int id = size();
    tokens_.push_back(piece);
    piece_ids_.emplace(piece, id);
    max_piece_len_ = std::max(max_piece_len_, piece.size());
    return id;
  }

  size_t max_piece_len() const { return max_piece_len_; }

  std::string to_text() const {
    std::string out;
    for (const auto& t : tokens_) {
      out += t;
      out.push_back('\n');
    }
    return out;
  }

  uint64_t hash() const { return fnv1a64(to_text()); }

  static Vocab from_text(const std::string& text) {
    Vocab v;
    auto expected = reserved_token_strings();
    std::vector<std::string> lines;
    size_t pos = 0;
    while (pos < text.size()) {
      size_t nl = text.find('\n', pos);
      if (nl == std::string::npos) nl = text.size();
      lines.emplace_back(text.substr(pos, nl - pos));
      pos = nl + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.size() < expected.size()) throw DataError("vocab file: reserved block truncated");
    for (size_t i = 0; i < expected.size(); ++i)
      if (lines[i] != expected[i])
        throw DataError("vocab file: reserved token mismatch at line " + std::to_string(i + 1));
    for (size_t i = expected.size(); i < lines.size(); ++i) {
      if (lines[i].empty()) throw DataError("vocab file: empty piece at line " + std::to_string(i + 1));
      if (v.piece_id(lines[i]) >= 0)
        throw DataError("vocab file: duplicate piece '" + lines[i] + "'");
      v.add_piece(lines[i]);
    }
    return v;
  }

  static Vocab load(const fs::path& path) { return from_text(read_file(path)); }
  void save(const fs::path& path) const { write_file_atomic(path, to_text()); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> piece_ids_;
  size_t max_piece_len_ = 0;
};

namespace detail {

inline std::vector<std::string> word_symbols(const std::string& word) {
  std::vector<std::string> syms;
  for (size_t i = 0; i < word.size(); ++i)
    syms.push_back(i == 0 ? std::string(1, word[i]) : "##" + std::string(1, word[i]));
  return syms;
}

inline std::string merge_symbols(const std::string& a, const std::string& b) {
  return a + (b.rfind("##", 0) == 0 ? b.substr(2) : b);
}

}  // namespace detail

// Pair-frequency merges over a word-count table; continuation pieces carry a
// "##" prefix and stay distinct from word-initial pieces of the same surface.
// Ties break toward the lexicographically smallest pair, so a fixed corpus
// always yields the same vocab.
inline Vocab train_vocab(const std::vector<std::string>& corpus, int target_size) {
  if (target_size <= kFirstTextId)
    throw ConfigError("vocab target_size must exceed the reserved block (" +
                      std::to_string(kFirstTextId) + ")");
  std::map<std::string, int64_t> word_counts;
  for (const auto& line : corpus)
    for (auto& w : split_ws(lowercase(line))) ++word_counts[w];
  if (word_counts.empty()) throw DataError("train_vocab: empty corpus");

  std::vector<std::vector<std::string>> words;
  std::vector<int64_t> counts;
  std::map<std::string, int64_t> alphabet;
  for (const auto& [w, c] : word_counts) {
    words.push_back(detail::word_symbols(w));
    counts.push_back(c);
    for (const auto& s : words.back()) alphabet[s] += c;
  }

  Vocab vocab;
  for (const auto& [sym, _] : alphabet) {
    if (vocab.size() >= target_size) break;
    vocab.add_piece(sym);
  }

  while (vocab.size() < target_size) {
    std::map<std::pair<std::string, std::string>, int64_t> pair_counts;
    for (size_t wi = 0; wi < words.size(); ++wi)
      for (size_t i = 0; i + 1 < words[wi].size(); ++i)
        pair_counts[{words[wi][i], words[wi][i + 1]}] += counts[wi];
    if (pair_counts.empty()) break;
    std::pair<std::string, std::string> best;
    int64_t best_count = 0;
    for (const auto& [pr, c] : pair_counts) {
      if (c > best_count) {  // map order makes ties land on the smallest pair
        best_count = c;
        best = pr;
      }
    }
    if (best_count < 1) break;
    std::string merged = detail::merge_symbols(best.first, best.second);
    vocab.add_piece(merged);
    for (auto& syms : words) {
      for (size_t i = 0; i + 1 < syms.size();) {
        if (syms[i] == best.first && syms[i + 1] == best.second) {
          syms[i] = merged;
          syms.erase(syms.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        } else {
          ++i;
        }
      }
    }
  }
  return vocab;
}

// Greedy longest-match sub-word split; a word with any unmatchable position
// becomes a single UNK.
inline void tokenize_word(const Vocab& vocab, const std::string& word, std::vector<int>& out) {
  std::vector<int> ids;
  size_t start = 0;
  while (start < word.size()) {
    size_t best_len = 0;
    int best_id = -1;
    size_t cap = std::min(word.size() - start, vocab.max_piece_len());
    for (size_t len = cap; len >= 1; --len) {
      std::string piece = (start == 0 ? "" : "##") + word.substr(start, len);
      int id = vocab.piece_id(piece);
      if (id >= 0) {
        best_len = len;
        best_id = id;
        break;
      }
    }
    if (best_id < 0) {
      out.push_back(kUnkId);
      return;
    }
    ids.push_back(best_id);
    start += best_len;
  }
  out.insert(out.end(), ids.begin(), ids.end());
}

inline std::vector<int> tokenize_text(const Vocab& vocab, const std::string& text) {
  std::vector<int> out;
  for (auto& w : split_ws(lowercase(text))) tokenize_word(vocab, w, out);
  return out;
}

// Digit-place encoding of decimal strings. Integer digits above 10^6 saturate,
// fractional digits below 10^-4 truncate; both warn through the counter.
struct DpeWarnings {
  int64_t saturated = 0;
  int64_t truncated = 0;
};

inline bool encode_numeric_dpe(const std::string& raw, std::vector<int>& out,
                               DpeWarnings* warn = nullptr) {
  std::string s = trim(raw);
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.erase(0, 1);
  }
  if (!is_decimal_string(s)) return false;
  size_t dot = s.find('.');
  std::string ip = dot == std::string::npos ? s : s.substr(0, dot);
  std::string fp = dot == std::string::npos ? "" : s.substr(dot + 1);

  size_t nz = ip.find_first_not_of('0');
  ip = nz == std::string::npos ? "0" : ip.substr(nz);
  while (!fp.empty() && fp.back() == '0') fp.pop_back();
  if (fp.size() > static_cast<size_t>(-kDpeMinPlace)) {
    bool lost = fp.find_first_not_of('0', static_cast<size_t>(-kDpeMinPlace)) != std::string::npos;
    fp.resize(static_cast<size_t>(-kDpeMinPlace));
    while (!fp.empty() && fp.back() == '0') fp.pop_back();
    if (lost && warn) ++warn->truncated;
  }
  if (ip.size() > static_cast<size_t>(kDpeMaxPlace) + 1) {
    ip.assign(static_cast<size_t>(kDpeMaxPlace) + 1, '9');
    fp.clear();
    if (warn) ++warn->saturated;
  }

  bool all_zero = ip == "0" && fp.empty();
  if (neg && !all_zero) out.push_back(kNegId);
  int place = static_cast<int>(ip.size()) - 1;
  for (char c : ip) out.push_back(dpe_id(c - '0', place--));
  place = -1;
  for (char c : fp) out.push_back(dpe_id(c - '0', place--));
  return true;
}

// value scaled by 10^4, exact for everything the encoding can represent
inline bool decode_dpe(const std::vector<int>& ids, int64_t& scaled) {
  scaled = 0;
  bool neg = false;
  bool any = false;
  for (size_t i = 0; i < ids.size(); ++i) {
    int id = ids[i];
    if (id == kNegId) {
      if (i != 0) return false;
      neg = true;
      continue;
    }
    if (id < kDpeBase || id >= kDpeBase + kNumDpe) return false;
    int off = id - kDpeBase;
    int place = off / 10 + kDpeMinPlace;
    int digit = off % 10;
    int64_t unit = 1;
    for (int p = kDpeMinPlace; p < place; ++p) unit *= 10;
    scaled += digit * unit;
    any = true;
  }
  if (!any) return false;
  if (neg) scaled = -scaled;
  return true;
}

// Equal-frequency interval buckets fitted on training gaps. bucket(t) counts
// fitted boundaries strictly below t, so out-of-range values clamp to 0 / 19.
class TimeBuckets {
 public:
  static TimeBuckets fit(std::vector<double> train_intervals) {
    if (train_intervals.empty()) throw DataError("TimeBuckets::fit: no intervals");
    std::sort(train_intervals.begin(), train_intervals.end());
    TimeBuckets tb;
    size_t n = train_intervals.size();
    for (int k = 1; k < kNumTimeBuckets; ++k) {
      size_t idx = (static_cast<size_t>(k) * n + kNumTimeBuckets - 1) / kNumTimeBuckets;
      tb.boundaries_.push_back(train_intervals[idx - 1]);
    }
    return tb;
  }

  int bucket(double t) const {
    int b = 0;
    for (double edge : boundaries_)
      if (edge < t) ++b;
    return b;
  }

  const std::vector<double>& boundaries() const { return boundaries_; }

  std::string to_text() const {
    std::string out;
    for (double b : boundaries_) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g\n", b);
      out += buf;
    }
    return out;
  }

  static TimeBuckets from_text(const std::string& text) {
    TimeBuckets tb;
    size_t pos = 0;
    while (pos < text.size()) {
      size_t nl = text.find('\n', pos);
      if (nl == std::string::npos) nl = text.size();
      std::string line = trim(text.substr(pos, nl - pos));
      if (!line.empty()) tb.boundaries_.push_back(parse_double(line));
      pos = nl + 1;
    }
    if (tb.boundaries_.size() != kNumTimeBuckets - 1)
      throw DataError("time bucket file: expected " + std::to_string(kNumTimeBuckets - 1) +
                      " boundaries, got " + std::to_string(tb.boundaries_.size()));
    for (size_t i = 1; i < tb.boundaries_.size(); ++i)
      if (tb.boundaries_[i] < tb.boundaries_[i - 1])
        throw DataError("time bucket file: boundaries not ascending");
    return tb;
  }

  static TimeBuckets load(const fs::path& path) { return from_text(read_file(path)); }
  void save(const fs::path& path) const { write_file_atomic(path, to_text()); }

 private:
  std::vector<double> boundaries_;
};

}  // namespace unihpf
