#include "unihpf/vocab.hpp"

#include <gtest/gtest.h>

namespace {

using namespace unihpf;

TEST(VocabLayout, ReservedBlockIsFixed) {
  Vocab v;
  EXPECT_EQ(v.size(), kFirstTextId);
  EXPECT_EQ(v.token(kPadId), "[PAD]");
  EXPECT_EQ(v.token(kUnkId), "[UNK]");
  EXPECT_EQ(v.token(kClsId), "[CLS]");
  EXPECT_EQ(v.token(kSepId), "[SEP]");
  EXPECT_EQ(v.token(kMaskId), "[MASK]");
  EXPECT_EQ(v.token(time_id(0)), "[TIME_0]");
  EXPECT_EQ(v.token(time_id(19)), "[TIME_19]");
  EXPECT_EQ(kDpeBase, 25);
  EXPECT_EQ(kNumDpe, 110);
  EXPECT_EQ(v.token(dpe_id(0, -4)), "[DPE_0_-4]");
  EXPECT_EQ(v.token(dpe_id(9, 6)), "[DPE_9_6]");
  EXPECT_EQ(v.token(kNegId), "[NEG]");
  EXPECT_EQ(kFirstTextId, 136);
}

TEST(VocabLayout, FileRoundTripAndValidation) {
  Vocab v;
  v.add_piece("hello");
  v.add_piece("##lo");
  std::string text = v.to_text();
  Vocab w = Vocab::from_text(text);
  EXPECT_EQ(w.size(), v.size());
  EXPECT_EQ(w.piece_id("hello"), v.piece_id("hello"));
  EXPECT_EQ(w.hash(), v.hash());

  // corrupt a reserved line
  std::string bad = text;
  bad.replace(bad.find("[CLS]"), 5, "[XXX]");
  EXPECT_THROW(Vocab::from_text(bad), DataError);
  EXPECT_THROW(Vocab::from_text(text + "hello\n"), DataError);  // duplicate
}

// hand-run merge sequence on a one-word corpus
TEST(BpeTrainer, SingleWordCorpusLearnsExpectedMerge) {
  // words: {"aa": 3}; alphabet {"##a", "a"}; one merge available: a + ##a -> aa
  Vocab v = train_vocab({"aa aa aa"}, kFirstTextId + 3);
  EXPECT_EQ(v.size(), kFirstTextId + 3);
  EXPECT_EQ(v.piece_id("##a"), kFirstTextId);      // alphabet is added sorted
  EXPECT_EQ(v.piece_id("a"), kFirstTextId + 1);
  EXPECT_EQ(v.piece_id("aa"), kFirstTextId + 2);   // the learned merge
  EXPECT_EQ(tokenize_text(v, "aa"), (std::vector<int>{v.piece_id("aa")}));
  EXPECT_EQ(tokenize_text(v, "aaa"),
            (std::vector<int>{v.piece_id("aa"), v.piece_id("##a")}));
  EXPECT_EQ(tokenize_text(v, "b"), (std::vector<int>{kUnkId}));
}

// hand-run: pair frequencies decide merge order, ties go lexicographic
TEST(BpeTrainer, MergeOrderFollowsPairFrequency) {
  // words: ab x3, abc x1 -> pairs (a,##b):4 first, then (ab,##c):1
  Vocab v = train_vocab({"ab ab ab abc"}, kFirstTextId + 5);
  EXPECT_EQ(v.piece_id("ab"), kFirstTextId + 3);
  EXPECT_EQ(v.piece_id("abc"), kFirstTextId + 4);
  EXPECT_EQ(tokenize_text(v, "abc"), (std::vector<int>{v.piece_id("abc")}));
  EXPECT_EQ(tokenize_text(v, "ABC"), (std::vector<int>{v.piece_id("abc")}));  // lowercased
}

TEST(BpeTrainer, DeterministicAcrossRuns) {
  std::vector<std::string> corpus = {"sodium chloride 0.9 %", "potassium chloride solution",
                                     "sodium bicarbonate", "calcium chloride"};
  Vocab a = train_vocab(corpus, kFirstTextId + 40);
  Vocab b = train_vocab(corpus, kFirstTextId + 40);
  EXPECT_EQ(a.to_text(), b.to_text());
  EXPECT_EQ(a.hash(), b.hash());
}

TEST(BpeTrainer, RejectsTooSmallTarget) {
  EXPECT_THROW(train_vocab({"x"}, kFirstTextId), ConfigError);
  EXPECT_THROW(train_vocab({"   "}, kFirstTextId + 5), DataError);
}

TEST(Tokenizer, GreedyPrefersLongestPiece) {
  Vocab v;
  v.add_piece("trans");
  v.add_piece("transfusion");
  v.add_piece("##fusion");
  EXPECT_EQ(tokenize_text(v, "transfusion"), (std::vector<int>{v.piece_id("transfusion")}));
  EXPECT_EQ(tokenize_text(v, "transfusions"), (std::vector<int>{kUnkId}));  // no ##s
  v.add_piece("##s");
  EXPECT_EQ(tokenize_text(v, "transfusions"),
            (std::vector<int>{v.piece_id("transfusion"), v.piece_id("##s")}));
}

TEST(Tokenizer, NeverEmitsReservedIdsFromText) {
  Vocab v = train_vocab({"pad unk cls [pad] [unk] time dpe"}, kFirstTextId + 60);
  for (const auto& text : {"[PAD]", "[pad]", "[TIME_3]", "[DPE_1_2]"}) {
    auto ids = tokenize_text(v, text);
    for (int id : ids) EXPECT_TRUE(id >= kFirstTextId || id == kUnkId) << text << " -> " << id;
  }
}

TEST(Dpe, HandComputedExamples) {
  std::vector<int> ids;
  ASSERT_TRUE(encode_numeric_dpe("120.5", ids));
  EXPECT_EQ(ids, (std::vector<int>{dpe_id(1, 2), dpe_id(2, 1), dpe_id(0, 0), dpe_id(5, -1)}));

  ids.clear();
  ASSERT_TRUE(encode_numeric_dpe("0", ids));
  EXPECT_EQ(ids, (std::vector<int>{dpe_id(0, 0)}));

  ids.clear();
  ASSERT_TRUE(encode_numeric_dpe("007", ids));
  EXPECT_EQ(ids, (std::vector<int>{dpe_id(7, 0)}));  // leading zeros stripped

  ids.clear();
  ASSERT_TRUE(encode_numeric_dpe("-3.25", ids));
  EXPECT_EQ(ids, (std::vector<int>{kNegId, dpe_id(3, 0), dpe_id(2, -1), dpe_id(5, -2)}));

  ids.clear();
  ASSERT_TRUE(encode_numeric_dpe("1.50", ids));
  EXPECT_EQ(ids, (std::vector<int>{dpe_id(1, 0), dpe_id(5, -1)}));

  ids.clear();
  EXPECT_FALSE(encode_numeric_dpe("n/a", ids));
  EXPECT_FALSE(encode_numeric_dpe("1.2.3", ids));
  EXPECT_FALSE(encode_numeric_dpe("", ids));
}

TEST(Dpe, ClampsOutOfRangeDigits) {
  DpeWarnings warn;
  std::vector<int> ids;
  ASSERT_TRUE(encode_numeric_dpe("123456789", ids, &warn));  // 9 integer digits
  EXPECT_EQ(warn.saturated, 1);
  EXPECT_EQ(ids.size(), 7u);
  EXPECT_EQ(ids.front(), dpe_id(9, 6));

  ids.clear();
  ASSERT_TRUE(encode_numeric_dpe("0.123456", ids, &warn));
  EXPECT_EQ(warn.truncated, 1);
  EXPECT_EQ(ids, (std::vector<int>{dpe_id(0, 0), dpe_id(1, -1), dpe_id(2, -2), dpe_id(3, -3),
                                   dpe_id(4, -4)}));
}

// independent oracle: the scaled integer value comes straight from the string
int64_t scaled_from_string(const std::string& s) {
  bool neg = s[0] == '-';
  std::string t = neg ? s.substr(1) : s;
  size_t dot = t.find('.');
  std::string ip = dot == std::string::npos ? t : t.substr(0, dot);
  std::string fp = dot == std::string::npos ? "" : t.substr(dot + 1);
  fp.resize(4, '0');
  int64_t v = std::stoll(ip) * 10000 + std::stoll("0" + fp);
  return neg ? -v : v;
}

TEST(Dpe, RoundTripOnRandomDecimals) {
  Rng rng(7);
  for (int it = 0; it < 1000; ++it) {
    int int_digits = 1 + static_cast<int>(rng.uniform_int(static_cast<uint64_t>(7)));
    int frac_digits = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(5)));
    std::string s;
    if (rng.bernoulli(0.3)) s += "-";
    for (int i = 0; i < int_digits; ++i)
      s += static_cast<char>('0' + rng.uniform_int(static_cast<uint64_t>(10)));
    if (frac_digits > 0) {
      s += ".";
      for (int i = 0; i < frac_digits; ++i)
        s += static_cast<char>('0' + rng.uniform_int(static_cast<uint64_t>(10)));
    }
    std::vector<int> ids;
    ASSERT_TRUE(encode_numeric_dpe(s, ids)) << s;
    int64_t scaled = 0;
    ASSERT_TRUE(decode_dpe(ids, scaled)) << s;
    EXPECT_EQ(scaled, scaled_from_string(s)) << s;
  }
}

// independent quantile route per boundary via nth_element
int bucket_oracle(const std::vector<double>& train, double t) {
  std::vector<double> v = train;
  int b = 0;
  for (int k = 1; k < kNumTimeBuckets; ++k) {
    size_t idx = (static_cast<size_t>(k) * v.size() + 19) / 20 - 1;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(idx), v.end());
    if (v[idx] < t) ++b;
  }
  return b;
}

TEST(TimeBuckets, UniformGridExamples) {
  std::vector<double> train;
  for (int i = 1; i <= 100; ++i) train.push_back(i);
  TimeBuckets tb = TimeBuckets::fit(train);
  EXPECT_EQ(tb.bucket(1), 0);
  EXPECT_EQ(tb.bucket(50), 9);
  EXPECT_EQ(tb.bucket(100), 19);
  EXPECT_EQ(tb.bucket(-5), 0);     // clamp low
  EXPECT_EQ(tb.bucket(1e9), 19);   // clamp high
}

TEST(TimeBuckets, DegenerateAllEqual) {
  TimeBuckets tb = TimeBuckets::fit(std::vector<double>(40, 3.0));
  EXPECT_EQ(tb.bucket(3.0), 0);
  EXPECT_EQ(tb.bucket(2.9), 0);
  EXPECT_EQ(tb.bucket(3.1), 19);
}

TEST(TimeBuckets, MatchesOracleAndMonotone) {
  Rng rng(11);
  for (int it = 0; it < 200; ++it) {
    size_t n = 20 + rng.uniform_int(static_cast<uint64_t>(200));
    std::vector<double> train(n);
    for (auto& x : train) x = std::floor(rng.uniform(0, 300));
    TimeBuckets tb = TimeBuckets::fit(train);
    int prev = 0;
    for (double t = -10; t <= 310; t += 7.3) {
      int b = tb.bucket(t);
      EXPECT_EQ(b, bucket_oracle(train, t));
      EXPECT_GE(b, prev);  // monotone in t
      EXPECT_GE(b, 0);
      EXPECT_LE(b, 19);
      prev = b;
    }
  }
}

TEST(TimeBuckets, FileRoundTrip) {
  std::vector<double> train;
  for (int i = 0; i < 60; ++i) train.push_back(i * 1.5);
  TimeBuckets tb = TimeBuckets::fit(train);
  TimeBuckets back = TimeBuckets::from_text(tb.to_text());
  EXPECT_EQ(back.boundaries(), tb.boundaries());
  EXPECT_THROW(TimeBuckets::from_text("1\n2\n3\n"), DataError);
  std::string desc;
  for (int i = 19; i >= 1; --i) desc += std::to_string(i) + "\n";
  EXPECT_THROW(TimeBuckets::from_text(desc), DataError);
}

}  // namespace
