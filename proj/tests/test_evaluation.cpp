#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "semproj/driver.hpp"
#include "semproj/evaluation.hpp"
#include "semproj/fixtures.hpp"

using namespace semproj;

namespace {

// Independent reference: for every label, count how many predicted token sets
// can be paired one-to-one with equal gold token sets.
Counts count_by_hand(const std::vector<RoleAnnotation>& gold, const std::vector<RoleAnnotation>& pred) {
  Counts c;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    std::multiset<std::pair<std::string, std::set<int>>> g, p;
    for (const auto& r : gold[k].roles) g.insert({r.label, to_tokens(r.spans)});
    for (const auto& r : pred[k].roles) p.insert({r.label, to_tokens(r.spans)});
    long tp = 0;
    for (auto it = p.begin(); it != p.end(); ++it) {
      auto hit = g.find(*it);
      if (hit != g.end()) {
        ++tp;
        g.erase(hit);
      }
    }
    c.tp += tp;
    c.fp += static_cast<long>(pred[k].roles.size()) - tp;
    c.fn += static_cast<long>(gold[k].roles.size()) - tp;
  }
  return c;
}

RoleAnnotation ann(int k, std::vector<Role> roles) { return RoleAnnotation{k, "F", 0, std::move(roles)}; }

std::vector<RoleAnnotation> toy_gold() { return parse_roles_file(fixtures::toy_corpus().tgt_roles); }

// Hand-made predictions against the toy gold.
std::vector<RoleAnnotation> toy_prediction() {
  auto p = toy_gold();
  p[0].roles[1].spans = {{2, 2}};                    // THEME too short
  p[1].roles[1].spans = {{3, 4}};                    // MESSAGE misses "kommen"
  p[3].roles.clear();                                // nothing projected
  p[4].roles.push_back(Role{"MANNER", {{3, 3}}});    // duplicate prediction
  return p;
}

}  // namespace

TEST(Score, Identical) {
  auto gold = std::vector{ann(1, {{"A", {{0, 1}}}})};
  auto r = score(gold, gold);
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(r.recall, 1.0);
  EXPECT_EQ(r.f1, 1.0);
}

TEST(Score, OffByOneSpan) {
  auto r = score({ann(1, {{"A", {{0, 1}}}})}, {ann(1, {{"A", {{0, 2}}}})});
  EXPECT_EQ(r.total, (Counts{0, 1, 1}));
}

TEST(Score, HalfRight) {
  auto gold = std::vector{ann(1, {{"A", {{0, 1}}}, {"B", {{3, 3}}}})};
  auto pred = std::vector{ann(1, {{"A", {{0, 1}}}, {"C", {{3, 3}}}})};
  auto r = score(gold, pred);
  EXPECT_DOUBLE_EQ(r.precision, 0.5);
  EXPECT_DOUBLE_EQ(r.recall, 0.5);
  EXPECT_DOUBLE_EQ(r.f1, 0.5);
}

TEST(Score, SpanSetsCompareAsTokens) {
  auto r = score({ann(1, {{"A", {{0, 1}, {2, 3}}}})}, {ann(1, {{"A", {{0, 3}}}})});
  EXPECT_EQ(r.total.tp, 1);
}

TEST(Score, DuplicatePredictionsCountOnce) {
  auto r = score({ann(1, {{"A", {{0, 0}}}})}, {ann(1, {{"A", {{0, 0}}}, {"A", {{0, 0}}}})});
  EXPECT_EQ(r.total, (Counts{1, 1, 0}));
}

TEST(Score, EmptyDenominatorsGiveZero) {
  auto r = score({ann(1, {})}, {ann(1, {})});
  EXPECT_EQ(r.precision, 0.0);
  EXPECT_EQ(r.recall, 0.0);
  EXPECT_EQ(r.f1, 0.0);
}

TEST(Score, LengthMismatch) {
  EXPECT_THROW(score({ann(1, {})}, std::vector<RoleAnnotation>{}), FormatError);
}

TEST(Score, ToyCorpusAgainstHandCount) {
  auto gold = toy_gold();
  auto pred = toy_prediction();
  auto r = score(gold, pred);
  EXPECT_EQ(r.total, count_by_hand(gold, pred));
  EXPECT_EQ(r.total, (Counts{8, 3, 4}));
  EXPECT_EQ(format_fixed(r.precision, 3), "0.727");
  EXPECT_EQ(format_fixed(r.recall, 3), "0.667");
  EXPECT_EQ(format_fixed(r.f1, 3), "0.696");
  ASSERT_EQ(r.per_sentence.size(), 5u);
  EXPECT_EQ(r.per_sentence[3], (Counts{0, 0, 2}));
}

TEST(Score, SwappingGoldAndPredSwapsPrecisionAndRecall) {
  auto gold = toy_gold();
  auto pred = toy_prediction();
  auto a = score(gold, pred), b = score(pred, gold);
  EXPECT_EQ(a.precision, b.recall);
  EXPECT_EQ(a.recall, b.precision);
  EXPECT_EQ(a.f1, b.f1);
  EXPECT_GE(a.f1, std::min(a.precision, a.recall));
  EXPECT_LE(a.f1, std::max(a.precision, a.recall));
}

TEST(Score, MicroAveraged) {
  auto gold = std::vector{ann(1, {{"A", {{0, 0}}}}), ann(2, {{"A", {{0, 0}}}, {"B", {{1, 1}}}, {"C", {{2, 2}}}})};
  auto pred = std::vector{ann(1, {{"A", {{0, 0}}}}), ann(2, {})};
  auto r = score(gold, pred);
  EXPECT_DOUBLE_EQ(r.recall, 0.25);  // a per-sentence mean would give 0.5
}

TEST(SigTest, IdenticalSystems) {
  auto gold = toy_gold();
  auto pred = toy_prediction();
  auto r = stratified_shuffling(gold, pred, pred, 1000, 3);
  EXPECT_EQ(r.observed_delta_f1, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(SigTest, PerfectVersusAlwaysWrong) {
  std::vector<RoleAnnotation> gold, good, bad;
  for (int k = 1; k <= 50; ++k) {
    gold.push_back(ann(k, {{"A", {{0, 1}}}, {"B", {{3, 4}}}}));
    good.push_back(gold.back());
    bad.push_back(ann(k, {{"A", {{2, 2}}}}));
  }
  auto r = stratified_shuffling(gold, good, bad, 10000, 42);
  EXPECT_EQ(r.observed_delta_f1, 1.0);
  EXPECT_LT(r.p_value, 0.01);
  EXPECT_GT(r.p_value, 0.0);
}

TEST(SigTest, SameSeedSameResult) {
  auto gold = toy_gold();
  auto pred = toy_prediction();
  auto a = stratified_shuffling(gold, gold, pred, 2000, 9);
  auto b = stratified_shuffling(gold, gold, pred, 2000, 9);
  EXPECT_EQ(a.p_value, b.p_value);
  EXPECT_EQ(a.at_least_as_extreme, b.at_least_as_extreme);
  EXPECT_GT(a.p_value, 0.0);
  EXPECT_LE(a.p_value, 1.0);
}

TEST(SigTest, BadArguments) {
  EXPECT_THROW(stratified_shuffling({}, {}, {}, 10, 1), FormatError);
  auto gold = toy_gold();
  EXPECT_THROW(stratified_shuffling(gold, gold, gold, 0, 1), ConfigError);
}

TEST(SigTest, IterationStreamsAreIndependentOfEachOther) {
  auto a = iteration_engine(5, 10)();
  auto b = iteration_engine(5, 10)();
  auto c = iteration_engine(5, 11)();
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(Correspondence, IsomorphicTreesAreOneToOne) {
  // Every child covers half of its parent, so only the mirror node exceeds 0.5.
  const std::string tree = "(S (NP (DT the) (NN dog)) (VP (VBZ barks) (RB loudly)))";
  auto corpus = load_corpus(CorpusTexts{tree + "\n", tree + "\n", {}, {}, "0-0 1-1 2-2 3-3\n", {}, {}});
  auto s = correspondence_stats(corpus, 0.5);
  EXPECT_EQ(s.src_share(Correspondence::One), 1.0);
  EXPECT_EQ(s.tgt_share(Correspondence::One), 1.0);
}

TEST(Correspondence, UnaryChainsCountAsMany) {
  // NP and PRP share a yield, so each matches two mirror nodes.
  const std::string tree = "(S (NP (PRP we)) (VP (VBP agree)))";
  auto corpus = load_corpus(CorpusTexts{tree + "\n", tree + "\n", {}, {}, "0-0 1-1\n", {}, {}});
  auto s = correspondence_stats(corpus, 0.5);
  EXPECT_EQ(s.src_counts[static_cast<std::size_t>(Correspondence::One)], 1);
  EXPECT_EQ(s.src_counts[static_cast<std::size_t>(Correspondence::Many)], 4);
}

TEST(Correspondence, EmptyAlignmentIsNone) {
  const std::string tree = "(S (NP (NN dog)) (VP (VBZ barks)))";
  auto corpus = load_corpus(CorpusTexts{tree + "\n", tree + "\n", {}, {}, "\n", {}, {}});
  auto s = correspondence_stats(corpus);
  EXPECT_EQ(s.src_share(Correspondence::None), 1.0);
  EXPECT_EQ(s.tgt_share(Correspondence::None), 1.0);
}

TEST(Correspondence, SharesSumToOneOnToyCorpus) {
  auto f = fixtures::toy_corpus();
  auto corpus = load_corpus(CorpusTexts{f.src_trees, f.tgt_trees, {}, {}, f.align, {}, {}});
  auto s = correspondence_stats(corpus);
  double src = 0, tgt = 0;
  for (auto k : {Correspondence::None, Correspondence::One, Correspondence::Many}) {
    src += s.src_share(k);
    tgt += s.tgt_share(k);
  }
  EXPECT_NEAR(src, 1.0, 1e-9);
  EXPECT_NEAR(tgt, 1.0, 1e-9);
  EXPECT_NE(stats_tsv(s).find("threshold"), std::string::npos);
}

TEST(Correspondence, MissingTreeIsConfigError) {
  BiSentence b;
  EXPECT_THROW(correspondence_stats({b}), ConfigError);
}

TEST(Reports, TextAndTsv) {
  auto r = score(toy_gold(), toy_prediction());
  auto text = score_text(r);
  EXPECT_NE(text.find("0.696"), std::string::npos);
  auto tsv = score_tsv(r);
  EXPECT_NE(tsv.find('\t'), std::string::npos);
  auto sig = sigtest_text(stratified_shuffling(toy_gold(), toy_gold(), toy_gold(), 10, 1));
  EXPECT_NE(sig.find("p_value"), std::string::npos);
  EXPECT_NE(sig.find("seed"), std::string::npos);
}
