#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "semproj/corpus.hpp"
#include "semproj/fixtures.hpp"
#include "semproj/similarity.hpp"

using namespace semproj;

namespace {

BiSentence figure1() {
  auto f = fixtures::figure1();
  BiSentence b;
  b.src_tree = parse_tree(f.src_trees.substr(0, f.src_trees.size() - 1));
  b.tgt_tree = parse_tree(f.tgt_trees.substr(0, f.tgt_trees.size() - 1));
  b.src = b.src_tree->sentence();
  b.tgt = b.tgt_tree->sentence();
  b.alignment = parse_alignment("0-0 1-1 2-4 5-3", b.src.size(), b.tgt.size());
  return b;
}

const Constituent& find(const ParseTree& t, const std::string& label, Span span) {
  for (const auto& c : t.nodes())
    if (c.label == label && c.span == span) return c;
  throw std::runtime_error("no such node");
}

// Same bi-sentence seen from the other language.
BiSentence swapped(const BiSentence& b) {
  BiSentence s;
  s.src = b.tgt;
  s.tgt = b.src;
  s.src_tree = b.tgt_tree;
  s.tgt_tree = b.src_tree;
  s.alignment.n_src = b.alignment.n_tgt;
  s.alignment.n_tgt = b.alignment.n_src;
  for (auto [x, y] : b.alignment.links) s.alignment.links.insert({y, x});
  return s;
}

}  // namespace

TEST(Jaccard, Basics) {
  EXPECT_DOUBLE_EQ(jaccard({1, 2}, {2, 3}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(jaccard({1, 2}, {1, 2}), 1.0);
  EXPECT_DOUBLE_EQ(jaccard({}, {1}), 0.0);
  EXPECT_DOUBLE_EQ(jaccard({}, {}), 0.0);
}

TEST(AlignedWords, ToBeOnTime) {
  auto b = figure1();
  const auto& vp = find(*b.src_tree, "VP", {2, 5});
  EXPECT_EQ(aligned_words(*b.src_tree, vp, b.alignment, Direction::SrcToTgt), (std::vector<int>{3, 4}));
  const auto& s = find(*b.tgt_tree, "S", {3, 5});
  EXPECT_EQ(aligned_words(*b.tgt_tree, s, b.alignment, Direction::TgtToSrc), (std::vector<int>{2, 5}));
}

TEST(Overlap, FigureOnePair) {
  auto b = figure1();
  BiSentenceView view(b);
  SimilarityContext ctx(view);
  const auto& cs = find(*b.src_tree, "VP", {2, 5});
  const auto& ct = find(*b.tgt_tree, "S", {3, 5});
  EXPECT_NEAR(overlap(ctx, cs, ct), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(ctx.overlap(Side::Target, ct, cs), 0.5, 1e-12);
  EXPECT_NEAR(constituent_sim(ctx, cs, ct), 7.0 / 12.0, 1e-12);
}

TEST(Overlap, IdenticalYieldGivesOne) {
  auto b = figure1();
  SimilarityContext ctx{BiSentenceView(b)};
  const auto& kim_s = find(*b.src_tree, "NP", {0, 0});
  const auto& kim_t = find(*b.tgt_tree, "NP", {0, 0});
  EXPECT_DOUBLE_EQ(constituent_sim(ctx, kim_s, kim_t), 1.0);
}

TEST(Overlap, UnalignedConstituentGivesZero) {
  auto b = figure1();
  SimilarityContext ctx{BiSentenceView(b)};
  const auto& on = find(*b.src_tree, "IN", {4, 4});
  for (const auto& ct : b.tgt_tree->nodes()) EXPECT_EQ(overlap(ctx, on, ct), 0.0);
}

TEST(Overlap, EmptyPaddingNodeGivesZero) {
  auto b = figure1();
  SimilarityContext ctx{BiSentenceView(b)};
  Constituent empty;
  empty.is_empty = true;
  EXPECT_EQ(constituent_sim(ctx, empty, b.tgt_tree->root()), 0.0);
  EXPECT_EQ(constituent_sim(ctx, b.src_tree->root(), empty), 0.0);
}

TEST(Overlap, EmptyAlignmentGivesZeroEverywhere) {
  auto b = figure1();
  b.alignment.links.clear();
  SimilarityContext ctx{BiSentenceView(b)};
  for (const auto& cs : b.src_tree->nodes())
    for (const auto& ct : b.tgt_tree->nodes()) EXPECT_EQ(constituent_sim(ctx, cs, ct), 0.0);
}

TEST(Overlap, SymmetricUnderSwappingSides) {
  auto b = figure1();
  auto s = swapped(b);
  SimilarityContext fwd{BiSentenceView(b)};
  SimilarityContext bwd{BiSentenceView(s)};
  for (const auto& cs : b.src_tree->nodes())
    for (const auto& ct : b.tgt_tree->nodes())
      EXPECT_NEAR(constituent_sim(fwd, cs, ct), constituent_sim(bwd, ct, cs), 1e-15);
}

TEST(Overlap, RandomAlignmentsStayInUnitInterval) {
  auto b = figure1();
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    b.alignment.links.clear();
    for (int i = 0; i < b.src.size(); ++i)
      for (int j = 0; j < b.tgt.size(); ++j)
        if (rng() % 4 == 0) b.alignment.links.insert({i, j});
    SimilarityContext ctx{BiSentenceView(b)};
    for (const auto& cs : b.src_tree->nodes())
      for (const auto& ct : b.tgt_tree->nodes()) {
        double o = overlap(ctx, cs, ct);
        ASSERT_GE(o, 0.0);
        ASSERT_LE(o, 1.0);
        if (o == 1.0) {
          EXPECT_EQ(ctx.aligned(Side::Source, cs.id), ctx.filtered_yield(Side::Target, ct.id));
        }
      }
  }
}

TEST(Context, NeedsBothTrees) {
  auto b = figure1();
  b.tgt_tree.reset();
  EXPECT_THROW(SimilarityContext{BiSentenceView(b)}, ConfigError);
}

TEST(Filters, NaExcludesUnalignedTokens) {
  auto b = figure1();
  auto v = na_filter(b);
  EXPECT_TRUE(v.excluded(Side::Source, 3));   // be
  EXPECT_TRUE(v.excluded(Side::Source, 4));   // on
  EXPECT_FALSE(v.excluded(Side::Source, 2));  // to
  EXPECT_TRUE(v.excluded(Side::Target, 2));   // ,
  EXPECT_TRUE(v.excluded(Side::Target, 5));   // kommen
  EXPECT_EQ(v.excluded_count(Side::Source), 2);
  EXPECT_EQ(v.links(), b.alignment);
}

TEST(Filters, NaChangesFigureOneSimilarity) {
  auto b = figure1();
  SimilarityContext ctx(na_filter(b));
  const auto& cs = find(*b.src_tree, "VP", {2, 5});
  const auto& ct = find(*b.tgt_tree, "S", {3, 5});
  // Filtered yields: {to, time} and {pünktlich, zu}, each fully aligned to the other.
  EXPECT_DOUBLE_EQ(constituent_sim(ctx, cs, ct), 1.0);
}

TEST(Filters, NcDropsFunctionWordsAndTheirLinks) {
  auto b = figure1();
  FilterConfig cfg;
  auto v = nc_filter(b, cfg);
  EXPECT_FALSE(v.excluded(Side::Source, 0));  // Kim NNP
  EXPECT_TRUE(v.excluded(Side::Source, 2));   // to TO
  EXPECT_TRUE(v.excluded(Side::Source, 4));   // on IN
  EXPECT_FALSE(v.excluded(Side::Target, 0));  // Kim NE
  EXPECT_TRUE(v.excluded(Side::Target, 4));   // zu PTKZU
  EXPECT_FALSE(v.links().contains(2, 4));
  EXPECT_TRUE(v.links().contains(5, 3));
}

TEST(Filters, NcNeedsPos) {
  auto b = figure1();
  for (auto& t : b.tgt.tokens) t.pos.clear();
  b.tgt_tree.reset();
  EXPECT_THROW(nc_filter(b, FilterConfig{}), FormatError);
}

TEST(Filters, Idempotent) {
  auto b = figure1();
  FilterConfig cfg;
  auto na = na_filter(b);
  EXPECT_EQ(na_filter(na), na);
  auto nc = nc_filter(b, cfg);
  EXPECT_EQ(nc_filter(nc, cfg), nc);
  auto both = apply_word_filters(b, cfg);
  EXPECT_EQ(apply_word_filters(b, cfg), both);
}

TEST(Weights, NegativeLog) {
  auto m = SimilarityMatrix::from_rows({{0.5, 1.0, 0.0}});
  auto w = to_weights(m);
  EXPECT_NEAR(w.at(0, 0), std::log(2.0), 1e-15);
  EXPECT_EQ(w.at(0, 1), 0.0);
  EXPECT_FALSE(std::signbit(w.at(0, 1)));
  EXPECT_EQ(w.at(0, 2), kDefaultBig);
}

TEST(Weights, BigCapsTinySimilarities) {
  auto w = to_weights(SimilarityMatrix::from_rows({{1e-300}}), 10.0);
  EXPECT_EQ(w.at(0, 0), 10.0);
}

TEST(Weights, InvalidInput) {
  EXPECT_THROW(to_weights(SimilarityMatrix::from_rows({{1.5}})), ValidationError);
  EXPECT_THROW(to_weights(SimilarityMatrix::from_rows({{-0.1}})), ValidationError);
  EXPECT_THROW(to_weights(SimilarityMatrix::from_rows({{0.5}}), 0.0), ConfigError);
}

TEST(Weights, MonotoneInSimilarity) {
  double prev = kDefaultBig;
  for (double s = 0.01; s <= 1.0; s += 0.01) {
    double w = sim_to_weight(s, kDefaultBig);
    EXPECT_LT(w, prev);
    prev = w;
  }
}
