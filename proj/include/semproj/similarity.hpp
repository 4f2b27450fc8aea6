// Alignment-based cross-lingual similarity, the -log weight transform, and the
// word filters (NA: non-aligned, NC: non-content) expressed as exclusion masks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "semproj/corpus.hpp"
#include "semproj/errors.hpp"

namespace semproj {

enum class Side { Source, Target };
enum class Direction { SrcToTgt, TgtToSrc };

inline Side opposite(Side s) { return s == Side::Source ? Side::Target : Side::Source; }

/// Default weight for zero-similarity links.
inline constexpr double kDefaultBig = 1e6;

/// Words on the opposite side linked to the yield of `c`. `tree` lives on the
/// side the direction starts from.
inline std::vector<int> aligned_words(const ParseTree& tree, const Constituent& c,
                                      const WordAlignment& al, Direction direction) {
  std::vector<int> out;
  for (int i : yield_of(tree, c)) {
    for (const auto& [s, t] : al.links) {
      if (direction == Direction::SrcToTgt && s == i) out.push_back(t);
      if (direction == Direction::TgtToSrc && t == i) out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Binary word similarity: 1 iff the pair is linked.
inline double word_sim(int i, int j, const WordAlignment& al) {
  return al.contains(i, j) ? 1.0 : 0.0;
}

struct FilterConfig {
  // PTB and TIGER prefixes for adjectives, adverbs, verbs and nouns.
  std::vector<std::string> content_pos_prefixes = {"JJ",  "RB", "VB", "NN", "ADJ",
                                                   "ADV", "VV", "VA", "VM", "NE"};
  bool na = false;
  bool nc = false;

  bool is_content(const std::string& pos) const {
    for (const auto& p : content_pos_prefixes)
      if (pos.compare(0, p.size(), p) == 0) return true;
    return false;
  }
};

/// A bi-sentence seen through word filters. Token indices stay those of the
/// underlying sentences; excluded tokens vanish from yields and from al(.),
/// and `links` holds the alignment links still usable for similarity.
class BiSentenceView {
 public:
  explicit BiSentenceView(const BiSentence& base)
      : base_(&base),
        src_excluded_(static_cast<std::size_t>(base.alignment.n_src), false),
        tgt_excluded_(static_cast<std::size_t>(base.alignment.n_tgt), false),
        links_(base.alignment) {}

  const BiSentence& base() const { return *base_; }
  const WordAlignment& links() const { return links_; }
  bool excluded(Side side, int i) const {
    const auto& mask = side == Side::Source ? src_excluded_ : tgt_excluded_;
    return mask[static_cast<std::size_t>(i)];
  }
  int excluded_count(Side side) const {
    const auto& mask = side == Side::Source ? src_excluded_ : tgt_excluded_;
    return static_cast<int>(std::count(mask.begin(), mask.end(), true));
  }

  friend BiSentenceView na_filter(const BiSentenceView& view);
  friend BiSentenceView nc_filter(const BiSentenceView& view, const FilterConfig& cfg);

  friend bool operator==(const BiSentenceView& a, const BiSentenceView& b) {
    return a.base_ == b.base_ && a.src_excluded_ == b.src_excluded_ &&
           a.tgt_excluded_ == b.tgt_excluded_ && a.links_ == b.links_;
  }

 private:
  const BiSentence* base_;
  std::vector<bool> src_excluded_;
  std::vector<bool> tgt_excluded_;
  WordAlignment links_;
};

/// Excludes every token without an alignment link. Links are untouched.
inline BiSentenceView na_filter(const BiSentenceView& view) {
  BiSentenceView out = view;
  std::vector<bool> src_aligned(out.src_excluded_.size(), false);
  std::vector<bool> tgt_aligned(out.tgt_excluded_.size(), false);
  for (const auto& [s, t] : out.links_.links) {
    src_aligned[static_cast<std::size_t>(s)] = true;
    tgt_aligned[static_cast<std::size_t>(t)] = true;
  }
  for (std::size_t i = 0; i < src_aligned.size(); ++i)
    if (!src_aligned[i]) out.src_excluded_[i] = true;
  for (std::size_t i = 0; i < tgt_aligned.size(); ++i)
    if (!tgt_aligned[i]) out.tgt_excluded_[i] = true;
  return out;
}

inline BiSentenceView na_filter(const BiSentence& b) { return na_filter(BiSentenceView(b)); }

/// Excludes non-content tokens on both sides together with their links.
inline BiSentenceView nc_filter(const BiSentenceView& view, const FilterConfig& cfg) {
  if (cfg.content_pos_prefixes.empty())
    throw ConfigError("NC filter needs a non-empty set of content POS prefixes");
  BiSentenceView out = view;
  auto mark = [&](const Sentence& sent, std::vector<bool>& mask, const char* side) {
    if (sent.size() != static_cast<int>(mask.size()))
      throw IntegrityError(std::string(side) + " sentence length does not match alignment");
    for (const auto& tok : sent.tokens) {
      if (tok.pos.empty())
        throw FormatError(std::string("NC filter: missing POS tag on ") + side + " token " +
                          std::to_string(tok.index));
      if (!cfg.is_content(tok.pos)) mask[static_cast<std::size_t>(tok.index)] = true;
    }
  };
  mark(view.base().src, out.src_excluded_, "source");
  mark(view.base().tgt, out.tgt_excluded_, "target");
  std::erase_if(out.links_.links, [&](const Link& l) {
    return out.src_excluded_[static_cast<std::size_t>(l.first)] ||
           out.tgt_excluded_[static_cast<std::size_t>(l.second)];
  });
  return out;
}

inline BiSentenceView nc_filter(const BiSentence& b, const FilterConfig& cfg) {
  return nc_filter(BiSentenceView(b), cfg);
}

/// Applies the word filters selected in `cfg` (NC before NA).
inline BiSentenceView apply_word_filters(const BiSentence& b, const FilterConfig& cfg) {
  BiSentenceView view(b);
  if (cfg.nc) view = nc_filter(view, cfg);
  if (cfg.na) view = na_filter(view);
  return view;
}

/// Dense similarity matrix; rows are source units, columns target units.
struct SimilarityMatrix {
  std::vector<int> src_units;
  std::vector<int> tgt_units;
  std::vector<double> sim;

  SimilarityMatrix() = default;
  SimilarityMatrix(std::vector<int> src, std::vector<int> tgt)
      : src_units(std::move(src)), tgt_units(std::move(tgt)), sim(src_units.size() * tgt_units.size(), 0.0) {}

  /// Units are 0..rows-1 and 0..cols-1.
  static SimilarityMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    std::vector<int> s, t;
    for (std::size_t i = 0; i < rows.size(); ++i) s.push_back(static_cast<int>(i));
    if (!rows.empty())
      for (std::size_t j = 0; j < rows.front().size(); ++j) t.push_back(static_cast<int>(j));
    SimilarityMatrix m(s, t);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != t.size()) throw FormatError("ragged similarity matrix");
      for (std::size_t j = 0; j < t.size(); ++j) m.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
    return m;
  }

  int rows() const { return static_cast<int>(src_units.size()); }
  int cols() const { return static_cast<int>(tgt_units.size()); }
  double& at(int i, int j) { return sim[static_cast<std::size_t>(i * cols() + j)]; }
  double at(int i, int j) const { return sim[static_cast<std::size_t>(i * cols() + j)]; }
};

struct WeightMatrix {
  std::vector<int> src_units;
  std::vector<int> tgt_units;
  std::vector<double> weight;
  double big = kDefaultBig;

  int rows() const { return static_cast<int>(src_units.size()); }
  int cols() const { return static_cast<int>(tgt_units.size()); }
  double at(int i, int j) const { return weight[static_cast<std::size_t>(i * cols() + j)]; }
};

/// min(-ln sim, big) per entry.
inline double sim_to_weight(double sim, double big) {
  if (sim <= 0.0) return big;
  return std::min(0.0 - std::log(sim), big);
}

inline WeightMatrix to_weights(const SimilarityMatrix& m, double big = kDefaultBig) {
  if (!(big > 0.0)) throw ConfigError("big must be positive");
  WeightMatrix w{m.src_units, m.tgt_units, {}, big};
  w.weight.reserve(m.sim.size());
  for (double s : m.sim) {
    if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("similarity outside [0,1]");
    w.weight.push_back(sim_to_weight(s, big));
  }
  return w;
}

/// Jaccard coefficient of two sorted index sets; 0 when both are empty.
inline double jaccard(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t inter = 0, i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++inter, ++i, ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

/// Constituent overlap and similarity over a filtered bi-sentence with both
/// trees present. Filtered yields and aligned-word sets are precomputed per node.
class SimilarityContext {
 public:
  explicit SimilarityContext(const BiSentenceView& view) : view_(view) {
    const auto& b = view.base();
    if (!b.src_tree || !b.tgt_tree)
      throw ConfigError("constituent similarity needs source and target trees");
    build(Side::Source, *b.src_tree);
    build(Side::Target, *b.tgt_tree);
  }

  const BiSentenceView& view() const { return view_; }
  const ParseTree& tree(Side side) const {
    return side == Side::Source ? *view_.base().src_tree : *view_.base().tgt_tree;
  }

  /// Yield of node `id` minus excluded tokens.
  const std::vector<int>& filtered_yield(Side side, int id) const {
    return per_side(side).yields[static_cast<std::size_t>(id)];
  }
  /// Tokens on the opposite side linked (through unfiltered links) to the filtered yield.
  const std::vector<int>& aligned(Side side, int id) const {
    return per_side(side).aligned[static_cast<std::size_t>(id)];
  }

  /// o(a, b) with `a` on `from` and `b` on the opposite side.
  double overlap(Side from, const Constituent& a, const Constituent& b) const {
    if (a.is_empty || b.is_empty) return 0.0;
    return jaccard(aligned(from, a.id), filtered_yield(opposite(from), b.id));
  }

  double sim(const Constituent& cs, const Constituent& ct) const {
    if (cs.is_empty || ct.is_empty) return 0.0;
    return (overlap(Side::Source, cs, ct) + overlap(Side::Target, ct, cs)) / 2.0;
  }

  SimilarityMatrix matrix(const std::vector<int>& src_ids, const std::vector<int>& tgt_ids) const {
    SimilarityMatrix m(src_ids, tgt_ids);
    const auto& st = tree(Side::Source);
    const auto& tt = tree(Side::Target);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        m.at(i, j) = sim(st.node(src_ids[static_cast<std::size_t>(i)]),
                         tt.node(tgt_ids[static_cast<std::size_t>(j)]));
    return m;
  }

 private:
  struct PerSide {
    std::vector<std::vector<int>> yields;
    std::vector<std::vector<int>> aligned;
  };

  const PerSide& per_side(Side side) const { return side == Side::Source ? src_ : tgt_; }

  void build(Side side, const ParseTree& t) {
    PerSide& ps = side == Side::Source ? src_ : tgt_;
    std::vector<std::vector<int>> partners(static_cast<std::size_t>(t.sentence().size()));
    for (const auto& [s, tg] : view_.links().links) {
      int here = side == Side::Source ? s : tg;
      int there = side == Side::Source ? tg : s;
      if (here < static_cast<int>(partners.size()))
        partners[static_cast<std::size_t>(here)].push_back(there);
    }
    for (const auto& c : t.nodes()) {
      std::vector<int> y, al;
      for (int i : yield_of(t, c)) {
        if (view_.excluded(side, i)) continue;
        y.push_back(i);
        const auto& p = partners[static_cast<std::size_t>(i)];
        al.insert(al.end(), p.begin(), p.end());
      }
      std::sort(al.begin(), al.end());
      al.erase(std::unique(al.begin(), al.end()), al.end());
      ps.yields.push_back(std::move(y));
      ps.aligned.push_back(std::move(al));
    }
  }

  BiSentenceView view_;
  PerSide src_;
  PerSide tgt_;
};

/// Source-to-target word overlap o(c_s, c_t).
inline double overlap(const SimilarityContext& ctx, const Constituent& cs, const Constituent& ct) {
  return ctx.overlap(Side::Source, cs, ct);
}

/// Mean of the two directed overlaps.
inline double constituent_sim(const SimilarityContext& ctx, const Constituent& cs,
                              const Constituent& ct) {
  return ctx.sim(cs, ct);
}

}  // namespace semproj
