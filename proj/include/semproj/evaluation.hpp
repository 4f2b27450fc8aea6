// Exact-match labelled precision/recall/F1, approximate randomization by
// stratified shuffling, and constituent correspondence statistics.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "semproj/corpus.hpp"
#include "semproj/errors.hpp"
#include "semproj/projection.hpp"
#include "semproj/similarity.hpp"

namespace semproj {

struct Counts {
  long tp = 0;
  long fp = 0;
  long fn = 0;

  Counts& operator+=(const Counts& o) {
    tp += o.tp, fp += o.fp, fn += o.fn;
    return *this;
  }
  friend bool operator==(const Counts&, const Counts&) = default;
};

struct ScoreReport {
  Counts total;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::vector<Counts> per_sentence;
};

inline double precision_of(const Counts& c) {
  return c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}
inline double recall_of(const Counts& c) {
  return c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}
inline double f1_of(const Counts& c) {
  double p = precision_of(c), r = recall_of(c);
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

/// A predicted role matches a gold role when the label and the covered token
/// set agree exactly. Each gold role absorbs at most one prediction, taken in
/// file order.
inline Counts score_sentence(const RoleAnnotation& gold, const RoleAnnotation& pred) {
  Counts c;
  std::vector<char> used(gold.roles.size(), 0);
  for (const auto& p : pred.roles) {
    auto tokens = to_tokens(p.spans);
    bool hit = false;
    for (std::size_t g = 0; g < gold.roles.size() && !hit; ++g) {
      if (used[g] || gold.roles[g].label != p.label) continue;
      if (to_tokens(gold.roles[g].spans) != tokens) continue;
      used[g] = 1;
      hit = true;
    }
    hit ? ++c.tp : ++c.fp;
  }
  for (char u : used)
    if (!u) ++c.fn;
  return c;
}

inline ScoreReport report_from(std::vector<Counts> per_sentence) {
  ScoreReport r;
  for (const auto& c : per_sentence) r.total += c;
  r.per_sentence = std::move(per_sentence);
  r.precision = precision_of(r.total);
  r.recall = recall_of(r.total);
  r.f1 = f1_of(r.total);
  return r;
}

/// Micro-averaged scores over parallel gold and predicted annotations.
inline ScoreReport score(const std::vector<RoleAnnotation>& gold, const std::vector<RoleAnnotation>& pred) {
  if (gold.size() != pred.size())
    throw FormatError("gold has " + std::to_string(gold.size()) + " sentences, prediction " +
                      std::to_string(pred.size()));
  std::vector<Counts> per;
  for (std::size_t i = 0; i < gold.size(); ++i) per.push_back(score_sentence(gold[i], pred[i]));
  return report_from(std::move(per));
}

inline ScoreReport score(const std::vector<RoleAnnotation>& gold, const std::vector<ProjectedAnnotation>& pred) {
  std::vector<RoleAnnotation> p;
  for (const auto& x : pred) p.push_back(x.annotation);
  return score(gold, p);
}

struct SigTestResult {
  double observed_delta_f1 = 0;
  double p_value = 1;
  long iterations = 0;
  std::uint64_t seed = 0;
  long at_least_as_extreme = 0;
};

/// Random bits for one shuffling iteration, a pure function of (seed, iteration).
inline std::mt19937_64 iteration_engine(std::uint64_t seed, long iteration) {
  auto it = static_cast<std::uint64_t>(iteration);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(it), static_cast<std::uint32_t>(it >> 32)};
  return std::mt19937_64(seq);
}

/// Approximate randomization: swap the two systems' outputs per sentence with
/// probability 1/2 and recompute the pooled F1 difference. Two-sided p with
/// the add-one estimator.
inline SigTestResult stratified_shuffling(const std::vector<RoleAnnotation>& gold,
                                          const std::vector<RoleAnnotation>& pred_a,
                                          const std::vector<RoleAnnotation>& pred_b, long iterations,
                                          std::uint64_t seed) {
  if (gold.empty()) throw FormatError("significance test on an empty corpus");
  if (iterations < 1) throw ConfigError("iterations must be at least 1");
  auto a = score(gold, pred_a).per_sentence;
  auto b = score(gold, pred_b).per_sentence;

  auto delta_of = [](const Counts& x, const Counts& y) { return f1_of(x) - f1_of(y); };
  Counts ta, tb;
  for (std::size_t i = 0; i < a.size(); ++i) ta += a[i], tb += b[i];
  SigTestResult r;
  r.observed_delta_f1 = delta_of(ta, tb);
  r.iterations = iterations;
  r.seed = seed;
  const double observed = std::fabs(r.observed_delta_f1);
  for (long it = 0; it < iterations; ++it) {
    auto engine = iteration_engine(seed, it);
    Counts xa, xb;
    std::uint64_t bits = 0;
    int left = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (left == 0) bits = engine(), left = 64;
      bool swap = bits & 1u;
      bits >>= 1, --left;
      xa += swap ? b[i] : a[i];
      xb += swap ? a[i] : b[i];
    }
    if (std::fabs(delta_of(xa, xb)) >= observed - 1e-12) ++r.at_least_as_extreme;
  }
  r.p_value = static_cast<double>(r.at_least_as_extreme + 1) / static_cast<double>(iterations + 1);
  return r;
}

enum class Correspondence { None = 0, One = 1, Many = 2 };

struct CorrespondenceStats {
  double threshold = 0.5;
  std::array<long, 3> src_counts{};
  std::array<long, 3> tgt_counts{};

  static double share(const std::array<long, 3>& c, Correspondence k) {
    long total = c[0] + c[1] + c[2];
    return total == 0 ? 0.0 : static_cast<double>(c[static_cast<std::size_t>(k)]) / static_cast<double>(total);
  }
  double src_share(Correspondence k) const { return share(src_counts, k); }
  double tgt_share(Correspondence k) const { return share(tgt_counts, k); }
};

/// Counts, for every constituent, the opposite-side constituents whose
/// similarity exceeds `threshold`, and buckets the counts into none/one/many.
inline CorrespondenceStats correspondence_stats(const std::vector<BiSentence>& corpus, double threshold = 0.5) {
  CorrespondenceStats stats;
  stats.threshold = threshold;
  auto bucket = [](long n) { return n == 0 ? 0u : n == 1 ? 1u : 2u; };
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const auto& b = corpus[k];
    if (!b.src_tree || !b.tgt_tree)
      throw ConfigError("correspondence statistics need both trees (sentence " + std::to_string(k + 1) + ")");
    SimilarityContext ctx{BiSentenceView(b)};
    const auto& st = *b.src_tree;
    const auto& tt = *b.tgt_tree;
    for (const auto& cs : st.nodes()) {
      long n = 0;
      for (const auto& ct : tt.nodes())
        if (ctx.sim(cs, ct) > threshold) ++n;
      ++stats.src_counts[bucket(n)];
    }
    for (const auto& ct : tt.nodes()) {
      long n = 0;
      for (const auto& cs : st.nodes())
        if (ctx.sim(cs, ct) > threshold) ++n;
      ++stats.tgt_counts[bucket(n)];
    }
  }
  return stats;
}

inline std::string format_fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string score_tsv(const ScoreReport& r) {
  std::string out = "sentence\ttp\tfp\tfn\n";
  for (std::size_t i = 0; i < r.per_sentence.size(); ++i) {
    const auto& c = r.per_sentence[i];
    out += std::to_string(i + 1) + "\t" + std::to_string(c.tp) + "\t" + std::to_string(c.fp) + "\t" +
           std::to_string(c.fn) + "\n";
  }
  out += "total\t" + std::to_string(r.total.tp) + "\t" + std::to_string(r.total.fp) + "\t" +
         std::to_string(r.total.fn) + "\n";
  out += "precision\t" + format_fixed(r.precision) + "\n";
  out += "recall\t" + format_fixed(r.recall) + "\n";
  out += "f1\t" + format_fixed(r.f1) + "\n";
  return out;
}

inline std::string score_text(const ScoreReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "sentences  %6zu\n"
                "tp         %6ld\n"
                "fp         %6ld\n"
                "fn         %6ld\n"
                "precision  %6.3f\n"
                "recall     %6.3f\n"
                "f1         %6.3f\n",
                r.per_sentence.size(), r.total.tp, r.total.fp, r.total.fn, r.precision, r.recall, r.f1);
  return buf;
}

inline std::string sigtest_text(const SigTestResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "observed_delta_f1  %.6f\n"
                "p_value            %.6f\n"
                "iterations         %ld\n"
                "seed               %llu\n",
                r.observed_delta_f1, r.p_value, r.iterations, static_cast<unsigned long long>(r.seed));
  return buf;
}

inline std::string sigtest_tsv(const SigTestResult& r) {
  return "observed_delta_f1\tp_value\titerations\tseed\n" + format_fixed(r.observed_delta_f1, 6) + "\t" +
         format_fixed(r.p_value, 6) + "\t" + std::to_string(r.iterations) + "\t" + std::to_string(r.seed) + "\n";
}

inline std::string stats_tsv(const CorrespondenceStats& s) {
  std::string out = "# threshold\t" + format_fixed(s.threshold) + "\tcriterion\tsim>threshold\n";
  out += "side\tnone\tone\tmany\n";
  auto row = [&](const char* side, auto share) {
    out += std::string(side) + "\t" + format_fixed(share(Correspondence::None)) + "\t" +
           format_fixed(share(Correspondence::One)) + "\t" + format_fixed(share(Correspondence::Many)) + "\n";
  };
  row("source", [&](Correspondence k) { return s.src_share(k); });
  row("target", [&](Correspondence k) { return s.tgt_share(k); });
  return out;
}

}  // namespace semproj
