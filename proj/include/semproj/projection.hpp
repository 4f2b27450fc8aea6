// Role transfer over semantic alignments, the word-based baseline, span
// repair, argument filtering, and the end-to-end per-sentence pipeline.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "semproj/corpus.hpp"
#include "semproj/errors.hpp"
#include "semproj/matcher.hpp"
#include "semproj/similarity.hpp"

namespace semproj {

struct PipelineConfig {
  ConstraintClass model = ConstraintClass::Perfect;
  bool na_filter = false;
  bool nc_filter = false;
  bool arg_filter = false;
  bool fill_gaps = false;
  double big = kDefaultBig;
  std::vector<std::string> clause_boundary_labels;
  // Preterminals with these tags never count as likely arguments.
  std::vector<std::string> non_argument_pos = {",", ".", ":", "``", "''", "-LRB-", "-RRB-",
                                               "-NONE-", "$,", "$.", "$("};
  FilterConfig filters;
  // Cross-check every graph within the oracle guard against brute force.
  bool oracle_check = false;

  /// Throws ConfigError on inconsistent combinations.
  void validate() const {
    if (!(big > 0.0)) throw ConfigError("big must be positive");
    if (fill_gaps && model != ConstraintClass::Word)
      throw ConfigError("fill-gaps applies to the word model only");
    if (arg_filter && model == ConstraintClass::Word)
      throw ConfigError("the Arg filter needs a constituent model (perfect, edgecover or total)");
    if (nc_filter && filters.content_pos_prefixes.empty())
      throw ConfigError("NC filter needs content POS prefixes");
  }
};

struct ProvenanceLink {
  int src_unit = 0;
  int tgt_unit = 0;
  double sim = 0;

  friend bool operator==(const ProvenanceLink&, const ProvenanceLink&) = default;
};

struct RoleProvenance {
  std::string label;
  std::vector<ProvenanceLink> links;
  bool projected = false;
  std::vector<std::string> flags;

  friend bool operator==(const RoleProvenance&, const RoleProvenance&) = default;
};

struct ProjectedAnnotation {
  RoleAnnotation annotation;
  std::vector<RoleProvenance> provenance;
  std::vector<std::string> warnings;
};

/// Units of one side of a graph: ids and the token yield each id stands for.
struct UnitMap {
  std::vector<int> ids;
  std::vector<std::vector<int>> yields;

  std::optional<std::size_t> index_of(int id) const {
    auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) return std::nullopt;
    return static_cast<std::size_t>(it - ids.begin());
  }
};

/// Source role labelling at the unit level: label -> unit ids.
using UnitLabeling = std::vector<std::pair<std::string, std::vector<int>>>;

/// Maximal runs of consecutive indices.
inline std::vector<Span> to_spans(std::set<int> tokens) {
  std::vector<Span> out;
  for (int t : tokens) {
    if (!out.empty() && out.back().hi + 1 == t)
      out.back().hi = t;
    else
      out.push_back({t, t});
  }
  return out;
}

inline std::set<int> to_tokens(const std::vector<Span>& spans) {
  std::set<int> out;
  for (const auto& s : spans)
    for (int i = s.lo; i <= s.hi; ++i) out.insert(i);
  return out;
}

/// Closes a token set to its min..max interval.
inline std::set<int> fill_gaps(const std::set<int>& tokens) {
  std::set<int> out;
  if (tokens.empty()) return out;
  for (int i = *tokens.begin(); i <= *tokens.rbegin(); ++i) out.insert(i);
  return out;
}

/// Lowest target token linked to the source predicate.
inline std::optional<int> target_predicate(const WordAlignment& al, std::optional<int> src_predicate) {
  if (!src_predicate) return std::nullopt;
  for (const auto& [s, t] : al.links)
    if (s == *src_predicate) return t;
  return std::nullopt;
}

/// Drops links flagged as zero-similarity.
inline SemanticAlignment strip_zero_sim(SemanticAlignment a) {
  std::erase_if(a.links, [](const AlignmentLink& l) { return l.zero_sim; });
  return a;
}

/// a_t(r) = { u_t | exists u_s in a_s(r) with (u_s, u_t) in A }, realised as
/// the union of the target units' yields. `header` supplies sentence, frame
/// and predicate of the output.
inline ProjectedAnnotation project(const SemanticAlignment& alignment, const UnitLabeling& source,
                                   const UnitMap& src_units, const UnitMap& tgt_units,
                                   const RoleAnnotation& header) {
  ProjectedAnnotation out;
  out.annotation.sentence = header.sentence;
  out.annotation.frame = header.frame;
  out.annotation.predicate = header.predicate;
  for (const auto& [label, units] : source) {
    RoleProvenance prov{label, {}, false, {}};
    std::set<int> tokens;
    for (int u : units) {
      if (!src_units.index_of(u))
        throw IntegrityError("role '" + label + "' is assigned to unit " + std::to_string(u) +
                             " which is not in the alignment graph");
      for (const auto& l : alignment.links) {
        if (l.src_unit != u) continue;
        auto ti = tgt_units.index_of(l.tgt_unit);
        if (!ti) throw IntegrityError("alignment links to unknown target unit");
        tokens.insert(tgt_units.yields[*ti].begin(), tgt_units.yields[*ti].end());
        prov.links.push_back({l.src_unit, l.tgt_unit, l.sim});
      }
    }
    if (!tokens.empty()) {
      out.annotation.roles.push_back(Role{label, to_spans(tokens)});
      prov.projected = true;
    } else {
      prov.flags.push_back("unprojected");
    }
    out.provenance.push_back(std::move(prov));
  }
  return out;
}

/// Word-level projection through the alignment links, optionally gap-filled per role.
inline ProjectedAnnotation project_word_based(const WordAlignment& al, const RoleAnnotation& source,
                                              bool fill) {
  ProjectedAnnotation out;
  out.annotation.sentence = source.sentence;
  out.annotation.frame = source.frame;
  out.annotation.predicate = target_predicate(al, source.predicate);
  for (const auto& role : source.roles) {
    RoleProvenance prov{role.label, {}, false, {}};
    std::set<int> src_tokens = to_tokens(role.spans), tokens;
    for (const auto& [s, t] : al.links) {
      if (!src_tokens.count(s)) continue;
      tokens.insert(t);
      prov.links.push_back({s, t, 1.0});
    }
    if (fill && !tokens.empty()) {
      auto filled = fill_gaps(tokens);
      if (filled.size() != tokens.size()) prov.flags.push_back("gaps-filled");
      tokens = std::move(filled);
    }
    if (!tokens.empty()) {
      out.annotation.roles.push_back(Role{role.label, to_spans(tokens)});
      prov.projected = true;
    } else {
      prov.flags.push_back("unprojected");
    }
    out.provenance.push_back(std::move(prov));
  }
  return out;
}

/// Likely arguments of the predicate: children of every ancestor of the
/// predicate's preterminal that do not dominate the predicate. The walk ends
/// after the second ancestor labelled with a clause-boundary label. Returned
/// ids are ascending.
inline std::vector<int> argument_filter(const ParseTree& tree, int predicate,
                                        const std::vector<std::string>& boundary_labels,
                                        const std::vector<std::string>& non_argument_pos = {}) {
  if (predicate < 0 || predicate >= tree.sentence().size())
    throw ValidationError("predicate token " + std::to_string(predicate) + " is not in the tree");
  const int pred_node = tree.preterminal(predicate).id;
  auto in = [](const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
  };
  std::vector<int> out;
  bool passed_lowest_clause = false;
  for (int a = tree.node(pred_node).parent; a >= 0; a = tree.node(a).parent) {
    const auto& ancestor = tree.node(a);
    for (int c : ancestor.children) {
      const auto& child = tree.node(c);
      if (tree.dominates(c, pred_node)) continue;
      if (child.is_terminal && in(non_argument_pos, child.label)) continue;
      out.push_back(c);
    }
    if (in(boundary_labels, ancestor.label)) {
      if (passed_lowest_clause) break;
      passed_lowest_clause = true;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

inline void tile(const ParseTree& tree, int id, const Span& span, std::vector<int>& out) {
  const auto& c = tree.node(id);
  if (span.contains(c.span)) {
    out.push_back(id);
    return;
  }
  if (!span.overlaps(c.span)) return;
  for (int k : c.children) tile(tree, k, span, out);
}

}  // namespace detail

/// Constituents standing for a role: per span, the fewest maximal
/// constituents whose yields tile it exactly. Within a unary chain the top
/// node is used, the one that wins ties against its identical descendants.
/// `pieces` receives the number of constituents used per span.
inline std::vector<int> resolve_role_units(const ParseTree& tree, const Role& role,
                                           std::vector<int>* pieces = nullptr) {
  std::vector<int> out;
  for (const auto& s : role.spans) {
    if (s.hi >= tree.sentence().size())
      throw ValidationError("role '" + role.label + "' exceeds the source sentence");
    std::size_t before = out.size();
    detail::tile(tree, tree.root().id, s, out);
    if (pieces) pieces->push_back(static_cast<int>(out.size() - before));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Intermediate products of one pipeline run, for debugging and oracle checks.
struct PipelineTrace {
  std::optional<AlignmentGraph> graph;
  std::optional<SemanticAlignment> alignment;
  std::optional<double> oracle_cost;
};

/// One bi-sentence through filters, unit selection, similarity, solver and projection.
inline ProjectedAnnotation run_pipeline(const BiSentence& b, const PipelineConfig& cfg,
                                        PipelineTrace* trace = nullptr) {
  cfg.validate();
  if (!b.src_roles) throw ConfigError("missing source role annotation (--src-roles)");
  const RoleAnnotation& src_roles = *b.src_roles;
  FilterConfig fc = cfg.filters;
  fc.na = cfg.na_filter;
  fc.nc = cfg.nc_filter;

  if (cfg.model == ConstraintClass::Word) {
    BiSentenceView view = apply_word_filters(b, fc);
    auto out = project_word_based(view.links(), src_roles, cfg.fill_gaps);
    out.annotation.predicate = target_predicate(b.alignment, src_roles.predicate);
    return out;
  }

  std::string model(to_string(cfg.model));
  if (!b.src_tree) throw ConfigError("model " + model + " needs source trees (--src-trees)");
  if (!b.tgt_tree) throw ConfigError("model " + model + " needs target trees (--tgt-trees)");
  const ParseTree& st = *b.src_tree;
  const ParseTree& tt = *b.tgt_tree;

  BiSentenceView view = apply_word_filters(b, fc);
  SimilarityContext ctx(view);

  RoleAnnotation header;
  header.sentence = src_roles.sentence;
  header.frame = src_roles.frame;
  header.predicate = target_predicate(b.alignment, src_roles.predicate);

  std::vector<std::string> warnings;
  std::optional<std::vector<int>> arguments;
  if (cfg.arg_filter) {
    if (header.predicate)
      arguments = argument_filter(tt, *header.predicate, cfg.clause_boundary_labels, cfg.non_argument_pos);
    else
      warnings.push_back("arg filter skipped: source predicate has no aligned target token");
  }

  UnitMap src_units, tgt_units;
  for (const auto& c : st.nodes())
    if (!ctx.filtered_yield(Side::Source, c.id).empty()) {
      src_units.ids.push_back(c.id);
      src_units.yields.push_back(yield_of(st, c));
    }
  for (const auto& c : tt.nodes()) {
    if (ctx.filtered_yield(Side::Target, c.id).empty()) continue;
    if (arguments && !std::binary_search(arguments->begin(), arguments->end(), c.id)) continue;
    tgt_units.ids.push_back(c.id);
    tgt_units.yields.push_back(yield_of(tt, c));
  }

  UnitLabeling labeling;
  std::map<std::string, std::vector<std::string>> role_flags;
  for (const auto& role : src_roles.roles) {
    std::vector<int> pieces;
    auto ids = resolve_role_units(st, role, &pieces);
    auto& flags = role_flags[role.label];
    int total = 0;
    for (int p : pieces) total += p;
    if (total > static_cast<int>(role.spans.size())) flags.push_back("tiled:" + std::to_string(total));
    auto kept = ids;
    std::erase_if(kept, [&](int id) { return !src_units.index_of(id); });
    if (kept.size() != ids.size()) flags.push_back("unit-filtered");
    labeling.emplace_back(role.label, std::move(kept));
  }

  SemanticAlignment alignment;
  alignment.constraint_class = cfg.model;
  if (src_units.ids.empty() || tgt_units.ids.empty()) {
    warnings.push_back("empty unit set after filtering; nothing aligned");
  } else {
    auto graph = build_graph(ctx.matrix(src_units.ids, tgt_units.ids), cfg.big, cfg.model);
    alignment = solve(graph, cfg.model);
    if (cfg.oracle_check && graph.n_src_real * graph.n_tgt_real <= kOracleMaxCells) {
      // Padding contributes the same constant to both, so compare real links only.
      auto oracle = brute_force_optimum(graph, cfg.model);
      const double solver_cost = alignment_cost(graph, alignment.pairs());
      const double oracle_cost = alignment_cost(graph, oracle.pairs());
      if (std::fabs(oracle_cost - solver_cost) > 1e-9)
        throw OracleMismatch("solver/oracle cost mismatch in sentence " + std::to_string(src_roles.sentence) +
                             ": solver " + std::to_string(solver_cost) + ", oracle " + std::to_string(oracle_cost));
      if (trace) trace->oracle_cost = oracle.cost;
    }
    if (trace) {
      trace->graph = graph;
      trace->alignment = alignment;
    }
  }

  auto out = project(strip_zero_sim(alignment), labeling, src_units, tgt_units, header);
  for (auto& prov : out.provenance) {
    auto& flags = role_flags[prov.label];
    prov.flags.insert(prov.flags.begin(), flags.begin(), flags.end());
  }
  out.warnings = std::move(warnings);
  return out;
}

}  // namespace semproj
