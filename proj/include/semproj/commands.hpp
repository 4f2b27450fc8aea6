// Subcommands of the `semproj` tool. Exit codes: 0 success, 1 validation or
// configuration error, 2 I/O error, 3 solver/oracle discrepancy.
#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <ios>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semproj/corpus.hpp"
#include "semproj/driver.hpp"
#include "semproj/errors.hpp"
#include "semproj/evaluation.hpp"
#include "semproj/fixtures.hpp"
#include "semproj/projection.hpp"

namespace semproj::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kIo = 2, kOracle = 3 };

struct ProjectArgs {
  std::string model, filter, config;
  bool fill_gaps = false;
  bool oracle = false;
  int jobs = 0;
  CorpusPaths paths;
  std::string out, provenance, dump_graphs;
};

inline std::string model_requirements(ConstraintClass m) {
  switch (m) {
    case ConstraintClass::Word:
      return "word model (word units, binary similarity, alignment links) requires --align and --src-roles";
    case ConstraintClass::Perfect:
      return "perfect model (constituent units, overlap similarity, perfect matching) requires --src-trees, "
             "--tgt-trees, --align and --src-roles";
    case ConstraintClass::EdgeCover:
      return "edgecover model (constituent units, overlap similarity, edge cover) requires --src-trees, "
             "--tgt-trees, --align and --src-roles";
    case ConstraintClass::Total:
      return "total model (constituent units, overlap similarity, total alignment) requires --src-trees, "
             "--tgt-trees, --align and --src-roles";
  }
  return "";
}

inline int cmd_project(const ProjectArgs& a, std::ostream& out) {
  std::map<std::string, std::string> kv;
  if (!a.config.empty()) kv = parse_config_text(read_file(a.config));
  auto pick = [&](const std::string& flag, const char* key, const std::string& fallback) {
    if (!flag.empty()) return flag;
    if (auto it = kv.find(key); it != kv.end()) return it->second;
    return fallback;
  };

  PipelineConfig cfg;
  cfg.model = parse_model(pick(a.model, "model", "perfect"));
  apply_filter_spec(cfg, pick(a.filter, "filter", default_filter(cfg.model)));
  apply_config(cfg, kv);
  if (a.fill_gaps) cfg.fill_gaps = true;
  cfg.oracle_check = a.oracle;
  int jobs = a.jobs;
  if (jobs <= 0) {
    jobs = 1;
    if (auto it = kv.find("jobs"); it != kv.end()) {
      try {
        jobs = std::stoi(it->second);
      } catch (const std::exception&) {
        throw ConfigError("jobs must be an integer");
      }
    }
  }
  cfg.validate();

  const auto& p = a.paths;
  if (p.align.empty() || p.src_roles.empty() ||
      (cfg.model != ConstraintClass::Word && (p.src_trees.empty() || p.tgt_trees.empty())))
    throw ConfigError(model_requirements(cfg.model));
  if (cfg.nc_filter && ((p.src_trees.empty() && p.src_tok.empty()) || (p.tgt_trees.empty() && p.tgt_tok.empty())))
    throw ConfigError("the NC filter needs POS tags on both sides (--src-trees/--src-tok and --tgt-trees/--tgt-tok)");

  CorpusPaths inputs = p;
  inputs.tgt_roles.clear();
  auto corpus = load_corpus(CorpusTexts::read(inputs));
  auto results = project_corpus(corpus, cfg, jobs);

  std::vector<RoleAnnotation> annotations;
  std::vector<std::string> warnings;
  std::string provenance, graphs;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& r = results[k];
    annotations.push_back(r.projection.annotation);
    for (const auto& w : r.projection.warnings) warnings.push_back("sentence " + std::to_string(k + 1) + ": " + w);
    provenance += provenance_line(r.projection);
    graphs += "# sentence " + std::to_string(k + 1) + "\n";
    if (r.trace.graph && r.trace.alignment) graphs += format_graph_tsv(*r.trace.graph, *r.trace.alignment);
  }
  const std::string roles = serialize_roles_file(annotations);
  write_file(a.out, roles);
  write_file(a.out + ".manifest.json", manifest_json("project", config_json(cfg), inputs.supplied(), roles, warnings));
  if (!a.provenance.empty()) write_file(a.provenance, provenance);
  if (!a.dump_graphs.empty()) write_file(a.dump_graphs, graphs);
  out << "projected " << annotations.size() << " sentences (" << to_string(cfg.model) << ", filter "
      << filter_spec(cfg) << ") -> " << a.out << "\n";
  for (const auto& w : warnings) out << "warning: " << w << "\n";
  return kOk;
}

inline std::vector<RoleAnnotation> load_roles(const std::string& path) { return parse_roles_file(read_file(path)); }

inline int cmd_evaluate(const std::string& gold_path, const std::string& pred_path, const std::string& out_path,
                        std::ostream& out) {
  auto gold = load_roles(gold_path);
  auto pred = load_roles(pred_path);
  if (gold.size() != pred.size())
    throw FormatError("files not parallel: gold has " + std::to_string(gold.size()) + " blocks, prediction " +
                      std::to_string(pred.size()));
  auto report = score(gold, pred);
  out << score_text(report);
  if (!out_path.empty()) {
    auto tsv = score_tsv(report);
    write_file(out_path, tsv);
    write_file(out_path + ".manifest.json",
               manifest_json("evaluate", nlohmann::json::object(), {{"gold", gold_path}, {"pred", pred_path}}, tsv, {}));
  }
  return kOk;
}

inline int cmd_sigtest(const std::string& gold_path, const std::string& a_path, const std::string& b_path,
                       long iterations, std::uint64_t seed, const std::string& out_path, std::ostream& out) {
  auto gold = load_roles(gold_path);
  auto a = load_roles(a_path);
  auto b = load_roles(b_path);
  if (a.size() != gold.size() || b.size() != gold.size()) throw FormatError("files not parallel");
  auto r = stratified_shuffling(gold, a, b, iterations, seed);
  out << sigtest_text(r);
  if (!out_path.empty()) {
    auto tsv = sigtest_tsv(r);
    write_file(out_path, tsv);
    write_file(out_path + ".manifest.json",
               manifest_json("sigtest", {{"iterations", iterations}, {"seed", seed}},
                             {{"gold", gold_path}, {"system_a", a_path}, {"system_b", b_path}}, tsv, {}));
  }
  return kOk;
}

inline int cmd_stats(const CorpusPaths& paths, double threshold, const std::string& out_path, std::ostream& out) {
  if (paths.src_trees.empty() || paths.tgt_trees.empty() || paths.align.empty())
    throw ConfigError("stats requires --src-trees, --tgt-trees and --align");
  auto corpus = load_corpus(CorpusTexts::read(paths));
  auto stats = correspondence_stats(corpus, threshold);
  auto tsv = stats_tsv(stats);
  out << tsv;
  if (!out_path.empty()) {
    write_file(out_path, tsv);
    write_file(out_path + ".manifest.json",
               manifest_json("stats", {{"threshold", threshold}}, paths.supplied(), tsv, {}));
  }
  return kOk;
}

/// Writes the bundled bi-sentences as figure1.* and toy.* files into `dir`.
inline int cmd_fixtures(const std::string& dir, std::ostream& out) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::ios_base::failure("cannot create '" + dir + "': " + ec.message());
  auto emit = [&](const std::string& stem, const fixtures::CorpusFiles& f) {
    write_file((fs::path(dir) / (stem + ".en.trees")).string(), f.src_trees);
    write_file((fs::path(dir) / (stem + ".de.trees")).string(), f.tgt_trees);
    write_file((fs::path(dir) / (stem + ".align")).string(), f.align);
    write_file((fs::path(dir) / (stem + ".en.roles")).string(), f.src_roles);
    write_file((fs::path(dir) / (stem + ".de.roles")).string(), f.tgt_roles);
  };
  emit("figure1", fixtures::figure1());
  emit("toy", fixtures::toy_corpus());
  out << "wrote figure1.* and toy.* to " << dir << "\n";
  return kOk;
}

/// Entry point shared by the binary and the tests; `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semantic role projection over word-aligned bi-sentences"};
  app.name("semproj");
  app.require_subcommand(1);

  ProjectArgs pa;
  auto* project = app.add_subcommand("project", "project source roles onto target sentences");
  project->add_option("--model", pa.model, "word|perfect|edgecover|total (default perfect)");
  project->add_option("--filter", pa.filter, "none|na|nc|arg, comma-separated (default depends on model)");
  project->add_flag("--fill-gaps", pa.fill_gaps, "close projected word spans (word model)");
  project->add_option("--src-trees", pa.paths.src_trees, "source *.trees");
  project->add_option("--tgt-trees", pa.paths.tgt_trees, "target *.trees");
  project->add_option("--src-tok", pa.paths.src_tok, "source *.tok");
  project->add_option("--tgt-tok", pa.paths.tgt_tok, "target *.tok");
  project->add_option("--align", pa.paths.align, "*.align");
  project->add_option("--src-roles", pa.paths.src_roles, "source *.roles");
  project->add_option("--out", pa.out, "output *.roles")->required();
  project->add_option("--config", pa.config, "key=value config file");
  project->add_flag("--oracle", pa.oracle, "cross-check solvers against brute force on small graphs");
  project->add_option("--jobs", pa.jobs, "worker threads");
  project->add_option("--provenance", pa.provenance, "JSON-lines provenance sidecar");
  project->add_option("--dump-graphs", pa.dump_graphs, "TSV dump of weight matrices and chosen links");

  std::string gold, pred, out_path, sys_a, sys_b;
  auto* evaluate = app.add_subcommand("evaluate", "exact-match labelled precision, recall and F1");
  evaluate->add_option("--gold", gold, "gold *.roles")->required();
  evaluate->add_option("--pred", pred, "predicted *.roles")->required();
  evaluate->add_option("--out", out_path, "TSV report");

  long iterations = 10000;
  std::uint64_t seed = 1;
  auto* sigtest = app.add_subcommand("sigtest", "stratified shuffling significance test");
  sigtest->add_option("--gold", gold, "gold *.roles")->required();
  sigtest->add_option("--system-a", sys_a, "system A *.roles")->required();
  sigtest->add_option("--system-b", sys_b, "system B *.roles")->required();
  sigtest->add_option("--iterations", iterations, "shuffles (default 10000)")->check(CLI::PositiveNumber);
  sigtest->add_option("--seed", seed, "random seed (default 1)");
  sigtest->add_option("--out", out_path, "TSV report");

  CorpusPaths stat_paths;
  double threshold = 0.5;
  auto* stats = app.add_subcommand("stats", "constituent correspondence statistics");
  stats->add_option("--src-trees", stat_paths.src_trees, "source *.trees")->required();
  stats->add_option("--tgt-trees", stat_paths.tgt_trees, "target *.trees")->required();
  stats->add_option("--align", stat_paths.align, "*.align")->required();
  stats->add_option("--threshold", threshold, "similarity threshold (default 0.5)");
  stats->add_option("--out", out_path, "TSV report");

  std::string dir;
  auto* fixtures_cmd = app.add_subcommand("fixtures", "write the bundled example corpora");
  fixtures_cmd->add_option("--dir", dir, "output directory")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*project) return cmd_project(pa, out);
    if (*evaluate) return cmd_evaluate(gold, pred, out_path, out);
    if (*sigtest) return cmd_sigtest(gold, sys_a, sys_b, iterations, seed, out_path, out);
    if (*stats) return cmd_stats(stat_paths, threshold, out_path, out);
    if (*fixtures_cmd) return cmd_fixtures(dir, out);
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const OracleMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kOracle;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}

}  // namespace semproj::cli
