// Copyright 2026 The memprobe Authors.
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

// memprobe: corpus, mutation, scoring and evaluation front end.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "memprobe/corpus.hpp"
#include "memprobe/error.hpp"
#include "memprobe/evaluator.hpp"
#include "memprobe/mutator.hpp"
#include "memprobe/parallel.hpp"
#include "memprobe/protocol.hpp"
#include "memprobe/scoring.hpp"
#include "memprobe/traces.hpp"

using namespace memprobe;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Writes to `path`, or stdout for "" / "-".
void emit(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << body;
}

Language parse_language(const std::string& s) {
  auto l = language_from_string(s);
  if (!l) throw Error("unknown language '" + s + "'");
  return *l;
}

MutationSpec make_spec(const std::string& kind, std::optional<double> similarity, std::uint64_t seed) {
  MutationSpec spec;
  spec.kind = mutation_kind_from_string(kind);
  spec.seed = seed;
  spec.target_similarity = similarity;
  if (spec.kind == MutationKind::hybrid && !similarity) spec.target_similarity = 0.8;
  spec.check();
  return spec;
}

// ---- subcommands ----------------------------------------------------------------

struct IngestArgs {
  std::string lang, label = "member", cutoff, repo, meta, out, dir;
  bool dedupe = false;
};

int run_ingest(const IngestArgs& a) {
  IngestOptions o;
  o.language = parse_language(a.lang);
  o.label = label_from_string(a.label);
  o.cutoff_date = a.cutoff;
  o.repo = a.repo;
  if (!a.meta.empty()) o.meta_file = a.meta;
  o.dedupe = a.dedupe;
  IngestStats st;
  const CorpusManifest m = ingest(a.dir, o, &st);
  emit(a.out, to_json(m).dump(2) + "\n");
  std::fprintf(stderr, "ingest: %zu samples from %zu files (%zu unparseable, %zu duplicates, %zu ineligible)\n",
               m.samples.size(), st.files, st.skipped_files, st.duplicates, st.ineligible);
  return 0;
}

struct ValidateArgs {
  std::string manifest;
  std::vector<std::string> traces;
};

int run_validate(const ValidateArgs& a) {
  std::size_t problems = 0;
  if (!a.manifest.empty()) {
    for (const auto& v : validate_corpus(read_manifest(a.manifest))) {
      std::cout << a.manifest << ": " << v.sample_id << ": " << v.rule << ": " << v.message << "\n";
      ++problems;
    }
  }
  for (const auto& t : a.traces) {
    std::ifstream in(t, std::ios::binary);
    if (!in) throw Error("cannot read " + t);
    try {
      std::size_t n = 0;
      for_each_trace(in, [&](Trace&&) { ++n; });
      std::fprintf(stderr, "%s: %zu records\n", t.c_str(), n);
    } catch (const SchemaViolation& e) {
      std::cout << t << ": " << e.what() << "\n";
      ++problems;
    }
  }
  return problems ? 1 : 0;
}

struct MutateArgs {
  std::string kind, in, out;
  std::optional<double> similarity;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

int run_mutate(const MutateArgs& a) {
  const MutationSpec spec = make_spec(a.kind, a.similarity, a.seed);
  CorpusManifest m = read_manifest(a.in);
  std::vector<CodeSample> out(m.samples.size());
  parallel_for(m.samples.size(), a.threads, [&](std::size_t i) { out[i] = mutate(m.samples[i], spec); });
  m.samples = std::move(out);
  emit(a.out, to_json(m).dump(2) + "\n");
  return 0;
}

struct ScoreArgs {
  std::string method, model, reference, manifest, out, prefix_id, recall_variant = "difference";
  std::vector<std::string> traces;
  double k = 20.0;
  std::size_t neighbors = 10;
  unsigned threads = 1;
};

// Samples of a corpus manifest or of a built evaluation set.
std::vector<CodeSample> read_samples(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  const json head = json::parse(in, nullptr, false);
  if (head.is_object() && head.value("schema", std::string()).rfind("evalset/", 0) == 0) {
    const LabeledEvalSet set = read_eval_set(path);
    std::vector<CodeSample> out = set.members;
    out.insert(out.end(), set.non_members.begin(), set.non_members.end());
    return out;
  }
  return read_manifest(path).samples;
}

int run_score(const ScoreArgs& a) {
  std::vector<Trace> traces;
  for (const auto& t : a.traces) {
    auto more = read_traces(fs::path(t));
    std::move(more.begin(), more.end(), std::back_inserter(traces));
  }
  ScoreRequest r;
  r.method = method_from_string(a.method);
  r.cfg.k_percent = a.k;
  r.cfg.neighbor_count = a.neighbors;
  if (a.recall_variant != "difference" && a.recall_variant != "ratio")
    throw Error("--recall-variant must be difference or ratio");
  r.cfg.recall_variant = a.recall_variant == "ratio" ? RecallVariant::ratio : RecallVariant::difference;
  r.model_id = a.model;
  r.reference_model_id = a.reference;
  r.prefix_id = a.prefix_id;
  if (r.model_id.empty()) {
    // The only model whose plain traces are present.
    std::set<std::string> models;
    for (const auto& t : traces)
      if (t.condition.kind == ConditionKind::plain && t.model_id != a.reference) models.insert(t.model_id);
    if (models.size() != 1) throw Error("--model is required when the traces hold several models");
    r.model_id = *models.begin();
  }
  if (r.method == Method::ref && r.reference_model_id.empty()) throw Error("ref needs --reference");

  std::vector<CodeSample> samples;
  if (!a.manifest.empty()) {
    samples = read_samples(a.manifest);
  } else {
    if (r.method == Method::zlib) throw Error("zlib needs --manifest for the raw text");
    std::set<std::string> seen;
    for (const auto& t : traces)
      if (seen.insert(t.sample_id).second) {
        CodeSample s;
        s.id = t.sample_id;
        samples.push_back(std::move(s));
      }
  }
  const ScoreBatch batch = score_samples(r, samples, traces, a.threads);
  std::string body;
  for (const auto& res : batch.results) body += to_json(res).dump() + "\n";
  emit(a.out, body);
  for (const auto& g : batch.gaps) std::fprintf(stderr, "gap: %s missing %s\n", g.sample_id.c_str(), g.requirement.c_str());
  return batch.gaps.empty() ? 0 : 1;
}

struct SettingArgs {
  std::string setting, mutation, clone_type, members, nonmembers, out, exclude;
  std::optional<double> similarity;
  std::vector<double> t3_levels;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

int run_build_setting(const SettingArgs& a) {
  SettingSpec spec;
  spec.setting = setting_from_string(a.setting);
  spec.seed = a.seed;
  if (spec.setting == SettingId::s2) {
    if (a.clone_type.empty()) throw Error("setting 2 needs --clone-type");
    spec.clone_level = clone_level_from_string(a.clone_type);
    spec.t3_levels = a.t3_levels;
  } else {
    if (a.mutation.empty()) throw Error("settings 1 and 3 need --mutation");
    spec.mutation = make_spec(a.mutation, a.similarity, a.seed);
  }
  std::vector<std::string> excluded;
  if (!a.exclude.empty()) excluded = read_prefix_bundle(a.exclude).excluded_ids;
  const LabeledEvalSet set = build_setting(spec, read_manifest(a.members).samples,
                                           read_manifest(a.nonmembers).samples, a.threads, excluded);
  emit(a.out, to_json(set).dump(2) + "\n");
  std::fprintf(stderr, "%s: %zu members, %zu non-members\n", setting_key(spec).c_str(), set.members.size(),
               set.non_members.size());
  return 0;
}

struct PrefixArgs {
  std::string nonmembers, out;
  std::size_t n = 12;
  std::uint64_t seed = 0;
};

int run_prefixes(const PrefixArgs& a) {
  const PrefixBundle b = sample_prefixes(read_manifest(a.nonmembers).samples, a.n, a.seed);
  emit(a.out, to_json(b).dump(2) + "\n");
  return 0;
}

struct EvaluateArgs {
  std::string evalset, out, name;
  std::vector<std::string> scores;
};

int run_evaluate(const EvaluateArgs& a) {
  const LabeledEvalSet set = read_eval_set(a.evalset);
  std::vector<ScoreResult> scores;
  for (const auto& f : a.scores) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw Error("cannot read " + f);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        scores.push_back(score_result_from_json(json::parse(line)));
      } catch (const std::exception& e) {
        throw Error(f + ":" + std::to_string(n) + ": " + e.what());
      }
    }
  }
  const EvalReport r = evaluate_scores(set, scores, default_buckets(), a.name.empty() ? a.evalset : a.name);
  emit(a.out, to_json(r).dump(2) + "\n");
  if (r.excluded_for_gaps) std::fprintf(stderr, "warning: %zu sample scores missing\n", r.excluded_for_gaps);
  return 0;
}

struct ReportArgs {
  std::vector<std::string> in;
  std::string format = "csv", out;
};

int run_report(const ReportArgs& a) {
  std::vector<EvalReport> reports;
  for (const auto& f : a.in) {
    auto more = read_reports(f);
    std::move(more.begin(), more.end(), std::back_inserter(reports));
  }
  if (a.format == "csv")
    emit(a.out, report_csv(reports));
  else
    emit(a.out, report_json(reports).dump(2) + "\n");
  return 0;
}

struct OverlapArgs {
  std::string prefix, text, out;
  std::vector<std::string> corpus;
  std::vector<std::size_t> n = {1, 2, 3, 4, 5, 6, 7, 8};
};

int run_overlap(const OverlapArgs& a) {
  std::string prefix_text;
  if (!a.prefix.empty()) {
    prefix_text = read_prefix_bundle(a.prefix).concatenated_text;
  } else {
    std::ifstream in(a.text, std::ios::binary);
    if (!in) throw Error("cannot read " + a.text);
    prefix_text.assign(std::istreambuf_iterator<char>(in), {});
  }
  nlohmann::ordered_json j;
  j["metric"] = "fraction of distinct prefix n-grams (fallback tokens) found in the corpus";
  j["results"] = nlohmann::ordered_json::array();
  for (const auto& c : a.corpus) {
    const auto samples = read_manifest(c).samples;
    for (std::size_t n : a.n)
      j["results"].push_back({{"corpus", c}, {"n", n}, {"overlap", ngram_overlap(prefix_text, samples, n)}});
  }
  emit(a.out, j.dump(2) + "\n");
  return 0;
}

struct RunArgs {
  std::string config, out;
  std::optional<unsigned> threads;
};

int run_run(const RunArgs& a) {
  std::ifstream in(a.config, std::ios::binary);
  if (!in) throw Error("cannot read " + a.config);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(a.config + ": " + e.what());
  }
  std::vector<fs::path> trace_files;
  ExperimentConfig cfg = experiment_from_json(j, fs::path(a.config).parent_path(), &trace_files);
  if (a.threads) cfg.threads = *a.threads;
  const auto reports = run_experiment(cfg, file_trace_provider(trace_files));
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : reports) out.push_back(to_json(r));
  emit(a.out, out.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"memprobe: membership inference on mutated code"};
  app.require_subcommand(1);
  int status = 0;

  IngestArgs ia;
  auto* ingest_cmd = app.add_subcommand("ingest", "extract function samples from a source tree");
  ingest_cmd->add_option("--lang", ia.lang, "python, java or cpp")->required();
  ingest_cmd->add_option("--label", ia.label, "member or non_member");
  ingest_cmd->add_option("--cutoff", ia.cutoff, "training cutoff date (YYYY-MM-DD)");
  ingest_cmd->add_option("--repo", ia.repo, "repository name (default: directory name)");
  ingest_cmd->add_option("--meta", ia.meta, "JSON with commit dates per file");
  ingest_cmd->add_flag("--dedupe", ia.dedupe, "drop exact-text duplicates");
  ingest_cmd->add_option("-o,--out", ia.out, "manifest path (default stdout)");
  ingest_cmd->add_option("dir", ia.dir)->required();
  ingest_cmd->callback([&] { status = run_ingest(ia); });

  ValidateArgs va;
  auto* validate_cmd = app.add_subcommand("validate", "check a manifest and/or trace files");
  validate_cmd->add_option("--manifest", va.manifest);
  validate_cmd->add_option("--traces", va.traces);
  validate_cmd->callback([&] { status = run_validate(va); });

  MutateArgs ma;
  auto* mutate_cmd = app.add_subcommand("mutate", "apply a mutation to every sample of a manifest");
  mutate_cmd->add_option("--kind", ma.kind, "t1, t2a, t2b, t3 or hybrid")->required();
  mutate_cmd->add_option("--similarity", ma.similarity, "target line similarity (t3)");
  mutate_cmd->add_option("--seed", ma.seed)->required();
  mutate_cmd->add_option("--in", ma.in)->required();
  mutate_cmd->add_option("-o,--out", ma.out);
  mutate_cmd->add_option("--threads", ma.threads)->check(CLI::PositiveNumber);
  mutate_cmd->callback([&] { status = run_mutate(ma); });

  ScoreArgs sa;
  auto* score_cmd = app.add_subcommand("score", "score samples from traces");
  score_cmd->add_option("--method", sa.method, "ppl, zlib, mink, minkpp, ref, neighbor or recall")->required();
  score_cmd->add_option("--k", sa.k, "Min-K percentage");
  score_cmd->add_option("--traces", sa.traces)->required();
  score_cmd->add_option("--manifest", sa.manifest, "manifest or evaluation set (required for zlib)");
  score_cmd->add_option("--model", sa.model, "target model id");
  score_cmd->add_option("--reference", sa.reference, "reference model id (ref)");
  score_cmd->add_option("--prefix-id", sa.prefix_id, "prefix bundle id (recall)");
  score_cmd->add_option("--recall-variant", sa.recall_variant, "difference or ratio");
  score_cmd->add_option("--neighbors", sa.neighbors, "neighbors used per sample");
  score_cmd->add_option("-o,--out", sa.out);
  score_cmd->add_option("--threads", sa.threads)->check(CLI::PositiveNumber);
  score_cmd->callback([&] { status = run_score(sa); });

  SettingArgs ba;
  auto* setting_cmd = app.add_subcommand("build-setting", "assemble a labeled evaluation set");
  setting_cmd->add_option("--setting", ba.setting, "1, 2 or 3")->required();
  setting_cmd->add_option("--mutation", ba.mutation, "settings 1/3: t1, t2a, t2b, t3, hybrid or none");
  setting_cmd->add_option("--similarity", ba.similarity, "t3 target similarity");
  setting_cmd->add_option("--clone-type", ba.clone_type, "setting 2: verbatim, type1, type2 or type3@<s>");
  setting_cmd->add_option("--t3-levels", ba.t3_levels, "setting 2: T3 pool similarities");
  setting_cmd->add_option("--members", ba.members)->required();
  setting_cmd->add_option("--nonmembers", ba.nonmembers)->required();
  setting_cmd->add_option("--exclude", ba.exclude, "prefix bundle whose snippets are left out");
  setting_cmd->add_option("--seed", ba.seed)->required();
  setting_cmd->add_option("-o,--out", ba.out);
  setting_cmd->add_option("--threads", ba.threads)->check(CLI::PositiveNumber);
  setting_cmd->callback([&] { status = run_build_setting(ba); });

  PrefixArgs pa;
  auto* prefix_cmd = app.add_subcommand("prefixes", "draw a prefix bundle from non-members");
  prefix_cmd->add_option("--nonmembers", pa.nonmembers)->required();
  prefix_cmd->add_option("--n", pa.n, "snippets per bundle")->check(CLI::PositiveNumber);
  prefix_cmd->add_option("--seed", pa.seed)->required();
  prefix_cmd->add_option("-o,--out", pa.out);
  prefix_cmd->callback([&] { status = run_prefixes(pa); });

  EvaluateArgs ea;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "AUC report from an evaluation set and score files");
  evaluate_cmd->add_option("--evalset", ea.evalset)->required();
  evaluate_cmd->add_option("--scores", ea.scores)->required();
  evaluate_cmd->add_option("--name", ea.name);
  evaluate_cmd->add_option("-o,--out", ea.out);
  evaluate_cmd->callback([&] { status = run_evaluate(ea); });

  ReportArgs ra;
  auto* report_cmd = app.add_subcommand("report", "render reports as tables");
  report_cmd->add_option("--in", ra.in, "report files")->required();
  report_cmd->add_option("--format", ra.format)->check(CLI::IsMember({"csv", "json"}));
  report_cmd->add_option("-o,--out", ra.out);
  report_cmd->callback([&] { status = run_report(ra); });

  OverlapArgs oa;
  auto* overlap_cmd = app.add_subcommand("overlap", "n-gram overlap between a prefix and corpora");
  auto* prefix_opt = overlap_cmd->add_option("--prefix", oa.prefix, "prefix bundle");
  auto* text_opt = overlap_cmd->add_option("--text", oa.text, "plain text prefix");
  prefix_opt->excludes(text_opt);
  overlap_cmd->add_option("--corpus", oa.corpus, "manifests")->required();
  overlap_cmd->add_option("--n", oa.n, "n-gram sizes")->check(CLI::Range(1, 8));
  overlap_cmd->add_option("-o,--out", oa.out);
  overlap_cmd->callback([&] {
    if (oa.prefix.empty() && oa.text.empty()) throw CLI::ValidationError("overlap", "--prefix or --text is required");
    status = run_overlap(oa);
  });

  RunArgs xa;
  auto* run_cmd = app.add_subcommand("run", "run an experiment described by a JSON config");
  run_cmd->add_option("--config", xa.config)->required();
  run_cmd->add_option("-o,--out", xa.out);
  run_cmd->add_option("--threads", xa.threads)->check(CLI::PositiveNumber);
  run_cmd->callback([&] { status = run_run(xa); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "memprobe: %s\n", e.what());
    return 1;
  }
  return status;
}
