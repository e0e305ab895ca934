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

#include "memprobe/protocol.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "memprobe/error.hpp"
#include "memprobe/mutator.hpp"
#include "memprobe/parallel.hpp"
#include "memprobe/seed.hpp"

namespace memprobe {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

// MT3 mutants within this band of s still count as "the s-level mutant".
constexpr double kSimilarityTolerance = 0.05;

std::vector<CodeSample> without(const std::vector<CodeSample>& in, const std::vector<std::string>& excluded) {
  if (excluded.empty()) return in;
  const std::set<std::string> drop(excluded.begin(), excluded.end());
  std::vector<CodeSample> out;
  for (const auto& s : in)
    if (!drop.count(s.id)) out.push_back(s);
  return out;
}

std::vector<CodeSample> apply(const std::vector<CodeSample>& in, const MutationSpec& spec, unsigned threads) {
  std::vector<CodeSample> out(in.size());
  parallel_for(in.size(), threads, [&](std::size_t i) { out[i] = mutate(in[i], spec); });
  return out;
}

void append(std::vector<CodeSample>& to, const std::vector<CodeSample>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

void check_disjoint_inputs(const std::vector<CodeSample>& dm, const std::vector<CodeSample>& dnm) {
  std::set<std::string> ids;
  for (const auto& s : dm)
    if (!ids.insert(s.id).second) throw Error("duplicate member id '" + s.id + "'");
  for (const auto& s : dnm)
    if (!ids.insert(s.id).second) throw Error("id '" + s.id + "' is both member and non-member");
}

LabeledEvalSet finish(LabeledEvalSet set, const std::vector<std::string>& excluded) {
  set.excluded_ids = excluded;
  for (auto& s : set.members) s.label = Label::member;
  for (auto& s : set.non_members) s.label = Label::non_member;
  check_eval_set(set);
  return set;
}

MutationKind kind_of(const CodeSample& s) { return s.mutation ? s.mutation->spec.kind : MutationKind::none; }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

template <typename F>
auto wrap_json(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(std::string(what) + ": " + e.what());
  }
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump(const ojson& j, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

std::string_view to_string(SettingId setting) {
  switch (setting) {
    case SettingId::s1: return "s1";
    case SettingId::s2: return "s2";
    case SettingId::s3: return "s3";
  }
  return "?";
}

SettingId setting_from_string(std::string_view name) {
  if (name == "1" || name == "s1" || name == "S1") return SettingId::s1;
  if (name == "2" || name == "s2" || name == "S2") return SettingId::s2;
  if (name == "3" || name == "s3" || name == "S3") return SettingId::s3;
  throw Error("unknown setting '" + std::string(name) + "'");
}

std::string to_string(const CloneLevel& level) {
  switch (level.kind) {
    case CloneKind::verbatim: return "verbatim";
    case CloneKind::type1: return "type1";
    case CloneKind::type2: return "type2";
    case CloneKind::type3: return "type3@" + format_double(level.similarity);
  }
  return "?";
}

CloneLevel clone_level_from_string(std::string_view name) {
  if (name == "verbatim") return {CloneKind::verbatim, 0.0};
  if (name == "type1") return {CloneKind::type1, 0.0};
  if (name == "type2") return {CloneKind::type2, 0.0};
  if (name.substr(0, 6) == "type3@" || name.substr(0, 6) == "type3(") {
    std::string rest(name.substr(6));
    if (!rest.empty() && rest.back() == ')') rest.pop_back();
    char* end = nullptr;
    const double s = std::strtod(rest.c_str(), &end);
    if (!rest.empty() && end == rest.c_str() + rest.size() && s > 0.0 && s <= 1.0)
      return {CloneKind::type3, s};
  }
  throw Error("unknown clone level '" + std::string(name) + "' (verbatim, type1, type2, type3@<s>)");
}

void SettingSpec::check() const {
  switch (setting) {
    case SettingId::s1:
    case SettingId::s3:
      if (!mutation) throw Error(std::string(to_string(setting)) + " needs a mutation");
      if (clone_level || !t3_levels.empty()) throw Error(std::string(to_string(setting)) + " takes no clone level");
      mutation->check();
      if (setting == SettingId::s1 && mutation->kind == MutationKind::none)
        throw Error("setting 1 needs a mutation other than none");
      break;
    case SettingId::s2:
      if (!clone_level) throw Error("s2 needs a clone level");
      if (mutation) throw Error("s2 takes no mutation");
      for (double l : t3_levels)
        if (!(l > 0.0 && l <= 1.0)) throw Error("T3 pool level outside (0, 1]");
      if (clone_level->kind == CloneKind::type3 && !(clone_level->similarity > 0.0 && clone_level->similarity <= 1.0))
        throw Error("type3 similarity outside (0, 1]");
      break;
  }
}

std::vector<double> SettingSpec::pool_levels() const {
  if (!t3_levels.empty()) return t3_levels;
  if (clone_level && clone_level->kind == CloneKind::type3) return {0.9, 0.7, 0.5};
  return {0.5};
}

// ---- prefixes ---------------------------------------------------------------

PrefixBundle sample_prefixes(const std::vector<CodeSample>& nonmembers, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error("prefix count must be positive");
  if (nonmembers.size() <= n)
    throw InsufficientNonMembers("need more than " + std::to_string(n) + " non-members, have " +
                                 std::to_string(nonmembers.size()));
  // Partial Fisher-Yates: the first n slots are the draw, in draw order.
  std::vector<std::size_t> order(nonmembers.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(derive_seed(seed, "prefixes"));
  PrefixBundle b;
  b.prefix_id = "prefix-" + std::to_string(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::swap(order[i], order[i + rng.below(order.size() - i)]);
    const CodeSample& s = nonmembers[order[i]];
    if (i) b.concatenated_text += kPrefixDelimiter;
    b.concatenated_text += s.text;
    b.snippet_ids.push_back(s.id);
  }
  b.excluded_ids = b.snippet_ids;
  return b;
}

// ---- settings ---------------------------------------------------------------

LabeledEvalSet build_setting1(const std::vector<CodeSample>& dm_in, const std::vector<CodeSample>& dnm_in,
                              const MutationSpec& mutation, unsigned threads,
                              const std::vector<std::string>& excluded) {
  SettingSpec spec{SettingId::s1, mutation, std::nullopt, {}, mutation.seed};
  spec.check();
  const auto dm = without(dm_in, excluded), dnm = without(dnm_in, excluded);
  check_disjoint_inputs(dm, dnm);
  LabeledEvalSet set;
  set.provenance = spec;
  set.members = apply(dm, mutation, threads);
  set.non_members = dnm;
  return finish(std::move(set), excluded);
}

LabeledEvalSet build_setting2(const std::vector<CodeSample>& dm_in, const std::vector<CodeSample>& dnm_in,
                              const CloneLevel& level, std::uint64_t seed, const std::vector<double>& t3_levels,
                              unsigned threads, const std::vector<std::string>& excluded) {
  SettingSpec spec{SettingId::s2, std::nullopt, level, t3_levels, seed};
  spec.check();
  spec.t3_levels = spec.pool_levels();  // provenance records the resolved pool
  const auto dm = without(dm_in, excluded), dnm = without(dnm_in, excluded);
  check_disjoint_inputs(dm, dnm);

  const MutationSpec t1{MutationKind::t1, std::nullopt, seed};
  const MutationSpec t2a{MutationKind::t2a, std::nullopt, seed};
  auto mt3 = [&](const std::vector<CodeSample>& in, double s) {
    return apply(in, MutationSpec{MutationKind::t3, s, seed}, threads);
  };
  const auto levels = spec.pool_levels();

  LabeledEvalSet set;
  set.provenance = spec;
  auto& m = set.members;
  auto& nm = set.non_members;
  append(m, dm);
  switch (level.kind) {
    case CloneKind::verbatim:
      append(nm, dnm);
      append(nm, apply(dm, t1, threads));
      append(nm, apply(dm, t2a, threads));
      for (double s : levels) append(nm, mt3(dm, s));
      break;
    case CloneKind::type1:
      append(m, apply(dm, t1, threads));
      append(nm, apply(dm, t2a, threads));
      for (double s : levels) append(nm, mt3(dm, s));
      append(nm, dnm);
      append(nm, apply(dnm, t1, threads));
      break;
    case CloneKind::type2:
      append(m, apply(dm, t1, threads));
      append(m, apply(dm, t2a, threads));
      for (double s : levels) append(nm, mt3(dm, s));
      append(nm, dnm);
      append(nm, apply(dnm, t1, threads));
      append(nm, apply(dnm, t2a, threads));
      break;
    case CloneKind::type3: {
      append(m, apply(dm, t1, threads));
      append(m, apply(dm, t2a, threads));
      for (double s : levels)
        for (auto& x : mt3(dm, s)) {
          const bool close = *x.mutation->achieved_similarity >= level.similarity - kSimilarityTolerance - 1e-9;
          (close ? m : nm).push_back(std::move(x));
        }
      append(nm, dnm);
      append(nm, apply(dnm, t1, threads));
      append(nm, apply(dnm, t2a, threads));
      for (double s : levels)
        if (s >= level.similarity - 1e-9) append(nm, mt3(dnm, s));
      break;
    }
  }
  return finish(std::move(set), excluded);
}

LabeledEvalSet build_setting3(const std::vector<CodeSample>& dm_in, const std::vector<CodeSample>& dnm_in,
                              const MutationSpec& mutation, unsigned threads,
                              const std::vector<std::string>& excluded) {
  SettingSpec spec{SettingId::s3, mutation, std::nullopt, {}, mutation.seed};
  spec.check();
  const auto dm = without(dm_in, excluded), dnm = without(dnm_in, excluded);
  check_disjoint_inputs(dm, dnm);
  LabeledEvalSet set;
  set.provenance = spec;
  set.members = apply(dm, mutation, threads);
  set.non_members = apply(dnm, mutation, threads);
  return finish(std::move(set), excluded);
}

LabeledEvalSet build_setting(const SettingSpec& spec, const std::vector<CodeSample>& dm,
                             const std::vector<CodeSample>& dnm, unsigned threads,
                             const std::vector<std::string>& excluded) {
  spec.check();
  switch (spec.setting) {
    case SettingId::s1: return build_setting1(dm, dnm, *spec.mutation, threads, excluded);
    case SettingId::s2:
      return build_setting2(dm, dnm, *spec.clone_level, spec.seed, spec.t3_levels, threads, excluded);
    case SettingId::s3: return build_setting3(dm, dnm, *spec.mutation, threads, excluded);
  }
  throw Error("unknown setting");
}

void check_eval_set(const LabeledEvalSet& set) {
  const SettingSpec& spec = set.provenance;
  spec.check();
  std::set<std::string> ids;
  for (const auto* side : {&set.members, &set.non_members})
    for (const auto& s : *side)
      if (!ids.insert(s.id).second) throw Error("id '" + s.id + "' appears twice in the evaluation set");
  for (const auto& id : set.excluded_ids)
    if (ids.count(id)) throw Error("excluded id '" + id + "' is in the evaluation set");

  auto fail = [](const CodeSample& s, const std::string& why) {
    throw Error("sample '" + s.id + "': " + why);
  };
  switch (spec.setting) {
    case SettingId::s1:
      for (const auto& s : set.members)
        if (!s.mutation || s.mutation->spec != *spec.mutation) fail(s, "member is not the setting's mutant");
      for (const auto& s : set.non_members)
        if (s.mutation) fail(s, "non-member is mutated");
      break;
    case SettingId::s3:
      for (const auto* side : {&set.members, &set.non_members})
        for (const auto& s : *side) {
          if (spec.mutation->kind == MutationKind::none ? s.mutation.has_value()
                                                        : !s.mutation || s.mutation->spec != *spec.mutation)
            fail(s, "sample is not the setting's mutant");
        }
      break;
    case SettingId::s2: {
      const CloneKind level = spec.clone_level->kind;
      for (const auto& s : set.members) {
        const MutationKind k = kind_of(s);
        const bool ok = k == MutationKind::none || (k == MutationKind::t1 && level != CloneKind::verbatim) ||
                        (k == MutationKind::t2a && (level == CloneKind::type2 || level == CloneKind::type3)) ||
                        (k == MutationKind::t3 && level == CloneKind::type3);
        if (!ok) fail(s, "member mutated beyond the clone level");
      }
      for (const auto& s : set.non_members)
        if (kind_of(s) == MutationKind::hybrid || kind_of(s) == MutationKind::t2b)
          fail(s, "mutation kind not used in setting 2");
      break;
    }
  }
}

// ---- serialization ----------------------------------------------------------

ojson to_json(const SettingSpec& spec) {
  ojson j;
  j["setting"] = to_string(spec.setting);
  if (spec.mutation) j["mutation"] = to_json(*spec.mutation);
  if (spec.clone_level) j["clone_level"] = to_string(*spec.clone_level);
  if (spec.setting == SettingId::s2) j["t3_levels"] = spec.pool_levels();
  j["seed"] = spec.seed;
  return j;
}

SettingSpec setting_spec_from_json(const json& j) {
  return wrap_json("setting", [&] {
    SettingSpec spec;
    spec.setting = setting_from_string(j.at("setting").get<std::string>());
    if (j.contains("mutation")) spec.mutation = mutation_spec_from_json(j.at("mutation"));
    if (j.contains("clone_level")) spec.clone_level = clone_level_from_string(j.at("clone_level").get<std::string>());
    if (j.contains("t3_levels")) spec.t3_levels = j.at("t3_levels").get<std::vector<double>>();
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.check();
    return spec;
  });
}

ojson to_json(const PrefixBundle& b) {
  ojson j;
  j["schema"] = "prefix/1";
  j["prefix_id"] = b.prefix_id;
  j["snippet_ids"] = b.snippet_ids;
  j["delimiter"] = kPrefixDelimiter;
  j["concatenated_text"] = b.concatenated_text;
  j["excluded_ids"] = b.excluded_ids;
  return j;
}

PrefixBundle prefix_bundle_from_json(const json& j) {
  return wrap_json("prefix bundle", [&] {
    PrefixBundle b;
    b.prefix_id = j.at("prefix_id").get<std::string>();
    b.snippet_ids = j.at("snippet_ids").get<std::vector<std::string>>();
    b.concatenated_text = j.at("concatenated_text").get<std::string>();
    b.excluded_ids = j.value("excluded_ids", b.snippet_ids);
    return b;
  });
}

ojson to_json(const LabeledEvalSet& set) {
  ojson j;
  j["schema"] = "evalset/1";
  j["provenance"] = to_json(set.provenance);
  j["excluded_ids"] = set.excluded_ids;
  j["members"] = ojson::array();
  for (const auto& s : set.members) j["members"].push_back(to_json(s));
  j["non_members"] = ojson::array();
  for (const auto& s : set.non_members) j["non_members"].push_back(to_json(s));
  return j;
}

LabeledEvalSet eval_set_from_json(const json& j) {
  return wrap_json("evaluation set", [&] {
    LabeledEvalSet set;
    set.provenance = setting_spec_from_json(j.at("provenance"));
    set.excluded_ids = j.value("excluded_ids", std::vector<std::string>{});
    for (const auto& s : j.at("members")) set.members.push_back(sample_from_json(s));
    for (const auto& s : j.at("non_members")) set.non_members.push_back(sample_from_json(s));
    for (auto& s : set.members) s.label = Label::member;
    for (auto& s : set.non_members) s.label = Label::non_member;
    return set;
  });
}

LabeledEvalSet read_eval_set(const fs::path& path) {
  return eval_set_from_json(wrap_json(path.string().c_str(), [&] { return json::parse(slurp(path)); }));
}

void write_eval_set(const LabeledEvalSet& set, const fs::path& path) { dump(to_json(set), path); }

PrefixBundle read_prefix_bundle(const fs::path& path) {
  return prefix_bundle_from_json(wrap_json(path.string().c_str(), [&] { return json::parse(slurp(path)); }));
}

void write_prefix_bundle(const PrefixBundle& bundle, const fs::path& path) { dump(to_json(bundle), path); }

}  // namespace memprobe
