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

#include <filesystem>
#include <map>
#include <set>

#include "doctest.h"
#include "exec_driver.hpp"
#include "memprobe/error.hpp"
#include "memprobe/protocol.hpp"

using namespace memprobe;
namespace mt = memprobe::testing;

namespace {

std::vector<CodeSample> python_pool() {
  std::vector<CodeSample> out;
  for (const auto& f : mt::fixture_functions(Language::python)) out.push_back(f.sample);
  return out;
}

std::pair<std::vector<CodeSample>, std::vector<CodeSample>> split(std::size_t m, std::size_t nm) {
  const auto pool = python_pool();
  REQUIRE(pool.size() >= m + nm);
  std::vector<CodeSample> dm(pool.begin(), pool.begin() + m), dnm(pool.begin() + m, pool.begin() + m + nm);
  for (auto& s : dnm) s.label = Label::non_member;
  return {dm, dnm};
}

std::set<std::string> ids(const std::vector<CodeSample>& v) {
  std::set<std::string> out;
  for (const auto& s : v) out.insert(s.id);
  return out;
}

}  // namespace

TEST_CASE("sample_prefixes") {
  const auto [dm, dnm] = split(0, 40);
  const auto a = sample_prefixes(dnm, 12, 5);
  CHECK(a == sample_prefixes(dnm, 12, 5));
  CHECK(a.prefix_id == "prefix-5");
  REQUIRE(a.snippet_ids.size() == 12);
  CHECK(ids(dnm).size() == 40);
  CHECK(std::set<std::string>(a.snippet_ids.begin(), a.snippet_ids.end()).size() == 12);
  CHECK(a.excluded_ids == a.snippet_ids);
  std::string joined;
  for (const auto& id : a.snippet_ids) {
    for (const auto& s : dnm)
      if (s.id == id) joined += (joined.empty() ? "" : std::string(kPrefixDelimiter)) + s.text;
  }
  CHECK(a.concatenated_text == joined);
  CHECK(sample_prefixes(dnm, 12, 6).snippet_ids != a.snippet_ids);

  CHECK(sample_prefixes(dnm, 39, 1).snippet_ids.size() == 39);
  CHECK_THROWS_AS(sample_prefixes(dnm, 40, 1), InsufficientNonMembers);
}

TEST_CASE("setting 1") {
  const auto [dm, dnm] = split(2, 2);
  const auto set = build_setting1(dm, dnm, {MutationKind::t1, std::nullopt, 3});
  REQUIRE(set.members.size() == 2);
  REQUIRE(set.non_members.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(set.members[i].origin_id == dm[i].id);
    CHECK(set.members[i].mutation->spec.kind == MutationKind::t1);
    CHECK(set.members[i].label == Label::member);
    CHECK(set.non_members[i].id == dnm[i].id);
    CHECK(set.non_members[i].text == dnm[i].text);
  }
  CHECK_THROWS_AS(build_setting1(dm, dnm, MutationSpec{}), Error);
}

TEST_CASE("setting 2 cardinalities on the 2+2 fixture") {
  const auto [dm, dnm] = split(2, 2);
  auto sizes = [&](CloneLevel level) {
    const auto s = build_setting2(dm, dnm, level, 1, {0.5});
    return std::make_pair(s.members.size(), s.non_members.size());
  };
  CHECK(sizes({CloneKind::verbatim, 0}) == std::make_pair<std::size_t, std::size_t>(2, 8));
  CHECK(sizes({CloneKind::type1, 0}) == std::make_pair<std::size_t, std::size_t>(4, 8));
  CHECK(sizes({CloneKind::type2, 0}) == std::make_pair<std::size_t, std::size_t>(6, 8));
}

TEST_CASE("setting 2 set algebra") {
  const auto [dm, dnm] = split(5, 4);
  const auto t1 = build_setting2(dm, dnm, {CloneKind::type1, 0}, 9, {0.9, 0.5});
  std::map<std::string, int> member_kinds, non_kinds;
  for (const auto& s : t1.members) ++member_kinds[s.mutation ? std::string(to_string(s.mutation->spec.kind)) : "orig"];
  for (const auto& s : t1.non_members) {
    const bool from_dm = ids(dm).count(s.origin_id.value_or(s.id)) > 0;
    ++non_kinds[(from_dm ? "dm:" : "dnm:") + (s.mutation ? std::string(to_string(s.mutation->spec.kind)) : "orig")];
  }
  CHECK(member_kinds == std::map<std::string, int>{{"orig", 5}, {"t1", 5}});
  CHECK(non_kinds == std::map<std::string, int>{{"dm:t2a", 5}, {"dm:t3", 10}, {"dnm:orig", 4}, {"dnm:t1", 4}});

  // type3(s): high-similarity MT3 mutants of Dm move to the member side.
  const auto t3 = build_setting2(dm, dnm, {CloneKind::type3, 0.7}, 9);
  std::size_t mt3_members = 0, mt3_dm_non = 0, mt3_dnm = 0;
  for (const auto& s : t3.members)
    if (s.mutation && s.mutation->spec.kind == MutationKind::t3) {
      ++mt3_members;
      CHECK(*s.mutation->achieved_similarity >= 0.65 - 1e-9);
    }
  for (const auto& s : t3.non_members) {
    if (!s.mutation || s.mutation->spec.kind != MutationKind::t3) continue;
    if (ids(dm).count(*s.origin_id)) {
      ++mt3_dm_non;
      CHECK(*s.mutation->achieved_similarity < 0.65);
    } else {
      ++mt3_dnm;
      CHECK(*s.mutation->spec.target_similarity >= 0.7);
    }
  }
  CHECK(mt3_members + mt3_dm_non == 3 * dm.size());
  CHECK(mt3_dnm == 2 * dnm.size());
  CHECK(t3.members.size() == 3 * dm.size() + mt3_members);
  check_eval_set(t3);
}

TEST_CASE("setting 3") {
  const auto [dm, dnm] = split(2, 2);
  const auto set = build_setting3(dm, dnm, {MutationKind::t2a, std::nullopt, 4});
  REQUIRE(set.members.size() == 2);
  REQUIRE(set.non_members.size() == 2);
  for (const auto* side : {&set.members, &set.non_members})
    for (const auto& s : *side) CHECK(s.mutation->spec == MutationSpec{MutationKind::t2a, std::nullopt, 4});
  const auto same = build_setting3(dm, dnm, MutationSpec{});
  CHECK(ids(same.members) == ids(dm));
  CHECK(ids(same.non_members) == ids(dnm));
  CHECK(same.members[0].text == dm[0].text);
}

TEST_CASE("prefix snippets stay out of built sets") {
  const auto [dm, dnm] = split(10, 30);
  const auto bundle = sample_prefixes(dnm, 12, 2);
  for (const auto& spec : {SettingSpec{SettingId::s1, MutationSpec{MutationKind::t1, std::nullopt, 2}, {}, {}, 2},
                           SettingSpec{SettingId::s2, std::nullopt, CloneLevel{CloneKind::type2, 0}, {0.5}, 2},
                           SettingSpec{SettingId::s3, MutationSpec{MutationKind::t2b, std::nullopt, 2}, {}, {}, 2}}) {
    const auto set = build_setting(spec, dm, dnm, 1, bundle.excluded_ids);
    std::set<std::string> origins;
    for (const auto* side : {&set.members, &set.non_members})
      for (const auto& s : *side) origins.insert(s.origin_id.value_or(s.id));
    for (const auto& id : bundle.snippet_ids) CHECK(origins.count(id) == 0);
    CHECK(set.excluded_ids == bundle.excluded_ids);
  }
}

TEST_CASE("builders are deterministic across thread counts and round-trip") {
  const auto [dm, dnm] = split(12, 12);
  const auto a = build_setting2(dm, dnm, {CloneKind::type3, 0.9}, 5, {}, 1);
  const auto b = build_setting2(dm, dnm, {CloneKind::type3, 0.9}, 5, {}, 6);
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(eval_set_from_json(nlohmann::json::parse(to_json(a).dump())) == a);

  const auto bundle = sample_prefixes(dnm, 3, 1);
  CHECK(prefix_bundle_from_json(nlohmann::json::parse(to_json(bundle).dump())) == bundle);
}

TEST_CASE("setting specs and clone levels") {
  CHECK(clone_level_from_string("type3@0.7") == CloneLevel{CloneKind::type3, 0.7});
  CHECK(clone_level_from_string("type3(0.5)") == CloneLevel{CloneKind::type3, 0.5});
  CHECK(to_string(CloneLevel{CloneKind::type3, 0.9}) == "type3@0.9");
  CHECK_THROWS_AS(clone_level_from_string("type4"), Error);
  CHECK(setting_from_string("2") == SettingId::s2);
  SettingSpec bad{SettingId::s2, MutationSpec{MutationKind::t1, std::nullopt, 0}, CloneLevel{}, {}, 0};
  CHECK_THROWS_AS(bad.check(), Error);
  const auto [dm, dnm] = split(2, 2);
  std::vector<CodeSample> overlap = dnm;
  overlap[0].id = dm[0].id;
  CHECK_THROWS_AS(build_setting3(dm, overlap, MutationSpec{}), Error);
}
