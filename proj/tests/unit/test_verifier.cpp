#include <doctest.h>

#include <set>

#include "smallsum/error.hpp"
#include "smallsum/mutation.hpp"
#include "smallsum/serialize.hpp"
#include "smallsum/setops.hpp"
#include "smallsum/verifier.hpp"

using namespace smallsum;

namespace {

std::string key(const PairInstance& p) {
  return p.group.to_string() + p.s.to_hex() + p.t.to_hex() + std::to_string(p.mu);
}

}  // namespace

TEST_CASE("pair enumeration in Z_6 covers every normalized pair once") {
  InstanceFilter f;
  f.groups = {{6}};
  const auto all = enumerate_instances(f, "kneser");
  CHECK(all.size() == 32 * 32);
  std::set<std::string> seen;
  for (const auto& p : all) {
    CHECK(p.s.contains(Element{0}));
    CHECK(p.t.contains(Element{0}));
    CHECK(p.mu == sumset_defect(p.s, p.t));
    seen.insert(key(p));
  }
  CHECK(seen.size() == all.size());
  for (std::size_t i = 1; i < all.size(); ++i)
    if (all[i].s == all[i - 1].s) CHECK(all[i - 1].t.size() <= all[i].t.size());
}

TEST_CASE("single-set enumeration and size filters") {
  InstanceFilter f;
  f.groups = {{8}, {2, 4}};
  f.s_min = 3;
  f.s_max = 3;
  const auto all = enumerate_instances(f, "one_atoms");
  CHECK(all.size() == 2 * 21);
  for (const auto& p : all) CHECK(p.s.size() == 3);
  f.groups.clear();
  f.max_order = 8;
  f.min_order = 8;
  CHECK(filter_groups(f, theorem_info("one_atoms")).size() == 3);
}

TEST_CASE("random sampling is reproducible and sized") {
  InstanceFilter f;
  f.sampling = Sampling::kRandom;
  f.seed = 1;
  f.count = 1000;
  f.max_order = 10;
  const auto a = enumerate_instances(f, "kneser");
  const auto b = enumerate_instances(f, "kneser");
  REQUIRE(a.size() == 1000);
  REQUIRE(b.size() == 1000);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(key(a[i]) == key(b[i]));
  f.seed = 2;
  const auto c = enumerate_instances(f, "kneser");
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += key(a[i]) == key(c[i]);
  CHECK(same < 1000);
  const VerificationReport r = verify_theorem("kneser", [&] {
    InstanceFilter g = f;
    g.seed = 1;
    return g;
  }());
  CHECK(r.instances == 1000);
  CHECK(r.pass());
}

TEST_CASE("budget refuses oversized exhaustive sweeps") {
  InstanceFilter f;
  f.max_order = 20;
  f.budget = 1e6;
  CHECK_THROWS_AS(verify_theorem("kneser", f), Error);
  CHECK_THROWS_AS(verify_theorem("no-such-statement", InstanceFilter{}), Error);
}

TEST_CASE("reports do not depend on the worker count") {
  InstanceFilter f;
  f.max_order = 9;
  f.workers = 1;
  const VerificationReport one = verify_theorem("n3", f);
  f.workers = 3;
  const VerificationReport three = verify_theorem("n3", f);
  CHECK(three.workers == 3);
  Json a = json_of(one), b = json_of(three);
  for (auto* j : {&a, &b}) {
    j->erase("seconds");
    j->erase("workers");
  }
  CHECK(a == b);
}

TEST_CASE("a mutated classifier fails and the minimizer shrinks the failure") {
  mutation::Guard guard(mutation::kN3Translate);
  InstanceFilter f;
  f.max_order = 9;
  f.workers = 1;
  const VerificationReport r = verify_theorem("n3", f);
  REQUIRE_FALSE(r.pass());
  const Counterexample& c = r.violations.front();
  const Counterexample m = minimize(c);
  CHECK(m.minimized);
  CHECK(m.failed_clause.substr(0, m.failed_clause.find(" (")) ==
        c.failed_clause.substr(0, c.failed_clause.find(" (")));
  CHECK(m.instance.group.order() <= c.instance.group.order());
  CHECK(m.instance.s.size() + m.instance.t.size() <= c.instance.s.size() + c.instance.t.size());
  CHECK(reproduce("n3", m.instance).has_value());
  const Counterexample again = minimize(m);
  CHECK(key(again.instance) == key(m.instance));
  const auto all = minimize_all(r.violations);
  CHECK(!all.empty());
  CHECK(all.size() <= r.violations.size());
}

TEST_CASE("minimize rejects instances that do not fail") {
  const GroupSpec z5 = make_group({5});
  const PairInstance p{z5, SubsetMask::from_indices(z5, {0, 1}), SubsetMask::from_indices(z5, {0, 2}), 0};
  CHECK_FALSE(reproduce("kneser", p));
  CHECK_THROWS_AS(minimize({"kneser", p, "bound", false}), Error);
}

TEST_CASE("worker resolution") {
  CHECK(resolve_workers(4) == 4);
  CHECK(resolve_workers(0) >= 1);
}

TEST_CASE("JSON round trips") {
  const GroupSpec g = make_group({2, 6});
  const SubsetMask s = SubsetMask::from_indices(g, {0, 3, 7});
  CHECK(json_of(g) == Json::parse("[2,6]"));
  CHECK(json_of(s) == Json::parse("[[0,0],[0,3],[1,1]]"));
  CHECK(set_from_json(g, json_of(s)) == s);
  CHECK(parse_set(g, s.to_hex()) == s);
  CHECK(parse_set(g, "[[0,0],[0,3],[1,1]]") == s);
  CHECK(parse_set(g, "[0,0],[0,3],[1,1]") == s);
  CHECK(parse_set(g, "[0,3,7]") == s);
  CHECK(group_from_json(Json("2,6")) == g);
  CHECK(group_from_json(Json(6)) == make_group({6}));
  const GroupSpec z6 = make_group({6});
  CHECK(parse_set(z6, "[[0]],[[1]]") == SubsetMask::from_indices(z6, {0, 1}));
  CHECK_THROWS_AS(parse_set(z6, "[[0,1]]"), Error);
  CHECK_THROWS_AS(parse_set(z6, "[9]"), Error);

  const PairInstance p{g, s, SubsetMask::from_indices(g, {0, 1}), 1};
  const PairInstance q = instance_from_json(json_of(p));
  CHECK(q.group == p.group);
  CHECK(q.s == p.s);
  CHECK(q.t == p.t);
  CHECK(q.mu == p.mu);
}

TEST_CASE("verdict JSON carries the witnesses") {
  const GroupSpec z7 = make_group({7});
  const SubsetMask s = SubsetMask::from_indices(z7, {0, 1, 3});
  const Json j = json_of(classify(TheoremId::k3x3, {z7, s, s, 0}));
  CHECK(j["theorem"] == "3x3");
  CHECK(j["principal"] == "translate");
  CHECK(j["verified"] == true);
  CHECK(j["cases"][0]["a"] == Json::parse("[0]"));
}
