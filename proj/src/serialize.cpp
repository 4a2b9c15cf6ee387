#include "smallsum/serialize.hpp"

#include <cctype>

namespace smallsum {

namespace {

const char* sampling_name(Sampling s) { return s == Sampling::kExhaustive ? "exhaustive" : "random"; }

Json set_list(const SubsetMask& s) {
  Json out = Json::array();
  s.for_each([&](Element x) { out.push_back(json_of(s.group(), x)); });
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

Json json_of(const GroupSpec& g) { return g.factors(); }

Json json_of(const GroupSpec& g, Element x) { return g.digits(x); }

Json json_of(const SubsetMask& s) { return set_list(s); }

Json json_of(const Subgroup& h) {
  Json gens = Json::array();
  for (auto x : h.generators) gens.push_back(json_of(h.members.group(), x));
  return {{"order", h.order()},
          {"members", set_list(h.members)},
          {"generators", gens},
          {"hex", h.members.to_hex()}};
}

Json json_of(const ConnectivityReport& r, bool with_fragments) {
  Json j = {{"k", r.k},
            {"kappa", r.kappa},
            {"separable", r.separable},
            {"mode", to_string(r.mode)},
            {"exact", r.exact},
            {"atom_size", r.atom_size},
            {"fragments_complete", r.fragments_complete},
            {"fragment_count", r.fragments.size()}};
  Json atoms = Json::array();
  for (const auto& a : r.atoms) atoms.push_back(set_list(a));
  j["atoms"] = atoms;
  if (with_fragments) {
    Json frags = Json::array();
    for (const auto& f : r.fragments) frags.push_back(set_list(f));
    j["fragments"] = frags;
  }
  return j;
}

Json json_of(const DegeneracyResult& d) {
  const char* status = d.status == Degeneracy::kDegenerate      ? "degenerate"
                       : d.status == Degeneracy::kNonDegenerate ? "non_degenerate"
                                                                : "not_separable";
  Json j = {{"status", status}, {"kappa2", d.kappa2}};
  j["subgroup"] = d.subgroup ? json_of(*d.subgroup) : Json(nullptr);
  return j;
}

Json json_of(const MatchingAssignment& m) {
  Json sp = Json::array(), tp = Json::array(), as = Json::object();
  for (const auto& p : m.s_parts) sp.push_back(set_list(p));
  for (const auto& p : m.t_parts) tp.push_back(set_list(p));
  for (const auto& [i, n] : m.assignment) as[std::to_string(i)] = n;
  return {{"H", json_of(m.h)},   {"s_parts", sp},         {"t_parts", tp},
          {"J", m.matched},      {"assignment", as},      {"size", m.size()},
          {"meets_bound", m.meets_bound}};
}

Json json_of(const GroupSpec& g, const ProgressionWitness& w) {
  if (w.wildcard) return {{"wildcard", true}, {"start", json_of(g, w.start)}, {"length", w.length}};
  Json del = Json::array();
  for (auto x : w.deleted) del.push_back(json_of(g, x));
  return {{"wildcard", false},     {"difference", json_of(g, w.difference)},
          {"start", json_of(g, w.start)}, {"length", w.length},
          {"deleted", del},        {"j", w.j()},
          {"wraps", w.wraps}};
}

Json json_of(const HDecomposition& d) {
  const GroupSpec& g = d.h.members.group();
  const Morphism phi = quotient(g, d.h);
  Json parts = Json::array(), cosets = Json::array();
  for (const auto& p : d.parts) parts.push_back(set_list(p));
  for (auto c : d.cosets) cosets.push_back(json_of(phi.target, c));
  Json j = {{"H", d.h.members.to_hex()},
            {"parts", parts},
            {"cosets", cosets},
            {"quotient", json_of(phi.target)},
            {"is_progression", d.is_progression},
            {"wildcard", d.wildcard}};
  if (d.is_progression && !d.wildcard) j["difference"] = json_of(phi.target, d.difference);
  return j;
}

Json json_of(const EssentialPairWitness& w) {
  Json j = {{"H", json_of(w.h)},
            {"kind", to_string(w.kind)},
            {"s_decomp", json_of(w.s_decomp)},
            {"t_decomp", json_of(w.t_decomp)}};
  if (w.k0) j["K0"] = json_of(*w.k0);
  if (w.k1) j["K1"] = json_of(*w.k1);
  return j;
}

Json json_of(const QuasiPeriodicPartition& p) {
  return {{"H", p.h.members.to_hex()}, {"A0", set_list(p.a0)}, {"A1", set_list(p.a1)}};
}

Json json_of(const CaseWitness& w, const GroupSpec& g) {
  Json j = {{"case", w.label}};
  if (w.h) j["H"] = json_of(*w.h);
  if (!w.h_role.empty()) j["H_role"] = w.h_role;
  if (w.essential) j["essential"] = json_of(*w.essential);
  if (w.s_decomp) j["s_decomp"] = json_of(*w.s_decomp);
  if (w.t_decomp) j["t_decomp"] = json_of(*w.t_decomp);
  if (w.s_prog || w.t_prog) {
    const GroupSpec pg = w.quotient_level && w.h ? quotient(g, *w.h).target : g;
    if (w.s_prog) j["s_progression"] = json_of(pg, *w.s_prog);
    if (w.t_prog) j["t_progression"] = json_of(pg, *w.t_prog);
    j["quotient_level"] = w.quotient_level;
  }
  if (w.a) j["a"] = json_of(g, *w.a);
  if (w.b) j["b"] = json_of(g, *w.b);
  if (!w.branch.empty()) j["branch"] = w.branch;
  if (w.nu) j["nu"] = *w.nu;
  if (!w.periodic_side.empty()) j["periodic_side"] = w.periodic_side;
  if (w.a_part) j["a_partition"] = json_of(*w.a_part);
  if (w.b_part) j["b_partition"] = json_of(*w.b_part);
  if (!w.facts.empty()) j["facts"] = w.facts;
  return j;
}

Json json_of(const StructureVerdict& v) {
  Json cases = Json::array();
  for (const auto& c : v.cases) cases.push_back(json_of(c, v.instance.group));
  return {{"theorem", to_string(v.theorem)},
          {"instance", json_of(v.instance)},
          {"principal", v.principal},
          {"cases", cases},
          {"verified", v.verified},
          {"counterexample", v.counterexample},
          {"failed_clause", v.failed_clause}};
}

Json json_of(const PairInstance& p) {
  return {{"group", json_of(p.group)},
          {"S", set_list(p.s)},
          {"T", set_list(p.t)},
          {"mu", p.mu},
          {"S_hex", p.s.to_hex()},
          {"T_hex", p.t.to_hex()}};
}

Json json_of(const Counterexample& c) {
  return {{"type", "violation"},
          {"theorem", c.theorem},
          {"failed_clause", c.failed_clause},
          {"minimized", c.minimized},
          {"instance", json_of(c.instance)}};
}

Json json_of(const VerificationReport& r, bool with_violations) {
  Json groups = Json::array();
  for (const auto& g : r.groups) groups.push_back(g);
  Json examples = Json::object();
  for (const auto& [k, v] : r.examples) examples[k] = json_of(v);
  Json j = {{"type", "summary"},
            {"theorem", r.theorem},
            {"sampling", sampling_name(r.sampling)},
            {"kappa_mode", to_string(r.kappa_mode)},
            {"seed", r.seed},
            {"groups", groups},
            {"instances", r.instances},
            {"applicable", r.applicable},
            {"violation_count", r.violation_count},
            {"pass", r.pass()},
            {"tally", r.tally},
            {"examples", examples},
            {"estimate", r.estimate},
            {"workers", r.workers},
            {"seconds", r.seconds}};
  if (with_violations) {
    Json vs = Json::array();
    for (const auto& v : r.violations) vs.push_back(json_of(v));
    j["violations"] = vs;
  }
  return j;
}

GroupSpec group_from_json(const Json& j) {
  if (j.is_string()) return parse_group(j.get<std::string>());
  if (j.is_number_integer()) return make_group({j.get<std::uint32_t>()});
  if (j.is_array()) return make_group(j.get<std::vector<std::uint32_t>>());
  throw Error("group must be a factor list");
}

Element element_from_json(const GroupSpec& g, const Json& in) {
  const Json* p = &in;
  // "[[0]],[[1]]" reads as a list of singleton-wrapped tuples
  while (p->is_array() && p->size() == 1 && p->front().is_array()) p = &p->front();
  const Json& j = *p;
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v < 0 || v >= g.order()) throw Error("element index out of range: " + j.dump());
    return Element{static_cast<std::uint32_t>(v)};
  }
  if (!j.is_array()) throw Error("element must be a tuple or an index: " + j.dump());
  const auto digits = j.get<std::vector<std::int64_t>>();
  if (digits.size() != g.factors().size())
    throw Error("element " + j.dump() + " does not match group " + g.to_string());
  return g.from_digits(digits);
}

SubsetMask set_from_json(const GroupSpec& g, const Json& j) {
  if (j.is_string()) return parse_set(g, j.get<std::string>());
  if (!j.is_array()) throw Error("set must be a list of elements");
  SubsetMask s(g);
  for (const auto& e : j) s.insert(element_from_json(g, e));
  return s;
}

SubsetMask parse_set(const GroupSpec& g, const std::string& literal) {
  const std::string text = trim(literal);
  if (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0) return SubsetMask::from_hex(g, text);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) j = Json::parse("[" + text + "]", nullptr, false);
  if (j.is_discarded()) throw Error("cannot parse set literal: " + literal);
  if (j.is_number_integer()) j = Json::array({j});
  return set_from_json(g, j);
}

PairInstance instance_from_json(const Json& j) {
  if (!j.contains("group") || !j.contains("S")) throw Error("instance needs group and S");
  PairInstance p;
  p.group = group_from_json(j.at("group"));
  p.s = set_from_json(p.group, j.at("S"));
  p.t = j.contains("T") ? set_from_json(p.group, j.at("T")) : SubsetMask(p.group);
  p.mu = j.value("mu", 0);
  return p;
}

}  // namespace smallsum
