#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "smallsum/classifier.hpp"
#include "smallsum/isoperimetry.hpp"
#include "smallsum/mutation.hpp"
#include "smallsum/serialize.hpp"
#include "smallsum/setops.hpp"
#include "smallsum/verifier.hpp"

using namespace smallsum;

namespace {

constexpr int kOk = 0;
constexpr int kViolations = 1;
constexpr int kUsage = 2;

void emit(const Json& j) { std::cout << j.dump() << '\n'; }

int mutant_id(const std::string& name) {
  if (name.empty()) return mutation::kNone;
  for (const auto& s : mutation::sites())
    if (name == s.name) return s.id;
  try {
    return std::stoi(name);
  } catch (const std::exception&) {
    throw Error("unknown mutant: " + name);
  }
}

KappaOptions kappa_options(const std::string& mode) {
  KappaOptions o;
  o.mode = parse_kappa_mode(mode);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smallsum: sumsets, connectivity, atoms and small-sumset structure"};
  app.require_subcommand(1);
  std::string mutant;
  app.add_option("--mutant", mutant, "flip one equality check")->group("");

  // kappa / atoms
  std::string group, set_literal, mode = "auto";
  unsigned k = 1;
  bool no_fragments = false;
  auto* kappa_cmd = app.add_subcommand("kappa", "kappa_k(S) with fragments and atoms");
  auto* atoms_cmd = app.add_subcommand("atoms", "atoms, degeneracy, hyper-atom and super-atom of S");
  for (auto* c : {kappa_cmd, atoms_cmd}) {
    c->add_option("--group", group, "factor list, e.g. 2,2,3")->required();
    c->add_option("--set,--S", set_literal, "the set S")->required();
    c->add_option("--k", k, "level")->capture_default_str();
    c->add_option("--mode", mode, "exact|seeded|auto")->capture_default_str();
  }
  kappa_cmd->add_flag("--no-fragments", no_fragments, "omit the fragment list");

  // classify
  std::string theorem, s_lit, t_lit;
  int mu = 0;
  auto* classify_cmd = app.add_subcommand("classify", "structural case of a pair");
  classify_cmd->add_option("--theorem", theorem, "3x3|twothird|modular|near|n4|n3|kemperman|grynkiewicz")
      ->required();
  classify_cmd->add_option("--group", group)->required();
  classify_cmd->add_option("--S,--A", s_lit)->required();
  classify_cmd->add_option("--T,--B", t_lit);
  classify_cmd->add_option("--mu", mu)->capture_default_str();
  classify_cmd->add_option("--mode", mode)->capture_default_str();

  // verify
  InstanceFilter filter;
  std::vector<std::string> groups;
  std::string sampling = "exhaustive";
  std::optional<int> filter_mu;
  bool do_minimize = false, list = false;
  std::uint32_t max_order = 0;
  auto* verify_cmd = app.add_subcommand("verify", "sweep a statement over many instances");
  verify_cmd->add_option("--theorem", theorem, "statement id (see --list)");
  verify_cmd->add_flag("--list", list, "print the statement ids");
  verify_cmd->add_option("--max-order", max_order, "largest group order");
  verify_cmd->add_option("--min-order", filter.min_order)->capture_default_str();
  verify_cmd->add_option("--group", groups, "explicit groups (repeatable)");
  verify_cmd->add_option("--s-min", filter.s_min);
  verify_cmd->add_option("--s-max", filter.s_max);
  verify_cmd->add_option("--t-min", filter.t_min);
  verify_cmd->add_option("--t-max", filter.t_max);
  verify_cmd->add_option("--mu", filter_mu);
  verify_cmd->add_option("--sampling", sampling, "exhaustive|random")->capture_default_str();
  verify_cmd->add_option("--seed", filter.seed)->capture_default_str();
  verify_cmd->add_option("--count", filter.count, "random instances")->capture_default_str();
  verify_cmd->add_option("--budget", filter.budget, "estimated sumset evaluations")
      ->capture_default_str();
  verify_cmd->add_option("--workers", filter.workers, "0 reads SMALLSUM_WORKERS");
  verify_cmd->add_option("--mode", mode)->capture_default_str();
  verify_cmd->add_flag("--minimize", do_minimize, "append minimized violations");

  // minimize
  std::string instance_file;
  auto* min_cmd = app.add_subcommand("minimize", "shrink a failing instance");
  min_cmd->add_option("--theorem", theorem)->required();
  min_cmd->add_option("--instance", instance_file, "JSON instance file");
  min_cmd->add_option("--group", group);
  min_cmd->add_option("--S,--A", s_lit);
  min_cmd->add_option("--T,--B", t_lit);
  min_cmd->add_option("--mu", mu);
  min_cmd->add_option("--mode", mode)->capture_default_str();

  // subgroups
  auto* sub_cmd = app.add_subcommand("subgroups", "every subgroup of a group");
  sub_cmd->add_option("--group", group)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    mutation::set_active(mutant_id(mutant));

    if (*kappa_cmd) {
      const GroupSpec g = parse_group(group);
      const SubsetMask s = parse_set(g, set_literal);
      emit(json_of(kappa(s, k, kappa_options(mode)), !no_fragments));
      return kOk;
    }

    if (*atoms_cmd) {
      const GroupSpec g = parse_group(group);
      const SubsetMask s = parse_set(g, set_literal);
      const KappaOptions opts = kappa_options(mode);
      const ConnectivityReport r = kappa(s, k, opts);
      Json j = {{"k", k}, {"kappa", r.kappa}, {"atom_size", r.atom_size}, {"exact", r.exact}};
      j["atoms"] = json_of(r, false)["atoms"];
      if (g.order() >= 3) {
        const DegeneracyResult d = is_degenerate(s, opts);
        j["degeneracy"] = json_of(d);
        if (d.status == Degeneracy::kDegenerate) {
          const HyperAtom h = hyper_atom(s, opts);
          j["hyper_atom"] = json_of(h.subgroup);
          j["hyper_atom_unique"] = h.unique;
        }
      }
      if (auto sa = find_super_atom(s, opts)) {
        j["super_atom"] = json_of(sa->subgroup);
        j["super_atom_kind"] = to_string(sa->kind);
      } else {
        j["super_atom"] = nullptr;
      }
      emit(j);
      return kOk;
    }

    if (*classify_cmd) {
      const auto id = parse_theorem(theorem);
      if (!id) throw CLI::ValidationError("--theorem", "unknown theorem " + theorem);
      const GroupSpec g = parse_group(group);
      PairInstance inst{g, parse_set(g, s_lit), t_lit.empty() ? SubsetMask(g) : parse_set(g, t_lit),
                        mu};
      Workspace ws(kappa_options(mode));
      const StructureVerdict v = classify(*id, inst, ws);
      emit(json_of(v));
      return v.counterexample ? kViolations : kOk;
    }

    if (*verify_cmd) {
      if (list) {
        for (const auto& t : theorem_registry())
          emit({{"theorem", t.id}, {"default_max_order", t.default_max_order}, {"summary", t.summary}});
        return kOk;
      }
      if (theorem.empty()) throw CLI::ValidationError("--theorem", "required");
      for (const auto& g : groups) filter.groups.push_back(parse_group(g).factors());
      filter.max_order = max_order;
      filter.mu = filter_mu;
      if (sampling == "exhaustive") {
        filter.sampling = Sampling::kExhaustive;
      } else if (sampling == "random") {
        filter.sampling = Sampling::kRandom;
      } else {
        throw CLI::ValidationError("--sampling", "exhaustive or random");
      }
      filter.kappa = kappa_options(mode);
      const VerificationReport rep = verify_theorem(theorem, filter);
      for (const auto& v : rep.violations) emit(json_of(v));
      if (do_minimize && !rep.violations.empty()) {
        for (const auto& m : minimize_all(rep.violations, filter.kappa)) emit(json_of(m));
      }
      emit(json_of(rep, false));
      std::cerr << rep.theorem << ": " << rep.instances << " instances, " << rep.applicable
                << " applicable, " << rep.violation_count << " violations, " << rep.seconds
                << " s\n";
      return rep.pass() ? kOk : kViolations;
    }

    if (*min_cmd) {
      theorem_info(theorem);
      PairInstance inst;
      if (!instance_file.empty()) {
        std::ifstream in(instance_file);
        if (!in) throw Error("cannot read " + instance_file);
        inst = instance_from_json(Json::parse(in));
      } else {
        if (group.empty() || s_lit.empty()) throw CLI::ValidationError("--instance", "or --group and --S");
        const GroupSpec g = parse_group(group);
        inst = {g, parse_set(g, s_lit), t_lit.empty() ? SubsetMask(g) : parse_set(g, t_lit), mu};
      }
      const KappaOptions opts = kappa_options(mode);
      const auto clause = reproduce(theorem, inst, opts);
      if (!clause) throw Error("the instance does not fail " + theorem);
      emit(json_of(minimize({theorem, inst, *clause, false}, opts)));
      return kOk;
    }

    if (*sub_cmd) {
      const GroupSpec g = parse_group(group);
      Json out = Json::array();
      for (const auto& h : all_subgroups(g)) out.push_back(json_of(h));
      emit({{"group", json_of(g)}, {"count", out.size()}, {"subgroups", out}});
      return kOk;
    }
  } catch (const HypothesisError& e) {
    emit({{"error", "hypothesis"}, {"theorem", e.theorem()}, {"clause", e.clause()}});
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
