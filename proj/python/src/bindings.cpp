// The module speaks JSON text; the Python package decodes it.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "smallsum/classifier.hpp"
#include "smallsum/isoperimetry.hpp"
#include "smallsum/mutation.hpp"
#include "smallsum/serialize.hpp"
#include "smallsum/setops.hpp"
#include "smallsum/verifier.hpp"

namespace py = pybind11;
using namespace smallsum;

namespace {

GroupSpec group_arg(const std::string& g) { return group_from_json(Json::parse(g)); }

SubsetMask set_arg(const GroupSpec& g, const std::string& s) {
  return set_from_json(g, Json::parse(s));
}

KappaOptions options(const std::string& mode) {
  KappaOptions o;
  o.mode = parse_kappa_mode(mode);
  return o;
}

std::string sumset_of(const std::string& g, const std::string& a, const std::string& b) {
  const GroupSpec grp = group_arg(g);
  return json_of(sumset(set_arg(grp, a), set_arg(grp, b))).dump();
}

std::string period_of(const std::string& g, const std::string& a) {
  const GroupSpec grp = group_arg(g);
  return json_of(period(set_arg(grp, a))).dump();
}

std::string normalize_of(const std::string& g, const std::string& a) {
  const GroupSpec grp = group_arg(g);
  const auto [x, shift] = normalize(set_arg(grp, a));
  return Json{{"set", json_of(x)}, {"shift", json_of(grp, shift)}}.dump();
}

std::string kappa_of(const std::string& g, const std::string& s, unsigned k, const std::string& mode,
                     bool fragments) {
  const GroupSpec grp = group_arg(g);
  return json_of(kappa(set_arg(grp, s), k, options(mode)), fragments).dump();
}

std::string degeneracy_of(const std::string& g, const std::string& s, const std::string& mode) {
  const GroupSpec grp = group_arg(g);
  return json_of(is_degenerate(set_arg(grp, s), options(mode))).dump();
}

std::string hyper_atom_of(const std::string& g, const std::string& s, const std::string& mode) {
  const GroupSpec grp = group_arg(g);
  const HyperAtom h = hyper_atom(set_arg(grp, s), options(mode));
  return Json{{"subgroup", json_of(h.subgroup)}, {"unique", h.unique}}.dump();
}

std::string super_atom_of(const std::string& g, const std::string& s, const std::string& mode) {
  const GroupSpec grp = group_arg(g);
  const auto sa = find_super_atom(set_arg(grp, s), options(mode));
  if (!sa) return "null";
  return Json{{"subgroup", json_of(sa->subgroup)}, {"kind", to_string(sa->kind)}}.dump();
}

std::string subgroups_of(const std::string& g) {
  Json out = Json::array();
  for (const auto& h : all_subgroups(group_arg(g))) out.push_back(json_of(h));
  return out.dump();
}

std::string classify_of(const std::string& theorem, const std::string& instance,
                        const std::string& mode) {
  const auto id = parse_theorem(theorem);
  if (!id) throw Error("unknown theorem: " + theorem);
  Workspace ws(options(mode));
  return json_of(classify(*id, instance_from_json(Json::parse(instance)), ws)).dump();
}

std::string verify_of(const std::string& theorem, const std::string& filter_json) {
  const Json j = Json::parse(filter_json);
  InstanceFilter f;
  if (j.contains("groups"))
    for (const auto& g : j["groups"]) f.groups.push_back(group_from_json(g).factors());
  f.min_order = j.value("min_order", f.min_order);
  f.max_order = j.value("max_order", f.max_order);
  f.s_min = j.value("s_min", f.s_min);
  f.s_max = j.value("s_max", f.s_max);
  f.t_min = j.value("t_min", f.t_min);
  f.t_max = j.value("t_max", f.t_max);
  if (j.contains("mu") && !j["mu"].is_null()) f.mu = j["mu"].get<int>();
  const std::string sampling = j.value("sampling", std::string("exhaustive"));
  if (sampling != "exhaustive" && sampling != "random") throw Error("sampling: exhaustive or random");
  f.sampling = sampling == "random" ? Sampling::kRandom : Sampling::kExhaustive;
  f.seed = j.value("seed", f.seed);
  f.count = j.value("count", f.count);
  f.budget = j.value("budget", f.budget);
  f.workers = j.value("workers", f.workers);
  f.kappa = options(j.value("mode", std::string("auto")));
  VerificationReport r;
  {
    py::gil_scoped_release release;
    r = verify_theorem(theorem, f);
  }
  return json_of(r).dump();
}

std::string minimize_of(const std::string& theorem, const std::string& instance,
                        const std::string& mode) {
  const PairInstance inst = instance_from_json(Json::parse(instance));
  const KappaOptions o = options(mode);
  const auto clause = reproduce(theorem, inst, o);
  if (!clause) throw Error("the instance does not fail " + theorem);
  return json_of(minimize({theorem, inst, *clause, false}, o)).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "smallsum core";

  auto& error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<HypothesisError>(m, "HypothesisError", error.ptr());

  m.def("abelian_groups", &abelian_groups_up_to, py::arg("max_order"), py::arg("min_order") = 2);
  m.def("sumset", &sumset_of);
  m.def("period", &period_of);
  m.def("normalize", &normalize_of);
  m.def("kappa", &kappa_of);
  m.def("degeneracy", &degeneracy_of);
  m.def("hyper_atom", &hyper_atom_of);
  m.def("super_atom", &super_atom_of);
  m.def("subgroups", &subgroups_of);
  m.def("classify", &classify_of);
  m.def("verify", &verify_of);
  m.def("minimize", &minimize_of);
  m.def("theorems", [] {
    std::vector<std::string> out;
    for (const auto& t : theorem_registry()) out.push_back(t.id);
    return out;
  });
  m.def("mutation_sites", [] {
    std::vector<std::string> out;
    for (const auto& s : mutation::sites()) out.push_back(s.name);
    return out;
  });
}
