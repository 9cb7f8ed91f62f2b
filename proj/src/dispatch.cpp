#include "sullivan/dispatch.hpp"

#include "sullivan/cohomology.hpp"
#include "sullivan/errors.hpp"
#include "sullivan/factorization.hpp"
#include "sullivan/gottlieb.hpp"
#include "sullivan/homotopy.hpp"
#include "sullivan/minimal_model.hpp"
#include "sullivan/workspace.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <ostream>
#include <sstream>

namespace sullivan {

namespace {

using njson = nlohmann::ordered_json;

bool verbose_enabled() {
  const char* v = std::getenv("SULLIVAN_VERBOSE");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

ModelPtr get_model(const Workspace& w, const std::string& name) {
  auto it = w.models.find(name);
  if (it == w.models.end()) throw parse_error("unknown model '" + name + "'");
  return it->second;
}

const Morphism& get_morphism(const Workspace& w, const std::string& name) {
  auto it = w.morphisms.find(name);
  if (it == w.morphisms.end()) throw parse_error("unknown morphism '" + name + "'");
  return it->second;
}

const PresentedAlgebra& get_presentation(const Workspace& w, const std::string& name) {
  auto it = w.presentations.find(name);
  if (it == w.presentations.end())
    throw parse_error("unknown presentation '" + name + "'");
  return it->second;
}

njson betti_json(const std::vector<size_t>& b) {
  njson a = njson::array();
  for (size_t x : b) a.push_back(x);
  return a;
}

// Betti numbers through the certified range with trailing zeros dropped, the
// compact shape used when the interesting part is the nonzero prefix.
njson trimmed_betti(const Model& m) {
  std::vector<size_t> b = betti_range(m, certified_degree(m));
  while (b.size() > 1 && b.back() == 0) b.pop_back();
  return betti_json(b);
}

void finish(njson& doc, int certified, bool truncated) {
  doc["certified_up_to"] = certified;
  doc["truncated"] = truncated;
}

std::vector<Q> parse_grid(const std::string& spec) {
  std::vector<Q> grid;
  std::string tok;
  std::istringstream in(spec);
  while (std::getline(in, tok, ',')) {
    size_t a = tok.find_first_not_of(" \t");
    size_t b = tok.find_last_not_of(" \t");
    if (a == std::string::npos)
      throw parse_error("empty entry in --search-grid '" + spec + "'");
    tok = tok.substr(a, b - a + 1);
    Q q;
    try {
      q = Q(tok, 10);
    } catch (const std::invalid_argument&) {
      throw parse_error("bad rational '" + tok + "' in --search-grid");
    }
    if (q.get_den() == 0) throw parse_error("zero denominator in --search-grid");
    q.canonicalize();
    grid.push_back(q);
  }
  if (grid.empty()) throw parse_error("--search-grid must list at least one value");
  return grid;
}

// ---------------------------------------------------------------------------
// --human rendering: a generic indented view of the JSON document.

bool scalar_like(const njson& v) { return !v.is_object() && !v.is_array(); }

std::string scalar_str(const njson& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

bool inline_array(const njson& v) {
  if (!v.is_array()) return false;
  for (const njson& x : v)
    if (!scalar_like(x)) return false;
  return true;
}

std::string inline_str(const njson& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += scalar_str(v[i]);
  }
  return s + "]";
}

std::vector<std::string> render_lines(const njson& v) {
  std::vector<std::string> lines;
  if (v.is_object()) {
    for (const auto& [k, val] : v.items()) {
      if (scalar_like(val)) {
        lines.push_back(k + ": " + scalar_str(val));
      } else if (inline_array(val)) {
        lines.push_back(k + ": " + inline_str(val));
      } else if (val.empty()) {
        lines.push_back(k + ": " + std::string(val.is_array() ? "[]" : "{}"));
      } else {
        lines.push_back(k + ":");
        for (const std::string& l : render_lines(val)) lines.push_back("  " + l);
      }
    }
  } else if (v.is_array()) {
    for (const njson& el : v) {
      std::vector<std::string> sub = scalar_like(el)
                                         ? std::vector<std::string>{scalar_str(el)}
                                         : render_lines(el);
      for (size_t i = 0; i < sub.size(); ++i)
        lines.push_back((i == 0 ? "- " : "  ") + sub[i]);
    }
  } else {
    lines.push_back(scalar_str(v));
  }
  return lines;
}

void emit(const njson& doc, bool human, std::ostream& out) {
  if (human) {
    for (const std::string& l : render_lines(doc)) out << l << "\n";
  } else {
    out << doc.dump(2) << "\n";
  }
}

// ---------------------------------------------------------------------------
// command handlers; each fills the document and returns the exit code

int cmd_validate(const Workspace& w, const std::string& name, njson& doc) {
  doc["command"] = "validate";
  doc["name"] = name;
  if (auto it = w.models.find(name); it != w.models.end()) {
    const Model& m = *it->second;
    ValidationReport r = validate_model(m);
    doc["kind"] = "model";
    doc["valid"] = r.valid;
    njson v = njson::array();
    for (const Violation& x : r.violations)
      v.push_back({{"code", x.code}, {"detail", x.detail}});
    doc["violations"] = v;
    finish(doc, m.bound(), r.truncated);
    return r.valid ? 0 : 1;
  }
  if (auto it = w.presentations.find(name); it != w.presentations.end()) {
    PresentedValidation r = validate_presented(it->second);
    doc["kind"] = "presentation";
    doc["valid"] = r.valid;
    doc["problems"] = r.problems;
    finish(doc, it->second.alg.bound(), false);
    return r.valid ? 0 : 1;
  }
  throw parse_error("unknown model or presentation '" + name + "'");
}

int cmd_cohomology(const Workspace& w, const std::string& name, int max_degree,
                   njson& doc) {
  ModelPtr m = get_model(w, name);
  int top = max_degree < 0 ? certified_degree(*m) : max_degree;
  if (top > certified_degree(*m))
    throw bound_error("cohomology of '" + name + "' is certified only to degree " +
                      std::to_string(certified_degree(*m)) +
                      "; raise the model's bound");
  doc["command"] = "cohomology";
  doc["name"] = name;
  doc["max_degree"] = top;
  doc["betti"] = betti_json(betti_range(*m, top));
  njson reps = njson::object();
  for (int n = 0; n <= top; ++n) {
    Cohomology h = cohomology(*m, n);
    if (h.reps.empty()) continue;
    njson list = njson::array();
    for (const Element& e : h.reps) list.push_back(el_str(m->alg, e));
    reps[std::to_string(n)] = list;
  }
  doc["representatives"] = reps;
  finish(doc, top, false);
  return 0;
}

int cmd_euler(const Workspace& w, const std::string& name, njson& doc) {
  ModelPtr m = get_model(w, name);
  EulerReport r = euler_characteristic(*m);
  doc["command"] = "euler";
  doc["name"] = name;
  doc["chi"] = r.chi;
  doc["stable"] = r.stable;
  doc["window"] = r.window;
  doc["betti"] = betti_json(r.betti);
  finish(doc, r.certified, !r.stable);
  return 0;
}

int cmd_gottlieb(const Workspace& w, const std::string& name, njson& doc) {
  ModelPtr m = get_model(w, name);
  GottliebGroups g = gottlieb_groups(*m);
  doc["command"] = "gottlieb";
  doc["name"] = name;
  njson groups = njson::object();
  for (int n = 1; n <= m->bound(); ++n) {
    auto it = g.dim.find(n);
    groups[std::to_string(n)] = it == g.dim.end() ? 0 : it->second;
  }
  doc["groups"] = groups;
  doc["even_all_zero"] = even_gottlieb_degrees(g).empty();
  njson basis = njson::array();
  for (const GottliebElement& e : g.basis)
    basis.push_back(
        {{"degree", e.degree}, {"dual_generator", m->gen(e.pivot).name}});
  doc["basis"] = basis;
  finish(doc, m->bound(), false);
  return 0;
}

int cmd_normalize(const Workspace& w, const std::string& name, njson& doc) {
  ModelPtr m = get_model(w, name);
  NormalizedModel ns = normalize_gottlieb(m);
  doc["command"] = "normalize";
  doc["name"] = name;
  doc["verified"] = ns.conditions_verified;
  doc["failure"] = ns.failure;
  njson v = njson::array(), z = njson::array();
  if (ns.conditions_verified) {
    const Model& nm = *ns.change.model;
    for (size_t i : ns.v) v.push_back(nm.gen(i).name);
    for (size_t i : ns.z) z.push_back(nm.gen(i).name);
    Workspace tmp;
    tmp.model_order.push_back(nm.name);
    tmp.models[nm.name] = ns.change.model;
    doc["v"] = v;
    doc["z"] = z;
    doc["model_text"] = serialize_workspace(tmp);
  } else {
    doc["v"] = v;
    doc["z"] = z;
    doc["model_text"] = "";
  }
  finish(doc, m->bound(), false);
  return ns.conditions_verified ? 0 : 1;
}

int cmd_split(const Workspace& w, const std::string& name, njson& doc) {
  ModelPtr m = get_model(w, name);
  HomologyImage hi = evaluation_homology_image(m);
  doc["command"] = "split";
  doc["name"] = name;
  njson factors = njson::array();
  for (const auto& [gname, deg] : hi.split.factors) factors.push_back(deg);
  doc["factors"] = factors;
  doc["remainder_betti"] = trimmed_betti(*hi.split.remainder);
  doc["image_dim"] = hi.dimension;
  finish(doc, certified_degree(*m), false);
  return 0;
}

int cmd_total_gottlieb(const Workspace& w, const std::string& name, njson& doc) {
  ModelPtr m = get_model(w, name);
  doc["command"] = "total-gottlieb";
  doc["name"] = name;
  NormalizedModel ns = normalize_gottlieb(m);
  if (!ns.conditions_verified) {
    doc["ok"] = false;
    doc["failure"] = ns.failure;
    finish(doc, m->bound(), false);
    return 1;
  }
  IdealCheck dw = check_dw_condition(ns);
  if (!dw.ok) {
    doc["ok"] = false;
    doc["failure"] = "differential condition fails: " + dw.witness;
    finish(doc, m->bound(), false);
    return 1;
  }
  TotalGottliebElement tg = build_phi(ns);
  doc["ok"] = true;
  const Model& nm = *ns.change.model;
  const Model& sm = *tg.sphere_model;
  njson sgens = njson::array();
  for (size_t i : tg.vprime)
    sgens.push_back({{"name", sm.gen(i).name}, {"degree", sm.gen(i).degree}});
  doc["sphere_generators"] = sgens;
  njson gamma = njson::object(), phi = njson::object();
  for (size_t i = 0; i < nm.size(); ++i) {
    gamma[nm.gen(i).name] = el_str(sm.alg, tg.gamma.val[i]);
    phi[nm.gen(i).name] = el_str(tg.product.model->alg, tg.phi.val[i]);
  }
  doc["gamma"] = gamma;
  doc["phi"] = phi;
  doc["ghorbal_ok"] = check_ghorbal_form(tg.gamma, ns.v).ok;
  int cert = std::min(certified_degree(nm), certified_degree(sm));
  bool zero = true;
  for (int n = 1; n <= cert; ++n)
    zero = zero && rank(induced_map_matrix(tg.gamma, n)) == 0;
  doc["induced_zero_in_positive_degrees"] = zero;
  finish(doc, cert, false);
  return 0;
}

int cmd_homology_image(const Workspace& w, const std::string& name, njson& doc) {
  const Morphism& f = get_morphism(w, name);
  doc["command"] = "homology-image";
  doc["name"] = name;
  int cert = std::min(certified_degree(*f.src), certified_degree(*f.dst));
  njson hranks = njson::object();
  size_t total = 0;
  for (int n = 1; n <= cert; ++n) {
    size_t r = rank(induced_map_matrix(f, n));
    if (r > 0) hranks[std::to_string(n)] = r;
    total += r;
  }
  doc["cohomology_ranks"] = hranks;
  doc["total_rank"] = total;
  njson qranks = njson::object();
  size_t qtotal = 0;
  for (int n = 1; n <= f.src->bound(); ++n) {
    QMatrix qm = indecomposables_matrix(f, n);
    if (qm.rows() == 0 || qm.cols() == 0) continue;
    size_t r = rank(qm);
    if (r > 0) qranks[std::to_string(n)] = r;
    qtotal += r;
  }
  doc["indecomposable_ranks"] = qranks;
  doc["indecomposable_total_rank"] = qtotal;
  finish(doc, cert, false);
  return 0;
}

int cmd_ghorbal(const Workspace& w, const std::string& name, njson& doc) {
  const Morphism& f = get_morphism(w, name);
  doc["command"] = "ghorbal";
  doc["name"] = name;
  // The V part of the source split: generators whose image has a linear part.
  std::vector<size_t> v_part;
  njson v = njson::array(), z = njson::array();
  for (size_t i = 0; i < f.src->size(); ++i) {
    if (!word_length_part(f.val[i], 1).is_zero()) {
      v_part.push_back(i);
      v.push_back(f.src->gen(i).name);
    } else {
      z.push_back(f.src->gen(i).name);
    }
  }
  GhorbalReport r = check_ghorbal_form(f, v_part);
  doc["ok"] = r.ok;
  doc["v_part"] = v;
  doc["w_part"] = z;
  doc["violations"] = r.violations;
  finish(doc, std::min(f.src->bound(), f.dst->bound()), false);
  return r.ok ? 0 : 1;
}

int cmd_homotopy(const Workspace& w, const std::string& n0, const std::string& n1,
                 const std::string& grid_spec, njson& doc) {
  const Morphism& phi0 = get_morphism(w, n0);
  const Morphism& phi1 = get_morphism(w, n1);
  HomotopySearchOptions opts;
  if (!grid_spec.empty()) opts.grid = parse_grid(grid_spec);
  HomotopyResult r;
  try {
    r = find_homotopy(phi0, phi1, opts);
  } catch (const std::invalid_argument& e) {
    throw parse_error(std::string("homotopy: ") + e.what());
  }
  doc["command"] = "homotopy";
  doc["phi0"] = n0;
  doc["phi1"] = n1;
  doc["homotopic"] = r.homotopic;
  doc["definitive"] = r.definitive;
  if (r.certificate) {
    njson bars = njson::object();
    const Model& src = *phi0.src;
    for (size_t i = 0; i < src.size(); ++i)
      bars[src.gen(i).name] = el_str(phi0.dst->alg, r.certificate->bar_image[i]);
    doc["bars"] = bars;
  }
  if (r.obstruction) {
    doc["obstruction"] = {{"degree", r.obstruction->degree},
                          {"generator", r.obstruction->generator},
                          {"description", r.obstruction->description}};
  }
  finish(doc, phi0.src->bound(), false);
  return r.homotopic ? 0 : 1;
}

int cmd_minimal_model(const Workspace& w, const std::string& name, int max_degree,
                      njson& doc) {
  const PresentedAlgebra& p = get_presentation(w, name);
  doc["command"] = "minimal-model";
  doc["name"] = name;
  doc["max_degree"] = max_degree;
  PresentedValidation pv = validate_presented(p);
  if (!pv.valid) {
    doc["ok"] = false;
    doc["problems"] = pv.problems;
    finish(doc, max_degree, false);
    return 1;
  }
  MinimalModelResult r = minimal_model_up_to_degree(p, max_degree);
  doc["ok"] = true;
  const Model& m = *r.model;
  njson gens = njson::array();
  for (size_t i = 0; i < m.size(); ++i)
    gens.push_back({{"name", m.gen(i).name},
                    {"degree", m.gen(i).degree},
                    {"d", el_str(m.alg, m.d[i])}});
  doc["generators"] = gens;
  doc["betti"] = betti_json(betti_range(m, max_degree));
  njson rho = njson::object();
  for (size_t i = 0; i < m.size(); ++i)
    rho[m.gen(i).name] = el_str(r.ambient->alg, r.rho[i]);
  doc["rho"] = rho;
  Workspace tmp;
  tmp.model_order.push_back(m.name);
  tmp.models[m.name] = r.model;
  doc["model_text"] = serialize_workspace(tmp);
  finish(doc, r.certified, false);
  return 0;
}

int cmd_cyclic(const Workspace& w, const std::string& source,
               const std::string& target, njson& doc) {
  ModelPtr a = get_model(w, source);
  ModelPtr x = get_model(w, target);
  GottliebGroups gx = gottlieb_groups(*x);
  CyclicClassification c = cyclic_classification(*a, gx);
  doc["command"] = "cyclic";
  doc["source"] = source;
  doc["target"] = target;
  njson per = njson::object();
  for (const auto& [n, k] : c.per_degree) per[std::to_string(n)] = k;
  doc["per_degree"] = per;
  doc["total"] = c.total;
  finish(doc, std::min(certified_degree(*a), x->bound()), false);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"exact rational-homotopy calculator for Sullivan models"};
  app.require_subcommand(1);
  bool human = false;
  app.add_flag("--human", human, "aligned text output instead of JSON");

  std::string file, name, name2;
  int max_degree = -1;
  std::string grid_spec;

  auto add_file_name = [&](CLI::App* c, const char* what) {
    c->add_option("file", file, "workspace definition file")->required();
    c->add_option("name", name, what)->required();
  };

  CLI::App* c_validate = app.add_subcommand(
      "validate", "check a model or presentation for mathematical soundness");
  add_file_name(c_validate, "model or presentation name");

  CLI::App* c_cohomology =
      app.add_subcommand("cohomology", "Betti numbers and class representatives");
  add_file_name(c_cohomology, "model name");
  c_cohomology->add_option("--max-degree", max_degree, "top degree to report");

  CLI::App* c_euler =
      app.add_subcommand("euler", "Euler characteristic with a stability check");
  add_file_name(c_euler, "model name");

  CLI::App* c_gottlieb =
      app.add_subcommand("gottlieb", "Gottlieb group dimensions and dual basis");
  add_file_name(c_gottlieb, "model name");

  CLI::App* c_normalize = app.add_subcommand(
      "normalize", "generator change separating Gottlieb duals from the rest");
  add_file_name(c_normalize, "model name");

  CLI::App* c_split = app.add_subcommand(
      "split", "odd-sphere product factors and the evaluation homology image");
  add_file_name(c_split, "model name");

  CLI::App* c_total = app.add_subcommand(
      "total-gottlieb", "total element: sphere product map and projection");
  add_file_name(c_total, "model name");

  CLI::App* c_himage = app.add_subcommand(
      "homology-image", "induced cohomology and indecomposable ranks of a morphism");
  add_file_name(c_himage, "morphism name");

  CLI::App* c_ghorbal = app.add_subcommand(
      "ghorbal", "homotopy-monomorphism normal form check for a morphism");
  add_file_name(c_ghorbal, "morphism name");

  CLI::App* c_homotopy =
      app.add_subcommand("homotopy", "decide whether two morphisms are homotopic");
  c_homotopy->add_option("file", file, "workspace definition file")->required();
  c_homotopy->add_option("phi0", name, "first morphism")->required();
  c_homotopy->add_option("phi1", name2, "second morphism")->required();
  c_homotopy->add_option("--search-grid", grid_spec,
                         "comma-separated rationals tried for free parameters");

  CLI::App* c_minimal = app.add_subcommand(
      "minimal-model", "minimal Sullivan model of a presented cohomology algebra");
  add_file_name(c_minimal, "presentation name");
  c_minimal->add_option("--max-degree", max_degree, "construct through this degree")
      ->required();

  CLI::App* c_cyclic = app.add_subcommand(
      "cyclic", "dimensions of cyclic map classes from a source into a target");
  c_cyclic->add_option("file", file, "workspace definition file")->required();
  c_cyclic->add_option("source", name, "source model (the domain)")->required();
  c_cyclic->add_option("target", name2, "target model")->required();

  std::vector<const char*> argv;
  argv.push_back("sullivan");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Workspace w = load_workspace(file);
    if (verbose_enabled())
      err << "loaded " << w.models.size() << " models, " << w.morphisms.size()
          << " morphisms, " << w.presentations.size() << " presentations from '"
          << file << "'\n";
    njson doc;
    int code = 0;
    if (*c_validate) code = cmd_validate(w, name, doc);
    else if (*c_cohomology) code = cmd_cohomology(w, name, max_degree, doc);
    else if (*c_euler) code = cmd_euler(w, name, doc);
    else if (*c_gottlieb) code = cmd_gottlieb(w, name, doc);
    else if (*c_normalize) code = cmd_normalize(w, name, doc);
    else if (*c_split) code = cmd_split(w, name, doc);
    else if (*c_total) code = cmd_total_gottlieb(w, name, doc);
    else if (*c_himage) code = cmd_homology_image(w, name, doc);
    else if (*c_ghorbal) code = cmd_ghorbal(w, name, doc);
    else if (*c_homotopy) code = cmd_homotopy(w, name, name2, grid_spec, doc);
    else if (*c_minimal) code = cmd_minimal_model(w, name, max_degree, doc);
    else if (*c_cyclic) code = cmd_cyclic(w, name, name2, doc);
    emit(doc, human, out);
    return code;
  } catch (const parse_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const bound_error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sullivan
