// grpd: validate and explore finite groupoids, bundles, extensions, descent
// data, and equivariant splittings from interchange files.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "grpd/corpus.hpp"
#include "grpd/descent.hpp"
#include "grpd/io.hpp"

namespace {

using grpd::io::json;

enum ExitCode { kHolds = 0, kFails = 1, kInputError = 2 };

struct Options {
  std::string format = "text";
  std::uint64_t seed = 2024;
  grpd::Idx cap = 4096;
  std::string output;
};

//! Writes the report to --output or stdout.
void emit(Options const& opt, json const& structured, std::string const& text) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!opt.output.empty()) {
    file.open(opt.output);
    os = &file;
  }
  if (opt.format == "structured") {
    *os << structured.dump(2) << "\n";
  } else {
    *os << text;
  }
}

json load(std::string const& path) {
  std::ifstream in(path);
  if (!in) {
    throw grpd::io::ParseError("cannot open '" + path + "'");
  }
  try {
    return json::parse(in);
  } catch (std::exception const& e) {
    throw grpd::io::ParseError(path + ": " + e.what());
  }
}

std::string type_of(json const& j) {
  if (!j.is_object() || !j.contains("type")) {
    throw grpd::io::ParseError("file has no 'type' field");
  }
  return j.at("type").get<std::string>();
}

json report_json(grpd::Report const& rep) {
  json out = json::array();
  for (auto const& v : rep.violations) {
    out.push_back({{"code", v.code}, {"detail", v.detail}});
  }
  return out;
}

int run_validate(Options const& opt, std::string const& path) {
  auto j = load(path);
  auto t = type_of(j);
  grpd::Report rep;
  bool ok = false;
  if (t == "groupoid") {
    auto v = grpd::io::parse_groupoid(j);
    ok = v.ok();
    rep = v.report;
  } else if (t == "category") {
    auto v = grpd::io::parse_category(j);
    ok = v.ok();
    rep = v.report;
  } else if (t == "functor") {
    auto v = grpd::io::parse_functor(j);
    ok = v.ok();
    rep = v.report;
  } else if (t == "extension") {
    auto v = grpd::io::parse_extension(j);
    ok = v.ok();
    rep = v.report;
  } else if (t == "bundle") {
    auto v = grpd::io::parse_bundle(j);
    ok = v.ok();
    rep = v.report;
  } else if (t == "bibundle") {
    auto v = grpd::io::parse_bibundle(j);
    ok = v.ok();
    rep = v.report;
  } else if (t == "ses") {
    auto v = grpd::io::parse_ses(j);
    ok = v.ok();
    rep = v.report;
  } else {
    throw grpd::io::ParseError("unknown type '" + t + "'");
  }
  json out{{"valid", ok}, {"violations", report_json(rep)}};
  std::string text = ok ? "valid\n" : "invalid\n" + rep.to_string();
  emit(opt, out, text);
  return ok ? kHolds : kFails;
}

int run_morita(Options const& opt, std::string const& a_path, std::string const& b_path) {
  auto a = grpd::io::parse_groupoid(load(a_path));
  auto b = grpd::io::parse_groupoid(load(b_path));
  if (!a.ok() || !b.ok()) {
    throw grpd::io::ParseError("input groupoid is invalid:\n" + a.report.to_string() +
                               b.report.to_string());
  }
  auto d = grpd::morita_equivalent(a->groupoid, b->groupoid);
  json out{{"equivalent", d.equivalent}};
  std::string text;
  if (d.equivalent) {
    out["witness"] = grpd::io::to_json_witness(*d.witness);
    text = "Morita equivalent; span witness with apex of " +
           std::to_string(d.witness->span->apex->n_objects()) + " objects\n";
  } else {
    out["explanation"] = d.explanation;
    text = "not Morita equivalent: " + d.explanation + "\n";
  }
  emit(opt, out, text);
  return d.equivalent ? kHolds : kFails;
}

int run_compose(Options const& opt, std::string const& p_path, std::string const& q_path) {
  auto p = grpd::io::parse_bibundle(load(p_path));
  auto q = grpd::io::parse_bibundle(load(q_path));
  if (!p.ok() || !q.ok()) {
    throw grpd::io::ParseError("input bibundle is invalid:\n" + p.report.to_string() +
                               q.report.to_string());
  }
  auto composed = grpd::compose_bibundles(p->bibundle, q->bibundle);
  grpd::io::NamedBibundle named;
  named.left_groupoid = p->left_groupoid;
  named.right_groupoid = q->right_groupoid;
  for (grpd::Idx i = 0; i < composed.carrier_size(); ++i) {
    named.carrier.add("p" + std::to_string(i));
  }
  named.bibundle = composed;
  emit(opt, grpd::io::to_json(named),
       "composite bibundle with " + std::to_string(composed.carrier_size()) +
           " carrier elements\n");
  return kHolds;
}

int run_gerbe_check(Options const& opt, std::string const& path) {
  auto j = load(path);
  auto t = type_of(j);
  grpd::GroupoidFunctor f;
  if (t == "extension") {
    auto e = grpd::io::parse_extension(j);
    if (!e.ok()) {
      throw grpd::io::ParseError("input extension is invalid:\n" + e.report.to_string());
    }
    f = e->extension.functor();
  } else if (t == "functor") {
    auto v = grpd::io::parse_functor(j);
    if (!v.ok()) {
      throw grpd::io::ParseError("input functor is invalid:\n" + v.report.to_string());
    }
    f = v->functor;
  } else {
    throw grpd::io::ParseError("gerbe-check expects an extension or functor file");
  }
  auto verdict = grpd::check_gerbe_conditions(f);
  json out{{"objects_lift", verdict.objects_lift},
           {"arrows_lift", verdict.arrows_lift},
           {"gerbe", verdict.gerbe}};
  std::string text = grpd::detail::cat("objects_lift: ", verdict.objects_lift ? "yes" : "no",
                                       "\narrows_lift: ", verdict.arrows_lift ? "yes" : "no",
                                       "\ngerbe: ", verdict.gerbe ? "yes" : "no", "\n");
  if (!verdict.object_witness.empty()) {
    out["object_witness"] = verdict.object_witness;
    text += "witness: " + verdict.object_witness + "\n";
  }
  if (!verdict.arrow_witness.empty()) {
    out["arrow_witness"] = verdict.arrow_witness;
    text += "witness: " + verdict.arrow_witness + "\n";
  }
  emit(opt, out, text);
  return verdict.gerbe ? kHolds : kFails;
}

int run_extension_induce(Options const& opt, std::string const& path) {
  auto v = grpd::io::parse_functor(load(path));
  if (!v.ok()) {
    throw grpd::io::ParseError("input functor is invalid:\n" + v.report.to_string());
  }
  auto induced = grpd::induced_extension(v->functor);
  if (!induced.ok()) {
    json out{{"induced", false}, {"violations", report_json(induced.report)}};
    emit(opt, out, "no induced extension:\n" + induced.report.to_string());
    return kFails;
  }
  grpd::io::NamedExtension named;
  named.total = v->dom;
  named.base = grpd::io::name_groupoid(induced->base);
  named.base.objects = v->dom.objects;  // the pull-back lives over the domain objects
  named.extension = *induced.value;
  emit(opt, grpd::io::to_json(named),
       "induced extension with base of " + std::to_string(induced->base->n_morphisms()) +
           " arrows\n");
  return kHolds;
}

int run_pullback(Options const& opt, std::string const& path, std::string const& map_path) {
  auto j = load(path);
  auto m = grpd::io::parse_map(load(map_path));
  auto t = type_of(j);
  if (t == "bundle") {
    auto b = grpd::io::parse_bundle(j);
    if (!b.ok()) {
      throw grpd::io::ParseError("input bundle is invalid:\n" + b.report.to_string());
    }
    if (m.cod.names != b->base.names) {
      throw grpd::io::ParseError("map codomain does not match the bundle base");
    }
    auto pulled = grpd::pullback_bundle(b->bundle, m.map, static_cast<grpd::Idx>(m.dom.names.size()));
    grpd::io::NamedBundle named;
    named.groupoid = b->groupoid;
    named.base = m.dom;
    for (grpd::Idx p = 0; p < pulled.carrier_size(); ++p) {
      named.carrier.add("p" + std::to_string(p));
    }
    named.bundle = pulled;
    emit(opt, grpd::io::to_json(named),
         "pulled-back bundle with " + std::to_string(pulled.carrier_size()) + " carrier elements\n");
    return kHolds;
  }
  if (t == "groupoid") {
    auto g = grpd::io::parse_groupoid(j);
    if (!g.ok()) {
      throw grpd::io::ParseError("input groupoid is invalid:\n" + g.report.to_string());
    }
    if (m.cod.names != g->objects.names) {
      throw grpd::io::ParseError("map codomain does not match the groupoid objects");
    }
    auto pb = grpd::pullback_groupoid(g->groupoid, m.map,
                                      static_cast<grpd::Idx>(m.dom.names.size()));
    auto named = grpd::io::name_groupoid(pb.groupoid);
    named.objects = m.dom;
    emit(opt, grpd::io::to_json(named),
         "pull-back groupoid with " + std::to_string(pb.groupoid->n_morphisms()) + " arrows\n");
    return kHolds;
  }
  if (t == "extension") {
    auto e = grpd::io::parse_extension(j);
    if (!e.ok()) {
      throw grpd::io::ParseError("input extension is invalid:\n" + e.report.to_string());
    }
    if (m.cod.names != e->total.objects.names) {
      throw grpd::io::ParseError("map codomain does not match the extension objects");
    }
    auto pulled = grpd::pullback_extension(e->extension, m.map,
                                           static_cast<grpd::Idx>(m.dom.names.size()));
    grpd::io::NamedExtension named;
    named.total = grpd::io::name_groupoid(pulled.extension.total);
    named.total.objects = m.dom;
    named.base = grpd::io::name_groupoid(pulled.extension.base);
    named.base.objects = m.dom;
    named.extension = pulled.extension;
    emit(opt, grpd::io::to_json(named),
         "pulled-back extension over " + std::to_string(m.dom.names.size()) + " objects\n");
    return kHolds;
  }
  throw grpd::io::ParseError("pullback expects a bundle, groupoid, or extension file");
}

int run_descent_check(Options const& opt, std::string const& path) {
  auto j = load(path);
  grpd::io::detail::expect_fields(j, {"structure", "base", "cover"}, {"type", "presheaf", "cap"});
  auto g = grpd::io::parse_groupoid(j.at("structure"));
  if (!g.ok()) {
    throw grpd::io::ParseError("structure groupoid is invalid:\n" + g.report.to_string());
  }
  auto base = grpd::io::detail::parse_names(j.at("base"), "base");
  grpd::Covering cov;
  cov.base = static_cast<grpd::Idx>(base.names.size());
  for (auto const& part : j.at("cover")) {
    if (!part.is_array()) {
      throw grpd::io::ParseError("cover parts must be arrays of base ids");
    }
    grpd::SetMap f{static_cast<grpd::Idx>(part.size()), cov.base, {}};
    for (auto const& v : part) {
      f.table.push_back(base.at(v.get<std::string>()));
    }
    cov.parts.push_back(std::move(f));
  }
  std::string kind = j.contains("presheaf") ? j.at("presheaf").get<std::string>() : "bg";
  std::unique_ptr<grpd::GroupoidPresheaf> presheaf;
  if (kind == "bg") {
    presheaf = std::make_unique<grpd::BGPresheaf>(g->groupoid, opt.cap);
  } else if (kind == "constant") {
    presheaf = std::make_unique<grpd::ConstantPresheaf>(g->groupoid);
  } else {
    throw grpd::io::ParseError("unknown presheaf kind '" + kind + "'");
  }
  auto verdict = grpd::check_stack_condition(*presheaf, cov);
  json out{{"full", verdict.full},
           {"faithful", verdict.faithful},
           {"ess_surjective", verdict.ess_surjective},
           {"stack", verdict.holds}};
  std::string text = grpd::detail::cat("full: ", verdict.full ? "yes" : "no",
                                       "\nfaithful: ", verdict.faithful ? "yes" : "no",
                                       "\ness_surjective: ", verdict.ess_surjective ? "yes" : "no",
                                       "\nstack: ", verdict.holds ? "yes" : "no", "\n");
  emit(opt, out, text);
  return verdict.holds ? kHolds : kFails;
}

int run_split(Options const& opt, std::string const& path) {
  auto v = grpd::io::parse_ses(load(path));
  if (!v.ok()) {
    throw grpd::io::ParseError("input sequence is invalid:\n" + v.report.to_string());
  }
  auto split = grpd::find_equivariant_splitting(v->ses);
  if (!split) {
    emit(opt, json{{"splitting", nullptr}}, "INFEASIBLE\n");
    return kFails;
  }
  json out;
  out["splitting"] = json::object();
  std::string text;
  for (std::size_t x = 0; x < split->size(); ++x) {
    out["splitting"][v->groupoid.objects.names[x]] = grpd::io::detail::matrix_to_json((*split)[x]);
    text += v->groupoid.objects.names[x] + ":";
    for (auto const& e : (*split)[x].a) {
      text += " " + e.str();
    }
    text += "\n";
  }
  emit(opt, out, text);
  return kHolds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite groupoid toolkit"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--seed", opt.seed, "seed for reproducible runs");
  app.add_option("--cap", opt.cap, "size cap for enumerations");
  app.add_option("--output", opt.output, "write the report to a file");

  std::string file1, file2;
  auto* validate = app.add_subcommand("validate", "validate an interchange file");
  validate->add_option("file", file1)->required();
  auto* morita = app.add_subcommand("morita", "decide Morita equivalence of two groupoids");
  morita->add_option("first", file1)->required();
  morita->add_option("second", file2)->required();
  auto* compose = app.add_subcommand("compose", "compose two bibundles");
  compose->add_option("first", file1)->required();
  compose->add_option("second", file2)->required();
  auto* gerbe = app.add_subcommand("gerbe-check", "check the two gerbe conditions");
  gerbe->add_option("file", file1)->required();
  auto* induce = app.add_subcommand("extension-induce", "build the induced extension");
  induce->add_option("file", file1)->required();
  auto* pullback = app.add_subcommand("pullback", "pull back along a map of base sets");
  pullback->add_option("file", file1)->required();
  pullback->add_option("map", file2)->required();
  auto* descent = app.add_subcommand("descent-check", "check the stack condition for a cover");
  descent->add_option("file", file1)->required();
  auto* split = app.add_subcommand("split", "solve for an equivariant splitting");
  split->add_option("file", file1)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      return run_validate(opt, file1);
    }
    if (morita->parsed()) {
      return run_morita(opt, file1, file2);
    }
    if (compose->parsed()) {
      return run_compose(opt, file1, file2);
    }
    if (gerbe->parsed()) {
      return run_gerbe_check(opt, file1);
    }
    if (induce->parsed()) {
      return run_extension_induce(opt, file1);
    }
    if (pullback->parsed()) {
      return run_pullback(opt, file1, file2);
    }
    if (descent->parsed()) {
      return run_descent_check(opt, file1);
    }
    if (split->parsed()) {
      return run_split(opt, file1);
    }
  } catch (grpd::io::ParseError const& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (grpd::PreconditionError const& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (grpd::CapExceededError const& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (std::exception const& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
