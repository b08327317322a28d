#pragma once

#include <json.hpp>

#include "grpd/extension.hpp"
#include "grpd/linrep.hpp"

namespace grpd::io {

using json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void expect_fields(json const& j, std::vector<std::string> const& required,
                          std::vector<std::string> const& optional = {}) {
  if (!j.is_object()) {
    throw ParseError("expected an object");
  }
  for (auto const& f : required) {
    if (!j.contains(f)) {
      throw ParseError("missing field '" + f + "'");
    }
  }
  for (auto const& [key, value] : j.items()) {
    (void)value;
    if (std::find(required.begin(), required.end(), key) == required.end() &&
        std::find(optional.begin(), optional.end(), key) == optional.end()) {
      throw ParseError("unknown field '" + key + "'");
    }
  }
}

struct NameTable {
  std::vector<std::string> names;
  std::map<std::string, Idx> index;

  void add(std::string const& n) {
    if (index.count(n)) {
      throw ParseError("duplicate id '" + n + "'");
    }
    index[n] = static_cast<Idx>(names.size());
    names.push_back(n);
  }

  Idx at(std::string const& n) const {
    auto it = index.find(n);
    if (it == index.end()) {
      throw ParseError("reference to undeclared id '" + n + "'");
    }
    return it->second;
  }
};

inline NameTable parse_names(json const& j, char const* what) {
  if (!j.is_array()) {
    throw ParseError(std::string(what) + " must be an array of ids");
  }
  NameTable t;
  for (auto const& v : j) {
    if (!v.is_string()) {
      throw ParseError(std::string(what) + " entries must be strings");
    }
    t.add(v.get<std::string>());
  }
  return t;
}

}  // namespace detail

//! A groupoid together with the external ids of its objects and morphisms.
struct NamedGroupoid {
  GroupoidPtr groupoid;
  detail::NameTable objects;
  detail::NameTable morphisms;
};

//! Parses the interchange groupoid block. Malformed input throws
//! ParseError; axiom failures come back as the validator's report.
inline Validated<NamedGroupoid> parse_groupoid(json const& j) {
  detail::expect_fields(j, {"objects", "morphisms", "compose", "identity", "inverse"}, {"type"});
  NamedGroupoid out;
  out.objects = detail::parse_names(j.at("objects"), "objects");
  RawGroupoid raw;
  raw.cat.n_objects = static_cast<Idx>(out.objects.names.size());
  if (!j.at("morphisms").is_array()) {
    throw ParseError("morphisms must be an array");
  }
  for (auto const& m : j.at("morphisms")) {
    detail::expect_fields(m, {"id", "src", "tgt"});
    out.morphisms.add(m.at("id").get<std::string>());
    raw.cat.src.push_back(out.objects.at(m.at("src").get<std::string>()));
    raw.cat.tgt.push_back(out.objects.at(m.at("tgt").get<std::string>()));
  }
  if (!j.at("compose").is_array()) {
    throw ParseError("compose must be an array of triples");
  }
  for (auto const& e : j.at("compose")) {
    if (!e.is_array() || e.size() != 3) {
      throw ParseError("compose entries must be [f, g, result]");
    }
    raw.cat.compose.push_back({out.morphisms.at(e[0].get<std::string>()),
                               out.morphisms.at(e[1].get<std::string>()),
                               out.morphisms.at(e[2].get<std::string>())});
  }
  raw.cat.ident.assign(raw.cat.n_objects, UNDEFINED);
  for (auto const& [obj, mor] : j.at("identity").items()) {
    raw.cat.ident[out.objects.at(obj)] = out.morphisms.at(mor.get<std::string>());
  }
  for (Idx a = 0; a < raw.cat.n_objects; ++a) {
    if (raw.cat.ident[a] == UNDEFINED) {
      throw ParseError("identity missing for object '" + out.objects.names[a] + "'");
    }
  }
  raw.inv.assign(out.morphisms.names.size(), UNDEFINED);
  for (auto const& [mor, w] : j.at("inverse").items()) {
    raw.inv[out.morphisms.at(mor)] = out.morphisms.at(w.get<std::string>());
  }
  for (std::size_t m = 0; m < raw.inv.size(); ++m) {
    if (raw.inv[m] == UNDEFINED) {
      throw ParseError("inverse missing for morphism '" + out.morphisms.names[m] + "'");
    }
  }
  auto validated = validate_groupoid(raw);
  if (!validated.ok()) {
    return invalid<NamedGroupoid>(validated.report);
  }
  out.groupoid = share(std::move(*validated.value));
  return valid(std::move(out));
}

inline json to_json(NamedGroupoid const& g) {
  json j;
  j["type"] = "groupoid";
  j["objects"] = g.objects.names;
  j["morphisms"] = json::array();
  auto const& gg = *g.groupoid;
  for (Idx m = 0; m < gg.n_morphisms(); ++m) {
    j["morphisms"].push_back({{"id", g.morphisms.names[m]},
                              {"src", g.objects.names[gg.src(m)]},
                              {"tgt", g.objects.names[gg.tgt(m)]}});
  }
  j["compose"] = json::array();
  for (Idx f = 0; f < gg.n_morphisms(); ++f) {
    for (Idx w : gg.arrows_from(gg.tgt(f))) {
      j["compose"].push_back({g.morphisms.names[f], g.morphisms.names[w],
                              g.morphisms.names[gg.compose(f, w)]});
    }
  }
  j["identity"] = json::object();
  for (Idx a = 0; a < gg.n_objects(); ++a) {
    j["identity"][g.objects.names[a]] = g.morphisms.names[gg.ident(a)];
  }
  j["inverse"] = json::object();
  for (Idx m = 0; m < gg.n_morphisms(); ++m) {
    j["inverse"][g.morphisms.names[m]] = g.morphisms.names[gg.inverse(m)];
  }
  return j;
}

//! Category files carry the same tables minus the inverse block.
inline Validated<FiniteCategory> parse_category(json const& j) {
  detail::expect_fields(j, {"objects", "morphisms", "compose", "identity"}, {"type"});
  auto objects = detail::parse_names(j.at("objects"), "objects");
  detail::NameTable morphisms;
  RawCategory raw;
  raw.n_objects = static_cast<Idx>(objects.names.size());
  for (auto const& m : j.at("morphisms")) {
    detail::expect_fields(m, {"id", "src", "tgt"});
    morphisms.add(m.at("id").get<std::string>());
    raw.src.push_back(objects.at(m.at("src").get<std::string>()));
    raw.tgt.push_back(objects.at(m.at("tgt").get<std::string>()));
  }
  for (auto const& e : j.at("compose")) {
    if (!e.is_array() || e.size() != 3) {
      throw ParseError("compose entries must be [f, g, result]");
    }
    raw.compose.push_back({morphisms.at(e[0].get<std::string>()),
                           morphisms.at(e[1].get<std::string>()),
                           morphisms.at(e[2].get<std::string>())});
  }
  raw.ident.assign(raw.n_objects, UNDEFINED);
  for (auto const& [obj, mor] : j.at("identity").items()) {
    raw.ident[objects.at(obj)] = morphisms.at(mor.get<std::string>());
  }
  for (Idx a = 0; a < raw.n_objects; ++a) {
    if (raw.ident[a] == UNDEFINED) {
      throw ParseError("identity missing for object '" + objects.names[a] + "'");
    }
  }
  return validate_category(raw);
}

//! Default ids: objects x0, x1, ...; morphisms m0, m1, ...
inline NamedGroupoid name_groupoid(GroupoidPtr g) {
  NamedGroupoid out;
  out.groupoid = std::move(g);
  for (Idx a = 0; a < out.groupoid->n_objects(); ++a) {
    out.objects.add("x" + std::to_string(a));
  }
  for (Idx m = 0; m < out.groupoid->n_morphisms(); ++m) {
    out.morphisms.add("m" + std::to_string(m));
  }
  return out;
}

struct NamedFunctor {
  NamedGroupoid dom;
  NamedGroupoid cod;
  GroupoidFunctor functor;
};

inline Validated<NamedFunctor> parse_functor(json const& j) {
  detail::expect_fields(j, {"dom", "cod", "f0", "f1"}, {"type"});
  auto dom = parse_groupoid(j.at("dom"));
  if (!dom.ok()) {
    return invalid<NamedFunctor>(dom.report);
  }
  auto cod = parse_groupoid(j.at("cod"));
  if (!cod.ok()) {
    return invalid<NamedFunctor>(cod.report);
  }
  NamedFunctor out{std::move(*dom.value), std::move(*cod.value), {}};
  out.functor.dom = out.dom.groupoid;
  out.functor.cod = out.cod.groupoid;
  out.functor.f0.assign(out.dom.objects.names.size(), UNDEFINED);
  out.functor.f1.assign(out.dom.morphisms.names.size(), UNDEFINED);
  for (auto const& [a, b] : j.at("f0").items()) {
    out.functor.f0[out.dom.objects.at(a)] = out.cod.objects.at(b.get<std::string>());
  }
  for (auto const& [a, b] : j.at("f1").items()) {
    out.functor.f1[out.dom.morphisms.at(a)] = out.cod.morphisms.at(b.get<std::string>());
  }
  for (Idx v : out.functor.f0) {
    if (v == UNDEFINED) {
      throw ParseError("f0 does not cover every object");
    }
  }
  for (Idx v : out.functor.f1) {
    if (v == UNDEFINED) {
      throw ParseError("f1 does not cover every morphism");
    }
  }
  auto checked = validate_functor(out.functor);
  if (!checked.ok()) {
    return invalid<NamedFunctor>(checked.report);
  }
  return valid(std::move(out));
}

inline json to_json(NamedFunctor const& f) {
  json j;
  j["type"] = "functor";
  j["dom"] = to_json(f.dom);
  j["cod"] = to_json(f.cod);
  j["f0"] = json::object();
  for (std::size_t a = 0; a < f.functor.f0.size(); ++a) {
    j["f0"][f.dom.objects.names[a]] = f.cod.objects.names[f.functor.f0[a]];
  }
  j["f1"] = json::object();
  for (std::size_t m = 0; m < f.functor.f1.size(); ++m) {
    j["f1"][f.dom.morphisms.names[m]] = f.cod.morphisms.names[f.functor.f1[m]];
  }
  return j;
}

struct NamedExtension {
  NamedGroupoid total;
  NamedGroupoid base;
  GroupoidExtension extension;
};

inline Validated<NamedExtension> parse_extension(json const& j) {
  detail::expect_fields(j, {"total", "base", "arrow_map"}, {"type"});
  auto total = parse_groupoid(j.at("total"));
  if (!total.ok()) {
    return invalid<NamedExtension>(total.report);
  }
  auto base = parse_groupoid(j.at("base"));
  if (!base.ok()) {
    return invalid<NamedExtension>(base.report);
  }
  NamedExtension out{std::move(*total.value), std::move(*base.value), {}};
  if (out.total.objects.names != out.base.objects.names) {
    Report rep;
    rep.add("ObjectSetMismatch", "total and base must share the object list");
    return invalid<NamedExtension>(std::move(rep));
  }
  std::vector<Idx> arrow_map(out.total.morphisms.names.size(), UNDEFINED);
  for (auto const& [a, b] : j.at("arrow_map").items()) {
    arrow_map[out.total.morphisms.at(a)] = out.base.morphisms.at(b.get<std::string>());
  }
  for (Idx v : arrow_map) {
    if (v == UNDEFINED) {
      throw ParseError("arrow_map does not cover every morphism");
    }
  }
  auto checked = validate_extension(out.total.groupoid, out.base.groupoid, arrow_map);
  if (!checked.ok()) {
    return invalid<NamedExtension>(checked.report);
  }
  out.extension = std::move(*checked.value);
  return valid(std::move(out));
}

inline json to_json(NamedExtension const& e) {
  json j;
  j["type"] = "extension";
  j["total"] = to_json(e.total);
  j["base"] = to_json(e.base);
  j["arrow_map"] = json::object();
  for (std::size_t m = 0; m < e.extension.arrow_map.size(); ++m) {
    j["arrow_map"][e.total.morphisms.names[m]] =
        e.base.morphisms.names[e.extension.arrow_map[m]];
  }
  return j;
}

struct NamedBundle {
  NamedGroupoid groupoid;
  detail::NameTable base;
  detail::NameTable carrier;
  PrincipalGroupoidBundle bundle;
};

inline Validated<NamedBundle> parse_bundle(json const& j) {
  detail::expect_fields(j, {"groupoid", "base", "carrier", "anchor", "act", "proj"}, {"type"});
  auto g = parse_groupoid(j.at("groupoid"));
  if (!g.ok()) {
    return invalid<NamedBundle>(g.report);
  }
  NamedBundle out{std::move(*g.value), {}, {}, {}};
  out.base = detail::parse_names(j.at("base"), "base");
  out.carrier = detail::parse_names(j.at("carrier"), "carrier");
  GroupoidAction action;
  action.gpd = out.groupoid.groupoid;
  action.side = Side::right;
  action.n_carrier = static_cast<Idx>(out.carrier.names.size());
  action.anchor.assign(action.n_carrier, UNDEFINED);
  for (auto const& [p, a] : j.at("anchor").items()) {
    action.anchor[out.carrier.at(p)] = out.groupoid.objects.at(a.get<std::string>());
  }
  for (Idx v : action.anchor) {
    if (v == UNDEFINED) {
      throw ParseError("anchor does not cover the carrier");
    }
  }
  action.act.assign(
      static_cast<std::size_t>(action.n_carrier) * out.groupoid.groupoid->n_morphisms(),
      UNDEFINED);
  for (auto const& e : j.at("act")) {
    if (!e.is_array() || e.size() != 3) {
      throw ParseError("act entries must be [p, m, result]");
    }
    action.slot(out.carrier.at(e[0].get<std::string>()),
                out.groupoid.morphisms.at(e[1].get<std::string>())) =
        out.carrier.at(e[2].get<std::string>());
  }
  std::vector<Idx> proj(action.n_carrier, UNDEFINED);
  for (auto const& [p, b] : j.at("proj").items()) {
    proj[out.carrier.at(p)] = out.base.at(b.get<std::string>());
  }
  for (Idx v : proj) {
    if (v == UNDEFINED) {
      throw ParseError("proj does not cover the carrier");
    }
  }
  auto checked = validate_principal_bundle(action, std::move(proj),
                                           static_cast<Idx>(out.base.names.size()));
  if (!checked.ok()) {
    return invalid<NamedBundle>(checked.report);
  }
  out.bundle = std::move(*checked.value);
  return valid(std::move(out));
}

inline json to_json(NamedBundle const& b) {
  json j;
  j["type"] = "bundle";
  j["groupoid"] = to_json(b.groupoid);
  j["base"] = b.base.names;
  j["carrier"] = b.carrier.names;
  j["anchor"] = json::object();
  for (Idx p = 0; p < b.bundle.carrier_size(); ++p) {
    j["anchor"][b.carrier.names[p]] = b.groupoid.objects.names[b.bundle.action.anchor[p]];
  }
  j["act"] = json::array();
  auto const& g = *b.groupoid.groupoid;
  for (Idx p = 0; p < b.bundle.carrier_size(); ++p) {
    for (Idx m : g.arrows_to(b.bundle.action.anchor[p])) {
      j["act"].push_back({b.carrier.names[p], b.groupoid.morphisms.names[m],
                          b.carrier.names[b.bundle.action.apply(p, m)]});
    }
  }
  j["proj"] = json::object();
  for (Idx p = 0; p < b.bundle.carrier_size(); ++p) {
    j["proj"][b.carrier.names[p]] = b.base.names[b.bundle.proj[p]];
  }
  return j;
}

struct NamedMap {
  detail::NameTable dom;
  detail::NameTable cod;
  std::vector<Idx> map;
};

inline NamedMap parse_map(json const& j) {
  detail::expect_fields(j, {"dom", "cod", "map"}, {"type"});
  NamedMap out;
  out.dom = detail::parse_names(j.at("dom"), "dom");
  out.cod = detail::parse_names(j.at("cod"), "cod");
  out.map.assign(out.dom.names.size(), UNDEFINED);
  for (auto const& [a, b] : j.at("map").items()) {
    out.map[out.dom.at(a)] = out.cod.at(b.get<std::string>());
  }
  for (Idx v : out.map) {
    if (v == UNDEFINED) {
      throw ParseError("map does not cover its domain");
    }
  }
  return out;
}

struct NamedBibundle {
  NamedGroupoid left_groupoid;
  NamedGroupoid right_groupoid;
  detail::NameTable carrier;
  Bibundle bibundle;
};

//! Two action blocks sharing one carrier.
inline Validated<NamedBibundle> parse_bibundle(json const& j) {
  detail::expect_fields(
      j, {"left_groupoid", "right_groupoid", "carrier", "left_anchor", "right_anchor", "left_act",
          "right_act"},
      {"type"});
  auto lg = parse_groupoid(j.at("left_groupoid"));
  if (!lg.ok()) {
    return invalid<NamedBibundle>(lg.report);
  }
  auto rg = parse_groupoid(j.at("right_groupoid"));
  if (!rg.ok()) {
    return invalid<NamedBibundle>(rg.report);
  }
  NamedBibundle out{std::move(*lg.value), std::move(*rg.value), {}, {}};
  out.carrier = detail::parse_names(j.at("carrier"), "carrier");
  Idx n = static_cast<Idx>(out.carrier.names.size());
  auto read_action = [&](NamedGroupoid const& g, Side side, json const& anchor_j,
                         json const& act_j) {
    GroupoidAction a;
    a.gpd = g.groupoid;
    a.side = side;
    a.n_carrier = n;
    a.anchor.assign(n, UNDEFINED);
    for (auto const& [p, obj] : anchor_j.items()) {
      a.anchor[out.carrier.at(p)] = g.objects.at(obj.get<std::string>());
    }
    for (Idx v : a.anchor) {
      if (v == UNDEFINED) {
        throw ParseError("anchor does not cover the carrier");
      }
    }
    a.act.assign(static_cast<std::size_t>(n) * g.groupoid->n_morphisms(), UNDEFINED);
    for (auto const& e : act_j) {
      if (!e.is_array() || e.size() != 3) {
        throw ParseError("act entries must be triples");
      }
      a.slot(out.carrier.at(e[0].get<std::string>()),
             g.morphisms.at(e[1].get<std::string>())) = out.carrier.at(e[2].get<std::string>());
    }
    return a;
  };
  auto left = read_action(out.left_groupoid, Side::left, j.at("left_anchor"), j.at("left_act"));
  auto right =
      read_action(out.right_groupoid, Side::right, j.at("right_anchor"), j.at("right_act"));
  auto checked = validate_bibundle(left, right);
  if (!checked.ok()) {
    return invalid<NamedBibundle>(checked.report);
  }
  out.bibundle = std::move(*checked.value);
  return valid(std::move(out));
}

inline json to_json(NamedBibundle const& b) {
  json j;
  j["type"] = "bibundle";
  j["left_groupoid"] = to_json(b.left_groupoid);
  j["right_groupoid"] = to_json(b.right_groupoid);
  j["carrier"] = b.carrier.names;
  j["left_anchor"] = json::object();
  j["right_anchor"] = json::object();
  for (Idx p = 0; p < b.bibundle.carrier_size(); ++p) {
    j["left_anchor"][b.carrier.names[p]] =
        b.left_groupoid.objects.names[b.bibundle.left.anchor[p]];
    j["right_anchor"][b.carrier.names[p]] =
        b.right_groupoid.objects.names[b.bibundle.right.anchor[p]];
  }
  j["left_act"] = json::array();
  j["right_act"] = json::array();
  auto const& lg = *b.left_groupoid.groupoid;
  auto const& rg = *b.right_groupoid.groupoid;
  for (Idx p = 0; p < b.bibundle.carrier_size(); ++p) {
    for (Idx m : lg.arrows_from(b.bibundle.left.anchor[p])) {
      j["left_act"].push_back({b.carrier.names[p], b.left_groupoid.morphisms.names[m],
                               b.carrier.names[b.bibundle.left.apply(p, m)]});
    }
    for (Idx m : rg.arrows_to(b.bibundle.right.anchor[p])) {
      j["right_act"].push_back({b.carrier.names[p], b.right_groupoid.morphisms.names[m],
                                b.carrier.names[b.bibundle.right.apply(p, m)]});
    }
  }
  return j;
}

inline json to_json_witness(MoritaWitness const& w) {
  json j;
  if (w.kind == MoritaWitness::Kind::span) {
    j["kind"] = "span";
    auto const& span = *w.span;
    auto apex = name_groupoid(span.apex);
    j["apex"] = to_json(apex);
    auto leg = [&](GroupoidFunctor const& f) {
      NamedFunctor nf{apex, name_groupoid(f.cod), f};
      return to_json(nf);
    };
    j["to_first"] = leg(span.to_first);
    j["to_second"] = leg(span.to_second);
  } else {
    j["kind"] = "equivalence";
    auto const& e = *w.equivalence;
    NamedFunctor fwd{name_groupoid(e.forward.dom), name_groupoid(e.forward.cod), e.forward};
    NamedFunctor bwd{fwd.cod, fwd.dom, e.backward};
    j["forward"] = to_json(fwd);
    j["backward"] = to_json(bwd);
  }
  return j;
}

struct NamedSES {
  NamedGroupoid groupoid;
  BundleSES ses;
};

namespace detail {

inline RationalMatrix parse_matrix(json const& j, Idx rows, Idx cols) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(rows) * cols) {
    throw ParseError("matrix entry count does not match its shape");
  }
  RationalMatrix m(rows, cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    m.a[i] = Rational(j[i].get<std::string>());
  }
  return m;
}

inline json matrix_to_json(RationalMatrix const& m) {
  json out = json::array();
  for (auto const& v : m.a) {
    out.push_back(v.str());
  }
  return out;
}

}  // namespace detail

inline Validated<NamedSES> parse_ses(json const& j) {
  detail::expect_fields(j, {"groupoid", "dims", "matrices", "j", "q"}, {"type"});
  auto g = parse_groupoid(j.at("groupoid"));
  if (!g.ok()) {
    return invalid<NamedSES>(g.report);
  }
  NamedSES out{std::move(*g.value), {}};
  auto const& gg = *out.groupoid.groupoid;
  auto read_dims = [&](json const& block) {
    std::vector<Idx> dims(gg.n_objects(), UNDEFINED);
    for (auto const& [obj, d] : block.items()) {
      dims[out.groupoid.objects.at(obj)] = d.get<Idx>();
    }
    for (Idx v : dims) {
      if (v == UNDEFINED) {
        throw ParseError("dims must cover every object");
      }
    }
    return dims;
  };
  detail::expect_fields(j.at("dims"), {"sub", "middle", "quotient"});
  detail::expect_fields(j.at("matrices"), {"sub", "middle", "quotient"});
  GroupoidVectorBundle a, b, c;
  a.gpd = b.gpd = c.gpd = out.groupoid.groupoid;
  a.dim = read_dims(j.at("dims").at("sub"));
  b.dim = read_dims(j.at("dims").at("middle"));
  c.dim = read_dims(j.at("dims").at("quotient"));
  auto read_mats = [&](json const& block, std::vector<Idx> const& dims) {
    std::vector<RationalMatrix> mats(gg.n_morphisms());
    std::vector<char> seen(gg.n_morphisms(), 0);
    for (auto const& [mor, entries] : block.items()) {
      Idx m = out.groupoid.morphisms.at(mor);
      mats[m] = detail::parse_matrix(entries, dims[gg.tgt(m)], dims[gg.src(m)]);
      seen[m] = 1;
    }
    for (Idx m = 0; m < gg.n_morphisms(); ++m) {
      if (!seen[m]) {
        throw ParseError("matrices must cover every morphism");
      }
    }
    return mats;
  };
  a.mat = read_mats(j.at("matrices").at("sub"), a.dim);
  b.mat = read_mats(j.at("matrices").at("middle"), b.dim);
  c.mat = read_mats(j.at("matrices").at("quotient"), c.dim);
  for (auto const& bundle : {a, b, c}) {
    auto checked = validate_vector_bundle(bundle);
    if (!checked.ok()) {
      return invalid<NamedSES>(checked.report);
    }
  }
  std::vector<RationalMatrix> jm(gg.n_objects()), qm(gg.n_objects());
  for (auto const& [obj, entries] : j.at("j").items()) {
    Idx x = out.groupoid.objects.at(obj);
    jm[x] = detail::parse_matrix(entries, b.dim[x], a.dim[x]);
  }
  for (auto const& [obj, entries] : j.at("q").items()) {
    Idx x = out.groupoid.objects.at(obj);
    qm[x] = detail::parse_matrix(entries, c.dim[x], b.dim[x]);
  }
  auto checked = validate_ses(a, b, c, std::move(jm), std::move(qm));
  if (!checked.ok()) {
    return invalid<NamedSES>(checked.report);
  }
  out.ses = std::move(*checked.value);
  return valid(std::move(out));
}

inline json to_json(NamedSES const& s) {
  json j;
  j["type"] = "ses";
  j["groupoid"] = to_json(s.groupoid);
  auto dims = [&](std::vector<Idx> const& d) {
    json out = json::object();
    for (std::size_t x = 0; x < d.size(); ++x) {
      out[s.groupoid.objects.names[x]] = d[x];
    }
    return out;
  };
  j["dims"] = {{"sub", dims(s.ses.sub.dim)},
               {"middle", dims(s.ses.middle.dim)},
               {"quotient", dims(s.ses.quotient.dim)}};
  auto mats = [&](std::vector<RationalMatrix> const& m) {
    json out = json::object();
    for (std::size_t i = 0; i < m.size(); ++i) {
      out[s.groupoid.morphisms.names[i]] = detail::matrix_to_json(m[i]);
    }
    return out;
  };
  j["matrices"] = {{"sub", mats(s.ses.sub.mat)},
                   {"middle", mats(s.ses.middle.mat)},
                   {"quotient", mats(s.ses.quotient.mat)}};
  j["j"] = json::object();
  j["q"] = json::object();
  for (std::size_t x = 0; x < s.ses.j.size(); ++x) {
    j["j"][s.groupoid.objects.names[x]] = detail::matrix_to_json(s.ses.j[x]);
    j["q"][s.groupoid.objects.names[x]] = detail::matrix_to_json(s.ses.q[x]);
  }
  return j;
}

}  // namespace grpd::io
