#pragma once

#include <array>
#include <cassert>
#include <functional>
#include <map>
#include <memory>

#include "grpd/base.hpp"
#include "grpd/group.hpp"

namespace grpd {

//! Raw structure tables for a finite category, as handed to the validator.
//! `compose` lists exactly the pairs the author claims are composable:
//! an entry {f, g, h} means h = g . f (f applied first).
struct RawCategory {
  Idx n_objects = 0;
  std::vector<Idx> src;    // per morphism
  std::vector<Idx> tgt;    // per morphism
  std::vector<Idx> ident;  // per object
  std::vector<std::array<Idx, 3>> compose;

  Idx n_morphisms() const { return static_cast<Idx>(src.size()); }
};

struct RawGroupoid {
  RawCategory cat;
  std::vector<Idx> inv;  // per morphism
};

//! A sealed finite category. Immutable after construction; composition is
//! stored per composable pair, so lookups are O(1) and memory is linear in
//! the number of composable pairs.
class FiniteCategory {
 public:
  Idx n_objects() const { return _n_objects; }
  Idx n_morphisms() const { return static_cast<Idx>(_src.size()); }

  Idx src(Idx m) const { return _src[m]; }
  Idx tgt(Idx m) const { return _tgt[m]; }
  Idx ident(Idx a) const { return _ident[a]; }
  bool is_identity(Idx m) const { return _ident[_src[m]] == m; }

  bool composable(Idx f, Idx g) const { return _tgt[f] == _src[g]; }

  //! Position of a morphism within arrows_from(src(m)).
  Idx pos_in_from(Idx m) const { return _pos_in_from[m]; }

  //! g . f, defined when tgt(f) == src(g): f applied first.
  Idx compose(Idx f, Idx g) const {
    assert(composable(f, g));
    return _comp[f][_pos_in_from[g]];
  }

  std::optional<Idx> try_compose(Idx f, Idx g) const {
    if (f >= n_morphisms() || g >= n_morphisms() || !composable(f, g)) {
      return std::nullopt;
    }
    return compose(f, g);
  }

  std::vector<Idx> const& arrows_from(Idx a) const { return _from[a]; }
  std::vector<Idx> const& arrows_to(Idx a) const { return _to[a]; }

  std::vector<Idx> hom(Idx a, Idx b) const {
    std::vector<Idx> out;
    for (Idx m : _from[a]) {
      if (_tgt[m] == b) {
        out.push_back(m);
      }
    }
    return out;
  }

  bool operator==(FiniteCategory const& other) const {
    return _n_objects == other._n_objects && _src == other._src && _tgt == other._tgt &&
           _ident == other._ident && _comp == other._comp;
  }

 protected:
  FiniteCategory() = default;

  void init(Idx n_objects, std::vector<Idx> src, std::vector<Idx> tgt, std::vector<Idx> ident,
            std::function<Idx(Idx, Idx)> const& comp) {
    _n_objects = n_objects;
    _src = std::move(src);
    _tgt = std::move(tgt);
    _ident = std::move(ident);
    Idx n = n_morphisms();
    _from.assign(_n_objects, {});
    _to.assign(_n_objects, {});
    _pos_in_from.assign(n, 0);
    for (Idx m = 0; m < n; ++m) {
      _pos_in_from[m] = static_cast<Idx>(_from[_src[m]].size());
      _from[_src[m]].push_back(m);
      _to[_tgt[m]].push_back(m);
    }
    _comp.assign(n, {});
    for (Idx f = 0; f < n; ++f) {
      auto const& outs = _from[_tgt[f]];
      _comp[f].resize(outs.size());
      for (std::size_t k = 0; k < outs.size(); ++k) {
        _comp[f][k] = comp(f, outs[k]);
      }
    }
  }

  Idx _n_objects = 0;
  std::vector<Idx> _src, _tgt, _ident;
  std::vector<std::vector<Idx>> _from, _to;
  std::vector<Idx> _pos_in_from;
  std::vector<std::vector<Idx>> _comp;
};

class FiniteGroupoid : public FiniteCategory {
 public:
  Idx inverse(Idx m) const { return _inv[m]; }

  RawGroupoid to_raw() const {
    RawGroupoid raw;
    raw.cat.n_objects = _n_objects;
    raw.cat.src = _src;
    raw.cat.tgt = _tgt;
    raw.cat.ident = _ident;
    for (Idx f = 0; f < n_morphisms(); ++f) {
      for (Idx g : arrows_from(tgt(f))) {
        raw.cat.compose.push_back({f, g, compose(f, g)});
      }
    }
    raw.inv = _inv;
    return raw;
  }

  bool operator==(FiniteGroupoid const& other) const {
    return FiniteCategory::operator==(other) && _inv == other._inv;
  }

  //! Trusted constructor for structures that are groupoids by construction
  //! (standard examples, fiber products, pull-backs). Axioms are asserted in
  //! debug builds and exercised by the validator-agreement tests.
  static FiniteGroupoid unchecked(Idx n_objects, std::vector<Idx> src, std::vector<Idx> tgt,
                                  std::vector<Idx> ident, std::vector<Idx> inv,
                                  std::function<Idx(Idx, Idx)> const& comp) {
    FiniteGroupoid g;
    g.init(n_objects, std::move(src), std::move(tgt), std::move(ident), comp);
    g._inv = std::move(inv);
    return g;
  }

 private:
  friend Validated<FiniteGroupoid> validate_groupoid(RawGroupoid const&);
  FiniteGroupoid() = default;
  std::vector<Idx> _inv;
};

using GroupoidPtr = std::shared_ptr<const FiniteGroupoid>;

inline GroupoidPtr share(FiniteGroupoid g) {
  return std::make_shared<const FiniteGroupoid>(std::move(g));
}

namespace detail {

//! Dense composition lookup built from the sparse entry list, with exactness
//! and duplicate diagnostics folded into the report.
struct CompMap {
  Idx n = 0;
  std::map<std::pair<Idx, Idx>, Idx> entries;

  std::optional<Idx> at(Idx f, Idx g) const {
    auto it = entries.find({f, g});
    if (it == entries.end()) {
      return std::nullopt;
    }
    return it->second;
  }
};

}  // namespace detail

//! Checks the five category axiom families over the raw tables and returns a
//! sealed category, or a report listing every violated instance.
inline Validated<FiniteCategory> validate_category(RawCategory const& raw) {
  Report rep;
  Idx n_obj = raw.n_objects;
  Idx n_mor = raw.n_morphisms();

  if (raw.tgt.size() != raw.src.size()) {
    rep.add("DanglingIndex", "src and tgt tables disagree in length");
    return invalid<FiniteCategory>(std::move(rep));
  }
  if (raw.ident.size() != n_obj) {
    rep.add("DanglingIndex", detail::cat("identity table has ", raw.ident.size(),
                                         " entries, expected ", n_obj));
    return invalid<FiniteCategory>(std::move(rep));
  }
  bool dangling = false;
  for (Idx m = 0; m < n_mor; ++m) {
    if (raw.src[m] >= n_obj || raw.tgt[m] >= n_obj) {
      rep.add("DanglingIndex", detail::cat("morphism ", m, " has out-of-range endpoint"));
      dangling = true;
    }
  }
  for (Idx a = 0; a < n_obj; ++a) {
    if (raw.ident[a] >= n_mor) {
      rep.add("DanglingIndex", detail::cat("identity of object ", a, " out of range"));
      dangling = true;
    }
  }
  for (auto const& e : raw.compose) {
    if (e[0] >= n_mor || e[1] >= n_mor || e[2] >= n_mor) {
      rep.add("DanglingIndex",
              detail::cat("compose entry (", e[0], ",", e[1], ",", e[2], ") out of range"));
      dangling = true;
    }
  }
  if (dangling) {
    return invalid<FiniteCategory>(std::move(rep));
  }

  detail::CompMap comp;
  comp.n = n_mor;
  for (auto const& e : raw.compose) {
    auto [it, fresh] = comp.entries.insert({{e[0], e[1]}, e[2]});
    if (!fresh && it->second != e[2]) {
      rep.add("CompositionDomainMismatch",
              detail::cat("conflicting entries for compose(", e[0], ",", e[1], ")"));
    }
  }

  // comp defined on exactly the composable pairs
  for (auto const& [pair, result] : comp.entries) {
    auto [f, g] = pair;
    if (raw.tgt[f] != raw.src[g]) {
      rep.add("CompositionDomainMismatch",
              detail::cat("compose(", f, ",", g, ") declared but tgt(", f, ") != src(", g, ")"));
    } else {
      if (raw.src[result] != raw.src[f]) {
        rep.add("CompositionBoundaryViolation",
                detail::cat("src(compose(", f, ",", g, ")) != src(", f, ")"));
      }
      if (raw.tgt[result] != raw.tgt[g]) {
        rep.add("CompositionBoundaryViolation",
                detail::cat("tgt(compose(", f, ",", g, ")) != tgt(", g, ")"));
      }
    }
  }
  for (Idx f = 0; f < n_mor; ++f) {
    for (Idx g = 0; g < n_mor; ++g) {
      if (raw.tgt[f] == raw.src[g] && !comp.at(f, g)) {
        rep.add("CompositionDomainMismatch",
                detail::cat("composable pair (", f, ",", g, ") has no compose entry"));
      }
    }
  }

  // identities: boundaries and unit laws
  for (Idx a = 0; a < n_obj; ++a) {
    Idx e = raw.ident[a];
    if (raw.src[e] != a || raw.tgt[e] != a) {
      rep.add("UnitViolation", detail::cat("identity ", e, " of object ", a,
                                           " does not have src = tgt = ", a));
    }
  }
  for (Idx f = 0; f < n_mor; ++f) {
    Idx es = raw.ident[raw.src[f]];
    Idx et = raw.ident[raw.tgt[f]];
    if (es < n_mor && raw.tgt[es] == raw.src[f]) {
      if (auto c = comp.at(es, f); c && *c != f) {
        rep.add("UnitViolation", detail::cat("compose(ident(src), ", f, ") = ", *c, " != ", f));
      }
    }
    if (et < n_mor && raw.src[et] == raw.tgt[f]) {
      if (auto c = comp.at(f, et); c && *c != f) {
        rep.add("UnitViolation", detail::cat("compose(", f, ", ident(tgt)) = ", *c, " != ", f));
      }
    }
  }

  // associativity on all composable triples
  for (Idx f = 0; f < n_mor; ++f) {
    for (Idx g = 0; g < n_mor; ++g) {
      if (raw.tgt[f] != raw.src[g]) {
        continue;
      }
      auto gf = comp.at(f, g);
      if (!gf) {
        continue;
      }
      for (Idx h = 0; h < n_mor; ++h) {
        if (raw.tgt[g] != raw.src[h]) {
          continue;
        }
        auto hg = comp.at(g, h);
        if (!hg) {
          continue;
        }
        auto lhs = comp.at(*gf, h);  // h . (g . f)
        auto rhs = comp.at(f, *hg);  // (h . g) . f
        if (lhs && rhs && *lhs != *rhs) {
          rep.add("AssociativityViolation",
                  detail::cat("(", f, ",", g, ",", h, "): h.(g.f) = ", *lhs,
                              " but (h.g).f = ", *rhs));
        }
      }
    }
  }

  if (!rep.ok()) {
    return invalid<FiniteCategory>(std::move(rep));
  }

  struct Sealed : FiniteCategory {
    Sealed(RawCategory const& raw, detail::CompMap const& comp) {
      init(raw.n_objects, raw.src, raw.tgt, raw.ident,
           [&](Idx f, Idx g) { return *comp.at(f, g); });
    }
  };
  return valid<FiniteCategory>(Sealed(raw, comp));
}

//! Groupoid validator: category axioms first, then the inverse axioms at
//! every morphism, each failure named.
inline Validated<FiniteGroupoid> validate_groupoid(RawGroupoid const& raw) {
  auto cat = validate_category(raw.cat);
  Report rep = cat.report;
  Idx n_mor = raw.cat.n_morphisms();
  if (raw.inv.size() != n_mor) {
    rep.add("DanglingIndex", "inverse table length mismatch");
    return invalid<FiniteGroupoid>(std::move(rep));
  }
  for (Idx m = 0; m < n_mor; ++m) {
    if (raw.inv[m] >= n_mor) {
      rep.add("DanglingIndex", detail::cat("inverse of ", m, " out of range"));
      return invalid<FiniteGroupoid>(std::move(rep));
    }
  }
  if (!cat.ok()) {
    return invalid<FiniteGroupoid>(std::move(rep));
  }
  FiniteCategory const& c = *cat;
  for (Idx m = 0; m < n_mor; ++m) {
    Idx w = raw.inv[m];
    if (c.src(w) != c.tgt(m) || c.tgt(w) != c.src(m)) {
      rep.add("NotInvertible", detail::cat("morphism ", m, ": src.inv = tgt / tgt.inv = src fails"));
      continue;
    }
    if (c.compose(m, w) != c.ident(c.src(m))) {
      rep.add("NotInvertible",
              detail::cat("morphism ", m, ": inv(", m, ").", m, " != ident(src(", m, "))"));
    }
    if (c.compose(w, m) != c.ident(c.tgt(m))) {
      rep.add("NotInvertible",
              detail::cat("morphism ", m, ": ", m, ".inv(", m, ") != ident(tgt(", m, "))"));
    }
  }
  if (!rep.ok()) {
    return invalid<FiniteGroupoid>(std::move(rep));
  }
  FiniteGroupoid g;
  g.init(raw.cat.n_objects, raw.cat.src, raw.cat.tgt, raw.cat.ident,
         [&](Idx f, Idx h) { return c.compose(f, h); });
  g._inv = raw.inv;
  return valid(std::move(g));
}

// ---------------------------------------------------------------------------
// standard constructions
// ---------------------------------------------------------------------------

//! Discrete groupoid on a finite set: objects = morphisms = the set.
inline FiniteGroupoid discrete_groupoid(Idx n) {
  std::vector<Idx> id(n);
  for (Idx i = 0; i < n; ++i) {
    id[i] = i;
  }
  return FiniteGroupoid::unchecked(n, id, id, id, id, [](Idx f, Idx) { return f; });
}

//! One-object groupoid with morphisms a finite group.
inline FiniteGroupoid group_groupoid(GroupTable const& group) {
  auto checked = validate_group(group);
  if (!checked.ok()) {
    throw PreconditionError("NotAGroup:\n" + checked.report.to_string());
  }
  Idx n = group.n;
  std::vector<Idx> zeros(n, 0);
  std::vector<Idx> ident{group.identity()};
  std::vector<Idx> inv(n);
  for (Idx a = 0; a < n; ++a) {
    inv[a] = group.inverse_of(a);
  }
  return FiniteGroupoid::unchecked(1, zeros, zeros, ident, inv,
                                   [&group](Idx f, Idx g) { return group.product(f, g); });
}

//! Right group action on a finite set, as a table act[m * |G| + g] = m.g.
struct GroupAction {
  GroupTable group;
  Idx n_points = 0;
  std::vector<Idx> act;  // n_points x group.n

  Idx apply(Idx m, Idx g) const { return act[static_cast<std::size_t>(m) * group.n + g]; }
};

inline Validated<GroupAction> validate_group_action(GroupAction const& a) {
  Report rep;
  auto g = validate_group(a.group);
  if (!g.ok()) {
    rep.add("NotAnAction", "underlying table is not a group");
    return invalid<GroupAction>(std::move(rep));
  }
  if (a.act.size() != static_cast<std::size_t>(a.n_points) * a.group.n) {
    rep.add("NotAnAction", "action table has wrong size");
    return invalid<GroupAction>(std::move(rep));
  }
  for (Idx v : a.act) {
    if (v >= a.n_points) {
      rep.add("NotAnAction", "action table entry out of range");
      return invalid<GroupAction>(std::move(rep));
    }
  }
  Idx e = a.group.identity();
  for (Idx m = 0; m < a.n_points; ++m) {
    if (a.apply(m, e) != m) {
      rep.add("NotAnAction", detail::cat("(", m, ",e): identity law fails"));
    }
    for (Idx x = 0; x < a.group.n; ++x) {
      for (Idx y = 0; y < a.group.n; ++y) {
        if (a.apply(a.apply(m, x), y) != a.apply(m, a.group.product(x, y))) {
          rep.add("NotAnAction", detail::cat("(", m, ",", x, ",", y, "): compatibility fails"));
        }
      }
    }
  }
  if (!rep.ok()) {
    return invalid<GroupAction>(std::move(rep));
  }
  return valid(a);
}

//! Action groupoid of a right group action: objects the set, morphisms
//! (m, g) : m -> m.g, composed by multiplying the group parts.
inline FiniteGroupoid action_groupoid(GroupAction const& action) {
  auto checked = validate_group_action(action);
  if (!checked.ok()) {
    throw PreconditionError("NotAnAction:\n" + checked.report.to_string());
  }
  Idx ng = action.group.n;
  Idx n_mor = action.n_points * ng;
  auto pair = [ng](Idx m, Idx g) { return m * ng + g; };
  std::vector<Idx> src(n_mor), tgt(n_mor), inv(n_mor), ident(action.n_points);
  for (Idx m = 0; m < action.n_points; ++m) {
    ident[m] = pair(m, action.group.identity());
    for (Idx g = 0; g < ng; ++g) {
      src[pair(m, g)] = m;
      tgt[pair(m, g)] = action.apply(m, g);
      inv[pair(m, g)] = pair(action.apply(m, g), action.group.inverse_of(g));
    }
  }
  auto comp = [&action, ng](Idx f, Idx g) {
    Idx m1 = f / ng, g1 = f % ng, g2 = g % ng;
    return m1 * ng + action.group.product(g1, g2);
  };
  return FiniteGroupoid::unchecked(action.n_points, std::move(src), std::move(tgt),
                                   std::move(ident), std::move(inv), comp);
}

// ---------------------------------------------------------------------------
// basic structure queries
// ---------------------------------------------------------------------------

//! True iff every pair of objects is connected by a morphism.
inline bool is_transitive(FiniteGroupoid const& g) {
  if (g.n_objects() <= 1) {
    return true;
  }
  // one component containing every object suffices: arrows are invertible
  std::vector<Idx> parent(g.n_objects());
  for (Idx a = 0; a < g.n_objects(); ++a) {
    parent[a] = a;
  }
  std::function<Idx(Idx)> find = [&](Idx a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  for (Idx m = 0; m < g.n_morphisms(); ++m) {
    Idx a = find(g.src(m)), b = find(g.tgt(m));
    if (a != b) {
      parent[std::max(a, b)] = std::min(a, b);
    }
  }
  for (Idx a = 0; a < g.n_objects(); ++a) {
    if (find(a) != find(0)) {
      return false;
    }
  }
  return true;
}

//! One connected component with its isotropy group at the canonical
//! representative (the smallest object index).
struct ComponentInfo {
  std::vector<Idx> objects;      // ascending
  Idx representative = 0;        // objects.front()
  std::vector<Idx> loop_arrows;  // arrows rep -> rep, ascending
  GroupTable isotropy;           // isotropy.mul matches compose on loop_arrows
};

inline std::vector<ComponentInfo> components_and_isotropy(FiniteGroupoid const& g) {
  std::vector<Idx> parent(g.n_objects());
  for (Idx a = 0; a < g.n_objects(); ++a) {
    parent[a] = a;
  }
  std::function<Idx(Idx)> find = [&](Idx a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  for (Idx m = 0; m < g.n_morphisms(); ++m) {
    Idx a = find(g.src(m)), b = find(g.tgt(m));
    if (a != b) {
      parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::map<Idx, ComponentInfo> comps;
  for (Idx a = 0; a < g.n_objects(); ++a) {
    comps[find(a)].objects.push_back(a);
  }
  std::vector<ComponentInfo> out;
  for (auto& [root, info] : comps) {
    info.representative = info.objects.front();
    info.loop_arrows = g.hom(info.representative, info.representative);
    Idx k = static_cast<Idx>(info.loop_arrows.size());
    std::map<Idx, Idx> pos;
    for (Idx i = 0; i < k; ++i) {
      pos[info.loop_arrows[i]] = i;
    }
    info.isotropy.n = k;
    info.isotropy.mul.resize(static_cast<std::size_t>(k) * k);
    for (Idx i = 0; i < k; ++i) {
      for (Idx j = 0; j < k; ++j) {
        info.isotropy.mul[static_cast<std::size_t>(i) * k + j] =
            pos[g.compose(info.loop_arrows[i], info.loop_arrows[j])];
      }
    }
    out.push_back(std::move(info));
  }
  return out;
}

//! Disjoint union; objects and morphisms of `a` come first.
inline FiniteGroupoid disjoint_union(FiniteGroupoid const& a, FiniteGroupoid const& b) {
  Idx oa = a.n_objects(), ma = a.n_morphisms();
  std::vector<Idx> src, tgt, ident, inv;
  for (Idx m = 0; m < ma; ++m) {
    src.push_back(a.src(m));
    tgt.push_back(a.tgt(m));
    inv.push_back(a.inverse(m));
  }
  for (Idx m = 0; m < b.n_morphisms(); ++m) {
    src.push_back(oa + b.src(m));
    tgt.push_back(oa + b.tgt(m));
    inv.push_back(ma + b.inverse(m));
  }
  for (Idx x = 0; x < oa; ++x) {
    ident.push_back(a.ident(x));
  }
  for (Idx x = 0; x < b.n_objects(); ++x) {
    ident.push_back(ma + b.ident(x));
  }
  auto comp = [&, ma](Idx f, Idx g) {
    if (f < ma) {
      return a.compose(f, g);
    }
    return ma + b.compose(f - ma, g - ma);
  };
  return FiniteGroupoid::unchecked(oa + b.n_objects(), std::move(src), std::move(tgt),
                                   std::move(ident), std::move(inv), comp);
}

//! Transitive groupoid with `n` objects and isotropy `k`: arrows are triples
//! (i, g, j) : i -> j, composed by multiplying the group parts.
inline FiniteGroupoid transitive_groupoid(Idx n, GroupTable const& k) {
  Idx ng = k.n;
  Idx n_mor = n * n * ng;
  auto enc = [=](Idx i, Idx g, Idx j) { return (i * n + j) * ng + g; };
  std::vector<Idx> src(n_mor), tgt(n_mor), inv(n_mor), ident(n);
  for (Idx i = 0; i < n; ++i) {
    ident[i] = enc(i, k.identity(), i);
    for (Idx j = 0; j < n; ++j) {
      for (Idx g = 0; g < ng; ++g) {
        src[enc(i, g, j)] = i;
        tgt[enc(i, g, j)] = j;
        inv[enc(i, g, j)] = enc(j, k.inverse_of(g), i);
      }
    }
  }
  auto comp = [=, &k](Idx f, Idx g) {
    Idx gf = f % ng, pf = f / ng;
    Idx i = pf / n;
    Idx gg = g % ng, pg = g / ng;
    Idx l = pg % n;
    return enc(i, k.product(gf, gg), l);
  };
  return FiniteGroupoid::unchecked(n, std::move(src), std::move(tgt), std::move(ident),
                                   std::move(inv), comp);
}

//! Pair groupoid: exactly one arrow between any two objects.
inline FiniteGroupoid pair_groupoid(Idx n) { return transitive_groupoid(n, trivial_group()); }

}  // namespace grpd
