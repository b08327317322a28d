#pragma once

#include "grpd/action.hpp"

namespace grpd {

//! A left G-action and a right H-action on a shared carrier whose left
//! anchor is a principal H-bundle; a generalized morphism G -> H.
struct Bibundle {
  GroupoidAction left;   // side == left, groupoid G
  GroupoidAction right;  // side == right, groupoid H

  Idx carrier_size() const { return left.n_carrier; }
  GroupoidPtr left_groupoid() const { return left.gpd; }
  GroupoidPtr right_groupoid() const { return right.gpd; }
};

inline Validated<Bibundle> validate_bibundle(GroupoidAction const& left,
                                             GroupoidAction const& right) {
  Report rep;
  if (left.side != Side::left || right.side != Side::right) {
    rep.add("DanglingIndex", "bibundle needs a left action and a right action");
    return invalid<Bibundle>(std::move(rep));
  }
  if (left.n_carrier != right.n_carrier) {
    rep.add("DanglingIndex", "the two actions do not share a carrier");
    return invalid<Bibundle>(std::move(rep));
  }
  auto lv = validate_action(left);
  auto rv = validate_action(right);
  if (!lv.ok() || !rv.ok()) {
    rep = lv.report;
    for (auto& v : rv.report.violations) {
      rep.violations.push_back(std::move(v));
    }
    return invalid<Bibundle>(std::move(rep));
  }
  auto const& g = *left.gpd;
  auto const& h = *right.gpd;
  // left anchor with the right action must be a principal H-bundle
  auto principal = validate_principal_bundle(right, left.anchor, g.n_objects());
  if (!principal.ok()) {
    rep.add("LeftAnchorNotPrincipal", principal.report.to_string());
  }
  // right anchor must be G-invariant
  for (Idx p = 0; p < left.n_carrier; ++p) {
    for (Idx m : g.arrows_from(left.anchor[p])) {
      if (right.anchor[left.apply(p, m)] != right.anchor[p]) {
        rep.add("RightAnchorNotInvariant", detail::cat("(", m, ",", p, ")"));
      }
    }
  }
  // the two actions must commute on the joint domain
  for (Idx p = 0; p < left.n_carrier; ++p) {
    for (Idx m : g.arrows_from(left.anchor[p])) {
      for (Idx w : h.arrows_to(right.anchor[p])) {
        Idx lhs = right.apply(left.apply(p, m), w);
        Idx rhs = left.apply(right.apply(p, w), m);
        if (lhs != rhs) {
          rep.add("Incompatible", detail::cat("(", m, ",", p, ",", w, ")"));
        }
      }
    }
  }
  if (!rep.ok()) {
    return invalid<Bibundle>(std::move(rep));
  }
  return valid(Bibundle{left, right});
}

//! A left action seen as a right action through inverses (and vice versa).
inline GroupoidAction swap_side(GroupoidAction const& a) {
  GroupoidAction out = a;
  out.side = a.side == Side::left ? Side::right : Side::left;
  auto const& g = *a.gpd;
  std::fill(out.act.begin(), out.act.end(), UNDEFINED);
  for (Idx p = 0; p < a.n_carrier; ++p) {
    for (Idx m = 0; m < g.n_morphisms(); ++m) {
      if (out.in_domain(p, m)) {
        out.slot(p, m) = a.apply(p, g.inverse(m));
      }
    }
  }
  return out;
}

//! Whether the right anchor, with the left action, is a principal bundle
//! over the right groupoid's objects (the G-principality clause).
inline bool is_left_principal(Bibundle const& b) {
  auto as_right = swap_side(b.left);
  return validate_principal_bundle(as_right, b.right.anchor, b.right.gpd->n_objects()).ok();
}

//! Reads a bibundle that is principal on both sides backwards: H acts on
//! the left through inverses, G on the right.
inline Bibundle flip_bibundle(Bibundle const& b) {
  if (!is_left_principal(b)) {
    throw PreconditionError("flip_bibundle: bibundle is not principal on the left side");
  }
  auto checked = validate_bibundle(swap_side(b.right), swap_side(b.left));
  return *checked;
}

//! The bibundle of a functor phi : G -> H. Carrier is the set of pairs
//! (u, h) with phi0(u) = tgt(h), G acting through phi on the left and H by
//! composition on the right.
inline Bibundle bibundle_of_functor(GroupoidFunctor const& phi) {
  auto const& g = *phi.dom;
  auto const& h = *phi.cod;
  std::vector<std::pair<Idx, Idx>> pairs;
  std::map<std::pair<Idx, Idx>, Idx> index;
  for (Idx u = 0; u < g.n_objects(); ++u) {
    for (Idx w : h.arrows_to(phi.f0[u])) {
      index[{u, w}] = static_cast<Idx>(pairs.size());
      pairs.emplace_back(u, w);
    }
  }
  Idx n = static_cast<Idx>(pairs.size());
  GroupoidAction left;
  left.gpd = phi.dom;
  left.side = Side::left;
  left.n_carrier = n;
  left.anchor.resize(n);
  left.act.assign(static_cast<std::size_t>(n) * g.n_morphisms(), UNDEFINED);
  GroupoidAction right;
  right.gpd = phi.cod;
  right.side = Side::right;
  right.n_carrier = n;
  right.anchor.resize(n);
  right.act.assign(static_cast<std::size_t>(n) * h.n_morphisms(), UNDEFINED);
  for (Idx i = 0; i < n; ++i) {
    auto [u, w] = pairs[i];
    left.anchor[i] = u;
    right.anchor[i] = h.src(w);
    for (Idx m : g.arrows_from(u)) {
      left.slot(i, m) = index.at({g.tgt(m), h.compose(w, phi.f1[m])});
    }
    for (Idx k : h.arrows_to(h.src(w))) {
      right.slot(i, k) = index.at({u, h.compose(k, w)});
    }
  }
  auto checked = validate_bibundle(left, right);
  return *checked;
}

//! Composition of bibundles P : G -> H and Q : H -> K as the orbit space of
//! the anchored pairs under the middle groupoid, with canonical smallest
//! representatives.
inline Bibundle compose_bibundles(Bibundle const& p, Bibundle const& q) {
  if (!(*p.right.gpd == *q.left.gpd)) {
    throw PreconditionError("MiddleMismatch: middle groupoid does not match");
  }
  auto const& g = *p.left.gpd;
  auto const& h = *p.right.gpd;
  auto const& k = *q.right.gpd;
  std::vector<std::pair<Idx, Idx>> pairs;
  std::map<std::pair<Idx, Idx>, Idx> index;
  for (Idx a = 0; a < p.carrier_size(); ++a) {
    for (Idx b = 0; b < q.carrier_size(); ++b) {
      if (p.right.anchor[a] == q.left.anchor[b]) {
        index[{a, b}] = static_cast<Idx>(pairs.size());
        pairs.emplace_back(a, b);
      }
    }
  }
  Idx n_pairs = static_cast<Idx>(pairs.size());
  std::vector<Idx> parent(n_pairs);
  for (Idx i = 0; i < n_pairs; ++i) {
    parent[i] = i;
  }
  std::function<Idx(Idx)> find = [&](Idx i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (Idx i = 0; i < n_pairs; ++i) {
    auto [a, b] = pairs[i];
    for (Idx w : h.arrows_to(p.right.anchor[a])) {
      Idx j = index.at({p.right.apply(a, w), q.left.apply(b, h.inverse(w))});
      Idx ri = find(i), rj = find(j);
      if (ri != rj) {
        parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }
  std::vector<Idx> orbit_of(n_pairs);
  std::vector<Idx> reps;
  std::map<Idx, Idx> orbit_index;
  for (Idx i = 0; i < n_pairs; ++i) {
    Idx r = find(i);
    auto it = orbit_index.find(r);
    if (it == orbit_index.end()) {
      it = orbit_index.insert({r, static_cast<Idx>(reps.size())}).first;
      reps.push_back(r);
    }
    orbit_of[i] = it->second;
  }
  Idx n = static_cast<Idx>(reps.size());
  GroupoidAction left;
  left.gpd = p.left.gpd;
  left.side = Side::left;
  left.n_carrier = n;
  left.anchor.resize(n);
  left.act.assign(static_cast<std::size_t>(n) * g.n_morphisms(), UNDEFINED);
  GroupoidAction right;
  right.gpd = q.right.gpd;
  right.side = Side::right;
  right.n_carrier = n;
  right.anchor.resize(n);
  right.act.assign(static_cast<std::size_t>(n) * k.n_morphisms(), UNDEFINED);
  for (Idx o = 0; o < n; ++o) {
    auto [a, b] = pairs[reps[o]];
    left.anchor[o] = p.left.anchor[a];
    right.anchor[o] = q.right.anchor[b];
    for (Idx m : g.arrows_from(left.anchor[o])) {
      left.slot(o, m) = orbit_of[index.at({p.left.apply(a, m), b})];
    }
    for (Idx w : k.arrows_to(right.anchor[o])) {
      right.slot(o, w) = orbit_of[index.at({a, q.right.apply(b, w)})];
    }
  }
  auto checked = validate_bibundle(left, right);
  return *checked;
}

//! Equivariant bijection between two bibundles over the same groupoid pair,
//! commuting with both anchors and both actions; nullopt if none exists.
inline std::optional<std::vector<Idx>> bibundle_isomorphism(Bibundle const& b1,
                                                            Bibundle const& b2) {
  if (!(*b1.left.gpd == *b2.left.gpd) || !(*b1.right.gpd == *b2.right.gpd) ||
      b1.carrier_size() != b2.carrier_size()) {
    return std::nullopt;
  }
  auto const& g = *b1.left.gpd;
  auto const& h = *b1.right.gpd;
  Idx n = b1.carrier_size();
  // fibers of the left anchor; the right action is free and transitive on
  // them, so one basepoint image per fiber determines everything
  std::vector<std::vector<Idx>> fiber1(g.n_objects()), fiber2(g.n_objects());
  for (Idx p = 0; p < n; ++p) {
    fiber1[b1.left.anchor[p]].push_back(p);
    fiber2[b2.left.anchor[p]].push_back(p);
  }
  for (Idx u = 0; u < g.n_objects(); ++u) {
    if (fiber1[u].size() != fiber2[u].size()) {
      return std::nullopt;
    }
  }
  auto rdifference = [&](GroupoidAction const& act, Idx p, Idx q) {
    for (Idx w : h.arrows_to(act.anchor[p])) {
      if (act.apply(p, w) == q) {
        return w;
      }
    }
    return UNDEFINED;
  };
  std::vector<Idx> map(n, UNDEFINED);
  std::vector<Idx> nonempty;
  for (Idx u = 0; u < g.n_objects(); ++u) {
    if (!fiber1[u].empty()) {
      nonempty.push_back(u);
    }
  }
  auto check_left = [&]() {
    for (Idx p = 0; p < n; ++p) {
      if (map[p] == UNDEFINED) {
        continue;
      }
      for (Idx m : g.arrows_from(b1.left.anchor[p])) {
        Idx q = b1.left.apply(p, m);
        if (map[q] != UNDEFINED && map[q] != b2.left.apply(map[p], m)) {
          return false;
        }
      }
    }
    return true;
  };
  auto rec = [&](auto&& self, std::size_t fi) -> bool {
    if (fi == nonempty.size()) {
      return check_left();
    }
    Idx u = nonempty[fi];
    Idx p0 = fiber1[u].front();
    for (Idx q0 : fiber2[u]) {
      if (b2.right.anchor[q0] != b1.right.anchor[p0]) {
        continue;
      }
      bool ok = true;
      std::vector<Idx> touched;
      for (Idx p : fiber1[u]) {
        Idx w = rdifference(b1.right, p0, p);
        if (w == UNDEFINED) {
          ok = false;
          break;
        }
        Idx q = b2.right.apply(q0, w);
        if (b2.right.anchor[q] != b1.right.anchor[p]) {
          ok = false;
          break;
        }
        map[p] = q;
        touched.push_back(p);
      }
      if (ok && check_left() && self(self, fi + 1)) {
        return true;
      }
      for (Idx p : touched) {
        map[p] = UNDEFINED;
      }
    }
    return false;
  };
  if (!rec(rec, 0)) {
    return std::nullopt;
  }
  return map;
}

//! A pull-back groupoid together with its triple decoding and the canonical
//! projection functor onto the base groupoid.
struct PullbackGroupoid {
  GroupoidPtr groupoid;
  GroupoidFunctor projection;                   // to the base
  std::vector<std::array<Idx, 3>> triples;      // morphism -> (p, x, q)
  std::map<std::array<Idx, 3>, Idx> triple_of;  // reverse lookup
};

//! Pull-back of a groupoid along a surjection J onto its objects:
//! morphisms are triples (p, x, q) with J(p) = src(x), tgt(x) = J(q).
inline PullbackGroupoid pullback_groupoid(GroupoidPtr base, std::vector<Idx> const& j,
                                          Idx n_new_objects) {
  auto const& b = *base;
  std::vector<char> hit(b.n_objects(), 0);
  for (Idx v : j) {
    if (v >= b.n_objects()) {
      throw PreconditionError("pullback_groupoid: map value out of range");
    }
    hit[v] = 1;
  }
  for (Idx a = 0; a < b.n_objects(); ++a) {
    if (!hit[a]) {
      throw PreconditionError(detail::cat("NotSurjective: object ", a, " not in the image"));
    }
  }
  PullbackGroupoid out;
  for (Idx p = 0; p < n_new_objects; ++p) {
    for (Idx x : b.arrows_from(j[p])) {
      for (Idx q = 0; q < n_new_objects; ++q) {
        if (b.tgt(x) == j[q]) {
          out.triple_of[{p, x, q}] = static_cast<Idx>(out.triples.size());
          out.triples.push_back({p, x, q});
        }
      }
    }
  }
  Idx n_mor = static_cast<Idx>(out.triples.size());
  std::vector<Idx> src(n_mor), tgt(n_mor), inv(n_mor), ident(n_new_objects);
  for (Idx m = 0; m < n_mor; ++m) {
    auto [p, x, q] = out.triples[m];
    src[m] = p;
    tgt[m] = q;
    inv[m] = out.triple_of.at({q, b.inverse(x), p});
  }
  for (Idx p = 0; p < n_new_objects; ++p) {
    ident[p] = out.triple_of.at({p, b.ident(j[p]), p});
  }
  auto comp = [&](Idx f, Idx g) {
    auto [p, x, q] = out.triples[f];
    auto [q2, y, r] = out.triples[g];
    return out.triple_of.at({p, b.compose(x, y), r});
  };
  out.groupoid = share(FiniteGroupoid::unchecked(n_new_objects, std::move(src), std::move(tgt),
                                                 std::move(ident), std::move(inv), comp));
  out.projection.dom = out.groupoid;
  out.projection.cod = base;
  out.projection.f0 = j;
  out.projection.f1.resize(n_mor);
  for (Idx m = 0; m < n_mor; ++m) {
    out.projection.f1[m] = out.triples[m][1];
  }
  return out;
}

struct MoritaMorphismVerdict {
  bool is_morita = false;
  std::string witness;  // concrete reason when false
};

//! A functor is a Morita morphism iff its object map is surjective and
//! gamma -> (src, F(gamma), tgt) bijects onto the pull-back groupoid's
//! morphisms.
inline MoritaMorphismVerdict is_morita_morphism(GroupoidFunctor const& f) {
  auto const& c = *f.dom;
  auto const& d = *f.cod;
  std::vector<char> hit(d.n_objects(), 0);
  for (Idx v : f.f0) {
    hit[v] = 1;
  }
  for (Idx a = 0; a < d.n_objects(); ++a) {
    if (!hit[a]) {
      return {false, detail::cat("object map misses ", a)};
    }
  }
  std::size_t expected = 0;
  std::vector<Idx> fiber(d.n_objects(), 0);
  for (Idx v : f.f0) {
    ++fiber[v];
  }
  for (Idx x = 0; x < d.n_morphisms(); ++x) {
    expected += static_cast<std::size_t>(fiber[d.src(x)]) * fiber[d.tgt(x)];
  }
  if (expected != c.n_morphisms()) {
    if (expected > c.n_morphisms()) {
      // find a concrete unreached triple
      std::set<std::array<Idx, 3>> seen;
      for (Idx m = 0; m < c.n_morphisms(); ++m) {
        seen.insert({c.src(m), f.f1[m], c.tgt(m)});
      }
      for (Idx p = 0; p < c.n_objects(); ++p) {
        for (Idx x : d.arrows_from(f.f0[p])) {
          for (Idx q = 0; q < c.n_objects(); ++q) {
            if (d.tgt(x) == f.f0[q] && !seen.count({p, x, q})) {
              return {false, detail::cat("no arrow maps to the triple (", p, ",", x, ",", q, ")")};
            }
          }
        }
      }
    }
    return {false, detail::cat("morphism count ", c.n_morphisms(), " != pull-back count ",
                               expected)};
  }
  std::set<std::array<Idx, 3>> seen;
  for (Idx m = 0; m < c.n_morphisms(); ++m) {
    std::array<Idx, 3> t{c.src(m), f.f1[m], c.tgt(m)};
    if (!seen.insert(t).second) {
      return {false, detail::cat("two arrows map to the triple (", t[0], ",", t[1], ",", t[2],
                                 ")")};
    }
  }
  return {true, {}};
}

struct EquivalenceWitness {
  GroupoidFunctor forward;   // G -> H
  GroupoidFunctor backward;  // H -> G
  NatTransform unit;         // backward . forward  =>  id_G
  NatTransform counit;       // forward . backward  =>  id_H
};

struct SpanWitness {
  GroupoidPtr apex;
  GroupoidFunctor to_first;
  GroupoidFunctor to_second;
};

struct MoritaWitness {
  enum class Kind { equivalence, span } kind = Kind::span;
  std::optional<EquivalenceWitness> equivalence;
  std::optional<SpanWitness> span;
};

struct MoritaDecision {
  bool equivalent = false;
  std::string explanation;
  std::optional<MoritaWitness> witness;
};

namespace detail {

//! Arrows from the component representative to each object, picked by
//! breadth-first search with smallest-arrow tie-break; deterministic.
inline std::vector<Idx> frame_arrows(FiniteGroupoid const& g, ComponentInfo const& comp) {
  std::vector<Idx> frame(g.n_objects(), UNDEFINED);
  frame[comp.representative] = g.ident(comp.representative);
  std::vector<Idx> queue{comp.representative};
  std::size_t head = 0;
  while (head < queue.size()) {
    Idx x = queue[head++];
    for (Idx m : g.arrows_from(x)) {
      Idx y = g.tgt(m);
      if (frame[y] == UNDEFINED) {
        frame[y] = g.compose(frame[x], m);
        queue.push_back(y);
      }
    }
  }
  return frame;
}

struct SkeletonData {
  std::vector<ComponentInfo> comps;
  std::vector<Idx> comp_of;         // object -> component index
  std::vector<Idx> frame;           // object -> arrow rep -> object
  std::vector<std::map<Idx, Idx>> loop_pos;  // per component: arrow -> isotropy index
};

inline SkeletonData skeleton_data(FiniteGroupoid const& g) {
  SkeletonData out;
  out.comps = components_and_isotropy(g);
  out.comp_of.assign(g.n_objects(), 0);
  out.frame.assign(g.n_objects(), UNDEFINED);
  for (std::size_t ci = 0; ci < out.comps.size(); ++ci) {
    for (Idx a : out.comps[ci].objects) {
      out.comp_of[a] = static_cast<Idx>(ci);
    }
    auto frame = frame_arrows(g, out.comps[ci]);
    for (Idx a : out.comps[ci].objects) {
      out.frame[a] = frame[a];
    }
    std::map<Idx, Idx> pos;
    for (Idx i = 0; i < out.comps[ci].isotropy.n; ++i) {
      pos[out.comps[ci].loop_arrows[i]] = i;
    }
    out.loop_pos.push_back(std::move(pos));
  }
  return out;
}

//! The skeletal equivalence determined by a component matching and per-
//! component isotropy isomorphisms: every object collapses to the matched
//! representative, arrows transport along the frames.
inline GroupoidFunctor skeletal_functor(GroupoidPtr dom, GroupoidPtr cod, SkeletonData const& sd,
                                        SkeletonData const& sc,
                                        std::vector<Idx> const& comp_match,
                                        std::vector<std::vector<Idx>> const& iso_maps) {
  auto const& g = *dom;
  auto const& h = *cod;
  GroupoidFunctor f;
  f.dom = dom;
  f.cod = cod;
  f.f0.resize(g.n_objects());
  f.f1.resize(g.n_morphisms());
  for (Idx a = 0; a < g.n_objects(); ++a) {
    f.f0[a] = sc.comps[comp_match[sd.comp_of[a]]].representative;
  }
  for (Idx m = 0; m < g.n_morphisms(); ++m) {
    Idx ci = sd.comp_of[g.src(m)];
    auto const& comp = sd.comps[ci];
    auto const& target = sc.comps[comp_match[ci]];
    // loop = frame(tgt)^-1 . m . frame(src) at the representative
    Idx loop = g.compose(g.compose(sd.frame[g.src(m)], m), g.inverse(sd.frame[g.tgt(m)]));
    Idx k = sd.loop_pos[ci].at(loop);
    f.f1[m] = target.loop_arrows[iso_maps[ci][k]];
    (void)comp;
  }
  return f;
}

}  // namespace detail

//! Morita equivalence decision for finite groupoids: components must match
//! up to isomorphism of isotropy groups. On success a span witness is
//! synthesised whose legs both pass is_morita_morphism.
inline MoritaDecision morita_equivalent(GroupoidPtr g, GroupoidPtr h, Idx cap = 64) {
  MoritaDecision out;
  auto sg = detail::skeleton_data(*g);
  auto sh = detail::skeleton_data(*h);
  if (sg.comps.size() != sh.comps.size()) {
    out.equivalent = false;
    out.explanation = detail::cat("component count ", sg.comps.size(), " != ", sh.comps.size());
    return out;
  }
  std::size_t k = sg.comps.size();
  std::vector<Idx> match(k, UNDEFINED);
  std::vector<std::vector<Idx>> iso_maps(k);
  std::vector<char> used(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (used[j]) {
        continue;
      }
      auto iso = group_isomorphism(sg.comps[i].isotropy, sh.comps[j].isotropy, cap);
      if (iso) {
        match[i] = static_cast<Idx>(j);
        iso_maps[i] = std::move(*iso);
        used[j] = 1;
        break;
      }
    }
    if (match[i] == UNDEFINED) {
      out.equivalent = false;
      out.explanation =
          detail::cat("no unmatched component of the second groupoid has isotropy isomorphic to "
                      "component ",
                      i, " (isotropy order ", sg.comps[i].isotropy.n, ")");
      return out;
    }
  }
  out.equivalent = true;
  if (g->n_objects() == 0) {
    // both empty: the empty span witnesses the equivalence
    MoritaWitness w;
    w.kind = MoritaWitness::Kind::span;
    auto apex = share(discrete_groupoid(0));
    GroupoidFunctor leg1{apex, g, {}, {}};
    GroupoidFunctor leg2{apex, h, {}, {}};
    w.span = SpanWitness{apex, leg1, leg2};
    out.witness = std::move(w);
    return out;
  }

  // the skeletal equivalence functor and its quasi-inverse
  auto forward = detail::skeletal_functor(g, h, sg, sh, match, iso_maps);
  std::vector<Idx> match_back(k);
  std::vector<std::vector<Idx>> iso_back(k);
  for (std::size_t i = 0; i < k; ++i) {
    match_back[match[i]] = static_cast<Idx>(i);
    std::vector<Idx> inv(iso_maps[i].size());
    for (Idx x = 0; x < iso_maps[i].size(); ++x) {
      inv[iso_maps[i][x]] = x;
    }
    iso_back[match[i]] = std::move(inv);
  }
  auto backward = detail::skeletal_functor(h, g, sh, sg, match_back, iso_back);

  EquivalenceWitness ew;
  ew.forward = forward;
  ew.backward = backward;
  ew.unit.from = compose_functors(forward, backward);
  ew.unit.to = identity_functor(g);
  ew.unit.eta.resize(g->n_objects());
  for (Idx a = 0; a < g->n_objects(); ++a) {
    ew.unit.eta[a] = sg.frame[a];
  }
  ew.counit.from = compose_functors(backward, forward);
  ew.counit.to = identity_functor(h);
  ew.counit.eta.resize(h->n_objects());
  for (Idx b = 0; b < h->n_objects(); ++b) {
    ew.counit.eta[b] = sh.frame[b];
  }

  // span witness: pull back G along the disjoint union of both object sets
  Idx og = g->n_objects(), oh = h->n_objects();
  std::vector<Idx> j(og + oh);
  for (Idx a = 0; a < og; ++a) {
    j[a] = a;
  }
  for (Idx b = 0; b < oh; ++b) {
    j[og + b] = backward.f0[b];
  }
  auto pb = pullback_groupoid(g, j, og + oh);
  GroupoidFunctor to_h;
  to_h.dom = pb.groupoid;
  to_h.cod = h;
  to_h.f0.resize(og + oh);
  std::vector<Idx> w(og + oh);  // H-arrow: forward(j(z)) -> to_h(z)
  for (Idx z = 0; z < og + oh; ++z) {
    if (z < og) {
      to_h.f0[z] = forward.f0[z];
      w[z] = h->ident(forward.f0[z]);
    } else {
      to_h.f0[z] = z - og;
      w[z] = sh.frame[z - og];
    }
  }
  to_h.f1.resize(pb.groupoid->n_morphisms());
  for (Idx m = 0; m < pb.groupoid->n_morphisms(); ++m) {
    auto [pz, x, qz] = pb.triples[m];
    to_h.f1[m] = h->compose(h->compose(h->inverse(w[pz]), forward.f1[x]), w[qz]);
  }

  MoritaWitness witness;
  witness.kind = MoritaWitness::Kind::span;
  witness.equivalence = std::move(ew);
  witness.span = SpanWitness{pb.groupoid, pb.projection, to_h};
  out.witness = std::move(witness);
  return out;
}

//! Checks witness data against its defining conditions.
inline bool verify_morita_witness(MoritaWitness const& w) {
  if (w.kind == MoritaWitness::Kind::equivalence) {
    if (!w.equivalence) {
      return false;
    }
    auto const& e = *w.equivalence;
    return validate_functor(e.forward).ok() && validate_functor(e.backward).ok() &&
           validate_nat_transform(e.unit).ok() && validate_nat_transform(e.counit).ok() &&
           e.unit.from == compose_functors(e.forward, e.backward) &&
           e.counit.from == compose_functors(e.backward, e.forward);
  }
  if (!w.span) {
    return false;
  }
  return validate_functor(w.span->to_first).ok() && validate_functor(w.span->to_second).ok() &&
         is_morita_morphism(w.span->to_first).is_morita &&
         is_morita_morphism(w.span->to_second).is_morita;
}

struct TransitiveReduction {
  GroupoidPtr isotropy_groupoid;  // [G_x => *]
  GroupoidFunctor inclusion;      // into the transitive groupoid
  MoritaWitness witness;          // span proving the equivalence
};

//! A transitive groupoid retracts onto any of its isotropy groups.
inline TransitiveReduction transitive_reduction(GroupoidPtr g, Idx x) {
  if (!is_transitive(*g)) {
    throw PreconditionError("NotTransitive");
  }
  auto const& gg = *g;
  auto loops = gg.hom(x, x);
  Idx k = static_cast<Idx>(loops.size());
  GroupTable iso;
  iso.n = k;
  iso.mul.resize(static_cast<std::size_t>(k) * k);
  std::map<Idx, Idx> pos;
  for (Idx i = 0; i < k; ++i) {
    pos[loops[i]] = i;
  }
  for (Idx i = 0; i < k; ++i) {
    for (Idx j = 0; j < k; ++j) {
      iso.mul[static_cast<std::size_t>(i) * k + j] = pos.at(gg.compose(loops[i], loops[j]));
    }
  }
  TransitiveReduction out;
  out.isotropy_groupoid = share(group_groupoid(iso));
  out.inclusion.dom = out.isotropy_groupoid;
  out.inclusion.cod = g;
  out.inclusion.f0 = {x};
  out.inclusion.f1 = loops;
  auto decision = morita_equivalent(g, out.isotropy_groupoid);
  if (!decision.equivalent || !decision.witness) {
    throw std::logic_error("transitive groupoid failed to reduce to its isotropy group");
  }
  out.witness = std::move(*decision.witness);
  return out;
}

}  // namespace grpd
