#pragma once

#include "grpd/functor.hpp"

namespace grpd {

enum class Side { left, right };

//! An action of a finite groupoid on a finite carrier set, stored as a
//! partial table. For a right action, (p, m) is in the domain iff
//! tgt(m) == anchor(p); for a left action iff src(m) == anchor(p).
struct GroupoidAction {
  GroupoidPtr gpd;
  Side side = Side::right;
  Idx n_carrier = 0;
  std::vector<Idx> anchor;  // carrier -> objects
  std::vector<Idx> act;     // carrier x n_morphisms, UNDEFINED off-domain

  bool in_domain(Idx p, Idx m) const {
    return side == Side::right ? gpd->tgt(m) == anchor[p] : gpd->src(m) == anchor[p];
  }

  Idx apply(Idx p, Idx m) const { return act[static_cast<std::size_t>(p) * gpd->n_morphisms() + m]; }

  Idx& slot(Idx p, Idx m) { return act[static_cast<std::size_t>(p) * gpd->n_morphisms() + m]; }
};

inline Validated<GroupoidAction> validate_action(GroupoidAction const& a) {
  Report rep;
  auto const& g = *a.gpd;
  if (a.anchor.size() != a.n_carrier ||
      a.act.size() != static_cast<std::size_t>(a.n_carrier) * g.n_morphisms()) {
    rep.add("DanglingIndex", "action tables have wrong length");
    return invalid<GroupoidAction>(std::move(rep));
  }
  for (Idx v : a.anchor) {
    if (v >= g.n_objects()) {
      rep.add("DanglingIndex", "anchor value out of range");
      return invalid<GroupoidAction>(std::move(rep));
    }
  }
  for (Idx p = 0; p < a.n_carrier; ++p) {
    for (Idx m = 0; m < g.n_morphisms(); ++m) {
      Idx v = a.apply(p, m);
      if (a.in_domain(p, m)) {
        if (v >= a.n_carrier) {
          rep.add("DanglingIndex", detail::cat("action at (", p, ",", m, ") out of range"));
          return invalid<GroupoidAction>(std::move(rep));
        }
      } else if (v != UNDEFINED) {
        rep.add("DanglingIndex", detail::cat("action defined off-domain at (", p, ",", m, ")"));
        return invalid<GroupoidAction>(std::move(rep));
      }
    }
  }
  for (Idx p = 0; p < a.n_carrier; ++p) {
    if (a.apply(p, g.ident(a.anchor[p])) != p) {
      rep.add("IdentityLawFail", detail::cat("point ", p));
    }
  }
  if (a.side == Side::right) {
    for (Idx p = 0; p < a.n_carrier; ++p) {
      for (Idx m : g.arrows_to(a.anchor[p])) {
        Idx q = a.apply(p, m);
        if (a.anchor[q] != g.src(m)) {
          rep.add("AnchorShiftFail", detail::cat("(", p, ",", m, ")"));
          continue;
        }
        for (Idx w : g.arrows_to(g.src(m))) {
          // (p.m).w must equal p.(m o w) -- w composed before m
          if (a.apply(q, w) != a.apply(p, g.compose(w, m))) {
            rep.add("AssocFail", detail::cat("(", p, ",", m, ",", w, ")"));
          }
        }
      }
    }
  } else {
    for (Idx p = 0; p < a.n_carrier; ++p) {
      for (Idx m : g.arrows_from(a.anchor[p])) {
        Idx q = a.apply(p, m);
        if (a.anchor[q] != g.tgt(m)) {
          rep.add("AnchorShiftFail", detail::cat("(", p, ",", m, ")"));
          continue;
        }
        for (Idx w : g.arrows_from(g.tgt(m))) {
          // w.(m.p) must equal (w o m).p
          if (a.apply(q, w) != a.apply(p, g.compose(m, w))) {
            rep.add("AssocFail", detail::cat("(", p, ",", m, ",", w, ")"));
          }
        }
      }
    }
  }
  if (!rep.ok()) {
    return invalid<GroupoidAction>(std::move(rep));
  }
  return valid(a);
}

//! A right principal groupoid bundle: an invariant surjection onto the base
//! along which the action is free and transitive on fibers, witnessed by the
//! division-map bijection.
struct PrincipalGroupoidBundle {
  GroupoidAction action;  // right
  Idx n_base = 0;
  std::vector<Idx> proj;  // carrier -> base

  Idx carrier_size() const { return action.n_carrier; }
};

inline Validated<PrincipalGroupoidBundle> validate_principal_bundle(GroupoidAction const& action,
                                                                    std::vector<Idx> proj,
                                                                    Idx n_base) {
  Report rep;
  if (action.side != Side::right) {
    rep.add("NotPrincipal", "principal bundles are built on right actions");
    return invalid<PrincipalGroupoidBundle>(std::move(rep));
  }
  auto act_ok = validate_action(action);
  if (!act_ok.ok()) {
    rep = act_ok.report;
    return invalid<PrincipalGroupoidBundle>(std::move(rep));
  }
  auto const& g = *action.gpd;
  if (proj.size() != action.n_carrier) {
    rep.add("DanglingIndex", "projection table has wrong length");
    return invalid<PrincipalGroupoidBundle>(std::move(rep));
  }
  for (Idx v : proj) {
    if (v >= n_base) {
      rep.add("DanglingIndex", "projection value out of range");
      return invalid<PrincipalGroupoidBundle>(std::move(rep));
    }
  }
  std::vector<char> hit(n_base, 0);
  for (Idx p = 0; p < action.n_carrier; ++p) {
    hit[proj[p]] = 1;
  }
  for (Idx m = 0; m < n_base; ++m) {
    if (!hit[m]) {
      rep.add("ProjNotSurjective", detail::cat("base point ", m, " has empty fiber"));
    }
  }
  for (Idx p = 0; p < action.n_carrier; ++p) {
    for (Idx m : g.arrows_to(action.anchor[p])) {
      if (proj[action.apply(p, m)] != proj[p]) {
        rep.add("NotInvariant", detail::cat("(", p, ",", m, ")"));
      }
    }
  }
  // division map (p, m) -> (p.m, p) must biject onto {(q, p) : proj q = proj p}
  std::map<std::pair<Idx, Idx>, std::pair<Idx, Idx>> seen;
  for (Idx p = 0; p < action.n_carrier; ++p) {
    for (Idx m : g.arrows_to(action.anchor[p])) {
      auto key = std::make_pair(action.apply(p, m), p);
      auto [it, fresh] = seen.insert({key, {p, m}});
      if (!fresh) {
        rep.add("DivisionNotInjective",
                detail::cat("(", it->second.first, ",", it->second.second, ") and (", p, ",", m,
                            ") map to the same pair"));
      }
    }
  }
  for (Idx q = 0; q < action.n_carrier; ++q) {
    for (Idx p = 0; p < action.n_carrier; ++p) {
      if (proj[q] == proj[p] && !seen.count({q, p})) {
        rep.add("DivisionNotSurjective", detail::cat("no (p,m) reaches (", q, ",", p, ")"));
      }
    }
  }
  if (!rep.ok()) {
    return invalid<PrincipalGroupoidBundle>(std::move(rep));
  }
  return valid(PrincipalGroupoidBundle{action, n_base, std::move(proj)});
}

//! The unique arrow m with p . m == q, for p, q in the same fiber.
inline Idx difference(PrincipalGroupoidBundle const& b, Idx p, Idx q) {
  auto const& g = *b.action.gpd;
  for (Idx m : g.arrows_to(b.action.anchor[p])) {
    if (b.action.apply(p, m) == q) {
      return m;
    }
  }
  return UNDEFINED;
}

//! The target map of a groupoid, as a right principal bundle over the
//! objects: the groupoid acts on its own arrows by composition.
inline PrincipalGroupoidBundle trivial_bundle(GroupoidPtr g) {
  GroupoidAction a;
  a.gpd = g;
  a.side = Side::right;
  a.n_carrier = g->n_morphisms();
  a.anchor.resize(a.n_carrier);
  a.act.assign(static_cast<std::size_t>(a.n_carrier) * g->n_morphisms(), UNDEFINED);
  std::vector<Idx> proj(a.n_carrier);
  for (Idx p = 0; p < a.n_carrier; ++p) {
    a.anchor[p] = g->src(p);
    proj[p] = g->tgt(p);
    for (Idx m : g->arrows_to(g->src(p))) {
      a.slot(p, m) = g->compose(m, p);
    }
  }
  auto bundle = validate_principal_bundle(a, std::move(proj), g->n_objects());
  return *bundle;
}

//! Pull-back of a principal bundle along f : N -> M. Carrier is the set of
//! pairs (n, p) with f(n) = proj(p), in lexicographic order.
inline PrincipalGroupoidBundle pullback_bundle(PrincipalGroupoidBundle const& b,
                                               std::vector<Idx> const& f, Idx n_new_base) {
  auto const& g = *b.action.gpd;
  std::vector<std::pair<Idx, Idx>> pairs;
  std::map<std::pair<Idx, Idx>, Idx> index;
  for (Idx n = 0; n < n_new_base; ++n) {
    if (f[n] >= b.n_base) {
      throw PreconditionError("pullback_bundle: map value out of range");
    }
    for (Idx p = 0; p < b.carrier_size(); ++p) {
      if (b.proj[p] == f[n]) {
        index[{n, p}] = static_cast<Idx>(pairs.size());
        pairs.emplace_back(n, p);
      }
    }
  }
  GroupoidAction a;
  a.gpd = b.action.gpd;
  a.side = Side::right;
  a.n_carrier = static_cast<Idx>(pairs.size());
  a.anchor.resize(a.n_carrier);
  a.act.assign(static_cast<std::size_t>(a.n_carrier) * g.n_morphisms(), UNDEFINED);
  std::vector<Idx> proj(a.n_carrier);
  for (Idx i = 0; i < a.n_carrier; ++i) {
    auto [n, p] = pairs[i];
    a.anchor[i] = b.action.anchor[p];
    proj[i] = n;
    for (Idx m : g.arrows_to(a.anchor[i])) {
      a.slot(i, m) = index.at({n, b.action.apply(p, m)});
    }
  }
  auto bundle = validate_principal_bundle(a, std::move(proj), n_new_base);
  return *bundle;
}

//! Equivariant bijection over the identity of the base; empty if none.
//! Fiber by fiber: the image of one basepoint determines the map.
inline std::optional<std::vector<Idx>> bundle_isomorphism(PrincipalGroupoidBundle const& b1,
                                                          PrincipalGroupoidBundle const& b2) {
  if (b1.n_base != b2.n_base || b1.carrier_size() != b2.carrier_size() ||
      !(*b1.action.gpd == *b2.action.gpd)) {
    return std::nullopt;
  }
  auto const& g = *b1.action.gpd;
  std::vector<std::vector<Idx>> fiber1(b1.n_base), fiber2(b1.n_base);
  for (Idx p = 0; p < b1.carrier_size(); ++p) {
    fiber1[b1.proj[p]].push_back(p);
  }
  for (Idx p = 0; p < b2.carrier_size(); ++p) {
    fiber2[b2.proj[p]].push_back(p);
  }
  std::vector<Idx> h(b1.carrier_size(), UNDEFINED);
  for (Idx m = 0; m < b1.n_base; ++m) {
    if (fiber1[m].size() != fiber2[m].size()) {
      return std::nullopt;
    }
    if (fiber1[m].empty()) {
      continue;
    }
    Idx p0 = fiber1[m].front();
    bool found = false;
    for (Idx q0 : fiber2[m]) {
      if (b2.action.anchor[q0] != b1.action.anchor[p0]) {
        continue;
      }
      // propagate over the fiber and check equivariance
      std::vector<std::pair<Idx, Idx>> assignment;
      bool ok = true;
      std::vector<char> used(b2.carrier_size(), 0);
      for (Idx p : fiber1[m]) {
        Idx d = difference(b1, p0, p);
        if (d == UNDEFINED) {
          ok = false;
          break;
        }
        Idx q = b2.action.apply(q0, d);
        if (used[q] || b2.action.anchor[q] != b1.action.anchor[p]) {
          ok = false;
          break;
        }
        used[q] = 1;
        assignment.emplace_back(p, q);
      }
      if (!ok) {
        continue;
      }
      // full equivariance check on this fiber
      for (auto [p, q] : assignment) {
        for (Idx w : g.arrows_to(b1.action.anchor[p])) {
          Idx p2 = b1.action.apply(p, w);
          Idx q2 = b2.action.apply(q, w);
          Idx mapped = UNDEFINED;
          for (auto [pp, qq] : assignment) {
            if (pp == p2) {
              mapped = qq;
              break;
            }
          }
          if (mapped != q2) {
            ok = false;
            break;
          }
        }
        if (!ok) {
          break;
        }
      }
      if (ok) {
        for (auto [p, q] : assignment) {
          h[p] = q;
        }
        found = true;
        break;
      }
    }
    if (!found) {
      return std::nullopt;
    }
  }
  return h;
}

//! Gauge groupoid of a principal bundle whose structure groupoid has one
//! object: objects are the base, morphisms are diagonal orbits on P x P.
inline FiniteGroupoid gauge_groupoid(PrincipalGroupoidBundle const& b) {
  auto const& g = *b.action.gpd;
  if (g.n_objects() != 1) {
    throw PreconditionError("NotPrincipal: gauge groupoid needs a one-object structure groupoid");
  }
  Idx np = b.carrier_size();
  Idx n_pairs = np * np;
  // orbits of the diagonal action, canonical representative = smallest index
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
  auto unite = [&](Idx i, Idx j) {
    i = find(i);
    j = find(j);
    if (i != j) {
      parent[std::max(i, j)] = std::min(i, j);
    }
  };
  for (Idx x1 = 0; x1 < np; ++x1) {
    for (Idx x2 = 0; x2 < np; ++x2) {
      for (Idx m = 0; m < g.n_morphisms(); ++m) {
        unite(x1 * np + x2, b.action.apply(x1, m) * np + b.action.apply(x2, m));
      }
    }
  }
  std::vector<Idx> rep_of(n_pairs), orbit_of(n_pairs);
  std::vector<Idx> reps;
  for (Idx i = 0; i < n_pairs; ++i) {
    rep_of[i] = find(i);
  }
  std::map<Idx, Idx> orbit_index;
  for (Idx i = 0; i < n_pairs; ++i) {
    if (rep_of[i] == i) {
      orbit_index[i] = static_cast<Idx>(reps.size());
      reps.push_back(i);
    }
  }
  for (Idx i = 0; i < n_pairs; ++i) {
    orbit_of[i] = orbit_index[rep_of[i]];
  }
  Idx n_mor = static_cast<Idx>(reps.size());
  std::vector<Idx> src(n_mor), tgt(n_mor), inv(n_mor), ident(b.n_base);
  for (Idx o = 0; o < n_mor; ++o) {
    Idx x1 = reps[o] / np, x2 = reps[o] % np;
    src[o] = b.proj[x1];
    tgt[o] = b.proj[x2];
    inv[o] = orbit_of[x2 * np + x1];
  }
  for (Idx m = 0; m < b.n_base; ++m) {
    for (Idx p = 0; p < np; ++p) {
      if (b.proj[p] == m) {
        ident[m] = orbit_of[p * np + p];
        break;
      }
    }
  }
  auto comp = [&, np](Idx f, Idx h) {
    Idx x1 = reps[f] / np, x2 = reps[f] % np;
    Idx x3 = reps[h] / np, x4 = reps[h] % np;
    // align the second representative so that its first leg matches x2
    Idx m = difference(b, x3, x2);
    return orbit_of[x1 * np + b.action.apply(x4, m)];
  };
  return FiniteGroupoid::unchecked(b.n_base, std::move(src), std::move(tgt), std::move(ident),
                                   std::move(inv), comp);
}

}  // namespace grpd
