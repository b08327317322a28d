#pragma once

#include "grpd/core.hpp"

namespace grpd {

//! A functor between finite groupoids, stored as its object and morphism maps.
struct GroupoidFunctor {
  GroupoidPtr dom;
  GroupoidPtr cod;
  std::vector<Idx> f0;  // per object of dom
  std::vector<Idx> f1;  // per morphism of dom

  Idx on_object(Idx a) const { return f0[a]; }
  Idx on_morphism(Idx m) const { return f1[m]; }

  bool operator==(GroupoidFunctor const& other) const {
    return *dom == *other.dom && *cod == *other.cod && f0 == other.f0 && f1 == other.f1;
  }
};

inline Validated<GroupoidFunctor> validate_functor(GroupoidFunctor const& f) {
  Report rep;
  auto const& c = *f.dom;
  auto const& d = *f.cod;
  if (f.f0.size() != c.n_objects() || f.f1.size() != c.n_morphisms()) {
    rep.add("DanglingIndex", "functor map tables have wrong length");
    return invalid<GroupoidFunctor>(std::move(rep));
  }
  for (Idx v : f.f0) {
    if (v >= d.n_objects()) {
      rep.add("DanglingIndex", "object image out of range");
      return invalid<GroupoidFunctor>(std::move(rep));
    }
  }
  for (Idx v : f.f1) {
    if (v >= d.n_morphisms()) {
      rep.add("DanglingIndex", "morphism image out of range");
      return invalid<GroupoidFunctor>(std::move(rep));
    }
  }
  for (Idx m = 0; m < c.n_morphisms(); ++m) {
    if (d.src(f.f1[m]) != f.f0[c.src(m)] || d.tgt(f.f1[m]) != f.f0[c.tgt(m)]) {
      rep.add("NotAFunctor", detail::cat("morphism ", m, ": image has wrong endpoints"));
    }
  }
  for (Idx a = 0; a < c.n_objects(); ++a) {
    if (f.f1[c.ident(a)] != d.ident(f.f0[a])) {
      rep.add("NotAFunctor", detail::cat("object ", a, ": identity not preserved"));
    }
  }
  for (Idx m = 0; m < c.n_morphisms(); ++m) {
    for (Idx w : c.arrows_from(c.tgt(m))) {
      if (f.f1[c.compose(m, w)] != d.compose(f.f1[m], f.f1[w])) {
        rep.add("NotAFunctor", detail::cat("composition not preserved at (", m, ",", w, ")"));
      }
    }
  }
  if (!rep.ok()) {
    return invalid<GroupoidFunctor>(std::move(rep));
  }
  return valid(f);
}

inline GroupoidFunctor identity_functor(GroupoidPtr g) {
  GroupoidFunctor f;
  f.dom = g;
  f.cod = g;
  f.f0.resize(g->n_objects());
  f.f1.resize(g->n_morphisms());
  for (Idx a = 0; a < g->n_objects(); ++a) {
    f.f0[a] = a;
  }
  for (Idx m = 0; m < g->n_morphisms(); ++m) {
    f.f1[m] = m;
  }
  return f;
}

inline GroupoidFunctor compose_functors(GroupoidFunctor const& f, GroupoidFunctor const& g) {
  if (!(*f.cod == *g.dom)) {
    throw PreconditionError("DomainMismatch: codomain of first != domain of second");
  }
  GroupoidFunctor out;
  out.dom = f.dom;
  out.cod = g.cod;
  out.f0.resize(f.f0.size());
  out.f1.resize(f.f1.size());
  for (std::size_t a = 0; a < f.f0.size(); ++a) {
    out.f0[a] = g.f0[f.f0[a]];
  }
  for (std::size_t m = 0; m < f.f1.size(); ++m) {
    out.f1[m] = g.f1[f.f1[m]];
  }
  return out;
}

//! A natural transformation between parallel functors, stored as its
//! component map: one codomain morphism per domain object.
struct NatTransform {
  GroupoidFunctor from;  // F
  GroupoidFunctor to;    // G
  std::vector<Idx> eta;  // per object of dom: eta(a) : F(a) -> G(a)

  bool operator==(NatTransform const& other) const = default;
};

inline Validated<NatTransform> validate_nat_transform(NatTransform const& n) {
  Report rep;
  auto const& c = *n.from.dom;
  auto const& d = *n.from.cod;
  if (!(*n.from.dom == *n.to.dom) || !(*n.from.cod == *n.to.cod)) {
    rep.add("BoundaryMismatch", "the two functors are not parallel");
    return invalid<NatTransform>(std::move(rep));
  }
  if (n.eta.size() != c.n_objects()) {
    rep.add("DanglingIndex", "component table has wrong length");
    return invalid<NatTransform>(std::move(rep));
  }
  for (Idx a = 0; a < c.n_objects(); ++a) {
    if (n.eta[a] >= d.n_morphisms()) {
      rep.add("DanglingIndex", detail::cat("component at object ", a, " out of range"));
      return invalid<NatTransform>(std::move(rep));
    }
    if (d.src(n.eta[a]) != n.from.f0[a] || d.tgt(n.eta[a]) != n.to.f0[a]) {
      rep.add("BoundaryMismatch",
              detail::cat("component at object ", a, " is not F(a) -> G(a)"));
    }
  }
  if (!rep.ok()) {
    return invalid<NatTransform>(std::move(rep));
  }
  for (Idx m = 0; m < c.n_morphisms(); ++m) {
    // eta(tgt(m)) . F(m) = G(m) . eta(src(m))
    Idx lhs = d.compose(n.from.f1[m], n.eta[c.tgt(m)]);
    Idx rhs = d.compose(n.eta[c.src(m)], n.to.f1[m]);
    if (lhs != rhs) {
      rep.add("NaturalityViolation", detail::cat("square at morphism ", m, " does not commute"));
    }
  }
  if (!rep.ok()) {
    return invalid<NatTransform>(std::move(rep));
  }
  return valid(n);
}

inline NatTransform identity_transform(GroupoidFunctor const& f) {
  NatTransform n;
  n.from = f;
  n.to = f;
  n.eta.resize(f.f0.size());
  for (std::size_t a = 0; a < f.f0.size(); ++a) {
    n.eta[a] = f.cod->ident(f.f0[a]);
  }
  return n;
}

//! Vertical composition: (beta . alpha)(a) = beta(a) . alpha(a).
inline NatTransform vcomp(NatTransform const& alpha, NatTransform const& beta) {
  if (!(alpha.to == beta.from)) {
    throw PreconditionError("BoundaryMismatch: vertical composition needs a shared middle functor");
  }
  NatTransform out;
  out.from = alpha.from;
  out.to = beta.to;
  out.eta.resize(alpha.eta.size());
  for (std::size_t a = 0; a < alpha.eta.size(); ++a) {
    out.eta[a] = alpha.from.cod->compose(alpha.eta[a], beta.eta[a]);
  }
  return out;
}

//! Horizontal composition of alpha : F => G (between C and D) with
//! beta : F' => G' (between D and E), giving F'F => G'G. Both defining
//! formulas are computed; they must agree on validated inputs.
inline NatTransform hcomp(NatTransform const& alpha, NatTransform const& beta) {
  if (!(*alpha.from.cod == *beta.from.dom)) {
    throw PreconditionError("BoundaryMismatch: middle groupoid does not match");
  }
  auto const& e = *beta.from.cod;
  NatTransform out;
  out.from = compose_functors(alpha.from, beta.from);
  out.to = compose_functors(alpha.to, beta.to);
  out.eta.resize(alpha.eta.size());
  for (std::size_t a = 0; a < alpha.eta.size(); ++a) {
    // via beta at F0(a), then G' of alpha(a)
    Idx one = e.compose(beta.eta[alpha.from.f0[a]], beta.to.f1[alpha.eta[a]]);
    // via F' of alpha(a), then beta at G0(a)
    Idx two = e.compose(beta.from.f1[alpha.eta[a]], beta.eta[alpha.to.f0[a]]);
    if (one != two) {
      throw PreconditionError(
          detail::cat("FormulaDisagreement: the two horizontal-composition formulas differ at "
                      "object ",
                      a, " (invalid input transformation)"));
    }
    out.eta[a] = one;
  }
  return out;
}

//! Whether each object of the codomain is isomorphic to an image object,
//! and whether every hom-set map C(a,b) -> D(F a, F b) is injective and
//! surjective. In a groupoid, two objects are isomorphic iff they lie in
//! the same connected component.
struct EquivalenceVerdict {
  bool full = false;
  bool faithful = false;
  bool ess_surjective = false;
  bool equivalence = false;
};

inline EquivalenceVerdict is_equivalence(GroupoidFunctor const& f) {
  auto const& c = *f.dom;
  auto const& d = *f.cod;
  EquivalenceVerdict v;
  v.full = true;
  v.faithful = true;

  for (Idx a = 0; a < c.n_objects() && (v.full || v.faithful); ++a) {
    for (Idx b = 0; b < c.n_objects(); ++b) {
      auto dom_hom = c.hom(a, b);
      auto cod_hom = d.hom(f.f0[a], f.f0[b]);
      std::vector<Idx> image;
      for (Idx m : dom_hom) {
        image.push_back(f.f1[m]);
      }
      std::sort(image.begin(), image.end());
      if (std::adjacent_find(image.begin(), image.end()) != image.end()) {
        v.faithful = false;
      }
      image.erase(std::unique(image.begin(), image.end()), image.end());
      if (image.size() != cod_hom.size()) {
        v.full = false;
      }
    }
  }

  // essential surjectivity: image meets every component of the codomain
  std::vector<char> hit(d.n_objects(), 0);
  for (Idx a = 0; a < c.n_objects(); ++a) {
    hit[f.f0[a]] = 1;
  }
  std::vector<char> reach = hit;
  bool grew = true;
  while (grew) {
    grew = false;
    for (Idx m = 0; m < d.n_morphisms(); ++m) {
      if (reach[d.src(m)] && !reach[d.tgt(m)]) {
        reach[d.tgt(m)] = 1;
        grew = true;
      }
      if (reach[d.tgt(m)] && !reach[d.src(m)]) {
        reach[d.src(m)] = 1;
        grew = true;
      }
    }
  }
  v.ess_surjective = std::all_of(reach.begin(), reach.end(), [](char x) { return x != 0; });
  v.equivalence = v.full && v.faithful && v.ess_surjective;
  return v;
}

}  // namespace grpd
