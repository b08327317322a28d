#pragma once

#include "grpd/bibundle.hpp"

namespace grpd {

//! A groupoid extension: identity on a shared object set, surjective on
//! arrows.
struct GroupoidExtension {
  GroupoidPtr total;           // G
  GroupoidPtr base;            // H, same object set
  std::vector<Idx> arrow_map;  // G1 -> H1

  GroupoidFunctor functor() const {
    GroupoidFunctor f;
    f.dom = total;
    f.cod = base;
    f.f0.resize(total->n_objects());
    for (Idx a = 0; a < total->n_objects(); ++a) {
      f.f0[a] = a;
    }
    f.f1 = arrow_map;
    return f;
  }
};

inline Validated<GroupoidExtension> validate_extension(GroupoidPtr total, GroupoidPtr base,
                                                       std::vector<Idx> arrow_map) {
  Report rep;
  if (total->n_objects() != base->n_objects()) {
    rep.add("ObjectSetMismatch", detail::cat(total->n_objects(), " objects vs ",
                                             base->n_objects()));
    return invalid<GroupoidExtension>(std::move(rep));
  }
  GroupoidExtension ext{total, base, std::move(arrow_map)};
  auto f = validate_functor(ext.functor());
  if (!f.ok()) {
    rep.add("NotAFunctor", f.report.to_string());
    return invalid<GroupoidExtension>(std::move(rep));
  }
  std::vector<char> hit(base->n_morphisms(), 0);
  for (Idx v : ext.arrow_map) {
    hit[v] = 1;
  }
  for (Idx h = 0; h < base->n_morphisms(); ++h) {
    if (!hit[h]) {
      rep.add("NotSurjective", detail::cat("base arrow ", h, " is not hit"));
    }
  }
  if (!rep.ok()) {
    return invalid<GroupoidExtension>(std::move(rep));
  }
  return valid(std::move(ext));
}

//! The 2-fiber product G x_H G of an extension with itself. Objects are the
//! base arrows; a morphism is a pair of total arrows (g1, g2) together with
//! its source object h, stored as the triple (g1, h, g2) and composed
//! componentwise. The presentation in which the middle entry connects the
//! two legs is available as a derived view.
struct FiberProductGroupoid {
  GroupoidPtr groupoid;  // objects indexed by base arrows
  GroupoidPtr base;      // H
  GroupoidPtr total;     // G
  std::vector<Idx> arrow_map;
  std::vector<std::array<Idx, 3>> morphs;  // (g1, h, g2), h = source object
  // morphisms are enumerated g1-major, then h over arrows_from(src g1),
  // then g2 over arrows_from(tgt h); index arithmetic replaces a map
  std::vector<std::size_t> g1_offset;                // per g1
  std::vector<std::vector<std::size_t>> h_offset;    // per g1, per h position

  Idx index_of(Idx g1, Idx h, Idx g2) const {
    return static_cast<Idx>(g1_offset[g1] + h_offset[g1][base->pos_in_from(h)] +
                            total->pos_in_from(g2));
  }

  //! Target object of a stored morphism: F(g2) . h . F(g1)^-1.
  Idx target_object(Idx m) const {
    auto [g1, h, g2] = morphs[m];
    auto const& b = *base;
    return b.compose(b.compose(b.inverse(arrow_map[g1]), h), arrow_map[g2]);
  }

  //! The connector presentation (g1, c, g2) with src = c . F(g1) and
  //! tgt = F(g2) . c; the connector is c = h . F(g1)^-1.
  std::array<Idx, 3> connector_view(Idx m) const {
    auto [g1, h, g2] = morphs[m];
    auto const& b = *base;
    return {g1, b.compose(b.inverse(arrow_map[g1]), h), g2};
  }
};

inline FiberProductGroupoid fiber_product_groupoid(GroupoidExtension const& ext) {
  auto const& g = *ext.total;
  auto const& b = *ext.base;
  FiberProductGroupoid out;
  out.base = ext.base;
  out.total = ext.total;
  out.arrow_map = ext.arrow_map;
  out.g1_offset.resize(g.n_morphisms());
  out.h_offset.resize(g.n_morphisms());
  for (Idx g1 = 0; g1 < g.n_morphisms(); ++g1) {
    out.g1_offset[g1] = out.morphs.size();
    auto const& hs = b.arrows_from(g.src(g1));
    out.h_offset[g1].resize(hs.size());
    for (std::size_t ph = 0; ph < hs.size(); ++ph) {
      Idx h = hs[ph];
      out.h_offset[g1][ph] = out.morphs.size() - out.g1_offset[g1];
      for (Idx g2 : g.arrows_from(b.tgt(h))) {
        out.morphs.push_back({g1, h, g2});
      }
    }
  }
  Idx n_obj = b.n_morphisms();
  Idx n_mor = static_cast<Idx>(out.morphs.size());
  std::vector<Idx> src(n_mor), tgt(n_mor), inv(n_mor), ident(n_obj);
  for (Idx m = 0; m < n_mor; ++m) {
    src[m] = out.morphs[m][1];
    tgt[m] = out.target_object(m);
  }
  for (Idx m = 0; m < n_mor; ++m) {
    auto [g1, h, g2] = out.morphs[m];
    inv[m] = out.index_of(g.inverse(g1), tgt[m], g.inverse(g2));
  }
  for (Idx h = 0; h < n_obj; ++h) {
    ident[h] = out.index_of(g.ident(b.src(h)), h, g.ident(b.tgt(h)));
  }
  auto comp = [&](Idx f, Idx w) {
    auto [g1, h, g2] = out.morphs[f];
    auto [k1, h2, k2] = out.morphs[w];
    (void)h2;
    return out.index_of(g.compose(g1, k1), h, g.compose(g2, k2));
  };
  out.groupoid = share(FiniteGroupoid::unchecked(n_obj, std::move(src), std::move(tgt),
                                                 std::move(ident), std::move(inv), comp));
  return out;
}

//! The diagonal functor G -> G x_H G, g -> (g, g) over the identity
//! connector.
inline GroupoidFunctor diagonal_functor(GroupoidExtension const& ext,
                                        FiberProductGroupoid const& fp) {
  GroupoidFunctor d;
  d.dom = ext.total;
  d.cod = fp.groupoid;
  d.f0.resize(ext.total->n_objects());
  for (Idx a = 0; a < ext.total->n_objects(); ++a) {
    d.f0[a] = ext.base->ident(a);
  }
  d.f1.resize(ext.total->n_morphisms());
  for (Idx m = 0; m < ext.total->n_morphisms(); ++m) {
    d.f1[m] = fp.index_of(m, ext.base->ident(ext.total->src(m)), m);
  }
  return d;
}

struct GerbeVerdict {
  bool objects_lift = false;
  bool arrows_lift = false;
  bool gerbe = false;
  std::string object_witness;  // an unreachable base object, when any
  std::string arrow_witness;   // an unliftable arrow, when any
};

//! The two gerbe conditions at point covers: every base object lifts up to
//! isomorphism, and every arrow between image objects lifts on the nose.
inline GerbeVerdict check_gerbe_conditions(GroupoidFunctor const& f) {
  auto const& c = *f.dom;
  auto const& d = *f.cod;
  GerbeVerdict out;

  // objects lift up to isomorphism: the image meets every component
  std::vector<char> reach(d.n_objects(), 0);
  for (Idx a = 0; a < c.n_objects(); ++a) {
    reach[f.f0[a]] = 1;
  }
  bool grew = true;
  while (grew) {
    grew = false;
    for (Idx m = 0; m < d.n_morphisms(); ++m) {
      if (reach[d.src(m)] != reach[d.tgt(m)]) {
        reach[d.src(m)] = reach[d.tgt(m)] = 1;
        grew = true;
      }
    }
  }
  out.objects_lift = true;
  for (Idx b = 0; b < d.n_objects(); ++b) {
    if (!reach[b]) {
      out.objects_lift = false;
      out.object_witness = detail::cat("object ", b, " is isomorphic to no image object");
      break;
    }
  }

  // arrows lift: F is full
  out.arrows_lift = true;
  for (Idx a = 0; a < c.n_objects() && out.arrows_lift; ++a) {
    for (Idx b = 0; b < c.n_objects() && out.arrows_lift; ++b) {
      std::set<Idx> image;
      for (Idx m : c.hom(a, b)) {
        image.insert(f.f1[m]);
      }
      for (Idx p : d.hom(f.f0[a], f.f0[b])) {
        if (!image.count(p)) {
          out.arrows_lift = false;
          out.arrow_witness =
              detail::cat("arrow ", p, ": F(", a, ") -> F(", b, ") has no lift ", a, " -> ", b);
          break;
        }
      }
    }
  }
  out.gerbe = out.objects_lift && out.arrows_lift;
  return out;
}

//! Builds the extension induced by a functor with surjective object map:
//! the target is the pull-back groupoid along the object map, the arrow
//! map is gamma -> (src, F(gamma), tgt). Fails with the unhit triple when
//! the functor is not full.
inline Validated<GroupoidExtension> induced_extension(GroupoidFunctor const& f) {
  Report rep;
  std::vector<char> hit(f.cod->n_objects(), 0);
  for (Idx v : f.f0) {
    hit[v] = 1;
  }
  for (Idx b = 0; b < f.cod->n_objects(); ++b) {
    if (!hit[b]) {
      rep.add("NotSurjectiveOnObjects", detail::cat("object ", b, " not in the image"));
      return invalid<GroupoidExtension>(std::move(rep));
    }
  }
  auto const& c = *f.dom;
  auto pb = pullback_groupoid(f.cod, f.f0, c.n_objects());
  std::vector<Idx> arrow_map(c.n_morphisms());
  std::vector<char> reached(pb.groupoid->n_morphisms(), 0);
  for (Idx m = 0; m < c.n_morphisms(); ++m) {
    arrow_map[m] = pb.triple_of.at({c.src(m), f.f1[m], c.tgt(m)});
    reached[arrow_map[m]] = 1;
  }
  for (Idx t = 0; t < pb.groupoid->n_morphisms(); ++t) {
    if (!reached[t]) {
      auto [p, x, q] = pb.triples[t];
      rep.add("NotFull", detail::cat("triple (", p, ",", x, ",", q, ") has no preimage"));
    }
  }
  if (!rep.ok()) {
    return invalid<GroupoidExtension>(std::move(rep));
  }
  return validate_extension(f.dom, pb.groupoid, std::move(arrow_map));
}

//! A morphism of extensions: two functors over one shared object map.
struct ExtensionMorphism {
  GroupoidFunctor on_total;
  GroupoidFunctor on_base;
};

struct ExtensionMoritaWitness {
  GroupoidExtension apex;
  ExtensionMorphism to_first;
  ExtensionMorphism to_second;
};

//! Pull-back of an extension along a surjection of object sets; the two
//! projection functors form a Morita morphism of extensions back to the
//! input.
struct PulledBackExtension {
  GroupoidExtension extension;
  ExtensionMorphism projections;  // to the input extension
};

inline PulledBackExtension pullback_extension(GroupoidExtension const& ext,
                                              std::vector<Idx> const& f, Idx n_new_objects) {
  auto pb_total = pullback_groupoid(ext.total, f, n_new_objects);
  auto pb_base = pullback_groupoid(ext.base, f, n_new_objects);
  std::vector<Idx> arrow_map(pb_total.groupoid->n_morphisms());
  for (Idx m = 0; m < pb_total.groupoid->n_morphisms(); ++m) {
    auto [p, x, q] = pb_total.triples[m];
    arrow_map[m] = pb_base.triple_of.at({p, ext.arrow_map[x], q});
  }
  auto pulled = validate_extension(pb_total.groupoid, pb_base.groupoid, std::move(arrow_map));
  return PulledBackExtension{*pulled, {pb_total.projection, pb_base.projection}};
}

struct ExtensionMoritaVerdict {
  bool equivalent = false;
  std::string failure;
};

//! Both witness legs must be Morita morphisms of extensions: the component
//! functors pass is_morita_morphism and the squares commute arrow by arrow.
inline ExtensionMoritaVerdict verify_extension_morita(GroupoidExtension const& ext1,
                                                      GroupoidExtension const& ext2,
                                                      ExtensionMoritaWitness const& w) {
  auto check_leg = [](GroupoidExtension const& apex, ExtensionMorphism const& leg,
                      GroupoidExtension const& target, std::string& failure) {
    if (leg.on_total.f0 != leg.on_base.f0) {
      failure = "leg components disagree on objects";
      return false;
    }
    if (!validate_functor(leg.on_total).ok() || !validate_functor(leg.on_base).ok()) {
      failure = "leg component is not a functor";
      return false;
    }
    auto mt = is_morita_morphism(leg.on_total);
    if (!mt.is_morita) {
      failure = detail::cat("total leg: ", mt.witness);
      return false;
    }
    auto mb = is_morita_morphism(leg.on_base);
    if (!mb.is_morita) {
      failure = detail::cat("base leg: ", mb.witness);
      return false;
    }
    for (Idx m = 0; m < apex.total->n_morphisms(); ++m) {
      if (leg.on_base.f1[apex.arrow_map[m]] != target.arrow_map[leg.on_total.f1[m]]) {
        failure = detail::cat("square fails at apex arrow ", m);
        return false;
      }
    }
    return true;
  };
  ExtensionMoritaVerdict out;
  if (!check_leg(w.apex, w.to_first, ext1, out.failure)) {
    return out;
  }
  if (!check_leg(w.apex, w.to_second, ext2, out.failure)) {
    return out;
  }
  out.equivalent = true;
  return out;
}

//! Identity-shaped witness: the canonical isomorphism between an extension
//! and the one induced by its own functor.
inline ExtensionMoritaWitness induced_roundtrip_witness(GroupoidExtension const& ext,
                                                        GroupoidExtension const& induced) {
  ExtensionMoritaWitness w;
  w.apex = ext;
  w.to_first.on_total = identity_functor(ext.total);
  w.to_first.on_base = identity_functor(ext.base);
  // base leg of the second side: H -> pullback of H along the identity
  GroupoidFunctor canon;
  canon.dom = ext.base;
  canon.cod = induced.base;
  canon.f0.resize(ext.base->n_objects());
  for (Idx a = 0; a < ext.base->n_objects(); ++a) {
    canon.f0[a] = a;
  }
  // the arrow map of `induced` sends g to the triple (src g, F g, tgt g);
  // the canonical base iso therefore sends F g to induced.arrow_map[g],
  // well-defined because the extension functor is surjective on arrows
  canon.f1.assign(ext.base->n_morphisms(), UNDEFINED);
  for (Idx g = 0; g < ext.total->n_morphisms(); ++g) {
    canon.f1[ext.arrow_map[g]] = induced.arrow_map[g];
  }
  w.to_second.on_total = identity_functor(ext.total);
  w.to_second.on_base = canon;
  return w;
}

}  // namespace grpd
