#pragma once

// Independent reference implementations used only to cross-check the library.
// These deliberately re-derive everything from the raw tables with plain
// loops, sharing no code path with the validators they test.

#include "helpers.hpp"

namespace grpd::oracle {

//! Brute-force axiom scan over raw groupoid tables. Returns true iff every
//! category and inverse axiom instance holds.
inline bool groupoid_axiom_scan(RawGroupoid const& raw) {
  auto const& c = raw.cat;
  Idx n_obj = c.n_objects;
  Idx n_mor = c.n_morphisms();
  if (c.tgt.size() != c.src.size() || c.ident.size() != n_obj || raw.inv.size() != n_mor) {
    return false;
  }
  for (Idx m = 0; m < n_mor; ++m) {
    if (c.src[m] >= n_obj || c.tgt[m] >= n_obj || raw.inv[m] >= n_mor) {
      return false;
    }
  }
  for (Idx a = 0; a < n_obj; ++a) {
    if (c.ident[a] >= n_mor) {
      return false;
    }
  }
  // dense composition table
  std::vector<Idx> comp(static_cast<std::size_t>(n_mor) * n_mor, UNDEFINED);
  for (auto const& e : c.compose) {
    if (e[0] >= n_mor || e[1] >= n_mor || e[2] >= n_mor) {
      return false;
    }
    Idx& slot = comp[static_cast<std::size_t>(e[0]) * n_mor + e[1]];
    if (slot != UNDEFINED && slot != e[2]) {
      return false;
    }
    slot = e[2];
  }
  auto at = [&](Idx f, Idx g) { return comp[static_cast<std::size_t>(f) * n_mor + g]; };
  for (Idx f = 0; f < n_mor; ++f) {
    for (Idx g = 0; g < n_mor; ++g) {
      bool should = c.tgt[f] == c.src[g];
      if (should != (at(f, g) != UNDEFINED)) {
        return false;
      }
      if (should) {
        Idx h = at(f, g);
        if (c.src[h] != c.src[f] || c.tgt[h] != c.tgt[g]) {
          return false;
        }
      }
    }
  }
  for (Idx a = 0; a < n_obj; ++a) {
    Idx e = c.ident[a];
    if (c.src[e] != a || c.tgt[e] != a) {
      return false;
    }
  }
  for (Idx f = 0; f < n_mor; ++f) {
    if (at(c.ident[c.src[f]], f) != f || at(f, c.ident[c.tgt[f]]) != f) {
      return false;
    }
  }
  for (Idx f = 0; f < n_mor; ++f) {
    for (Idx g = 0; g < n_mor; ++g) {
      if (c.tgt[f] != c.src[g]) {
        continue;
      }
      for (Idx h = 0; h < n_mor; ++h) {
        if (c.tgt[g] != c.src[h]) {
          continue;
        }
        if (at(at(f, g), h) != at(f, at(g, h))) {
          return false;
        }
      }
    }
  }
  for (Idx m = 0; m < n_mor; ++m) {
    Idx w = raw.inv[m];
    if (c.src[w] != c.tgt[m] || c.tgt[w] != c.src[m]) {
      return false;
    }
    if (at(m, w) != c.ident[c.src[m]] || at(w, m) != c.ident[c.tgt[m]]) {
      return false;
    }
  }
  return true;
}

//! Definition-level equivalence search: a quasi-inverse with natural
//! isomorphisms in both directions. Exhaustive; desk scale only.
inline bool equivalence_oracle(GroupoidFunctor const& f) {
  auto id_dom = identity_functor(f.dom);
  auto id_cod = identity_functor(f.cod);
  for (auto const& g : test::all_functors(f.cod, f.dom)) {
    // eta : g . f => id_dom (f first), theta : f . g => id_cod
    auto gf = compose_functors(f, g);
    auto fg = compose_functors(g, f);
    if (test::all_transforms(gf, id_dom).empty()) {
      continue;
    }
    if (!test::all_transforms(fg, id_cod).empty()) {
      return true;
    }
  }
  return false;
}

//! Exhaustive search for an equivalence functor between two groupoids,
//! checked object by object and hom-set by hom-set.
inline bool equivalence_functor_exists(GroupoidPtr a, GroupoidPtr b) {
  if (a->n_objects() == 0 || b->n_objects() == 0) {
    return a->n_objects() == 0 && b->n_objects() == 0;
  }
  for (auto const& f : test::all_functors(a, b)) {
    auto v = is_equivalence(f);
    if (v.equivalence) {
      return true;
    }
  }
  return false;
}

}  // namespace grpd::oracle
