#pragma once

#include <random>

#include "grpd/action.hpp"
#include "grpd/core.hpp"
#include "grpd/functor.hpp"

namespace grpd::test {

//! Z2 acting on {0,1} by swapping.
inline GroupAction swap_action() {
  GroupAction a;
  a.group = cyclic_group(2);
  a.n_points = 2;
  a.act = {0, 1, 1, 0};
  return a;
}

//! Z2 acting trivially on n points.
inline GroupAction trivial_z2_action(Idx n) {
  GroupAction a;
  a.group = cyclic_group(2);
  a.n_points = n;
  a.act.resize(2 * static_cast<std::size_t>(n));
  for (Idx m = 0; m < n; ++m) {
    a.act[m * 2] = m;
    a.act[m * 2 + 1] = m;
  }
  return a;
}

//! The quotient functor between cyclic group groupoids, k | n.
inline GroupoidFunctor cyclic_quotient(GroupoidPtr zn, GroupoidPtr zk, Idx n, Idx k) {
  GroupoidFunctor f;
  f.dom = zn;
  f.cod = zk;
  f.f0 = {0};
  f.f1.resize(n);
  for (Idx i = 0; i < n; ++i) {
    f.f1[i] = i % k;
  }
  return f;
}

namespace detail {

//! Assign f1[m] = im and propagate composition and inverse consequences.
//! Returns the arrows newly assigned, or nullopt on a conflict (in which
//! case the assignments already made are rolled back by the caller via the
//! returned journal -- on conflict the journal holds everything set so far).
inline bool propagate_assignment(FiniteGroupoid const& c, FiniteGroupoid const& d,
                                 std::vector<Idx>& f1, Idx m, Idx im,
                                 std::vector<Idx>& journal) {
  auto set = [&](Idx x, Idx v, std::vector<Idx>& queue) {
    if (f1[x] != UNDEFINED) {
      return f1[x] == v;
    }
    f1[x] = v;
    journal.push_back(x);
    queue.push_back(x);
    return true;
  };
  std::vector<Idx> queue;
  if (!set(m, im, queue)) {
    return false;
  }
  while (!queue.empty()) {
    Idx x = queue.back();
    queue.pop_back();
    if (!set(c.inverse(x), d.inverse(f1[x]), queue)) {
      return false;
    }
    for (Idx w = 0; w < c.n_morphisms(); ++w) {
      if (f1[w] == UNDEFINED) {
        continue;
      }
      if (c.composable(x, w)) {
        if (!d.composable(f1[x], f1[w]) ||
            !set(c.compose(x, w), d.compose(f1[x], f1[w]), queue)) {
          return false;
        }
      }
      if (w != x && c.composable(w, x)) {
        if (!d.composable(f1[w], f1[x]) ||
            !set(c.compose(w, x), d.compose(f1[w], f1[x]), queue)) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace detail

//! All functors between two groupoids. Backtracks over the images of a
//! shrinking set of free arrows; everything composite is filled in by
//! closure, so the branching factor is the number of generators.
inline std::vector<GroupoidFunctor> all_functors(GroupoidPtr dom, GroupoidPtr cod) {
  auto const& c = *dom;
  auto const& d = *cod;
  std::vector<GroupoidFunctor> out;
  if (c.n_objects() == 0) {
    GroupoidFunctor f;
    f.dom = dom;
    f.cod = cod;
    out.push_back(f);
    return out;
  }
  if (d.n_objects() == 0) {
    return out;
  }
  std::vector<Idx> f0(c.n_objects(), UNDEFINED);
  std::vector<Idx> f1(c.n_morphisms(), UNDEFINED);

  auto arrows = [&](auto&& self) -> void {
    Idx m = UNDEFINED;
    for (Idx x = 0; x < c.n_morphisms(); ++x) {
      if (f1[x] == UNDEFINED) {
        m = x;
        break;
      }
    }
    if (m == UNDEFINED) {
      GroupoidFunctor f;
      f.dom = dom;
      f.cod = cod;
      f.f0 = f0;
      f.f1 = f1;
      if (validate_functor(f).ok()) {
        out.push_back(std::move(f));
      }
      return;
    }
    for (Idx im : d.hom(f0[c.src(m)], f0[c.tgt(m)])) {
      std::vector<Idx> journal;
      if (detail::propagate_assignment(c, d, f1, m, im, journal)) {
        self(self);
      }
      for (Idx x : journal) {
        f1[x] = UNDEFINED;
      }
    }
  };

  auto objects = [&](auto&& self, Idx a) -> void {
    if (a == c.n_objects()) {
      // identities are forced; seed them, then branch on the rest
      std::vector<Idx> journal;
      bool ok = true;
      for (Idx x = 0; x < c.n_objects() && ok; ++x) {
        ok = detail::propagate_assignment(c, d, f1, c.ident(x), d.ident(f0[x]), journal);
      }
      if (ok) {
        arrows(arrows);
      }
      for (Idx x : journal) {
        f1[x] = UNDEFINED;
      }
      return;
    }
    for (Idx im = 0; im < d.n_objects(); ++im) {
      f0[a] = im;
      self(self, a + 1);
    }
    f0[a] = UNDEFINED;
  };
  objects(objects, 0);
  return out;
}

//! All natural transformations between two parallel functors.
inline std::vector<NatTransform> all_transforms(GroupoidFunctor const& f,
                                                GroupoidFunctor const& g) {
  std::vector<NatTransform> out;
  auto const& c = *f.dom;
  std::vector<Idx> eta(c.n_objects(), UNDEFINED);
  auto rec = [&](auto&& self, Idx a) -> void {
    if (a == c.n_objects()) {
      NatTransform n{f, g, eta};
      if (validate_nat_transform(n).ok()) {
        out.push_back(std::move(n));
      }
      return;
    }
    for (Idx m : f.cod->hom(f.f0[a], g.f0[a])) {
      eta[a] = m;
      self(self, a + 1);
    }
  };
  rec(rec, 0);
  return out;
}

//! All vertically composable 2-cell pairs between two groupoids.
inline std::vector<std::pair<NatTransform, NatTransform>> vertical_pairs(GroupoidPtr dom,
                                                                         GroupoidPtr cod) {
  std::vector<NatTransform> cells;
  auto functors = all_functors(dom, cod);
  for (auto const& f : functors) {
    for (auto const& g : functors) {
      for (auto& n : all_transforms(f, g)) {
        cells.push_back(std::move(n));
      }
    }
  }
  std::vector<std::pair<NatTransform, NatTransform>> out;
  for (auto const& a : cells) {
    for (auto const& b : cells) {
      if (a.to == b.from) {
        out.emplace_back(a, b);
      }
    }
  }
  return out;
}

//! Random natural transformation out of F: choose components freely, then
//! conjugate F to make the unique functor G for which they are natural.
inline std::optional<NatTransform> random_transform_from(GroupoidFunctor const& f,
                                                         std::mt19937_64& rng) {
  auto const& c = *f.dom;
  auto const& d = *f.cod;
  NatTransform n;
  n.from = f;
  n.to = f;
  n.eta.resize(c.n_objects());
  for (Idx a = 0; a < c.n_objects(); ++a) {
    auto out = d.arrows_from(f.f0[a]);
    if (out.empty()) {
      return std::nullopt;
    }
    n.eta[a] = out[rng() % out.size()];
    n.to.f0[a] = d.tgt(n.eta[a]);
  }
  for (Idx m = 0; m < c.n_morphisms(); ++m) {
    // G(m) = eta(tgt) . F(m) . eta(src)^-1
    Idx w = d.compose(d.inverse(n.eta[c.src(m)]), f.f1[m]);
    n.to.f1[m] = d.compose(w, n.eta[c.tgt(m)]);
  }
  return n;
}

}  // namespace grpd::test
