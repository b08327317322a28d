#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "grpd/base.hpp"

namespace grpd {

//! A finite group as a multiplication table. Element 0..n-1, mul row-major.
struct GroupTable {
  Idx n = 0;
  std::vector<Idx> mul;  // n*n, mul[a*n+b] = a*b

  Idx product(Idx a, Idx b) const { return mul[static_cast<std::size_t>(a) * n + b]; }

  Idx identity() const {
    for (Idx e = 0; e < n; ++e) {
      bool ok = true;
      for (Idx a = 0; a < n && ok; ++a) {
        ok = product(e, a) == a && product(a, e) == a;
      }
      if (ok) {
        return e;
      }
    }
    return UNDEFINED;
  }

  Idx inverse_of(Idx a) const {
    Idx e = identity();
    for (Idx b = 0; b < n; ++b) {
      if (product(a, b) == e && product(b, a) == e) {
        return b;
      }
    }
    return UNDEFINED;
  }

  Idx order_of(Idx a) const {
    Idx e = identity();
    Idx x = a;
    Idx k = 1;
    while (x != e) {
      x = product(x, a);
      ++k;
    }
    return k;
  }

  bool operator==(GroupTable const& other) const = default;
};

inline Validated<GroupTable> validate_group(GroupTable const& t) {
  Report rep;
  std::size_t nn = static_cast<std::size_t>(t.n) * t.n;
  if (t.mul.size() != nn) {
    rep.add("NotAGroup", detail::cat("table has ", t.mul.size(), " entries, expected ", nn));
    return invalid<GroupTable>(std::move(rep));
  }
  for (std::size_t i = 0; i < nn; ++i) {
    if (t.mul[i] >= t.n) {
      rep.add("NotAGroup", detail::cat("entry ", i, " out of range"));
      return invalid<GroupTable>(std::move(rep));
    }
  }
  if (t.n == 0) {
    rep.add("NotAGroup", "empty carrier");
    return invalid<GroupTable>(std::move(rep));
  }
  for (Idx a = 0; a < t.n; ++a) {
    for (Idx b = 0; b < t.n; ++b) {
      for (Idx c = 0; c < t.n; ++c) {
        if (t.product(t.product(a, b), c) != t.product(a, t.product(b, c))) {
          rep.add("NotAGroup", detail::cat("associativity fails at (", a, ",", b, ",", c, ")"));
        }
      }
    }
  }
  if (t.identity() == UNDEFINED) {
    rep.add("NotAGroup", "no two-sided identity");
  } else {
    for (Idx a = 0; a < t.n; ++a) {
      if (t.inverse_of(a) == UNDEFINED) {
        rep.add("NotAGroup", detail::cat("element ", a, " has no inverse"));
      }
    }
  }
  if (!rep.ok()) {
    return invalid<GroupTable>(std::move(rep));
  }
  return valid(t);
}

inline GroupTable trivial_group() { return GroupTable{1, {0}}; }

inline GroupTable cyclic_group(Idx n) {
  GroupTable t;
  t.n = n;
  t.mul.resize(static_cast<std::size_t>(n) * n);
  for (Idx a = 0; a < n; ++a) {
    for (Idx b = 0; b < n; ++b) {
      t.mul[static_cast<std::size_t>(a) * n + b] = (a + b) % n;
    }
  }
  return t;
}

//! Dihedral group of order 2n: elements 0..n-1 rotations, n..2n-1 reflections.
inline GroupTable dihedral_group(Idx n) {
  GroupTable t;
  t.n = 2 * n;
  t.mul.resize(static_cast<std::size_t>(t.n) * t.n);
  auto set = [&](Idx a, Idx b, Idx c) { t.mul[static_cast<std::size_t>(a) * t.n + b] = c; };
  for (Idx a = 0; a < t.n; ++a) {
    for (Idx b = 0; b < t.n; ++b) {
      bool ra = a < n, rb = b < n;
      Idx i = a % n, j = b % n;
      if (ra && rb) {
        set(a, b, (i + j) % n);
      } else if (ra && !rb) {
        set(a, b, n + (j + n - i) % n);
      } else if (!ra && rb) {
        set(a, b, n + (i + j) % n);
      } else {
        set(a, b, (j + n - i) % n);
      }
    }
  }
  return t;
}

//! Quaternion group of order 8: 1,-1,i,-i,j,-j,k,-k as 0..7.
inline GroupTable quaternion_group() {
  // encode q = (sign, axis) with axis in {1,i,j,k}
  auto enc = [](int sign, int axis) { return static_cast<Idx>(axis * 2 + (sign < 0 ? 1 : 0)); };
  GroupTable t;
  t.n = 8;
  t.mul.assign(64, 0);
  // multiplication of 1,i,j,k with signs
  static int const ax[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static int const sg[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  for (Idx a = 0; a < 8; ++a) {
    for (Idx b = 0; b < 8; ++b) {
      int sa = (a % 2) ? -1 : 1, sb = (b % 2) ? -1 : 1;
      int xa = a / 2, xb = b / 2;
      t.mul[static_cast<std::size_t>(a) * 8 + b] = enc(sa * sb * sg[xa][xb], ax[xa][xb]);
    }
  }
  return t;
}

inline GroupTable product_group(GroupTable const& g, GroupTable const& h) {
  GroupTable t;
  t.n = g.n * h.n;
  t.mul.resize(static_cast<std::size_t>(t.n) * t.n);
  for (Idx a = 0; a < t.n; ++a) {
    for (Idx b = 0; b < t.n; ++b) {
      Idx ga = a / h.n, ha = a % h.n, gb = b / h.n, hb = b % h.n;
      t.mul[static_cast<std::size_t>(a) * t.n + b] = g.product(ga, gb) * h.n + h.product(ha, hb);
    }
  }
  return t;
}

//! Symmetric group on m letters as permutation composition, m small.
inline GroupTable symmetric_group(Idx m) {
  std::vector<std::vector<Idx>> perms;
  std::vector<Idx> p(m);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  GroupTable t;
  t.n = static_cast<Idx>(perms.size());
  t.mul.resize(static_cast<std::size_t>(t.n) * t.n);
  std::map<std::vector<Idx>, Idx> index;
  for (Idx i = 0; i < t.n; ++i) {
    index[perms[i]] = i;
  }
  for (Idx a = 0; a < t.n; ++a) {
    for (Idx b = 0; b < t.n; ++b) {
      std::vector<Idx> c(m);
      for (Idx x = 0; x < m; ++x) {
        c[x] = perms[a][perms[b][x]];  // (a*b)(x) = a(b(x))
      }
      t.mul[static_cast<std::size_t>(a) * t.n + b] = index[c];
    }
  }
  return t;
}

//! Closure of a subset under multiplication and inverses.
inline std::vector<Idx> generated_subgroup(GroupTable const& g, std::vector<Idx> gens) {
  std::set<Idx> have;
  have.insert(g.identity());
  std::vector<Idx> queue(have.begin(), have.end());
  for (Idx x : gens) {
    if (have.insert(x).second) {
      queue.push_back(x);
    }
  }
  while (!queue.empty()) {
    Idx x = queue.back();
    queue.pop_back();
    for (Idx y : std::set<Idx>(have)) {
      for (Idx z : {g.product(x, y), g.product(y, x), g.inverse_of(x)}) {
        if (have.insert(z).second) {
          queue.push_back(z);
        }
      }
    }
  }
  return {have.begin(), have.end()};
}

//! All subgroups, each as a sorted element list. Exhaustive, for small orders.
inline std::vector<std::vector<Idx>> all_subgroups(GroupTable const& g) {
  std::set<std::vector<Idx>> found;
  found.insert({g.identity()});
  bool grew = true;
  while (grew) {
    grew = false;
    for (auto const& sub : std::set<std::vector<Idx>>(found)) {
      for (Idx x = 0; x < g.n; ++x) {
        std::vector<Idx> gens = sub;
        gens.push_back(x);
        auto bigger = generated_subgroup(g, gens);
        if (found.insert(bigger).second) {
          grew = true;
        }
      }
    }
  }
  return {found.begin(), found.end()};
}

inline bool is_normal_subgroup(GroupTable const& g, std::vector<Idx> const& sub) {
  std::set<Idx> s(sub.begin(), sub.end());
  for (Idx x = 0; x < g.n; ++x) {
    for (Idx h : sub) {
      if (!s.count(g.product(g.product(x, h), g.inverse_of(x)))) {
        return false;
      }
    }
  }
  return true;
}

//! Quotient G/N as a table, plus the projection map G -> G/N.
inline std::pair<GroupTable, std::vector<Idx>> quotient_group(GroupTable const& g,
                                                              std::vector<Idx> const& normal) {
  std::set<Idx> n(normal.begin(), normal.end());
  std::vector<Idx> coset_of(g.n, UNDEFINED);
  std::vector<Idx> reps;
  for (Idx x = 0; x < g.n; ++x) {
    if (coset_of[x] != UNDEFINED) {
      continue;
    }
    Idx c = static_cast<Idx>(reps.size());
    reps.push_back(x);
    for (Idx h : normal) {
      coset_of[g.product(x, h)] = c;
    }
  }
  GroupTable q;
  q.n = static_cast<Idx>(reps.size());
  q.mul.resize(static_cast<std::size_t>(q.n) * q.n);
  for (Idx a = 0; a < q.n; ++a) {
    for (Idx b = 0; b < q.n; ++b) {
      q.mul[static_cast<std::size_t>(a) * q.n + b] = coset_of[g.product(reps[a], reps[b])];
    }
  }
  return {q, coset_of};
}

namespace detail {

//! Grow the generator images into a full map; empty on conflict.
inline std::optional<std::vector<Idx>> close_homomorphism(GroupTable const& a,
                                                          GroupTable const& b,
                                                          std::vector<Idx> const& gens,
                                                          std::vector<Idx> const& image) {
  std::vector<Idx> map(a.n, UNDEFINED);
  map[a.identity()] = b.identity();
  std::vector<Idx> frontier{a.identity()};
  while (!frontier.empty()) {
    std::vector<Idx> next;
    for (Idx x : frontier) {
      for (std::size_t i = 0; i < gens.size(); ++i) {
        Idx y = a.product(x, gens[i]);
        Idx im = b.product(map[x], image[i]);
        if (map[y] == UNDEFINED) {
          map[y] = im;
          next.push_back(y);
        } else if (map[y] != im) {
          return std::nullopt;
        }
      }
    }
    frontier = std::move(next);
  }
  for (Idx x = 0; x < a.n; ++x) {
    for (Idx y = 0; y < a.n; ++y) {
      if (map[a.product(x, y)] != b.product(map[x], map[y])) {
        return std::nullopt;
      }
    }
  }
  return map;
}

//! Greedy small generating set.
inline std::vector<Idx> generating_set(GroupTable const& g) {
  std::vector<Idx> gens;
  std::vector<Idx> closure = generated_subgroup(g, {});
  while (closure.size() < g.n) {
    for (Idx x = 0; x < g.n; ++x) {
      if (!std::binary_search(closure.begin(), closure.end(), x)) {
        gens.push_back(x);
        closure = generated_subgroup(g, gens);
        break;
      }
    }
  }
  return gens;
}

}  // namespace detail

//! Exhaustive isomorphism search over generator images with order pruning,
//! returning the element map when one exists. Throws CapExceededError above
//! the stated cap.
inline std::optional<std::vector<Idx>> group_isomorphism(GroupTable const& a, GroupTable const& b,
                                                         Idx cap = 64) {
  if (a.n > cap || b.n > cap) {
    throw CapExceededError(detail::cat("IsotropyTooLarge: group order ", std::max(a.n, b.n),
                                       " exceeds cap ", cap));
  }
  if (a.n != b.n) {
    return std::nullopt;
  }
  std::vector<Idx> prof_a(a.n + 1, 0), prof_b(b.n + 1, 0);
  for (Idx x = 0; x < a.n; ++x) {
    ++prof_a[a.order_of(x)];
    ++prof_b[b.order_of(x)];
  }
  if (prof_a != prof_b) {
    return std::nullopt;
  }
  auto gens = detail::generating_set(a);
  std::vector<Idx> image(gens.size());
  std::optional<std::vector<Idx>> found;
  auto rec = [&](auto&& self, std::size_t pos) -> bool {
    if (pos == gens.size()) {
      auto map = detail::close_homomorphism(a, b, gens, image);
      if (!map) {
        return false;
      }
      std::vector<bool> hit(b.n, false);
      for (Idx x = 0; x < a.n; ++x) {
        if (hit[(*map)[x]]) {
          return false;
        }
        hit[(*map)[x]] = true;
      }
      found = std::move(map);
      return true;
    }
    for (Idx im = 0; im < b.n; ++im) {
      if (b.order_of(im) != a.order_of(gens[pos])) {
        continue;
      }
      image[pos] = im;
      if (self(self, pos + 1)) {
        return true;
      }
    }
    return false;
  };
  rec(rec, 0);
  return found;
}

inline bool groups_isomorphic(GroupTable const& a, GroupTable const& b, Idx cap = 64) {
  return group_isomorphism(a, b, cap).has_value();
}

//! All homomorphisms A -> B as full element maps. Exhaustive over generator
//! images; intended for small orders.
inline std::vector<std::vector<Idx>> all_homomorphisms(GroupTable const& a, GroupTable const& b) {
  auto gens = detail::generating_set(a);
  std::vector<std::vector<Idx>> out;
  std::vector<Idx> image(gens.size());
  auto rec = [&](auto&& self, std::size_t pos) -> void {
    if (pos == gens.size()) {
      if (auto map = detail::close_homomorphism(a, b, gens, image)) {
        out.push_back(std::move(*map));
      }
      return;
    }
    for (Idx im = 0; im < b.n; ++im) {
      // order of the image must divide the order of the generator
      if (a.order_of(gens[pos]) % b.order_of(im) != 0) {
        continue;
      }
      image[pos] = im;
      self(self, pos + 1);
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace grpd
