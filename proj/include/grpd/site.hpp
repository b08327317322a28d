#pragma once

#include <tuple>

#include "grpd/base.hpp"

namespace grpd {

//! A function between canonical finite sets {0..dom-1} -> {0..cod-1}.
struct SetMap {
  Idx dom = 0;
  Idx cod = 0;
  std::vector<Idx> table;

  Idx operator()(Idx x) const { return table[x]; }

  bool operator==(SetMap const& other) const = default;
  auto operator<=>(SetMap const& other) const = default;

  bool is_bijection() const {
    if (dom != cod) {
      return false;
    }
    std::vector<char> hit(cod, 0);
    for (Idx v : table) {
      if (v >= cod || hit[v]) {
        return false;
      }
      hit[v] = 1;
    }
    return true;
  }
};

inline SetMap identity_map(Idx n) {
  SetMap f{n, n, std::vector<Idx>(n)};
  for (Idx i = 0; i < n; ++i) {
    f.table[i] = i;
  }
  return f;
}

inline SetMap compose_maps(SetMap const& first, SetMap const& then) {
  if (first.cod != then.dom) {
    throw PreconditionError("compose_maps: middle set mismatch");
  }
  SetMap out{first.dom, then.cod, std::vector<Idx>(first.dom)};
  for (Idx x = 0; x < first.dom; ++x) {
    out.table[x] = then.table[first.table[x]];
  }
  return out;
}

//! The pull-back of f : A -> C and g : B -> C in finite sets: the pairs
//! (a, b) with f(a) = g(b), ordered lexicographically.
struct SetPullback {
  Idx size = 0;
  std::vector<std::pair<Idx, Idx>> pairs;
  std::map<std::pair<Idx, Idx>, Idx> index;
  SetMap pr1;  // -> A
  SetMap pr2;  // -> B
};

inline SetPullback set_pullback(SetMap const& f, SetMap const& g) {
  if (f.cod != g.cod) {
    throw PreconditionError("set_pullback: the maps have different codomains");
  }
  SetPullback out;
  for (Idx a = 0; a < f.dom; ++a) {
    for (Idx b = 0; b < g.dom; ++b) {
      if (f(a) == g(b)) {
        out.index[{a, b}] = static_cast<Idx>(out.pairs.size());
        out.pairs.emplace_back(a, b);
      }
    }
  }
  out.size = static_cast<Idx>(out.pairs.size());
  out.pr1 = SetMap{out.size, f.dom, {}};
  out.pr2 = SetMap{out.size, g.dom, {}};
  for (auto [a, b] : out.pairs) {
    out.pr1.table.push_back(a);
    out.pr2.table.push_back(b);
  }
  return out;
}

//! A covering family: maps into a common target set.
struct Covering {
  Idx base = 0;
  std::vector<SetMap> parts;  // every cod == base
};

inline bool jointly_surjective(Covering const& c) {
  std::vector<char> hit(c.base, 0);
  for (auto const& p : c.parts) {
    for (Idx v : p.table) {
      hit[v] = 1;
    }
  }
  return std::all_of(hit.begin(), hit.end(), [](char x) { return x != 0; });
}

//! An explicit Grothendieck topology on the finite-set category with
//! objects {0..n-1} for n <= max_size. Families are compared as sets of
//! maps.
struct FiniteSite {
  Idx max_size = 0;
  // coverings[n] = the covering families of the n-element set
  std::vector<std::vector<std::vector<SetMap>>> coverings;

  static std::vector<SetMap> normalize(std::vector<SetMap> family) {
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());
    return family;
  }

  bool has_covering(Idx n, std::vector<SetMap> family) const {
    auto norm = normalize(std::move(family));
    for (auto const& f : coverings[n]) {
      if (f == norm) {
        return true;
      }
    }
    return false;
  }
};

//! All maps from sets of size <= max_size into an n-element set.
inline std::vector<SetMap> all_maps_into(Idx n, Idx max_size) {
  std::vector<SetMap> out;
  for (Idx m = 0; m <= max_size; ++m) {
    std::vector<Idx> table(m, 0);
    if (m == 0) {
      out.push_back(SetMap{0, n, {}});
      continue;
    }
    if (n == 0) {
      continue;  // no maps from a nonempty set into the empty set
    }
    while (true) {
      out.push_back(SetMap{m, n, table});
      Idx i = 0;
      while (i < m && ++table[i] == n) {
        table[i] = 0;
        ++i;
      }
      if (i == m) {
        break;
      }
    }
  }
  return out;
}

//! The three Grothendieck-topology axioms, checked over the explicit data.
inline Validated<FiniteSite> validate_site(FiniteSite const& site) {
  Report rep;
  for (Idx n = 0; n <= site.max_size; ++n) {
    // axiom 1: every isomorphism is a singleton covering
    for (auto const& f : all_maps_into(n, site.max_size)) {
      if (f.is_bijection() && !site.has_covering(n, {f})) {
        rep.add("IsoCoveringMissing",
                detail::cat("bijection onto the ", n, "-element set is not a covering"));
      }
    }
    for (auto const& family : site.coverings[n]) {
      // axiom 3: pull-backs of coverings along any map are coverings
      for (auto const& v : all_maps_into(n, site.max_size)) {
        std::vector<SetMap> pulled;
        bool representable = true;
        for (auto const& part : family) {
          auto pb = set_pullback(part, v);
          if (pb.size > site.max_size) {
            representable = false;
            break;
          }
          pulled.push_back(pb.pr2);
        }
        if (!representable) {
          throw CapExceededError("validate_site: a pull-back object exceeds the size cap");
        }
        if (!site.has_covering(v.dom, pulled)) {
          rep.add("PullbackNotCovering",
                  detail::cat("pull-back of a covering of the ", n, "-element set along a map from ",
                              v.dom, " is missing"));
        }
      }
      // axiom 2: composing a covering with coverings of its parts
      // (one refinement choice per part, enumerated recursively)
      std::vector<std::size_t> choice(family.size(), 0);
      bool done = family.empty();
      while (!done) {
        std::vector<SetMap> composed;
        for (std::size_t i = 0; i < family.size(); ++i) {
          auto const& refinement = site.coverings[family[i].dom][choice[i]];
          for (auto const& leg : refinement) {
            composed.push_back(compose_maps(leg, family[i]));
          }
        }
        if (!site.has_covering(n, composed)) {
          rep.add("CompositionNotCovering",
                  detail::cat("a composition covering of the ", n, "-element set is missing"));
        }
        std::size_t i = 0;
        while (i < family.size() && ++choice[i] == site.coverings[family[i].dom].size()) {
          choice[i] = 0;
          ++i;
        }
        if (i == family.size()) {
          done = true;
        }
        if (!rep.ok()) {
          break;  // one witness per family is enough to reject
        }
      }
    }
  }
  if (!rep.ok()) {
    return invalid<FiniteSite>(std::move(rep));
  }
  return valid(site);
}

//! The coarse topology: only bijections cover.
inline FiniteSite iso_site(Idx max_size) {
  FiniteSite site;
  site.max_size = max_size;
  site.coverings.resize(max_size + 1);
  for (Idx n = 0; n <= max_size; ++n) {
    for (auto const& f : all_maps_into(n, max_size)) {
      if (f.is_bijection()) {
        site.coverings[n].push_back(FiniteSite::normalize({f}));
      }
    }
    if (n == 0) {
      site.coverings[0].push_back({});  // the empty family covers the empty set
    }
  }
  return site;
}

//! The subset-cover topology: families of injective maps whose images
//! jointly cover the target. Injectivity keeps pull-backs of coverings
//! inside the size cap, which arbitrary jointly-surjective families do not
//! (two 2-element parts over a point pull back to a 4-element set).
//! Exponential in max_size; intended for max_size <= 2.
inline FiniteSite jointly_surjective_site(Idx max_size) {
  FiniteSite site;
  site.max_size = max_size;
  site.coverings.resize(max_size + 1);
  for (Idx n = 0; n <= max_size; ++n) {
    std::vector<SetMap> maps;
    for (auto const& f : all_maps_into(n, max_size)) {
      std::vector<char> hit(n, 0);
      bool injective = true;
      for (Idx v : f.table) {
        if (hit[v]) {
          injective = false;
          break;
        }
        hit[v] = 1;
      }
      if (injective) {
        maps.push_back(f);
      }
    }
    std::size_t m = maps.size();
    if (m > 20) {
      throw CapExceededError("jointly_surjective_site: too many maps to enumerate families");
    }
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
      Covering c;
      c.base = n;
      for (std::size_t i = 0; i < m; ++i) {
        if (mask & (std::size_t{1} << i)) {
          c.parts.push_back(maps[i]);
        }
      }
      if (jointly_surjective(c)) {
        site.coverings[n].push_back(FiniteSite::normalize(c.parts));
      }
    }
    std::sort(site.coverings[n].begin(), site.coverings[n].end());
    site.coverings[n].erase(std::unique(site.coverings[n].begin(), site.coverings[n].end()),
                            site.coverings[n].end());
  }
  return site;
}

}  // namespace grpd
