#pragma once

#include "grpd/extension.hpp"

namespace grpd::corpus {

//! A deterministic family of small groups covering every order up to 16.
inline std::vector<GroupTable> group_family(Idx max_order = 16) {
  std::vector<GroupTable> out;
  for (Idx n = 1; n <= max_order; ++n) {
    out.push_back(cyclic_group(n));
  }
  for (Idx n = 2; 2 * n <= max_order; ++n) {
    out.push_back(dihedral_group(n));  // D2 = V4, D3 = S3, ...
  }
  if (max_order >= 8) {
    out.push_back(quaternion_group());
  }
  auto add_product = [&](GroupTable const& a, GroupTable const& b) {
    if (a.n * b.n <= max_order) {
      out.push_back(product_group(a, b));
    }
  };
  add_product(cyclic_group(4), cyclic_group(2));
  add_product(cyclic_group(4), cyclic_group(4));
  add_product(cyclic_group(8), cyclic_group(2));
  add_product(product_group(cyclic_group(2), cyclic_group(2)), cyclic_group(2));
  add_product(product_group(cyclic_group(4), cyclic_group(2)), cyclic_group(2));
  add_product(product_group(product_group(cyclic_group(2), cyclic_group(2)), cyclic_group(2)),
              cyclic_group(2));
  add_product(cyclic_group(6), cyclic_group(2));
  add_product(dihedral_group(3), cyclic_group(2));
  add_product(dihedral_group(4), cyclic_group(2));
  add_product(quaternion_group(), cyclic_group(2));
  return out;
}

//! All quotient extensions G -> G/N over a point, one per normal subgroup.
struct GroupSurjection {
  GroupTable group;
  GroupTable quotient;
  std::vector<Idx> map;  // element -> coset
};

inline std::vector<GroupSurjection> group_surjections(Idx max_order = 16,
                                                      bool proper_only = false) {
  std::vector<GroupSurjection> out;
  for (auto const& g : group_family(max_order)) {
    for (auto const& sub : all_subgroups(g)) {
      if (!is_normal_subgroup(g, sub)) {
        continue;
      }
      if (proper_only && sub.size() == 1) {
        continue;
      }
      auto [q, coset] = quotient_group(g, sub);
      out.push_back({g, q, coset});
    }
  }
  return out;
}

inline GroupoidExtension extension_of_surjection(GroupSurjection const& s) {
  auto total = share(group_groupoid(s.group));
  auto base = share(group_groupoid(s.quotient));
  return *validate_extension(total, base, s.map);
}

//! Right actions of the quotient on a small set, one per homomorphism into
//! the symmetric group (acting through inverses to get the right action law).
inline std::vector<GroupAction> quotient_actions(GroupTable const& q, Idx n_points) {
  auto sym = symmetric_group(n_points);
  // decode: permutation index -> images
  std::vector<std::vector<Idx>> perms;
  {
    std::vector<Idx> p(n_points);
    std::iota(p.begin(), p.end(), 0);
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  std::vector<GroupAction> out;
  for (auto const& hom : all_homomorphisms(q, sym)) {
    GroupAction a;
    a.group = q;
    a.n_points = n_points;
    a.act.resize(static_cast<std::size_t>(n_points) * q.n);
    for (Idx m = 0; m < n_points; ++m) {
      for (Idx g = 0; g < q.n; ++g) {
        a.act[static_cast<std::size_t>(m) * q.n + g] = perms[hom[q.inverse_of(g)]][m];
      }
    }
    out.push_back(std::move(a));
  }
  return out;
}

//! The action-groupoid extension induced by a group surjection and an
//! action of the quotient on a finite set.
inline GroupoidExtension induced_action_extension(GroupSurjection const& s,
                                                  GroupAction const& action) {
  // the big group acts through the surjection
  GroupAction through;
  through.group = s.group;
  through.n_points = action.n_points;
  through.act.resize(static_cast<std::size_t>(action.n_points) * s.group.n);
  for (Idx m = 0; m < action.n_points; ++m) {
    for (Idx g = 0; g < s.group.n; ++g) {
      through.act[static_cast<std::size_t>(m) * s.group.n + g] = action.apply(m, s.map[g]);
    }
  }
  auto total = share(action_groupoid(through));
  auto base = share(action_groupoid(action));
  // arrows (m, g) -> (m, map(g)); the arrow encoding is m * |G| + g
  std::vector<Idx> arrow_map(total->n_morphisms());
  for (Idx m = 0; m < action.n_points; ++m) {
    for (Idx g = 0; g < s.group.n; ++g) {
      arrow_map[m * s.group.n + g] = m * s.quotient.n + s.map[g];
    }
  }
  return *validate_extension(total, base, std::move(arrow_map));
}

inline bool action_is_transitive(GroupAction const& a) {
  if (a.n_points <= 1) {
    return true;
  }
  std::vector<char> reach(a.n_points, 0);
  reach[0] = 1;
  bool grew = true;
  while (grew) {
    grew = false;
    for (Idx m = 0; m < a.n_points; ++m) {
      if (!reach[m]) {
        continue;
      }
      for (Idx g = 0; g < a.group.n; ++g) {
        Idx v = a.apply(m, g);
        if (!reach[v]) {
          reach[v] = 1;
          grew = true;
        }
      }
    }
  }
  return std::all_of(reach.begin(), reach.end(), [](char x) { return x != 0; });
}

//! The deterministic extension corpus: all quotient extensions of the group
//! family, a slice of induced action-groupoid extensions on up to 3 points,
//! and pull-backs of a few of them along point doublings. The action slice
//! uses transitive actions, so every member has a connected base.
inline std::vector<GroupoidExtension> extension_corpus(Idx max_order = 16) {
  std::vector<GroupoidExtension> out;
  auto surjections = group_surjections(max_order);
  for (auto const& s : surjections) {
    out.push_back(extension_of_surjection(s));
  }
  // action-groupoid extensions: keep the quotient small so the slice stays
  // at desk scale but still exercises multi-object extensions
  for (auto const& s : surjections) {
    if (s.group.n > 8 || s.quotient.n > 6) {
      continue;
    }
    for (Idx pts = 2; pts <= 3; ++pts) {
      std::size_t taken = 0;
      for (auto const& action : quotient_actions(s.quotient, pts)) {
        if (!action_is_transitive(action)) {
          continue;
        }
        out.push_back(induced_action_extension(s, action));
        if (++taken >= 2) {
          break;
        }
      }
    }
  }
  // pull-backs along the fold {0,1} -> {*} of a few one-object extensions
  std::size_t added = 0;
  for (auto const& s : surjections) {
    if (s.group.n < 2 || s.group.n > 8 || added >= 5) {
      continue;
    }
    auto ext = extension_of_surjection(s);
    out.push_back(pullback_extension(ext, {0, 0}, 2).extension);
    ++added;
  }
  return out;
}

//! Functors that fail the arrow-lifting condition: proper subgroup
//! inclusions, as one-object functors.
inline std::vector<GroupoidFunctor> non_full_inclusions(Idx max_order = 16) {
  std::vector<GroupoidFunctor> out;
  for (auto const& g : group_family(max_order)) {
    auto whole = share(group_groupoid(g));
    for (auto const& sub : all_subgroups(g)) {
      if (sub.size() == g.n) {
        continue;  // not proper
      }
      GroupTable table;
      table.n = static_cast<Idx>(sub.size());
      table.mul.resize(static_cast<std::size_t>(table.n) * table.n);
      std::map<Idx, Idx> pos;
      for (Idx i = 0; i < table.n; ++i) {
        pos[sub[i]] = i;
      }
      for (Idx i = 0; i < table.n; ++i) {
        for (Idx j = 0; j < table.n; ++j) {
          table.mul[static_cast<std::size_t>(i) * table.n + j] = pos.at(g.product(sub[i], sub[j]));
        }
      }
      GroupoidFunctor incl;
      incl.dom = share(group_groupoid(table));
      incl.cod = whole;
      incl.f0 = {0};
      incl.f1 = std::vector<Idx>(sub.begin(), sub.end());
      out.push_back(std::move(incl));
    }
  }
  return out;
}

}  // namespace grpd::corpus
