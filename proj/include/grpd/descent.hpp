#pragma once

#include <mutex>

#include "grpd/functor.hpp"
#include "grpd/site.hpp"

namespace grpd {

//! A groupoid-valued presheaf on finite sets, presented as a pseudo-functor:
//! a groupoid per object, a restriction functor per map, and coherence
//! isomorphisms (identities for strict presheaves). Restrictions are
//! required to agree on objects along equal composite maps; the coherence
//! data lives in the morphism direction.
class GroupoidPresheaf {
 public:
  virtual ~GroupoidPresheaf() = default;

  GroupoidPtr value(Idx size) const {
    {
      std::lock_guard lock(_cache_mutex);
      auto it = _values.find(size);
      if (it != _values.end()) {
        return it->second;
      }
    }
    auto computed = share(compute_value(size));
    std::lock_guard lock(_cache_mutex);
    return _values.emplace(size, std::move(computed)).first->second;
  }

  GroupoidFunctor restriction(SetMap const& f) const {
    auto key = std::make_tuple(f.dom, f.cod, f.table);
    {
      std::lock_guard lock(_cache_mutex);
      auto it = _restrictions.find(key);
      if (it != _restrictions.end()) {
        return it->second;
      }
    }
    auto computed = compute_restriction(f);
    std::lock_guard lock(_cache_mutex);
    return _restrictions.emplace(std::move(key), std::move(computed)).first->second;
  }

  virtual bool strict() const { return true; }

  //! epsilon_U : (1_U)* => id.
  virtual NatTransform unit(Idx size) const {
    return identity_transform(restriction(identity_map(size)));
  }

  //! alpha_{f,g} : f* g* => (g o f)* for composable f : U -> V, g : V -> W.
  virtual NatTransform assoc(SetMap const& f, SetMap const& g) const {
    NatTransform n = identity_transform(restriction(compose_maps(f, g)));
    n.from = compose_functors(restriction(g), restriction(f));
    return n;
  }

 protected:
  virtual FiniteGroupoid compute_value(Idx size) const = 0;
  virtual GroupoidFunctor compute_restriction(SetMap const& f) const = 0;

  mutable std::mutex _cache_mutex;
  mutable std::map<Idx, GroupoidPtr> _values;
  mutable std::map<std::tuple<Idx, Idx, std::vector<Idx>>, GroupoidFunctor> _restrictions;
};

//! The strict constant presheaf at a fixed groupoid.
class ConstantPresheaf : public GroupoidPresheaf {
 public:
  explicit ConstantPresheaf(GroupoidPtr g) : _g(std::move(g)) {}

 protected:
  FiniteGroupoid compute_value(Idx) const override { return FiniteGroupoid(*_g); }

  GroupoidFunctor compute_restriction(SetMap const& f) const override {
    GroupoidFunctor out = identity_functor(value(f.cod));
    out.cod = value(f.dom);
    return out;
  }

 private:
  GroupoidPtr _g;
};

//! Checks the pseudo-functor coherence equations over every map between
//! sets of size <= max_size.
inline Validated<bool> validate_presheaf(GroupoidPresheaf const& p, Idx max_size) {
  Report rep;
  std::vector<SetMap> maps;
  for (Idx n = 0; n <= max_size; ++n) {
    for (auto const& f : all_maps_into(n, max_size)) {
      maps.push_back(f);
    }
  }
  for (auto const& f : maps) {
    auto r = p.restriction(f);
    if (!(*r.dom == *p.value(f.cod)) || !(*r.cod == *p.value(f.dom))) {
      rep.add("PresheafShape", "restriction has the wrong boundary groupoids");
      continue;
    }
    if (!validate_functor(r).ok()) {
      rep.add("PresheafShape", "a restriction is not a functor");
    }
  }
  for (Idx n = 0; n <= max_size; ++n) {
    auto eps = p.unit(n);
    if (!validate_nat_transform(eps).ok()) {
      rep.add("PresheafUnit", detail::cat("epsilon at size ", n, " is not natural"));
    }
  }
  for (auto const& f : maps) {
    for (auto const& g : maps) {
      if (g.dom != f.cod) {
        continue;
      }
      auto alpha = p.assoc(f, g);
      if (!validate_nat_transform(alpha).ok()) {
        rep.add("PresheafAssoc", "an associator is not natural");
        continue;
      }
      // unit conditions
      if (g.dom == g.cod && g == identity_map(g.dom)) {
        auto rf = p.restriction(f);
        auto eps = p.unit(g.dom);
        for (Idx obj = 0; obj < p.value(g.cod)->n_objects(); ++obj) {
          if (alpha.eta[obj] != rf.f1[eps.eta[obj]]) {
            rep.add("PresheafCoherence", "alpha_{f,1} != f*(epsilon)");
            break;
          }
        }
      }
      if (f.dom == f.cod && f == identity_map(f.dom)) {
        auto rg = p.restriction(g);
        auto eps = p.unit(f.dom);
        for (Idx obj = 0; obj < p.value(g.cod)->n_objects(); ++obj) {
          if (alpha.eta[obj] != eps.eta[rg.f0[obj]]) {
            rep.add("PresheafCoherence", "alpha_{1,g} != epsilon(g*)");
            break;
          }
        }
      }
      // cocycle condition over composable triples
      for (auto const& h : maps) {
        if (h.dom != g.cod) {
          continue;
        }
        auto const& fu = *p.value(f.dom);
        auto rh = p.restriction(h);
        auto rf = p.restriction(f);
        auto a_fg = p.assoc(f, g);
        auto a_gf_h = p.assoc(compose_maps(f, g), h);
        auto a_gh = p.assoc(g, h);
        auto a_f_hg = p.assoc(f, compose_maps(g, h));
        for (Idx obj = 0; obj < p.value(h.cod)->n_objects(); ++obj) {
          Idx lhs = fu.compose(a_fg.eta[rh.f0[obj]], a_gf_h.eta[obj]);
          Idx rhs = fu.compose(rf.f1[a_gh.eta[obj]], a_f_hg.eta[obj]);
          if (lhs != rhs) {
            rep.add("PresheafCoherence", "associator cocycle fails");
            break;
          }
        }
      }
    }
  }
  if (!rep.ok()) {
    return invalid<bool>(std::move(rep));
  }
  return valid(true);
}

// ---------------------------------------------------------------------------
// the classifying presheaf BG
// ---------------------------------------------------------------------------

//! The presheaf of principal G-bundles over finite sets. A bundle over U is
//! presented by its anchor-value map r : U -> G0 (the pull-back of the
//! trivial bundle along r); morphisms over id_U are arrow families
//! w_x : r(x) -> r'(x). Restriction is pull-back, which on this
//! presentation is precomposition.
class BGPresheaf : public GroupoidPresheaf {
 public:
  BGPresheaf(GroupoidPtr g, Idx carrier_cap = 4096) : _g(std::move(g)), _cap(carrier_cap) {}

  GroupoidPtr structure_groupoid() const { return _g; }
  Idx carrier_cap() const { return _cap; }

  Idx carrier_size(std::vector<Idx> const& r) const {
    Idx total = 0;
    for (Idx a : r) {
      total += static_cast<Idx>(_g->arrows_to(a).size());
    }
    return total;
  }

  struct Block {
    std::vector<std::vector<Idx>> objects;  // r tuples
    std::map<std::vector<Idx>, Idx> object_index;
    // morphisms as (src object, tgt object, per-point arrows)
    std::vector<std::tuple<Idx, Idx, std::vector<Idx>>> morphisms;
    std::map<std::tuple<Idx, Idx, std::vector<Idx>>, Idx> morphism_index;
  };

  Block const& block(Idx size) const {
    {
      std::lock_guard lock(_block_mutex);
      auto it = _blocks.find(size);
      if (it != _blocks.end()) {
        return it->second;
      }
    }
    auto built = build_block(size);
    std::lock_guard lock(_block_mutex);
    return _blocks.emplace(size, std::move(built)).first->second;
  }

 protected:
  FiniteGroupoid compute_value(Idx size) const override {
    auto const& blk = block(size);
    Idx n_obj = static_cast<Idx>(blk.objects.size());
    Idx n_mor = static_cast<Idx>(blk.morphisms.size());
    std::vector<Idx> src(n_mor), tgt(n_mor), inv(n_mor), ident(n_obj);
    for (Idx m = 0; m < n_mor; ++m) {
      auto const& [s, t, w] = blk.morphisms[m];
      src[m] = s;
      tgt[m] = t;
      std::vector<Idx> wi(w.size());
      for (std::size_t x = 0; x < w.size(); ++x) {
        wi[x] = _g->inverse(w[x]);
      }
      inv[m] = blk.morphism_index.at({t, s, wi});
    }
    for (Idx o = 0; o < n_obj; ++o) {
      std::vector<Idx> ids(size);
      for (Idx x = 0; x < size; ++x) {
        ids[x] = _g->ident(blk.objects[o][x]);
      }
      ident[o] = blk.morphism_index.at({o, o, ids});
    }
    auto comp = [&blk, this, size](Idx f, Idx h) {
      auto const& [fs, ft, fw] = blk.morphisms[f];
      auto const& [hs, ht, hw] = blk.morphisms[h];
      std::vector<Idx> w(size);
      for (Idx x = 0; x < size; ++x) {
        w[x] = _g->compose(fw[x], hw[x]);
      }
      return blk.morphism_index.at({fs, ht, w});
    };
    return FiniteGroupoid::unchecked(n_obj, std::move(src), std::move(tgt), std::move(ident),
                                     std::move(inv), comp);
  }

  GroupoidFunctor compute_restriction(SetMap const& f) const override {
    auto const& bcod = block(f.cod);
    auto const& bdom = block(f.dom);
    GroupoidFunctor out;
    out.dom = value(f.cod);
    out.cod = value(f.dom);
    out.f0.resize(bcod.objects.size());
    for (Idx o = 0; o < bcod.objects.size(); ++o) {
      std::vector<Idx> pulled(f.dom);
      for (Idx x = 0; x < f.dom; ++x) {
        pulled[x] = bcod.objects[o][f(x)];
      }
      out.f0[o] = bdom.object_index.at(pulled);
    }
    out.f1.resize(bcod.morphisms.size());
    for (Idx m = 0; m < bcod.morphisms.size(); ++m) {
      auto const& [s, t, w] = bcod.morphisms[m];
      std::vector<Idx> pw(f.dom);
      for (Idx x = 0; x < f.dom; ++x) {
        pw[x] = w[f(x)];
      }
      out.f1[m] = bdom.morphism_index.at({out.f0[s], out.f0[t], pw});
    }
    return out;
  }

 private:
  Block build_block(Idx size) const {
    Block blk;
    Idx n0 = _g->n_objects();
    // all r tuples within the carrier cap, in mixed-radix order
    if (n0 == 0) {
      if (size == 0) {
        blk.objects.push_back({});
        blk.object_index[{}] = 0;
      }
    } else {
      std::vector<Idx> r(size, 0);
      while (true) {
        if (carrier_size(r) <= _cap) {
          blk.object_index[r] = static_cast<Idx>(blk.objects.size());
          blk.objects.push_back(r);
        }
        Idx x = 0;
        while (x < size && ++r[x] == n0) {
          r[x] = 0;
          ++x;
        }
        if (x == size) {
          break;
        }
        if (size == 0) {
          break;
        }
      }
      if (size == 0) {
        // the empty tuple
        if (blk.objects.empty()) {
          blk.object_index[{}] = 0;
          blk.objects.push_back({});
        }
      }
    }
    // morphisms: per object pair, all arrow families
    std::size_t budget = 2'000'000;
    for (Idx s = 0; s < blk.objects.size(); ++s) {
      for (Idx t = 0; t < blk.objects.size(); ++t) {
        std::vector<std::vector<Idx>> homs(size);
        bool any = true;
        for (Idx x = 0; x < size && any; ++x) {
          homs[x] = _g->hom(blk.objects[s][x], blk.objects[t][x]);
          any = !homs[x].empty();
        }
        if (!any) {
          continue;
        }
        std::vector<Idx> pick(size, 0);
        while (true) {
          std::vector<Idx> w(size);
          for (Idx x = 0; x < size; ++x) {
            w[x] = homs[x][pick[x]];
          }
          if (blk.morphisms.size() >= budget) {
            throw CapExceededError("BGPresheaf: bundle groupoid too large to materialise");
          }
          blk.morphism_index[{s, t, w}] = static_cast<Idx>(blk.morphisms.size());
          blk.morphisms.emplace_back(s, t, std::move(w));
          Idx x = 0;
          while (x < size && ++pick[x] == homs[x].size()) {
            pick[x] = 0;
            ++x;
          }
          if (x == size) {
            break;
          }
          if (size == 0) {
            break;
          }
        }
        if (size == 0 && s == t) {
          // single empty family, already added above
        }
      }
    }
    return blk;
  }

  GroupoidPtr _g;
  Idx _cap;
  mutable std::mutex _block_mutex;
  mutable std::map<Idx, Block> _blocks;
};

inline std::shared_ptr<BGPresheaf> bg_presheaf(GroupoidPtr g, Idx carrier_cap = 4096) {
  return std::make_shared<BGPresheaf>(std::move(g), carrier_cap);
}

// ---------------------------------------------------------------------------
// descent data
// ---------------------------------------------------------------------------

//! Sections per part plus one overlap isomorphism per ordered index pair,
//! subject to the triple-overlap cocycle law.
struct DescentDatum {
  std::vector<Idx> sections;           // object of F(U_i) per part
  std::vector<std::vector<Idx>> phi;   // phi[i][j]: morphism of F(U_ij)

  auto operator<=>(DescentDatum const&) const = default;
};

struct DescentMorphism {
  Idx src = 0;
  Idx dst = 0;
  std::vector<Idx> components;  // theta_i: morphism of F(U_i)

  auto operator<=>(DescentMorphism const&) const = default;
};

struct DescentLimits {
  std::size_t max_objects = 20000;
  std::size_t max_morphisms = 200000;
};

//! Shared precomputation for one covering of one presheaf.
struct CoveringData {
  GroupoidPresheaf const* presheaf = nullptr;
  Covering cov;
  GroupoidPtr fu;                                  // F(U)
  std::vector<GroupoidPtr> fi;                     // F(U_i)
  std::vector<GroupoidFunctor> ri;                 // sigma_i^*
  std::vector<std::vector<SetPullback>> pb;        // U_ij
  std::vector<std::vector<GroupoidPtr>> fij;       // F(U_ij)
  std::vector<std::vector<GroupoidFunctor>> r1;    // pr1^*: F(U_i) -> F(U_ij)
  std::vector<std::vector<GroupoidFunctor>> r2;    // pr2^*: F(U_j) -> F(U_ij)
  struct TripleData {
    Idx i, j, k;
    GroupoidFunctor r12, r23, r13;  // into F(U_ijk)
  };
  std::vector<TripleData> triples;

  std::size_t n_parts() const { return cov.parts.size(); }

  bool cocycle_holds(DescentDatum const& d, Idx i, Idx j, Idx k) const {
    for (auto const& t : triples) {
      if (t.i == i && t.j == j && t.k == k) {
        Idx lhs = t.r13.f1[d.phi[i][k]];
        Idx first = t.r23.f1[d.phi[j][k]];
        Idx second = t.r12.f1[d.phi[i][j]];
        auto const& fijk = *t.r13.cod;
        if (!fijk.composable(first, second)) {
          return false;
        }
        return lhs == fijk.compose(first, second);
      }
    }
    return true;
  }
};

inline CoveringData prepare_covering(GroupoidPresheaf const& p, Covering const& cov) {
  CoveringData cd;
  cd.presheaf = &p;
  cd.cov = cov;
  cd.fu = p.value(cov.base);
  std::size_t n = cov.parts.size();
  cd.fi.resize(n);
  cd.ri.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (cov.parts[i].cod != cov.base) {
      throw PreconditionError("covering part has the wrong target");
    }
    cd.fi[i] = p.value(cov.parts[i].dom);
    cd.ri[i] = p.restriction(cov.parts[i]);
  }
  cd.pb.resize(n);
  cd.fij.resize(n);
  cd.r1.resize(n);
  cd.r2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    cd.pb[i].resize(n);
    cd.fij[i].resize(n);
    cd.r1[i].resize(n);
    cd.r2[i].resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      cd.pb[i][j] = set_pullback(cov.parts[i], cov.parts[j]);
      cd.fij[i][j] = p.value(cd.pb[i][j].size);
      cd.r1[i][j] = p.restriction(cd.pb[i][j].pr1);
      cd.r2[i][j] = p.restriction(cd.pb[i][j].pr2);
    }
  }
  for (Idx i = 0; i < static_cast<Idx>(n); ++i) {
    for (Idx j = 0; j < static_cast<Idx>(n); ++j) {
      for (Idx k = 0; k < static_cast<Idx>(n); ++k) {
        // U_ijk as the pull-back of U_ij -> U_j <- U_jk
        auto ijk = set_pullback(cd.pb[i][j].pr2, cd.pb[j][k].pr1);
        CoveringData::TripleData t;
        t.i = i;
        t.j = j;
        t.k = k;
        SetMap pr12{ijk.size, cd.pb[i][j].size, {}};
        SetMap pr23{ijk.size, cd.pb[j][k].size, {}};
        SetMap pr13{ijk.size, cd.pb[i][k].size, {}};
        for (auto const& [pij, pjk] : ijk.pairs) {
          pr12.table.push_back(pij);
          pr23.table.push_back(pjk);
          Idx x = cd.pb[i][j].pairs[pij].first;
          Idx z = cd.pb[j][k].pairs[pjk].second;
          pr13.table.push_back(cd.pb[i][k].index.at({x, z}));
        }
        t.r12 = p.restriction(pr12);
        t.r23 = p.restriction(pr23);
        t.r13 = p.restriction(pr13);
        cd.triples.push_back(std::move(t));
      }
    }
  }
  return cd;
}

namespace detail {

//! Pair assignment order for the phi backtracking: by max index, so every
//! cocycle triple becomes checkable as early as possible.
inline std::vector<std::pair<Idx, Idx>> phi_order(std::size_t n) {
  std::vector<std::pair<Idx, Idx>> order;
  for (Idx m = 0; m < static_cast<Idx>(n); ++m) {
    for (Idx i = 0; i <= m; ++i) {
      for (Idx j = 0; j <= m; ++j) {
        if (std::max(i, j) == m) {
          order.emplace_back(i, j);
        }
      }
    }
  }
  return order;
}

}  // namespace detail

//! Enumerates every descent datum of the covering, calling `emit` on each.
template <typename OnDatum>
void enumerate_descent_objects(CoveringData const& cd, OnDatum&& emit) {
  std::size_t n = cd.n_parts();
  DescentDatum d;
  d.sections.assign(n, 0);
  d.phi.assign(n, std::vector<Idx>(n, UNDEFINED));
  auto order = detail::phi_order(n);
  // triples checkable once the pair at a given order position is assigned
  std::vector<std::vector<std::array<Idx, 3>>> ready(order.size());
  {
    std::map<std::pair<Idx, Idx>, std::size_t> pos;
    for (std::size_t p = 0; p < order.size(); ++p) {
      pos[order[p]] = p;
    }
    for (Idx i = 0; i < static_cast<Idx>(n); ++i) {
      for (Idx j = 0; j < static_cast<Idx>(n); ++j) {
        for (Idx k = 0; k < static_cast<Idx>(n); ++k) {
          std::size_t latest = std::max({pos[{i, j}], pos[{j, k}], pos[{i, k}]});
          ready[latest].push_back({i, j, k});
        }
      }
    }
  }
  auto phis = [&](auto&& self, std::size_t p) -> void {
    if (p == order.size()) {
      emit(static_cast<DescentDatum const&>(d));
      return;
    }
    auto [i, j] = order[p];
    Idx source = cd.r2[i][j].f0[d.sections[j]];
    Idx target = cd.r1[i][j].f0[d.sections[i]];
    for (Idx m : cd.fij[i][j]->hom(source, target)) {
      d.phi[i][j] = m;
      bool ok = true;
      for (auto const& t : ready[p]) {
        if (!cd.cocycle_holds(d, t[0], t[1], t[2])) {
          ok = false;
          break;
        }
      }
      if (ok) {
        self(self, p + 1);
      }
    }
    d.phi[i][j] = UNDEFINED;
  };
  auto sections = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      phis(phis, 0);
      return;
    }
    for (Idx s = 0; s < cd.fi[i]->n_objects(); ++s) {
      d.sections[i] = s;
      // an overlap isomorphism must exist against every earlier section
      bool viable = true;
      for (std::size_t j = 0; j <= i && viable; ++j) {
        if (cd.fij[i][j]->hom(cd.r2[i][j].f0[d.sections[j]], cd.r1[i][j].f0[s]).empty() ||
            cd.fij[j][i]->hom(cd.r2[j][i].f0[s], cd.r1[j][i].f0[d.sections[j]]).empty()) {
          viable = false;
        }
      }
      if (viable) {
        self(self, i + 1);
      }
    }
  };
  if (n == 0) {
    emit(static_cast<DescentDatum const&>(d));
    return;
  }
  sections(sections, 0);
}

//! Enumerates the descent morphisms from datum d to datum e.
template <typename OnMorphism>
void enumerate_descent_morphisms(CoveringData const& cd, DescentDatum const& d,
                                 DescentDatum const& e, OnMorphism&& emit) {
  std::size_t n = cd.n_parts();
  std::vector<Idx> theta(n, UNDEFINED);
  auto check_pair = [&](Idx i, Idx j) {
    auto const& fij = *cd.fij[i][j];
    Idx lhs = fij.compose(d.phi[i][j], cd.r1[i][j].f1[theta[i]]);
    Idx rhs = fij.compose(cd.r2[i][j].f1[theta[j]], e.phi[i][j]);
    return lhs == rhs;
  };
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      emit(static_cast<std::vector<Idx> const&>(theta));
      return;
    }
    for (Idx m : cd.fi[i]->hom(d.sections[i], e.sections[i])) {
      theta[i] = m;
      bool ok = true;
      for (std::size_t j = 0; j <= i && ok; ++j) {
        ok = check_pair(static_cast<Idx>(i), static_cast<Idx>(j)) &&
             check_pair(static_cast<Idx>(j), static_cast<Idx>(i));
      }
      if (ok) {
        self(self, i + 1);
      }
    }
    theta[i] = UNDEFINED;
  };
  if (n == 0) {
    emit(static_cast<std::vector<Idx> const&>(theta));
    return;
  }
  rec(rec, 0);
}

//! The descent category of a covering, materialised as a finite groupoid.
struct DescentCategory {
  GroupoidPtr groupoid;
  std::vector<DescentDatum> objects;
  std::vector<DescentMorphism> morphisms;
  std::map<DescentDatum, Idx> object_index;
  std::map<DescentMorphism, Idx> morphism_index;
};

inline DescentCategory descent_category(GroupoidPresheaf const& p, Covering const& cov,
                                        DescentLimits limits = {}) {
  auto cd = prepare_covering(p, cov);
  DescentCategory out;
  enumerate_descent_objects(cd, [&](DescentDatum const& d) {
    if (out.objects.size() >= limits.max_objects) {
      throw CapExceededError("descent_category: object cap exceeded");
    }
    out.object_index[d] = static_cast<Idx>(out.objects.size());
    out.objects.push_back(d);
  });
  std::size_t n = cd.n_parts();
  for (Idx a = 0; a < static_cast<Idx>(out.objects.size()); ++a) {
    for (Idx b = 0; b < static_cast<Idx>(out.objects.size()); ++b) {
      enumerate_descent_morphisms(cd, out.objects[a], out.objects[b],
                                  [&](std::vector<Idx> const& theta) {
                                    if (out.morphisms.size() >= limits.max_morphisms) {
                                      throw CapExceededError(
                                          "descent_category: morphism cap exceeded");
                                    }
                                    DescentMorphism m{a, b, theta};
                                    out.morphism_index[m] =
                                        static_cast<Idx>(out.morphisms.size());
                                    out.morphisms.push_back(std::move(m));
                                  });
    }
  }
  Idx n_obj = static_cast<Idx>(out.objects.size());
  Idx n_mor = static_cast<Idx>(out.morphisms.size());
  std::vector<Idx> src(n_mor), tgt(n_mor), inv(n_mor), ident(n_obj);
  for (Idx m = 0; m < n_mor; ++m) {
    src[m] = out.morphisms[m].src;
    tgt[m] = out.morphisms[m].dst;
    DescentMorphism w;
    w.src = tgt[m];
    w.dst = src[m];
    w.components.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      w.components[i] = cd.fi[i]->inverse(out.morphisms[m].components[i]);
    }
    inv[m] = out.morphism_index.at(w);
  }
  for (Idx o = 0; o < n_obj; ++o) {
    DescentMorphism w;
    w.src = o;
    w.dst = o;
    w.components.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      w.components[i] = cd.fi[i]->ident(out.objects[o].sections[i]);
    }
    ident[o] = out.morphism_index.at(w);
  }
  auto comp = [&](Idx f, Idx h) {
    DescentMorphism w;
    w.src = out.morphisms[f].src;
    w.dst = out.morphisms[h].dst;
    w.components.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      w.components[i] =
          cd.fi[i]->compose(out.morphisms[f].components[i], out.morphisms[h].components[i]);
    }
    return out.morphism_index.at(w);
  };
  out.groupoid = share(FiniteGroupoid::unchecked(n_obj, std::move(src), std::move(tgt),
                                                 std::move(ident), std::move(inv), comp));
  return out;
}

//! The canonical overlap isomorphism of a restricted section, built from
//! the associator data: phi_ij = alpha(pr1, sigma_i)^-1 after
//! alpha(pr2, sigma_j).
inline Idx canonical_overlap(CoveringData const& cd, Idx i, Idx j, Idx section_of_u) {
  auto a2 = cd.presheaf->assoc(cd.pb[i][j].pr2, cd.cov.parts[j]);
  auto a1 = cd.presheaf->assoc(cd.pb[i][j].pr1, cd.cov.parts[i]);
  auto const& fij = *cd.fij[i][j];
  return fij.compose(a2.eta[section_of_u], fij.inverse(a1.eta[section_of_u]));
}

//! The comparison functor F(U) -> descent category of the covering.
inline GroupoidFunctor comparison_functor(GroupoidPresheaf const& p, Covering const& cov,
                                          DescentCategory const& dc) {
  auto cd = prepare_covering(p, cov);
  std::size_t n = cd.n_parts();
  GroupoidFunctor out;
  out.dom = cd.fu;
  out.cod = dc.groupoid;
  out.f0.resize(cd.fu->n_objects());
  for (Idx s = 0; s < cd.fu->n_objects(); ++s) {
    DescentDatum d;
    d.sections.resize(n);
    d.phi.assign(n, std::vector<Idx>(n, UNDEFINED));
    for (std::size_t i = 0; i < n; ++i) {
      d.sections[i] = cd.ri[i].f0[s];
    }
    for (Idx i = 0; i < static_cast<Idx>(n); ++i) {
      for (Idx j = 0; j < static_cast<Idx>(n); ++j) {
        d.phi[i][j] = canonical_overlap(cd, i, j, s);
      }
    }
    out.f0[s] = dc.object_index.at(d);
  }
  out.f1.resize(cd.fu->n_morphisms());
  for (Idx m = 0; m < cd.fu->n_morphisms(); ++m) {
    DescentMorphism w;
    w.src = out.f0[cd.fu->src(m)];
    w.dst = out.f0[cd.fu->tgt(m)];
    w.components.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      w.components[i] = cd.ri[i].f1[m];
    }
    out.f1[m] = dc.morphism_index.at(w);
  }
  return out;
}

struct StackVerdict {
  bool full = false;
  bool faithful = false;
  bool ess_surjective = false;
  bool holds = false;
  std::string detail;
  std::size_t descent_objects = 0;  // as enumerated by the engine that ran
};

//! Pointwise engine for classifying presheaves over a jointly surjective
//! cover: bundles over a finite set decompose point by point, so descent
//! data decompose over base points into an object per covering node plus a
//! transport arrow to the class root. Every claim is still verified on the
//! enumerated data; parity with the generic engine is checked in the test
//! suite at small scale.
inline StackVerdict bg_stack_condition(BGPresheaf const& p, Covering const& cov) {
  auto g = p.structure_groupoid();
  auto const& gg = *g;
  StackVerdict out;
  if (!jointly_surjective(cov) || gg.n_objects() == 0) {
    throw PreconditionError("bg_stack_condition: needs a jointly surjective cover and objects");
  }
  std::size_t n = cov.parts.size();

  struct Node {
    Idx part, x;
  };
  std::vector<std::vector<Node>> classes(cov.base);
  for (Idx i = 0; i < static_cast<Idx>(n); ++i) {
    for (Idx x = 0; x < cov.parts[i].dom; ++x) {
      classes[cov.parts[i](x)].push_back({i, x});
    }
  }

  // local data per base point: objects per node plus transports to node 0
  struct Local {
    std::vector<Idx> a;  // object per node
    std::vector<Idx> e;  // arrow a[m] -> a[0]; e[0] is the identity
  };
  std::vector<std::vector<Local>> locals(cov.base);
  for (Idx u = 0; u < cov.base; ++u) {
    std::size_t k = classes[u].size();
    std::vector<Idx> a(k, 0);
    while (true) {
      // enumerate transports for this object tuple
      std::vector<std::vector<Idx>> choices(k);
      bool any = true;
      choices[0] = {gg.ident(a[0])};
      for (std::size_t m = 1; m < k && any; ++m) {
        choices[m] = gg.hom(a[m], a[0]);
        any = !choices[m].empty();
      }
      if (any) {
        std::vector<Idx> pick(k, 0);
        while (true) {
          Local loc;
          loc.a = a;
          loc.e.resize(k);
          for (std::size_t m = 0; m < k; ++m) {
            loc.e[m] = choices[m][pick[m]];
          }
          locals[u].push_back(std::move(loc));
          std::size_t m = 0;
          while (m < k && ++pick[m] == choices[m].size()) {
            pick[m] = 0;
            ++m;
          }
          if (m == k) {
            break;
          }
        }
      }
      std::size_t x = 0;
      while (x < k && ++a[x] == gg.n_objects()) {
        a[x] = 0;
        ++x;
      }
      if (x == k) {
        break;
      }
    }
    if (locals[u].empty()) {
      // no local datum at a covered point means no descent data at all
      out.full = out.faithful = out.ess_surjective = true;
      out.holds = p.block(cov.base).objects.empty();
      return out;
    }
  }

  // node -> (class, position)
  std::vector<std::vector<std::pair<Idx, Idx>>> node_class(n);
  for (Idx i = 0; i < static_cast<Idx>(n); ++i) {
    node_class[i].resize(cov.parts[i].dom);
  }
  for (Idx u = 0; u < cov.base; ++u) {
    for (Idx pos = 0; pos < static_cast<Idx>(classes[u].size()); ++pos) {
      auto [i, x] = classes[u][pos];
      node_class[i][x] = {u, pos};
    }
  }

  auto const& base_block = p.block(cov.base);

  // essential surjectivity: every enumerated datum glues, verified directly
  out.ess_surjective = true;
  std::vector<std::size_t> odo(cov.base, 0);
  std::size_t total = 0;
  while (true) {
    ++total;
    // verify the datum's cocycle and its gluing onto the root sections
    std::vector<Idx> glue(cov.base);
    bool datum_ok = true;
    for (Idx u = 0; u < cov.base && datum_ok; ++u) {
      auto const& loc = locals[u][odo[u]];
      glue[u] = loc.a[0];
      std::size_t k = loc.a.size();
      for (std::size_t m1 = 0; m1 < k && datum_ok; ++m1) {
        for (std::size_t m2 = 0; m2 < k && datum_ok; ++m2) {
          // phi from node m2's object to node m1's object
          Idx phi = gg.compose(loc.e[m2], gg.inverse(loc.e[m1]));
          // the glue transport inverse(e[m1]) must intertwine phi
          if (gg.compose(gg.inverse(loc.e[m2]), phi) != gg.inverse(loc.e[m1])) {
            datum_ok = false;
          }
          for (std::size_t m3 = 0; m3 < k && datum_ok; ++m3) {
            Idx phi23 = gg.compose(loc.e[m3], gg.inverse(loc.e[m2]));
            Idx phi13 = gg.compose(loc.e[m3], gg.inverse(loc.e[m1]));
            if (gg.compose(phi23, phi) != phi13) {
              datum_ok = false;
            }
          }
        }
      }
    }
    if (datum_ok && !base_block.object_index.count(glue)) {
      throw CapExceededError("bg_stack_condition: glued section exceeds the carrier cap");
    }
    if (!datum_ok) {
      out.ess_surjective = false;
      out.detail = "a descent datum failed to glue";
      break;
    }
    Idx u = 0;
    while (u < cov.base && ++odo[u] == locals[u].size()) {
      odo[u] = 0;
      ++u;
    }
    if (u == cov.base) {
      break;
    }
  }
  out.descent_objects = total;

  // faithfulness: restrict each global morphism to its per-node components
  // and reconstruct it from the class roots; a collision would survive
  out.faithful = true;
  for (auto const& [s, t, w] : base_block.morphisms) {
    (void)s;
    (void)t;
    // components of the restricted family, one per covering node
    std::vector<std::vector<Idx>> theta(n);
    for (Idx i = 0; i < static_cast<Idx>(n); ++i) {
      theta[i].resize(cov.parts[i].dom);
      for (Idx x = 0; x < cov.parts[i].dom; ++x) {
        theta[i][x] = w[cov.parts[i](x)];
      }
    }
    std::vector<Idx> rebuilt(cov.base);
    for (Idx u = 0; u < cov.base; ++u) {
      auto [i, x] = classes[u].front();
      rebuilt[u] = theta[i][x];
    }
    if (rebuilt != w) {
      out.faithful = false;
      out.detail = "a global morphism is not determined by its restrictions";
      break;
    }
  }

  // fullness: every compatible family comes from a global morphism
  out.full = true;
  for (Idx s = 0; s < static_cast<Idx>(base_block.objects.size()) && out.full; ++s) {
    for (Idx t = 0; t < static_cast<Idx>(base_block.objects.size()) && out.full; ++t) {
      auto const& rs = base_block.objects[s];
      auto const& rt = base_block.objects[t];
      std::vector<std::vector<Idx>> choices(cov.base);
      bool any = true;
      for (Idx u = 0; u < cov.base && any; ++u) {
        choices[u] = gg.hom(rs[u], rt[u]);
        any = !choices[u].empty();
      }
      if (!any) {
        continue;
      }
      std::vector<Idx> pick(cov.base, 0);
      while (out.full) {
        std::vector<Idx> w(cov.base);
        for (Idx u = 0; u < cov.base; ++u) {
          w[u] = choices[u][pick[u]];
        }
        // the candidate family theta_i(x) = w[sigma_i(x)] must be a global
        // morphism: exactly the statement that w indexes a morphism of F(U)
        if (!base_block.morphism_index.count({s, t, w})) {
          out.full = false;
          out.detail = "a compatible family has no global preimage";
          break;
        }
        Idx u = 0;
        while (u < cov.base && ++pick[u] == choices[u].size()) {
          pick[u] = 0;
          ++u;
        }
        if (u == cov.base) {
          break;
        }
      }
    }
  }

  out.holds = out.full && out.faithful && out.ess_surjective;
  return out;
}

//! Whether the comparison functor into the descent category is an
//! equivalence. Dispatches to a pointwise engine for classifying presheaves
//! when the descent category is too large to materialise.
inline StackVerdict check_stack_condition(GroupoidPresheaf const& p, Covering const& cov,
                                          DescentLimits limits = {}) {
  if (auto const* bg = dynamic_cast<BGPresheaf const*>(&p)) {
    if (jointly_surjective(cov) && bg->structure_groupoid()->n_objects() > 0) {
      return bg_stack_condition(*bg, cov);
    }
  }
  auto dc = descent_category(p, cov, limits);
  auto cmp = comparison_functor(p, cov, dc);
  auto v = is_equivalence(cmp);
  StackVerdict out;
  out.full = v.full;
  out.faithful = v.faithful;
  out.ess_surjective = v.ess_surjective;
  out.holds = v.equivalence;
  if (!out.holds) {
    out.detail = detail::cat("full=", out.full, " faithful=", out.faithful,
                             " ess_surjective=", out.ess_surjective);
  }
  return out;
}

}  // namespace grpd

