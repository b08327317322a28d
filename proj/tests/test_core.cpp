#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace grpd;

namespace {

RawCategory terminal_category() {
  RawCategory raw;
  raw.n_objects = 1;
  raw.src = {0};
  raw.tgt = {0};
  raw.ident = {0};
  raw.compose = {{0, 0, 0}};
  return raw;
}

RawCategory z2_category() {
  RawCategory raw;
  raw.n_objects = 1;
  raw.src = {0, 0};
  raw.tgt = {0, 0};
  raw.ident = {0};  // morphism 0 = e, morphism 1 = a
  raw.compose = {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  return raw;
}

}  // namespace

TEST_CASE("terminal category validates", "[core]") {
  auto v = validate_category(terminal_category());
  REQUIRE(v.ok());
  CHECK(v->n_objects() == 1);
  CHECK(v->n_morphisms() == 1);
}

TEST_CASE("Z2 as a one-object category validates", "[core]") {
  auto v = validate_category(z2_category());
  REQUIRE(v.ok());
  CHECK(v->compose(1, 1) == 0);
}

TEST_CASE("mutating one compose entry is caught with named violations", "[core]") {
  auto raw = z2_category();
  raw.compose[1] = {0, 1, 0};  // claim a . e = e
  auto v = validate_category(raw);
  REQUIRE_FALSE(v.ok());
  CHECK((v.report.has("UnitViolation") || v.report.has("AssociativityViolation")));
}

TEST_CASE("a.a = a turns Z2 into a monoid: category fine, groupoid not", "[core]") {
  auto raw = z2_category();
  raw.compose[3] = {1, 1, 1};
  auto cat = validate_category(raw);
  REQUIRE(cat.ok());
  RawGroupoid g{raw, {0, 1}};
  auto v = validate_groupoid(g);
  REQUIRE_FALSE(v.ok());
  CHECK(v.report.has("NotInvertible"));
}

TEST_CASE("missing composable pair is rejected", "[core]") {
  auto raw = z2_category();
  raw.compose.pop_back();
  auto v = validate_category(raw);
  REQUIRE_FALSE(v.ok());
  CHECK(v.report.has("CompositionDomainMismatch"));
}

TEST_CASE("dangling indices are rejected before axiom checks", "[core]") {
  auto raw = z2_category();
  raw.src[1] = 7;
  auto v = validate_category(raw);
  REQUIRE_FALSE(v.ok());
  CHECK(v.report.has("DanglingIndex"));
}

TEST_CASE("groupoid validation on the discrete groupoid", "[core]") {
  auto g = discrete_groupoid(3);
  auto v = validate_groupoid(g.to_raw());
  REQUIRE(v.ok());
  CHECK(*v == g);
}

TEST_CASE("Z2 with inv(a)=a is a groupoid", "[core]") {
  RawGroupoid raw{z2_category(), {0, 1}};
  auto v = validate_groupoid(raw);
  REQUIRE(v.ok());
  CHECK(v->inverse(1) == 1);
}

TEST_CASE("truncated monoid {e,x}, x.x = x is not a groupoid", "[core]") {
  auto raw = z2_category();
  raw.compose[3] = {1, 1, 1};
  RawGroupoid g{raw, {0, 1}};
  auto v = validate_groupoid(g);
  REQUIRE_FALSE(v.ok());
  REQUIRE(v.report.has("NotInvertible"));
}

TEST_CASE("discrete groupoid corners", "[core]") {
  auto empty = discrete_groupoid(0);
  CHECK(empty.n_objects() == 0);
  CHECK(empty.n_morphisms() == 0);
  CHECK(validate_groupoid(empty.to_raw()).ok());

  auto pt = discrete_groupoid(1);
  CHECK(pt.n_objects() == 1);
  CHECK(pt.n_morphisms() == 1);

  auto three = discrete_groupoid(3);
  CHECK(three.n_morphisms() == 3);
  for (Idx m = 0; m < 3; ++m) {
    CHECK(three.is_identity(m));
  }
}

TEST_CASE("group groupoids", "[core]") {
  CHECK(group_groupoid(trivial_group()).n_morphisms() == 1);

  auto z2 = group_groupoid(cyclic_group(2));
  CHECK(z2.n_objects() == 1);
  CHECK(z2.n_morphisms() == 2);

  auto s3_table = symmetric_group(3);
  auto s3 = group_groupoid(s3_table);
  CHECK(s3.n_morphisms() == 6);
  // composition table round-trips through the groupoid
  for (Idx a = 0; a < 6; ++a) {
    for (Idx b = 0; b < 6; ++b) {
      CHECK(s3.compose(a, b) == s3_table.product(a, b));
    }
  }
  bool abelian = true;
  for (Idx a = 0; a < 6 && abelian; ++a) {
    for (Idx b = 0; b < 6; ++b) {
      if (s3.compose(a, b) != s3.compose(b, a)) {
        abelian = false;
        break;
      }
    }
  }
  CHECK_FALSE(abelian);
}

TEST_CASE("group_groupoid rejects non-groups", "[core]") {
  GroupTable bad{2, {0, 1, 1, 1}};
  CHECK_THROWS_AS(group_groupoid(bad), PreconditionError);
}

TEST_CASE("action groupoid of Z2 swapping two points", "[core]") {
  auto g = action_groupoid(test::swap_action());
  CHECK(g.n_objects() == 2);
  CHECK(g.n_morphisms() == 4);
  CHECK(is_transitive(g));
  auto comps = components_and_isotropy(g);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].isotropy.n == 1);
  CHECK(validate_groupoid(g.to_raw()).ok());
}

TEST_CASE("trivial action of Z2 on one point is the group groupoid", "[core]") {
  auto g = action_groupoid(test::trivial_z2_action(1));
  auto z2 = group_groupoid(cyclic_group(2));
  CHECK(g == z2);
}

TEST_CASE("Z2 acting trivially on two points: two components with isotropy Z2", "[core]") {
  auto g = action_groupoid(test::trivial_z2_action(2));
  CHECK_FALSE(is_transitive(g));
  auto comps = components_and_isotropy(g);
  REQUIRE(comps.size() == 2);
  for (auto const& c : comps) {
    CHECK(c.isotropy.n == 2);
    CHECK(groups_isomorphic(c.isotropy, cyclic_group(2)));
  }
}

TEST_CASE("action groupoid rejects non-actions", "[core]") {
  GroupAction bad;
  bad.group = cyclic_group(2);
  bad.n_points = 2;
  bad.act = {0, 0, 1, 0};  // 0.a = 0 but 1.a = 0: a.a does not restore
  CHECK_THROWS_AS(action_groupoid(bad), PreconditionError);
  auto v = validate_group_action(bad);
  REQUIRE_FALSE(v.ok());
  CHECK(v.report.has("NotAnAction"));
}

TEST_CASE("components and isotropy on standard examples", "[core]") {
  auto disc = components_and_isotropy(discrete_groupoid(3));
  REQUIRE(disc.size() == 3);
  for (auto const& c : disc) {
    CHECK(c.isotropy.n == 1);
  }

  auto pair3 = components_and_isotropy(pair_groupoid(3));
  REQUIRE(pair3.size() == 1);
  CHECK(pair3[0].objects == std::vector<Idx>{0, 1, 2});
  CHECK(pair3[0].isotropy.n == 1);
  // all hom-sets of the pair groupoid are singletons
  auto pg = pair_groupoid(3);
  for (Idx a = 0; a < 3; ++a) {
    for (Idx b = 0; b < 3; ++b) {
      CHECK(pg.hom(a, b).size() == 1);
    }
  }
}

TEST_CASE("transitive groupoid constructor matches its spec pieces", "[core]") {
  auto t = transitive_groupoid(3, cyclic_group(2));
  CHECK(t.n_objects() == 3);
  CHECK(t.n_morphisms() == 18);
  CHECK(is_transitive(t));
  CHECK(validate_groupoid(t.to_raw()).ok());
  auto comps = components_and_isotropy(t);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].isotropy.n == 2);
}

TEST_CASE("disjoint union splits into components", "[core]") {
  auto g = disjoint_union(pair_groupoid(2), group_groupoid(cyclic_group(3)));
  CHECK(g.n_objects() == 3);
  CHECK(g.n_morphisms() == 7);
  CHECK(validate_groupoid(g.to_raw()).ok());
  auto comps = components_and_isotropy(g);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].isotropy.n == 1);
  CHECK(comps[1].isotropy.n == 3);
}

TEST_CASE("single-entry mutations of constructor tables are rejected", "[core]") {
  std::mt19937_64 rng(20240817);
  std::vector<FiniteGroupoid> pool;
  pool.push_back(discrete_groupoid(3));
  pool.push_back(group_groupoid(cyclic_group(4)));
  pool.push_back(group_groupoid(symmetric_group(3)));
  pool.push_back(action_groupoid(test::swap_action()));
  pool.push_back(transitive_groupoid(2, cyclic_group(2)));
  for (auto const& g : pool) {
    auto raw = g.to_raw();
    REQUIRE(validate_groupoid(raw).ok());
    for (int trial = 0; trial < 20; ++trial) {
      auto mutated = raw;
      Idx n_mor = mutated.cat.n_morphisms();
      if (n_mor < 2) {
        continue;
      }
      switch (rng() % 4) {
        case 0: {
          Idx m = rng() % n_mor;
          mutated.cat.src[m] = (mutated.cat.src[m] + 1 + rng() % 7) % mutated.cat.n_objects;
          break;
        }
        case 1: {
          auto& e = mutated.cat.compose[rng() % mutated.cat.compose.size()];
          e[2] = (e[2] + 1 + rng() % (n_mor - 1)) % n_mor;
          break;
        }
        case 2: {
          Idx m = rng() % n_mor;
          mutated.inv[m] = (mutated.inv[m] + 1 + rng() % (n_mor - 1)) % n_mor;
          break;
        }
        default: {
          Idx a = rng() % mutated.cat.n_objects;
          mutated.cat.ident[a] = (mutated.cat.ident[a] + 1 + rng() % (n_mor - 1)) % n_mor;
          break;
        }
      }
      if (mutated.cat.src == raw.cat.src && mutated.cat.compose == raw.cat.compose &&
          mutated.inv == raw.inv && mutated.cat.ident == raw.cat.ident) {
        continue;
      }
      auto v = validate_groupoid(mutated);
      INFO("mutation trial " << trial);
      CHECK_FALSE(v.ok());
      CHECK_FALSE(v.report.violations.empty());
    }
  }
}
