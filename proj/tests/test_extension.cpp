#include <catch2/catch_amalgamated.hpp>

#include "grpd/corpus.hpp"
#include "oracles.hpp"

using namespace grpd;

namespace {

GroupoidExtension z4_to_z2() {
  auto z4 = share(group_groupoid(cyclic_group(4)));
  auto z2 = share(group_groupoid(cyclic_group(2)));
  return *validate_extension(z4, z2, {0, 1, 0, 1});
}

}  // namespace

TEST_CASE("quotient and identity extensions validate", "[extension]") {
  auto ext = z4_to_z2();
  CHECK(ext.arrow_map.size() == 4);

  auto g = share(action_groupoid(test::swap_action()));
  std::vector<Idx> id(g->n_morphisms());
  for (Idx m = 0; m < g->n_morphisms(); ++m) {
    id[m] = m;
  }
  CHECK(validate_extension(g, g, id).ok());
}

TEST_CASE("inclusions are not extensions", "[extension]") {
  auto z2 = share(group_groupoid(cyclic_group(2)));
  auto z4 = share(group_groupoid(cyclic_group(4)));
  auto v = validate_extension(z2, z4, {0, 2});
  REQUIRE_FALSE(v.ok());
  CHECK(v.report.has("NotSurjective"));
}

TEST_CASE("object sets must agree", "[extension]") {
  auto g = share(discrete_groupoid(2));
  auto h = share(discrete_groupoid(3));
  auto v = validate_extension(g, h, {0, 1});
  REQUIRE_FALSE(v.ok());
  CHECK(v.report.has("ObjectSetMismatch"));
}

TEST_CASE("fiber product of Z4 -> Z2 has the stated shape", "[extension][fiber]") {
  auto ext = z4_to_z2();
  auto fp = fiber_product_groupoid(ext);
  CHECK(fp.groupoid->n_objects() == 2);       // = |H1|
  CHECK(fp.groupoid->n_morphisms() == 32);    // 4 * 2 * 4
  CHECK(validate_groupoid(fp.groupoid->to_raw()).ok());
  CHECK(is_transitive(*fp.groupoid));
}

TEST_CASE("fiber product object count is the base arrow count", "[extension][fiber]") {
  for (auto const& s : corpus::group_surjections(8)) {
    auto ext = corpus::extension_of_surjection(s);
    auto fp = fiber_product_groupoid(ext);
    CHECK(fp.groupoid->n_objects() == ext.base->n_morphisms());
  }
}

TEST_CASE("connector view has the stated source and target", "[extension][fiber]") {
  auto ext = z4_to_z2();
  auto fp = fiber_product_groupoid(ext);
  auto const& b = *ext.base;
  for (Idx m = 0; m < fp.groupoid->n_morphisms(); ++m) {
    auto [g1, c, g2] = fp.connector_view(m);
    // src = c . F(g1), tgt = F(g2) . c
    CHECK(fp.groupoid->src(m) == b.compose(ext.arrow_map[g1], c));
    CHECK(fp.groupoid->tgt(m) == b.compose(c, ext.arrow_map[g2]));
  }
}

TEST_CASE("identity extension's fiber product is the arrow category shape", "[extension][fiber]") {
  auto g = share(action_groupoid(test::swap_action()));
  std::vector<Idx> id(g->n_morphisms());
  for (Idx m = 0; m < g->n_morphisms(); ++m) {
    id[m] = m;
  }
  auto ext = *validate_extension(g, g, id);
  auto fp = fiber_product_groupoid(ext);
  CHECK(fp.groupoid->n_objects() == g->n_morphisms());
  CHECK(validate_groupoid(fp.groupoid->to_raw()).ok());
  CHECK(is_transitive(*fp.groupoid));
}

TEST_CASE("diagonal functor is a faithful functor with the stated encoding", "[extension]") {
  auto ext = z4_to_z2();
  auto fp = fiber_product_groupoid(ext);
  auto d = diagonal_functor(ext, fp);
  REQUIRE(validate_functor(d).ok());
  // identities map to identity triples
  for (Idx a = 0; a < ext.total->n_objects(); ++a) {
    CHECK(fp.groupoid->is_identity(d.f1[ext.total->ident(a)]));
  }
  // encoding: a in Z4 goes to (a, e, a)
  for (Idx m = 0; m < 4; ++m) {
    CHECK(fp.morphs[d.f1[m]] == std::array<Idx, 3>{m, ext.base->ident(0), m});
  }
  // faithfulness by injectivity scan
  std::set<Idx> images(d.f1.begin(), d.f1.end());
  CHECK(images.size() == d.f1.size());
}

TEST_CASE("diagonal functor is faithful on the whole corpus", "[extension][property]") {
  for (auto const& ext : corpus::extension_corpus(8)) {
    auto fp = fiber_product_groupoid(ext);
    auto d = diagonal_functor(ext, fp);
    REQUIRE(validate_functor(d).ok());
    std::set<Idx> images(d.f1.begin(), d.f1.end());
    CHECK(images.size() == d.f1.size());
  }
}

TEST_CASE("gerbe conditions hold for extensions and fail for inclusions", "[extension][gerbe]") {
  auto ext = z4_to_z2();
  auto v = check_gerbe_conditions(ext.functor());
  CHECK(v.objects_lift);
  CHECK(v.arrows_lift);
  CHECK(v.gerbe);

  GroupoidFunctor incl;
  incl.dom = share(group_groupoid(cyclic_group(2)));
  incl.cod = share(group_groupoid(cyclic_group(4)));
  incl.f0 = {0};
  incl.f1 = {0, 2};
  auto w = check_gerbe_conditions(incl);
  CHECK(w.objects_lift);
  CHECK_FALSE(w.arrows_lift);
  CHECK_FALSE(w.gerbe);
  CHECK_FALSE(w.arrow_witness.empty());

  GroupoidFunctor empty;
  empty.dom = share(discrete_groupoid(0));
  empty.cod = share(discrete_groupoid(1));
  auto u = check_gerbe_conditions(empty);
  CHECK_FALSE(u.objects_lift);
}

TEST_CASE("transitivity of the fiber product across the corpus", "[extension][property]") {
  for (auto const& ext : corpus::extension_corpus(8)) {
    CHECK(is_transitive(*fiber_product_groupoid(ext).groupoid));
  }
}

TEST_CASE("fiber product transitivity needs a connected base", "[extension][boundary]") {
  // Z4 -> Z2 over two fixed points: the base splits into two components and
  // so does the fiber product; the transitivity conclusion is sharp
  auto s = corpus::GroupSurjection{cyclic_group(4), cyclic_group(2), {0, 1, 0, 1}};
  auto trivial = corpus::quotient_actions(s.quotient, 2).front();
  REQUIRE_FALSE(corpus::action_is_transitive(trivial));
  auto ext = corpus::induced_action_extension(s, trivial);
  CHECK_FALSE(is_transitive(*ext.base));
  CHECK_FALSE(is_transitive(*fiber_product_groupoid(ext).groupoid));
}

TEST_CASE("every corpus extension passes the gerbe check", "[extension][property]") {
  for (auto const& ext : corpus::extension_corpus(8)) {
    CHECK(check_gerbe_conditions(ext.functor()).gerbe);
  }
}

TEST_CASE("induced extension round-trips through verify_extension_morita", "[extension]") {
  auto ext = z4_to_z2();
  auto induced = induced_extension(ext.functor());
  REQUIRE(induced.ok());
  auto witness = induced_roundtrip_witness(ext, *induced);
  auto verdict = verify_extension_morita(ext, *induced, witness);
  CHECK(verdict.equivalent);
}

TEST_CASE("induced extension of the identity functor", "[extension]") {
  auto g = share(group_groupoid(cyclic_group(3)));
  auto induced = induced_extension(identity_functor(g));
  REQUIRE(induced.ok());
  CHECK(induced->total->n_morphisms() == induced->base->n_morphisms());
}

TEST_CASE("induced extension fails on non-full functors with a triple witness", "[extension]") {
  GroupoidFunctor incl;
  incl.dom = share(group_groupoid(cyclic_group(2)));
  incl.cod = share(group_groupoid(cyclic_group(4)));
  incl.f0 = {0};
  incl.f1 = {0, 2};
  auto v = induced_extension(incl);
  REQUIRE_FALSE(v.ok());
  CHECK(v.report.has("NotFull"));

  GroupoidFunctor point;
  point.dom = share(discrete_groupoid(1));
  point.cod = share(discrete_groupoid(2));
  point.f0 = {0};
  point.f1 = {0};
  auto w = induced_extension(point);
  REQUIRE_FALSE(w.ok());
  CHECK(w.report.has("NotSurjectiveOnObjects"));
}

TEST_CASE("pullback extension along a fold doubles the object set", "[extension]") {
  auto ext = z4_to_z2();
  auto pulled = pullback_extension(ext, {0, 0}, 2);
  CHECK(pulled.extension.total->n_morphisms() == 16);  // 4 * |Z4|
  CHECK(pulled.extension.base->n_morphisms() == 8);    // 4 * |Z2|
  CHECK(is_morita_morphism(pulled.projections.on_total).is_morita);
  CHECK(is_morita_morphism(pulled.projections.on_base).is_morita);

  // the projections witness Morita equivalence of the two extensions
  ExtensionMoritaWitness w{pulled.extension, pulled.projections,
                           {identity_functor(pulled.extension.total),
                            identity_functor(pulled.extension.base)}};
  CHECK(verify_extension_morita(ext, pulled.extension, w).equivalent);
}

TEST_CASE("verify_extension_morita notices a broken square", "[extension]") {
  auto ext = z4_to_z2();
  auto pulled = pullback_extension(ext, {0, 0}, 2);
  ExtensionMoritaWitness w{pulled.extension, pulled.projections,
                           {identity_functor(pulled.extension.total),
                            identity_functor(pulled.extension.base)}};
  // break one arrow of the first leg's base functor
  auto& f1 = w.to_first.on_base.f1;
  f1[0] = f1[0] == 0 ? 1 : 0;
  auto verdict = verify_extension_morita(ext, pulled.extension, w);
  CHECK_FALSE(verdict.equivalent);
  CHECK_FALSE(verdict.failure.empty());
}

TEST_CASE("identity witness verifies an extension against itself", "[extension]") {
  auto ext = z4_to_z2();
  ExtensionMoritaWitness w{ext,
                           {identity_functor(ext.total), identity_functor(ext.base)},
                           {identity_functor(ext.total), identity_functor(ext.base)}};
  CHECK(verify_extension_morita(ext, ext, w).equivalent);
}

TEST_CASE("round trip is Morita-equivalent across the corpus", "[extension][property]") {
  for (auto const& ext : corpus::extension_corpus(8)) {
    auto induced = induced_extension(ext.functor());
    REQUIRE(induced.ok());
    auto witness = induced_roundtrip_witness(ext, *induced);
    CHECK(verify_extension_morita(ext, *induced, witness).equivalent);
  }
}

TEST_CASE("transitive fiber product reduces to its isotropy group", "[extension][morita]") {
  auto ext = z4_to_z2();
  auto fp = fiber_product_groupoid(ext);
  auto red = transitive_reduction(fp.groupoid, 0);
  CHECK(verify_morita_witness(red.witness));
  auto decision = morita_equivalent(fp.groupoid, red.isotropy_groupoid);
  CHECK(decision.equivalent);
}

TEST_CASE("non-full corpus members all fail arrows_lift", "[extension][property]") {
  auto bad = corpus::non_full_inclusions(8);
  CHECK(bad.size() >= 20);
  for (auto const& f : bad) {
    auto v = check_gerbe_conditions(f);
    CHECK_FALSE(v.arrows_lift);
  }
}

TEST_CASE("corpus is reasonably sized and all extensions are sealed", "[extension][corpus]") {
  auto corpus16 = corpus::group_surjections(16);
  CHECK(corpus16.size() >= 50);
  auto exts = corpus::extension_corpus(8);
  CHECK(exts.size() >= 30);
}
