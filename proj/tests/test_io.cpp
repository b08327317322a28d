#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <fstream>

#include "grpd/corpus.hpp"
#include "grpd/io.hpp"
#include "helpers.hpp"

using namespace grpd;
using grpd::io::json;

namespace {

json z2_file() {
  return json::parse(R"({
    "type": "groupoid",
    "objects": ["*"],
    "morphisms": [{"id": "e", "src": "*", "tgt": "*"},
                  {"id": "a", "src": "*", "tgt": "*"}],
    "compose": [["e","e","e"], ["e","a","a"], ["a","e","a"], ["a","a","e"]],
    "identity": {"*": "e"},
    "inverse": {"e": "e", "a": "a"}
  })");
}

std::string write_temp(std::string const& name, json const& j) {
  std::string path = std::string("/tmp/grpd_io_") + name + ".json";
  std::ofstream out(path);
  out << j.dump(2);
  return path;
}

int run_cli(std::string const& args) {
  std::string cmd = std::string(GRPD_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("groupoid files parse and validate", "[io]") {
  auto v = io::parse_groupoid(z2_file());
  REQUIRE(v.ok());
  CHECK(v->groupoid->n_morphisms() == 2);
}

TEST_CASE("unknown fields are hard errors", "[io]") {
  auto j = z2_file();
  j["extra"] = 1;
  CHECK_THROWS_AS(io::parse_groupoid(j), io::ParseError);
}

TEST_CASE("dangling references are hard errors", "[io]") {
  auto j = z2_file();
  j["identity"]["*"] = "zz";
  CHECK_THROWS_AS(io::parse_groupoid(j), io::ParseError);
}

TEST_CASE("axiom violations surface as reports, not exceptions", "[io]") {
  auto j = z2_file();
  j["inverse"]["a"] = "e";
  auto v = io::parse_groupoid(j);
  REQUIRE_FALSE(v.ok());
  CHECK(v.report.has("NotInvertible"));
}

TEST_CASE("serialisation round-trips to an equal value", "[io][property]") {
  std::vector<FiniteGroupoid> pool;
  pool.push_back(discrete_groupoid(3));
  pool.push_back(group_groupoid(symmetric_group(3)));
  pool.push_back(action_groupoid(test::swap_action()));
  pool.push_back(transitive_groupoid(2, cyclic_group(2)));
  for (auto const& g : pool) {
    auto named = io::name_groupoid(share(g));
    auto emitted = io::to_json(named);
    auto reparsed = io::parse_groupoid(emitted);
    REQUIRE(reparsed.ok());
    CHECK(*reparsed->groupoid == *named.groupoid);
    CHECK(io::to_json(*reparsed.value) == emitted);
  }
}

TEST_CASE("extension files round-trip", "[io]") {
  auto ext = corpus::extension_of_surjection({cyclic_group(4), cyclic_group(2), {0, 1, 0, 1}});
  io::NamedExtension named;
  named.total = io::name_groupoid(ext.total);
  named.base = io::name_groupoid(ext.base);
  named.extension = ext;
  auto emitted = io::to_json(named);
  auto reparsed = io::parse_extension(emitted);
  REQUIRE(reparsed.ok());
  CHECK(reparsed->extension.arrow_map == ext.arrow_map);
  CHECK(io::to_json(*reparsed.value) == emitted);
}

TEST_CASE("category files validate without an inverse block", "[io]") {
  json monoid{{"type", "category"},
              {"objects", {"*"}},
              {"morphisms",
               {{{"id", "e"}, {"src", "*"}, {"tgt", "*"}},
                {{"id", "x"}, {"src", "*"}, {"tgt", "*"}}}},
              {"compose", {{"e", "e", "e"}, {"e", "x", "x"}, {"x", "e", "x"}, {"x", "x", "x"}}},
              {"identity", {{"*", "e"}}}};
  auto v = io::parse_category(monoid);
  CHECK(v.ok());  // x.x = x is a perfectly good category
  auto path = write_temp("monoid", monoid);
  CHECK(run_cli("validate " + path) == 0);
}

TEST_CASE("cli validates, reports failures, and rejects garbage", "[io][cli]") {
  auto good = write_temp("good", z2_file());
  CHECK(run_cli("validate " + good) == 0);

  auto bad = z2_file();
  bad["inverse"]["a"] = "e";
  auto bad_path = write_temp("bad", bad);
  CHECK(run_cli("validate " + bad_path) == 1);

  auto junk = z2_file();
  junk["mystery"] = true;
  auto junk_path = write_temp("junk", junk);
  CHECK(run_cli("validate " + junk_path) == 2);

  CHECK(run_cli("validate /tmp/grpd_io_missing_file.json") == 2);
}

TEST_CASE("cli morita distinguishes the stated pair", "[io][cli]") {
  auto disc3 = io::to_json(io::name_groupoid(share(discrete_groupoid(3))));
  auto triv = io::to_json(io::name_groupoid(share(group_groupoid(trivial_group()))));
  auto pair3 = io::to_json(io::name_groupoid(share(pair_groupoid(3))));
  auto a = write_temp("disc3", disc3);
  auto b = write_temp("triv", triv);
  auto c = write_temp("pair3", pair3);
  CHECK(run_cli("morita " + a + " " + b) == 1);
  CHECK(run_cli("morita " + c + " " + b) == 0);
}

TEST_CASE("cli gerbe-check and extension-induce agree on quotients", "[io][cli]") {
  auto ext = corpus::extension_of_surjection({cyclic_group(4), cyclic_group(2), {0, 1, 0, 1}});
  io::NamedExtension named;
  named.total = io::name_groupoid(ext.total);
  named.base = io::name_groupoid(ext.base);
  named.extension = ext;
  auto path = write_temp("ext", io::to_json(named));
  CHECK(run_cli("gerbe-check " + path) == 0);
  CHECK(run_cli("--format structured gerbe-check " + path) == 0);

  // a non-full functor: the inclusion of Z2 into Z4
  io::NamedFunctor incl;
  incl.dom = io::name_groupoid(share(group_groupoid(cyclic_group(2))));
  incl.cod = io::name_groupoid(share(group_groupoid(cyclic_group(4))));
  incl.functor.dom = incl.dom.groupoid;
  incl.functor.cod = incl.cod.groupoid;
  incl.functor.f0 = {0};
  incl.functor.f1 = {0, 2};
  auto incl_path = write_temp("incl", io::to_json(incl));
  CHECK(run_cli("gerbe-check " + incl_path) == 1);
  CHECK(run_cli("extension-induce " + incl_path) == 1);

  io::NamedFunctor idf;
  idf.dom = named.total;
  idf.cod = named.total;
  idf.functor = identity_functor(ext.total);
  auto id_path = write_temp("idf", io::to_json(idf));
  CHECK(run_cli("extension-induce " + id_path) == 0);
}

TEST_CASE("cli pullback and compose run end to end", "[io][cli]") {
  // bundle pullback along a two-point fold
  auto g = share(group_groupoid(cyclic_group(2)));
  auto bundle = trivial_bundle(g);
  io::NamedBundle nb;
  nb.groupoid = io::name_groupoid(g);
  nb.base.add("*");
  nb.carrier.add("c0");
  nb.carrier.add("c1");
  nb.bundle = bundle;
  auto bundle_path = write_temp("bundle", io::to_json(nb));

  json map_file{{"type", "map"},
                {"dom", {"n0", "n1"}},
                {"cod", {"*"}},
                {"map", {{"n0", "*"}, {"n1", "*"}}}};
  auto map_path = write_temp("fold", map_file);
  CHECK(run_cli("pullback " + bundle_path + " " + map_path) == 0);

  // bibundle composition of two quotient functors
  auto z8 = share(group_groupoid(cyclic_group(8)));
  auto z4 = share(group_groupoid(cyclic_group(4)));
  auto psi = bibundle_of_functor(test::cyclic_quotient(z8, z4, 8, 4));
  auto phi = bibundle_of_functor(test::cyclic_quotient(z4, g, 4, 2));
  io::NamedBibundle np;
  np.left_groupoid = io::name_groupoid(z8);
  np.right_groupoid = io::name_groupoid(z4);
  for (Idx i = 0; i < psi.carrier_size(); ++i) {
    np.carrier.add("p" + std::to_string(i));
  }
  np.bibundle = psi;
  io::NamedBibundle nq;
  nq.left_groupoid = io::name_groupoid(z4);
  nq.right_groupoid = io::name_groupoid(g);
  for (Idx i = 0; i < phi.carrier_size(); ++i) {
    nq.carrier.add("q" + std::to_string(i));
  }
  nq.bibundle = phi;
  auto p_path = write_temp("psi", io::to_json(np));
  auto q_path = write_temp("phi", io::to_json(nq));
  CHECK(run_cli("compose " + p_path + " " + q_path) == 0);
  CHECK(run_cli("compose " + q_path + " " + p_path) == 2);  // middle mismatch
}

TEST_CASE("cli descent-check prints the three verdicts", "[io][cli]") {
  auto z2 = io::to_json(io::name_groupoid(share(group_groupoid(cyclic_group(2)))));
  json scenario{{"type", "descent"},
                {"structure", z2},
                {"base", {"u0", "u1"}},
                {"cover", {{"u0"}, {"u1"}, {"u0", "u1"}}}};
  auto path = write_temp("descent", scenario);
  CHECK(run_cli("descent-check " + path) == 0);

  // the constant presheaf fails exactly at the empty cover of the empty set
  json bad{{"type", "descent"},
           {"structure", z2},
           {"base", json::array()},
           {"cover", json::array()},
           {"presheaf", "constant"}};
  auto bad_path = write_temp("descent_bad", bad);
  CHECK(run_cli("descent-check " + bad_path) == 1);
}

TEST_CASE("cli split emits matrices or INFEASIBLE", "[io][cli]") {
  json ses{{"type", "ses"},
           {"groupoid", z2_file()},
           {"dims",
            {{"sub", {{"*", 1}}}, {"middle", {{"*", 2}}}, {"quotient", {{"*", 1}}}}},
           {"matrices",
            {{"sub", {{"e", {"1"}}, {"a", {"1"}}}},
             {"middle", {{"e", {"1", "0", "0", "1"}}, {"a", {"0", "1", "1", "0"}}}},
             {"quotient", {{"e", {"1"}}, {"a", {"-1"}}}}}},
           {"j", {{"*", {"1", "1"}}}},
           {"q", {{"*", {"1/2", "-1/2"}}}}};
  auto path = write_temp("ses", ses);
  CHECK(run_cli("split " + path) == 0);
  CHECK(run_cli("--format structured split " + path) == 0);
}
