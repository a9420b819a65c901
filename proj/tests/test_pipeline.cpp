#include <catch2/catch_amalgamated.hpp>

#include "bblab/pipeline.hpp"

using namespace bblab;

namespace {

Pipeline& shared_pipeline() {
  static Pipeline p;
  return p;
}

const VerificationReport& find_report(const std::vector<VerificationReport>& rs,
                                      const std::string& anchor) {
  for (const auto& r : rs)
    if (r.anchor == anchor) return r;
  throw std::runtime_error("missing anchor " + anchor);
}

void require_all_pass(const std::vector<VerificationReport>& rs) {
  for (const auto& r : rs) {
    CAPTURE(r.check, r.anchor, r.expected.dump(), r.actual.dump());
    REQUIRE(r.status == "pass");
  }
}

}  // namespace

TEST_CASE("ledger solves a unique integer system") {
  DimensionLedger l{{"x", "y"}, {}};
  l.add({1, -1}, 14);
  l.add({-2, 1}, -29);
  auto sol = l.solve();
  REQUIRE(sol.has_value());
  CHECK((*sol)[0] == 15);
  CHECK((*sol)[1] == 1);
}

TEST_CASE("ledger rejects bad systems") {
  SECTION("inconsistent") {
    DimensionLedger l{{"x"}, {}};
    l.add({1}, 3);
    l.add({2}, 7);
    CHECK_FALSE(l.solve().has_value());
  }
  SECTION("underdetermined") {
    DimensionLedger l{{"x", "y"}, {}};
    l.add({1, 1}, 5);
    CHECK_FALSE(l.solve().has_value());
  }
  SECTION("fractional") {
    DimensionLedger l{{"x"}, {}};
    l.add({2}, 5);
    CHECK_FALSE(l.solve().has_value());
  }
  SECTION("arity mismatch throws") {
    DimensionLedger l{{"x", "y"}, {}};
    CHECK_THROWS_AS(l.add({1}, 0), std::invalid_argument);
  }
  SECTION("redundant consistent row still unique") {
    DimensionLedger l{{"x"}, {}};
    l.add({1}, 4);
    l.add({3}, 12);
    auto sol = l.solve();
    REQUIRE(sol.has_value());
    CHECK((*sol)[0] == 4);
  }
}

TEST_CASE("fujiki family lands on scale two and constant six") {
  FujikiSolution sol = solve_fujiki_constant();
  CHECK(sol.lambda == Rat(2));
  CHECK(sol.constant == Rat(6));
  CHECK(sol.gram.rows() == 16);
  CHECK(sol.gram.is_symmetric());

  // content one: no smaller integral multiple exists
  Int g = 0;
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j)
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), sol.gram.at(i, j).get_mpz_t());
  CHECK(g == 1);

  // the unit-scale family is genuinely fractional, so the rescale is needed
  auto basis = detail::fujiki_family_basis();
  IntMatrix f1 = detail::fujiki_ambient_unit();
  Rat cross = detail::form_pairing(f1, basis[0], basis[7]);
  CHECK(cross.get_den() == 2);

  // difference of the two glue generators is the (-4) surface class
  Int surf = sol.gram.at(14, 14) + sol.gram.at(15, 15) - 2 * sol.gram.at(14, 15);
  CHECK(surf == -4);
  for (std::size_t i = 0; i < 14; ++i)
    CHECK(sol.gram.at(i, 14) == sol.gram.at(i, 15));
}

TEST_CASE("report status comes from exact json equality") {
  auto r = make_report("c", "a", 5, "PAPER", 5);
  CHECK(r.status == "pass");
  auto r2 = make_report("c", "a", 5, "PAPER", 6);
  CHECK(r2.status == "fail");
  auto r3 = make_report("c", "a", nlohmann::json{1, 2}, "DERIVED",
                        nlohmann::json{1, 2});
  CHECK(r3.status == "pass");
  nlohmann::json j = r;
  CHECK(j.at("check") == "c");
  CHECK(j.at("provenance") == "PAPER");
}

TEST_CASE("big integers serialize as decimal strings") {
  Int big;
  mpz_ui_pow_ui(big.get_mpz_t(), 2, 276);
  auto j = detail::int_json(big);
  REQUIRE(j.is_string());
  CHECK(j.get<std::string>().substr(0, 10) == "1214168057");
  CHECK(detail::int_json(Int(-7)) == -7);
  CHECK(detail::rat_json(Rat(3, 4)) == "3/4");
  CHECK(detail::rat_json(Rat(8, 4)) == 2);
}

TEST_CASE("quotient checks pass") {
  auto rs = shared_pipeline().run_check("k3-quotient");
  require_all_pass(rs);
  CHECK(rs.size() == 5);
  CHECK(find_report(rs, "pushforward-half-integrality-rank").actual == 8);
  CHECK(find_report(rs, "glue-search-reaches-unimodular").actual == "found");

  auto ts = shared_pipeline().run_check("torus-quotient");
  require_all_pass(ts);
  CHECK(find_report(ts, "no-extra-halves").provenance == "TRIVIAL");
  CHECK(find_report(ts, "quotient-signature").actual == nlohmann::json({3, 3}));
}

TEST_CASE("nikulin checks pass") {
  auto rs = shared_pipeline().run_check("nikulin");
  require_all_pass(rs);
  CHECK(find_report(rs, "disc-order").actual == 64);
  CHECK(find_report(rs, "root-glue-index").actual == 2);
  CHECK(find_report(rs, "half-sum-square").actual == -4);
}

TEST_CASE("degree-4 checks pass") {
  auto& p = shared_pipeline();
  require_all_pass(p.run_check("h4-gram"));
  auto inv = p.run_check("h4-invariant");
  require_all_pass(inv);
  CHECK(find_report(inv, "orbit-type-census").actual ==
        nlohmann::json({27, 56, 36, 8, 28, 1}));
  auto kt = p.run_check("k-tilde");
  require_all_pass(kt);
  CHECK(find_report(kt, "halved-disc-order").actual ==
        nlohmann::json(68719476736LL));
  require_all_pass(p.run_check("adf-parity"));
  auto hp = p.run_check("h2-primitivity");
  require_all_pass(hp);
  CHECK(find_report(hp, "nonzero-selections-inside").actual == 0);
}

TEST_CASE("fujiki check group passes") {
  auto rs = shared_pipeline().run_check("fujiki-constant");
  require_all_pass(rs);
  CHECK(find_report(rs, "integral-scale").actual == 2);
  CHECK(find_report(rs, "top-intersection-constant").actual == 6);
}

TEST_CASE("final lattice assembles and matches the standard form") {
  auto rs = shared_pipeline().run_check("final-lattice");
  require_all_pass(rs);
  CHECK(rs.size() == 5);
  CHECK(find_report(rs, "assembled-rank").actual == 16);
  CHECK(find_report(rs, "assembled-disc-order").actual == 256);
  CHECK(find_report(rs, "base-change-to-standard-form").actual == true);
}

TEST_CASE("failed certificates block the assembly") {
  Certificates bad;
  bad.parity = true;
  bad.membership = true;
  bad.indivisible = false;
  REQUIRE_FALSE(bad.all());
  auto rs = shared_pipeline().final_lattice_reports(bad);
  REQUIRE(rs.size() == 5);
  for (const auto& r : rs) {
    CHECK(r.status == "blocked");
    CHECK(r.actual.is_null());
    CHECK(r.check == "final-lattice");
  }
}

TEST_CASE("certificates evaluate true on the real data") {
  auto certs = shared_pipeline().evaluate_certificates();
  CHECK(certs.parity);
  CHECK(certs.membership);
  CHECK(certs.indivisible);
  CHECK(certs.all());
}

TEST_CASE("smith dimension checks pass") {
  auto rs = shared_pipeline().run_check("smith-dims");
  require_all_pass(rs);
  CHECK(find_report(rs, "surface-relative-dimensions").actual ==
        nlohmann::json({15, 1}));
  CHECK(find_report(rs, "hilbert-relative-dimensions").actual ==
        nlohmann::json({36, 43}));
  CHECK(find_report(rs, "hilbert-first-equation-rhs-normalized").actual == -7);
  CHECK(find_report(rs, "hilbert-printed-rhs-differs").actual == true);
  CHECK(find_report(rs, "equivariant-degree2-torsion").actual == nlohmann::json({2}));
}

TEST_CASE("betti and euler checks pass") {
  auto rs = shared_pipeline().run_check("betti-euler");
  require_all_pass(rs);
  CHECK(find_report(rs, "b4").actual == 178);
  CHECK(find_report(rs, "euler-characteristic").actual == 212);
}

TEST_CASE("run_all covers every id and every line passes") {
  auto& p = shared_pipeline();
  auto rs = p.run_all();
  require_all_pass(rs);
  CHECK(all_pass(rs));

  std::set<std::string> seen;
  for (const auto& r : rs) {
    seen.insert(r.check);
    CHECK((r.provenance == "PAPER" || r.provenance == "TRIVIAL" ||
           r.provenance == "DERIVED"));
  }
  CHECK(seen.size() == Pipeline::check_ids().size());
  for (const auto& id : Pipeline::check_ids()) CHECK(seen.count(id) == 1);

  CHECK_THROWS_AS(p.run_check("bogus-id"), std::invalid_argument);
  CHECK(Pipeline::is_check_id("h4-gram"));
  CHECK_FALSE(Pipeline::is_check_id("h4"));
}

TEST_CASE("renderers are deterministic and well formed") {
  auto& p = shared_pipeline();
  auto rs = p.run_check("nikulin");
  std::string j1 = render_json(rs);
  std::string j2 = render_json(p.run_check("nikulin"));
  CHECK(j1 == j2);
  auto parsed = nlohmann::json::parse(j1);
  REQUIRE(parsed.is_array());
  for (const auto& item : parsed) {
    CHECK(item.contains("check"));
    CHECK(item.contains("anchor"));
    CHECK(item.contains("expected"));
    CHECK(item.contains("provenance"));
    CHECK(item.contains("actual"));
    CHECK(item.contains("status"));
  }
  std::string md = render_markdown(rs);
  CHECK(md.find("| check | anchor | expected | provenance | actual | status |") !=
        std::string::npos);
  CHECK(md.find("| nikulin | disc-order |") != std::string::npos);
  CHECK(md.find("4/4 report lines pass") != std::string::npos);
}
