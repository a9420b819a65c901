#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bblab/catalog.hpp"
#include "bblab/glue_search.hpp"
#include "bblab/lattice.hpp"
#include "bblab/sublattices.hpp"

using namespace bblab;

namespace {

Lattice u2() { return rescale(make_U(), 2); }

Lattice u2_cubed() { return direct_sum(direct_sum(u2(), u2()), u2()); }

Lattice e8m1_squared() { return direct_sum(make_E8(-1), make_E8(-1)); }

Isometry e8_pair_swap() {
  Lattice amb = e8m1_squared();
  IntMatrix m(16, 16);
  for (std::size_t k = 0; k < 8; ++k) {
    m.at(k + 8, k) = 1;
    m.at(k, k + 8) = 1;
  }
  return Isometry(amb, m);
}

IntMatrix unit_columns(std::size_t n, std::size_t from, std::size_t count) {
  IntMatrix b(n, count);
  for (std::size_t j = 0; j < count; ++j) b.at(from + j, j) = 1;
  return b;
}

}  // namespace

TEST_CASE("construction guards") {
  CHECK_THROWS_AS(Lattice("", IntMatrix(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(Lattice("", IntMatrix{{0, 1}, {2, 0}}), std::invalid_argument);
  // shear does not preserve the hyperbolic form
  CHECK_THROWS_AS(Isometry(make_U(), IntMatrix{{1, 1}, {0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Sublattice(make_U(), IntMatrix{{1, 2}, {1, 2}}), std::invalid_argument);
}

TEST_CASE("direct sums") {
  Lattice uu = direct_sum(make_U(), make_U());
  CHECK(uu.rank() == 4);
  CHECK(uu.det() == 1);

  Lattice k3 = make_k3().lattice;
  Lattice sum = direct_sum(direct_sum(direct_sum(make_U(), make_U()), make_U()),
                           e8m1_squared());
  CHECK(sum.rank() == 22);
  CHECK(sum.det() == -1);
  CHECK(sum.gram == k3.gram);

  Lattice h = make_hilb2().lattice;
  CHECK(h.rank() == 23);
  CHECK(h.det() == 2);
}

TEST_CASE("rescale") {
  CHECK(u2().gram == IntMatrix{{0, 2}, {2, 0}});
  CHECK(rescale(make_E8(1), -2).det() == 256);
  CHECK(rescale(make_rank1(-2), 2).gram == make_rank1(-4).gram);
  CHECK_THROWS_AS(rescale(make_U(), 0), std::invalid_argument);
}

TEST_CASE("discriminant profiles") {
  SECTION("three rescaled hyperbolic planes") {
    auto p = discriminant_profile(u2_cubed());
    CHECK(p.invariant_factors == std::vector<Int>(6, 2));
    CHECK(p.signature == std::pair<int, int>(3, 3));
    CHECK(p.even);
    CHECK(p.disc_order() == 64);
  }
  SECTION("nikulin") {
    auto p = discriminant_profile(make_nikulin());
    CHECK(p.disc_order() == 64);
    CHECK(p.invariant_factors == std::vector<Int>(6, 2));
    CHECK(p.signature == std::pair<int, int>(0, 8));
  }
  SECTION("negative definite E8") {
    auto p = discriminant_profile(make_E8(-1));
    CHECK(p.invariant_factors.empty());
    CHECK(p.signature == std::pair<int, int>(0, 8));
  }
  SECTION("positive definite E8 and the big catalog lattices") {
    CHECK(signature_exact(make_E8(1).gram) == std::pair<int, int>(8, 0));
    CHECK(signature_exact(make_k3().lattice.gram) == std::pair<int, int>(3, 19));
    CHECK(signature_exact(make_hilb2().lattice.gram) == std::pair<int, int>(3, 20));
  }
  SECTION("parity") {
    CHECK(discriminant_profile(make_U()).even);
    // diag(2,-2) is still even; an odd diagonal entry is what flips parity
    CHECK(discriminant_profile(direct_sum(make_rank1(2), make_rank1(-2))).even);
    Lattice odd = direct_sum(make_rank1(1), make_rank1(-1));
    CHECK_FALSE(discriminant_profile(odd).even);
  }
  SECTION("degenerate rejected") {
    CHECK_THROWS_AS(discriminant_profile(Lattice("", IntMatrix(1, 1))),
                    std::invalid_argument);
  }
  SECTION("factor product equals |det|") {
    for (const Lattice& l : {u2_cubed(), make_nikulin(), make_hilb2().lattice}) {
      auto p = discriminant_profile(l);
      CHECK(p.disc_order() == abs(l.det()));
    }
  }
}

TEST_CASE("orthogonal complements") {
  SECTION("diagonal inside the doubled definite block") {
    Lattice amb = e8m1_squared();
    IntMatrix diag(16, 8);
    for (std::size_t k = 0; k < 8; ++k) diag.at(k, k) = diag.at(k + 8, k) = 1;
    Sublattice s(amb, diag);
    Sublattice c = orthogonal_complement(s);
    CHECK(c.rank() == 8);
    CHECK(c.induced_gram() == make_E8(-1).gram.scaled(2));
    CHECK(s.induced_gram() == make_E8(-1).gram.scaled(2));
  }
  SECTION("hyperbolic block inside the rank-22 lattice") {
    Lattice k3 = make_k3().lattice;
    Sublattice s(k3, unit_columns(22, 0, 6));
    Sublattice c = orthogonal_complement(s);
    CHECK(c.basis == unit_columns(22, 6, 16));
    CHECK(c.induced_gram() == e8m1_squared().gram);
  }
  SECTION("isotropic line is inside its own complement") {
    Sublattice s(make_U(), unit_columns(2, 0, 1));
    Sublattice c = orthogonal_complement(s);
    CHECK(c.basis == s.basis);
  }
}

TEST_CASE("saturation and primitivity") {
  SECTION("doubled standard lattice") {
    Lattice zz("", IntMatrix::identity(2));
    Sublattice s(zz, IntMatrix{{2, 0}, {0, 2}});
    auto r = saturate(s);
    CHECK(r.index == 4);
    CHECK(r.sublattice.basis == IntMatrix::identity(2));
    CHECK_FALSE(is_primitive(s));
    CHECK(is_primitive(r.sublattice));
  }
  SECTION("roots inside the nikulin lattice have index two") {
    auto nik = make_nikulin_presentation();
    Sublattice roots(nik.lattice, nik.root_coords);
    auto r = saturate(roots);
    CHECK(r.index == 2);
    CHECK(abs(det_exact(r.sublattice.basis)) == 1);  // saturation is everything
    CHECK_FALSE(is_primitive(roots));
  }
  SECTION("primitive sublattice is its own saturation") {
    Lattice k3 = make_k3().lattice;
    Sublattice s(k3, unit_columns(22, 2, 3));
    auto r = saturate(s);
    CHECK(r.index == 1);
    CHECK(r.sublattice.basis == s.basis);
    CHECK(is_primitive(s));
  }
  SECTION("idempotent on random sublattices") {
    std::mt19937 rng(2718);
    std::uniform_int_distribution<int> dist(-3, 3);
    Lattice k3 = make_k3().lattice;
    for (int trial = 0; trial < 10; ++trial) {
      IntMatrix b(22, 3);
      do {
        for (std::size_t i = 0; i < 22; ++i)
          for (std::size_t j = 0; j < 3; ++j) b.at(i, j) = dist(rng);
      } while (rank_exact(b) != 3);
      Sublattice sat = saturation(Sublattice(k3, b));
      CHECK(is_primitive(sat));
      CHECK(saturation(sat).basis == sat.basis);
    }
  }
}

TEST_CASE("invariant and anti-invariant parts") {
  SECTION("pair swap on the doubled definite block") {
    Isometry swap = e8_pair_swap();
    Sublattice inv = invariant_sublattice(swap);
    Sublattice anti = anti_invariant_sublattice(swap);
    CHECK(inv.induced_gram() == make_E8(-1).gram.scaled(2));
    CHECK(anti.induced_gram() == make_E8(-1).gram.scaled(2));
    CHECK(inv.rank() + anti.rank() == 16);
    IntMatrix cross = inv.basis.transpose() * swap.lattice.gram * anti.basis;
    CHECK(cross == IntMatrix(8, 8));
  }
  SECTION("rank-22 swap") {
    auto k3 = make_k3();
    CHECK(invariant_sublattice(k3.involution).rank() == 14);
    CHECK(anti_invariant_sublattice(k3.involution).rank() == 8);
  }
  SECTION("rank-23 swap") {
    auto h = make_hilb2();
    Sublattice inv = invariant_sublattice(h.involution);
    CHECK(inv.rank() == 15);
    Lattice target = direct_sum(
        direct_sum(direct_sum(make_U(), make_U()), make_U()),
        direct_sum(make_rank1(-2), rescale(make_E8(-1), 2)));
    CHECK(profile_equal(inv.as_lattice(), target));
  }
  SECTION("identity") {
    Isometry id(make_U(), IntMatrix::identity(2));
    CHECK(invariant_sublattice(id).rank() == 2);
    CHECK(anti_invariant_sublattice(id).rank() == 0);
  }
}

TEST_CASE("norm overlattices") {
  SECTION("pair swap recovers the unimodular block") {
    Lattice q = norm_overlattice(e8m1_squared(), e8_pair_swap());
    CHECK(q.gram == make_E8(-1).gram);
  }
  SECTION("rank-22 swap") {
    auto k3 = make_k3();
    auto data = norm_overlattice_data(k3.lattice, k3.involution);
    CHECK(data.lattice.rank() == 14);
    CHECK(data.lattice.det() == -64);
    CHECK(data.glue_rank == 8);
    Lattice target = direct_sum(u2_cubed(), make_E8(-1));
    CHECK(profile_equal(data.lattice, target));
  }
  SECTION("identity doubles the form") {
    Isometry id(make_U(), IntMatrix::identity(2));
    CHECK(norm_overlattice(make_U(), id).gram == u2().gram);
  }
  SECTION("non-involution rejected") {
    Lattice uu = direct_sum(make_U(), make_U());
    IntMatrix rot(4, 4);
    rot.at(2, 0) = rot.at(3, 1) = 1;
    rot.at(0, 2) = rot.at(1, 3) = -1;
    Isometry g(uu, rot);
    CHECK_THROWS_AS(norm_overlattice(uu, g), std::invalid_argument);
  }
  SECTION("determinant bookkeeping across the catalog involutions") {
    auto k3 = make_k3();
    auto h = make_hilb2();
    std::vector<std::pair<Lattice, Isometry>> cases = {
        {k3.lattice, k3.involution},
        {h.lattice, h.involution},
        {e8m1_squared(), e8_pair_swap()},
        {make_U(), Isometry(make_U(), IntMatrix::identity(2))}};
    for (const auto& [l, g] : cases) {
      auto data = norm_overlattice_data(l, g);
      Int inv_det = abs(det_exact(data.invariant.induced_gram()));
      Int expected = inv_det;
      for (std::size_t i = 0; i < data.invariant.rank(); ++i) expected *= 2;
      for (std::size_t i = 0; i < data.glue_rank; ++i) expected /= 4;
      CHECK(abs(data.lattice.det()) == expected);
    }
  }
}

TEST_CASE("glue vector adjunction") {
  SECTION("two halved diagonal classes") {
    Lattice base = direct_sum(make_rank1(-4), make_rank1(-4));
    Lattice glued = adjoin_glue_vectors(
        base, {{Rat(1, 2), Rat(1, 2)}, {Rat(1, 2), Rat(-1, 2)}}, true);
    CHECK(glued.det() == 4);
    CHECK(glued.is_even());
    Lattice target = direct_sum(make_rank1(-2), make_rank1(-2));
    CHECK(profile_equal(glued, target));
  }
  SECTION("half sum of eight roots") {
    IntMatrix g(8, 8);
    for (std::size_t i = 0; i < 8; ++i) g.at(i, i) = -2;
    Lattice roots("", g);
    Lattice glued = adjoin_glue_vectors(roots, {QVec(8, Rat(1, 2))}, true);
    CHECK(glued.det() == 64);
    CHECK(glued.is_even());
    CHECK(glued.gram == make_nikulin().gram);
  }
  SECTION("empty glue is the identity") {
    Lattice l = make_k3().lattice;
    CHECK(adjoin_glue_vectors(l, {}).gram == l.gram);
  }
  SECTION("rejections name the offending vector") {
    Lattice l = make_rank1(-3);
    CHECK_THROWS_WITH(adjoin_glue_vectors(l, {{Rat(1, 3)}}),
                      Catch::Matchers::ContainsSubstring("glue vector 0"));
    CHECK_THROWS_WITH(adjoin_glue_vectors(l, {{Rat(1, 2)}}),
                      Catch::Matchers::ContainsSubstring("pairs non-integrally"));
    Lattice two = direct_sum(make_rank1(-2), make_rank1(-2));
    QVec v = {Rat(1, 2), Rat(1, 2)};  // square -1: fine unless evenness is asked
    CHECK_NOTHROW(adjoin_glue_vectors(two, {v}));
    CHECK_THROWS_WITH(adjoin_glue_vectors(two, {v}, true),
                      Catch::Matchers::ContainsSubstring("odd square"));
  }
}

TEST_CASE("profile comparison") {
  Lattice a = direct_sum(u2_cubed(), make_E8(-1));
  Lattice b = direct_sum(make_E8(-1), u2_cubed());
  CHECK(profile_equal(a, b));
  CHECK_FALSE(profile_equal(u2(), direct_sum(make_rank1(2), make_rank1(-2))));
  CHECK_FALSE(profile_equal(make_U(), u2()));
}

TEST_CASE("unimodular glue search") {
  SECTION("two rescaled hyperbolic planes") {
    auto r = glue_unimodular_search(u2(), u2());
    REQUIRE(r.found());
    CHECK(abs(r.overlattice->det()) == 1);
    CHECK(r.overlattice->is_even());
    CHECK(signature_exact(r.overlattice->gram) == std::pair<int, int>(2, 2));
  }
  SECTION("trivial discriminants glue for free") {
    auto r = glue_unimodular_search(make_E8(-1), make_E8(-1));
    REQUIRE(r.found());
    CHECK(r.glue.empty());
    CHECK(r.overlattice->gram == e8m1_squared().gram);
  }
  SECTION("quotient block against nikulin") {
    Lattice a = direct_sum(u2_cubed(), make_E8(-1));
    auto r = glue_unimodular_search(a, make_nikulin());
    REQUIRE(r.found());
    CHECK(abs(r.overlattice->det()) == 1);
    CHECK(r.overlattice->is_even());
    CHECK(signature_exact(r.overlattice->gram) == std::pair<int, int>(3, 19));
    CHECK(profile_equal(*r.overlattice, make_k3().lattice));
  }
  SECTION("preconditions") {
    CHECK_THROWS_AS(glue_unimodular_search(u2(), rescale(make_U(), 4)),
                    std::invalid_argument);
    CHECK_THROWS_AS(glue_unimodular_search(u2(), make_rank1(1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(glue_unimodular_search(make_rank1(-2), make_rank1(-2)),
                    std::invalid_argument);
  }
  SECTION("tight bounds exhaust without claiming impossibility") {
    auto r = glue_unimodular_search(u2(), u2(), 2);
    CHECK_FALSE(r.found());
    CHECK(r.status == GlueSearchResult::Status::bound_exhausted);
  }
}

TEST_CASE("disc orders balance across a primitive sublattice and its complement") {
  std::mt19937 rng(1729);
  std::uniform_int_distribution<int> dist(-2, 2);
  Lattice k3 = make_k3().lattice;
  int done = 0;
  while (done < 8) {
    std::size_t r = 1 + done % 3;
    IntMatrix b(22, r);
    for (std::size_t i = 0; i < 22; ++i)
      for (std::size_t j = 0; j < r; ++j) b.at(i, j) = dist(rng);
    if (rank_exact(b) != r) continue;
    Sublattice s = saturation(Sublattice(k3, b));
    Sublattice c = orthogonal_complement(s);
    Int ds = det_exact(s.induced_gram()), dc = det_exact(c.induced_gram());
    if (ds == 0 || dc == 0) continue;
    CHECK(abs(ds) == abs(dc));
    ++done;
  }
}

TEST_CASE("json round trips") {
  Lattice l = make_hilb2().lattice;
  auto j = to_json(l);
  Lattice back = lattice_from_json(j);
  CHECK(back.label == l.label);
  CHECK(back.gram == l.gram);
  CHECK(to_json(back).dump() == j.dump());

  Sublattice s(l, unit_columns(23, 4, 3));
  auto js = to_json(s);
  Sublattice sback = sublattice_from_json(js, l);
  CHECK(sback.basis == s.basis);
  CHECK(to_json(sback).dump() == js.dump());
}
