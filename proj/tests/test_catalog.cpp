#include <catch2/catch_amalgamated.hpp>

#include "bblab/catalog.hpp"
#include "bblab/sublattices.hpp"

using namespace bblab;

TEST_CASE("hyperbolic plane and rank-1 pieces") {
  CHECK(make_U().gram == IntMatrix{{0, 1}, {1, 0}});
  CHECK(make_U().det() == -1);
  CHECK(make_rank1(-2).gram.at(0, 0) == -2);
  CHECK(make_rank1(-2).label == "<-2>");
  CHECK_THROWS_AS(make_rank1(0), std::invalid_argument);
}

TEST_CASE("E8 from the column-matrix model") {
  Lattice plus = make_E8(1);
  CHECK(plus.gram.at(0, 0) == 4);  // first column squares to 4 in this basis
  CHECK(plus.det() == 1);
  CHECK(plus.is_even());
  CHECK(signature_exact(plus.gram) == std::pair<int, int>(8, 0));

  Lattice minus = make_E8(-1);
  CHECK(minus.det() == 1);
  CHECK(minus.is_even());
  CHECK(signature_exact(minus.gram) == std::pair<int, int>(0, 8));
  CHECK(minus.gram == plus.gram.scaled(-1));

  CHECK_THROWS_AS(make_E8(0), std::invalid_argument);
  CHECK_THROWS_AS(make_E8(2), std::invalid_argument);
}

TEST_CASE("nikulin lattice presentation") {
  auto nik = make_nikulin_presentation();
  CHECK(nik.lattice.rank() == 8);
  CHECK(nik.lattice.det() == 64);
  CHECK(nik.lattice.is_even());
  auto p = discriminant_profile(nik.lattice);
  CHECK(p.invariant_factors == std::vector<Int>(6, 2));

  // the eight roots still pair as diag(-2) inside the overlattice
  IntMatrix root_gram =
      nik.root_coords.transpose() * nik.lattice.gram * nik.root_coords;
  IntMatrix expected(8, 8);
  for (std::size_t i = 0; i < 8; ++i) expected.at(i, i) = -2;
  CHECK(root_gram == expected);

  IntMatrix half_sq = nik.half_sum.transpose() * nik.lattice.gram * nik.half_sum;
  CHECK(half_sq.at(0, 0) == -4);
  IntMatrix half_vs_roots =
      nik.half_sum.transpose() * nik.lattice.gram * nik.root_coords;
  for (std::size_t j = 0; j < 8; ++j) CHECK(half_vs_roots.at(0, j) == -1);

  // the half sum really is half the sum of the roots
  IntMatrix sum(8, 1);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) sum.at(i, 0) += nik.root_coords.at(i, j);
  CHECK(nik.half_sum.scaled(2) == sum);
}

TEST_CASE("rank-22 lattice with swap involution") {
  auto k3 = make_k3();
  CHECK(k3.lattice.rank() == 22);
  CHECK(k3.lattice.det() == -1);
  CHECK(k3.lattice.is_even());
  CHECK(k3.involution.is_involution());

  Sublattice inv = invariant_sublattice(k3.involution);
  CHECK(inv.rank() == 14);
  Lattice target = direct_sum(
      direct_sum(direct_sum(make_U(), make_U()), make_U()), rescale(make_E8(-1), 2));
  CHECK(profile_equal(inv.as_lattice(), target));
}

TEST_CASE("rank-23 lattice with swap involution") {
  auto h = make_hilb2();
  CHECK(h.lattice.rank() == 23);
  CHECK(h.lattice.det() == 2);
  CHECK(h.lattice.is_even());
  CHECK(h.involution.is_involution());
  CHECK(invariant_sublattice(h.involution).rank() == 15);

  // delta sits last and squares to -2; the first 22 slots are the rank-22 gram
  CHECK(h.lattice.gram.at(BasisConvention::delta_index,
                          BasisConvention::delta_index) == -2);
  auto k3 = make_k3();
  for (std::size_t i = 0; i < 22; ++i) {
    CHECK(h.lattice.gram.at(i, BasisConvention::delta_index) == 0);
    for (std::size_t j = 0; j < 22; ++j)
      CHECK(h.lattice.gram.at(i, j) == k3.lattice.gram.at(i, j));
  }
}

TEST_CASE("basis convention index map") {
  CHECK(BasisConvention::swap_image(0) == 0);
  CHECK(BasisConvention::swap_image(5) == 5);
  CHECK(BasisConvention::swap_image(6) == 14);
  CHECK(BasisConvention::swap_image(13) == 21);
  CHECK(BasisConvention::swap_image(14) == 6);
  CHECK(BasisConvention::swap_image(BasisConvention::delta_index) ==
        BasisConvention::delta_index);
  for (std::size_t k = 0; k < BasisConvention::hilb2_rank; ++k)
    CHECK(BasisConvention::swap_image(BasisConvention::swap_image(k)) == k);

  // the involution matrices follow the map
  auto h = make_hilb2();
  for (std::size_t k = 0; k < 23; ++k)
    CHECK(h.involution.matrix.at(BasisConvention::swap_image(k), k) == 1);
}
