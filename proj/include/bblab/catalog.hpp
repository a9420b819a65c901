#pragma once

#include <stdexcept>
#include <string>

#include "bblab/lattice.hpp"
#include "bblab/sublattices.hpp"

namespace bblab {

// Index bookkeeping for the rank-22 and rank-23 lattices. Zero-based:
// slots 0..5 hold the three hyperbolic planes, 6..13 the first E8(-1),
// 14..21 the second, and 22 the extra (-2)-class of the rank-23 lattice,
// kept last so the first 22 indices agree between both.
struct BasisConvention {
  static constexpr std::size_t u_count = 6;
  static constexpr std::size_t e8_rank = 8;
  static constexpr std::size_t first_e8 = 6;
  static constexpr std::size_t second_e8 = 14;
  static constexpr std::size_t k3_rank = 22;
  static constexpr std::size_t delta_index = 22;
  static constexpr std::size_t hilb2_rank = 23;

  // the involution swaps the two E8 blocks and fixes everything else
  static std::size_t swap_image(std::size_t k) {
    if (k >= first_e8 && k < second_e8) return k + e8_rank;
    if (k >= second_e8 && k < k3_rank) return k - e8_rank;
    return k;
  }
};

inline Lattice make_U() { return Lattice("U", {{0, 1}, {1, 0}}); }

inline Lattice make_rank1(const Int& n) {
  if (n == 0) throw std::invalid_argument("rank-1 lattice must be nondegenerate");
  IntMatrix g(1, 1);
  g.at(0, 0) = n;
  return Lattice("<" + n.get_str() + ">", g);
}

// The Euclidean column-matrix model: columns doubled to stay integral, so the
// Gram is (2C)^T (2C) / 4.
inline Lattice make_E8(int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  const IntMatrix twice_cols = {{4, -2, 0, 0, 0, 0, 0, 1}, {0, 2, -2, 0, 0, 0, 0, 1},
                                {0, 0, 2, -2, 0, 0, 0, 1}, {0, 0, 0, 2, -2, 0, 0, 1},
                                {0, 0, 0, 0, 2, -2, 0, 1}, {0, 0, 0, 0, 0, 2, -2, 1},
                                {0, 0, 0, 0, 0, 0, 2, 1},  {0, 0, 0, 0, 0, 0, 0, 1}};
  IntMatrix big = twice_cols.transpose() * twice_cols;
  IntMatrix gram(8, 8);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) gram.at(i, j) = sign * big.at(i, j) / 4;
  return Lattice(sign > 0 ? "E8" : "E8(-1)", gram);
}

struct NikulinPresentation {
  Lattice lattice;        // rank 8, even, det 2^6
  IntMatrix root_coords;  // columns: the eight (-2)-roots in the lattice basis
  IntMatrix half_sum;     // column: their half sum in the lattice basis
};

inline NikulinPresentation make_nikulin_presentation() {
  IntMatrix ambient(8, 8);
  for (std::size_t i = 0; i < 8; ++i) ambient.at(i, i) = -2;
  std::vector<QVec> gens;
  for (std::size_t i = 0; i < 8; ++i) {
    QVec unit(8);
    unit[i] = 1;
    gens.push_back(std::move(unit));
  }
  gens.push_back(QVec(8, Rat(1, 2)));
  auto span = detail::span_lattice(ambient, gens);

  // express the roots and the half sum in the new basis
  std::vector<QVec> rhs;
  for (std::size_t i = 0; i < 8; ++i) {
    QVec v(8);
    v[i] = span.denom;
    rhs.push_back(std::move(v));
  }
  rhs.push_back(QVec(8, Rat(span.denom) / 2));
  auto sols = solve_rational_multi(span.scaled_basis, rhs);
  IntMatrix roots(8, 8), half(8, 1);
  for (std::size_t j = 0; j < 9; ++j) {
    if (!is_integral(sols[j])) throw std::logic_error("generator left the lattice");
    for (std::size_t i = 0; i < 8; ++i) {
      if (j < 8) roots.at(i, j) = sols[j][i].get_num();
      else half.at(i, 0) = sols[j][i].get_num();
    }
  }
  return {Lattice("Nikulin", span.gram), roots, half};
}

inline Lattice make_nikulin() { return make_nikulin_presentation().lattice; }

struct LatticeWithInvolution {
  Lattice lattice;
  Isometry involution;
};

namespace detail {

inline void put_block(IntMatrix& g, const IntMatrix& block, std::size_t at) {
  for (std::size_t i = 0; i < block.rows(); ++i)
    for (std::size_t j = 0; j < block.cols(); ++j) g.at(at + i, at + j) = block.at(i, j);
}

inline IntMatrix block_swap_matrix(std::size_t rank) {
  IntMatrix m(rank, rank);
  for (std::size_t k = 0; k < rank; ++k) {
    std::size_t img = BasisConvention::swap_image(k);
    m.at(img < rank ? img : k, k) = 1;
  }
  return m;
}

}  // namespace detail

inline LatticeWithInvolution make_k3() {
  const std::size_t n = BasisConvention::k3_rank;
  IntMatrix g(n, n);
  Lattice u = make_U(), e8m = make_E8(-1);
  for (std::size_t k = 0; k < 3; ++k) detail::put_block(g, u.gram, 2 * k);
  detail::put_block(g, e8m.gram, BasisConvention::first_e8);
  detail::put_block(g, e8m.gram, BasisConvention::second_e8);
  Lattice l("K3", g);
  Isometry swap(l, detail::block_swap_matrix(n));
  return {l, swap};
}

inline LatticeWithInvolution make_hilb2() {
  const std::size_t n = BasisConvention::hilb2_rank;
  IntMatrix g(n, n);
  Lattice u = make_U(), e8m = make_E8(-1);
  for (std::size_t k = 0; k < 3; ++k) detail::put_block(g, u.gram, 2 * k);
  detail::put_block(g, e8m.gram, BasisConvention::first_e8);
  detail::put_block(g, e8m.gram, BasisConvention::second_e8);
  g.at(BasisConvention::delta_index, BasisConvention::delta_index) = -2;
  Lattice l("K3Hilb2", g);
  Isometry swap(l, detail::block_swap_matrix(n));
  return {l, swap};
}

}  // namespace bblab
