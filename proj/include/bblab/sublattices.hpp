#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bblab/exact_linalg.hpp"
#include "bblab/lattice.hpp"

namespace bblab {

namespace detail {

// rank over F2 of an integer matrix
inline std::size_t rank_mod2(const IntMatrix& m) {
  std::vector<std::vector<int>> a(m.rows(), std::vector<int>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      a[i][j] = static_cast<int>(mpz_tstbit(m.at(i, j).get_mpz_t(), 0));
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t piv = rank;
    while (piv < m.rows() && a[piv][col] == 0) ++piv;
    if (piv == m.rows()) continue;
    std::swap(a[rank], a[piv]);
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (i != rank && a[i][col])
        for (std::size_t j = col; j < m.cols(); ++j) a[i][j] ^= a[rank][j];
    ++rank;
  }
  return rank;
}

}  // namespace detail

struct SaturationResult {
  Sublattice sublattice;
  Int index;
};

inline SaturationResult saturate(const Sublattice& s) {
  const std::size_t n = s.ambient.rank(), r = s.basis.cols();
  if (r == 0) return {s, Int(1)};
  auto snf = smith_normal_form(s.basis);
  IntMatrix uinv = detail::inverse_unimodular(snf.u);
  IntMatrix sat(n, r);
  Int index = 1;
  for (std::size_t j = 0; j < r; ++j) {
    index *= snf.d[j];
    for (std::size_t i = 0; i < n; ++i) sat.at(i, j) = uinv.at(i, j);
  }
  return {Sublattice(s.ambient, hnf_columns(sat)), index};
}

inline Sublattice saturation(const Sublattice& s) { return saturate(s).sublattice; }

inline bool is_primitive(const Sublattice& s) { return saturate(s).index == 1; }

inline Sublattice orthogonal_complement(const Sublattice& s) {
  if (s.ambient.det() == 0) throw std::invalid_argument("degenerate ambient");
  IntMatrix pairings = s.basis.transpose() * s.ambient.gram;
  return Sublattice(s.ambient, kernel_basis(pairings));
}

inline Sublattice invariant_sublattice(const Isometry& g) {
  const std::size_t n = g.lattice.rank();
  return Sublattice(g.lattice, kernel_basis(g.matrix - IntMatrix::identity(n)));
}

inline Sublattice anti_invariant_sublattice(const Isometry& g) {
  const std::size_t n = g.lattice.rank();
  return Sublattice(g.lattice, kernel_basis(g.matrix + IntMatrix::identity(n)));
}

namespace detail {

// Lattice spanned by rational generator columns inside the quadratic space
// with Gram `form`; returns a basis in Hermite form and the induced gram.
struct SpannedLattice {
  IntMatrix scaled_basis;  // columns, divided by denom give the true basis
  Int denom;
  IntMatrix gram;
};

inline SpannedLattice span_lattice(const IntMatrix& form, const std::vector<QVec>& gens) {
  const std::size_t n = form.rows();
  Int denom = 1;
  for (const auto& v : gens)
    for (const auto& x : v) mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), x.get_den_mpz_t());
  IntMatrix m(n, gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j) {
    if (gens[j].size() != n) throw std::invalid_argument("generator size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      Rat scaled = gens[j][i] * Rat(denom);
      m.at(i, j) = scaled.get_num();
    }
  }
  IntMatrix h = hnf_columns(m);
  IntMatrix big = h.transpose() * form * h;
  const Int d2 = denom * denom;
  IntMatrix gram(h.cols(), h.cols());
  for (std::size_t i = 0; i < h.cols(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) {
      if (big.at(i, j) % d2 != 0)
        throw std::invalid_argument("generators do not span an integral lattice");
      gram.at(i, j) = big.at(i, j) / d2;
    }
  return {h, denom, gram};
}

}  // namespace detail

struct NormOverlatticeData {
  Lattice lattice;
  Sublattice invariant;   // of the input isometry
  IntMatrix scaled_basis; // columns / denom are invariant-coordinates of the basis
  Int denom;
  std::size_t glue_rank;  // rank of (1+g)l inside invariant/2invariant
};

// Quotient model of a lattice by an involution: inside the invariant part
// tensored with Q, carrying the doubled form, take the span of the invariant
// sublattice together with all (x + gx)/2.
inline NormOverlatticeData norm_overlattice_data(const Lattice& l, const Isometry& g) {
  if (&g.lattice.gram != &l.gram && g.lattice.gram != l.gram)
    throw std::invalid_argument("isometry acts on a different lattice");
  if (!g.is_involution()) throw std::invalid_argument("isometry is not an involution");
  const std::size_t n = l.rank();
  Sublattice inv = invariant_sublattice(g);
  const std::size_t r = inv.rank();
  IntMatrix doubled = inv.induced_gram().scaled(2);

  // invariant coordinates of (e_j + g e_j), via Euclidean normal equations
  IntMatrix sums = g.matrix + IntMatrix::identity(n);
  IntMatrix normal = inv.basis.transpose() * inv.basis;
  IntMatrix rhs = inv.basis.transpose() * sums;
  std::vector<QVec> rhs_cols(n);
  for (std::size_t j = 0; j < n; ++j) {
    rhs_cols[j].resize(r);
    for (std::size_t i = 0; i < r; ++i) rhs_cols[j][i] = Rat(rhs.at(i, j));
  }
  auto coords = solve_rational_multi(normal, rhs_cols);

  IntMatrix int_coords(r, n);
  std::vector<QVec> gens;
  for (std::size_t i = 0; i < r; ++i) {
    QVec unit(r);
    unit[i] = 1;
    gens.push_back(std::move(unit));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!is_integral(coords[j]))
      throw std::logic_error("(1+g)x left the saturated invariant part");
    QVec half(r);
    for (std::size_t i = 0; i < r; ++i) {
      int_coords.at(i, j) = coords[j][i].get_num();
      half[i] = coords[j][i] / 2;
    }
    gens.push_back(std::move(half));
  }
  auto span = detail::span_lattice(doubled, gens);
  std::string lab = l.label.empty() ? std::string() : "quot(" + l.label + ")";
  return {Lattice(lab, span.gram), inv, span.scaled_basis, span.denom,
          detail::rank_mod2(int_coords)};
}

inline Lattice norm_overlattice(const Lattice& l, const Isometry& g) {
  return norm_overlattice_data(l, g).lattice;
}

// Order-2 glue: each vector must halve into the dual, pairing integrally
// against the lattice with integral self-pairing.
inline Lattice adjoin_glue_vectors(const Lattice& l, const std::vector<QVec>& glue,
                                   bool require_even = false) {
  const std::size_t n = l.rank();
  for (std::size_t idx = 0; idx < glue.size(); ++idx) {
    const QVec& v = glue[idx];
    if (v.size() != n) throw std::invalid_argument("glue vector size mismatch");
    const std::string tag = " (glue vector " + std::to_string(idx) + ")";
    for (const auto& x : v) {
      Rat twice = x * 2;
      if (twice.get_den() != 1)
        throw std::invalid_argument("glue vector is not half-integral" + tag);
    }
    for (std::size_t i = 0; i < n; ++i) {
      Rat pr = 0;
      for (std::size_t j = 0; j < n; ++j) pr += Rat(l.gram.at(i, j)) * v[j];
      if (pr.get_den() != 1)
        throw std::invalid_argument("glue vector pairs non-integrally" + tag);
    }
    Rat self = bilinear(v, l.gram, v);
    if (self.get_den() != 1)
      throw std::invalid_argument("glue vector has non-integral square" + tag);
    if (require_even && self.get_num() % 2 != 0)
      throw std::invalid_argument("glue vector has odd square" + tag);
  }
  std::vector<QVec> gens;
  for (std::size_t i = 0; i < n; ++i) {
    QVec unit(n);
    unit[i] = 1;
    gens.push_back(std::move(unit));
  }
  for (const auto& v : glue) gens.push_back(v);
  auto span = detail::span_lattice(l.gram, gens);
  if (span.scaled_basis.cols() != n)
    throw std::logic_error("overlattice rank changed");
  return Lattice(l.label, span.gram);
}

}  // namespace bblab
