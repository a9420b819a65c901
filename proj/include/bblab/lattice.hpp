#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bblab/exact_linalg.hpp"
#include "bblab/int_matrix.hpp"

namespace bblab {

struct Lattice {
  std::string label;
  IntMatrix gram;

  Lattice() : gram(0, 0) {}
  Lattice(std::string lab, IntMatrix g) : label(std::move(lab)), gram(std::move(g)) {
    if (gram.rows() != gram.cols()) throw std::invalid_argument("gram must be square");
    if (!gram.is_symmetric()) throw std::invalid_argument("gram must be symmetric");
  }

  std::size_t rank() const { return gram.rows(); }
  Int det() const { return det_exact(gram); }
  bool is_even() const {
    for (std::size_t i = 0; i < rank(); ++i)
      if (gram.at(i, i) % 2 != 0) return false;
    return true;
  }
};

struct Isometry {
  Lattice lattice;
  IntMatrix matrix;

  Isometry(Lattice l, IntMatrix m) : lattice(std::move(l)), matrix(std::move(m)) {
    if (matrix.rows() != lattice.rank() || matrix.cols() != lattice.rank())
      throw std::invalid_argument("isometry matrix size mismatch");
    if (matrix.transpose() * lattice.gram * matrix != lattice.gram)
      throw std::invalid_argument("matrix does not preserve the form");
  }

  bool is_involution() const {
    return matrix * matrix == IntMatrix::identity(matrix.rows());
  }
};

struct Sublattice {
  Lattice ambient;
  IntMatrix basis;  // columns are ambient coordinates

  Sublattice(Lattice amb, IntMatrix b) : ambient(std::move(amb)), basis(std::move(b)) {
    if (basis.rows() != ambient.rank())
      throw std::invalid_argument("basis rows must match ambient rank");
    if (rank_exact(basis) != basis.cols())
      throw std::invalid_argument("basis columns must be independent");
  }

  std::size_t rank() const { return basis.cols(); }
  IntMatrix induced_gram() const { return basis.transpose() * ambient.gram * basis; }
  Lattice as_lattice(std::string lab = "") const {
    return Lattice(std::move(lab), induced_gram());
  }
};

inline Lattice direct_sum(const Lattice& a, const Lattice& b) {
  const std::size_t ra = a.rank(), rb = b.rank();
  IntMatrix g(ra + rb, ra + rb);
  for (std::size_t i = 0; i < ra; ++i)
    for (std::size_t j = 0; j < ra; ++j) g.at(i, j) = a.gram.at(i, j);
  for (std::size_t i = 0; i < rb; ++i)
    for (std::size_t j = 0; j < rb; ++j) g.at(ra + i, ra + j) = b.gram.at(i, j);
  std::string lab;
  if (!a.label.empty() && !b.label.empty()) lab = a.label + "+" + b.label;
  return Lattice(lab, g);
}

inline Lattice rescale(const Lattice& a, const Int& n) {
  if (n == 0) throw std::invalid_argument("rescale by zero");
  std::string lab;
  if (!a.label.empty()) lab = a.label + "(" + n.get_str() + ")";
  return Lattice(lab, a.gram.scaled(n));
}

// Exact congruence diagonalization with symmetric pivoting; a zero diagonal
// with a nonzero off-diagonal entry contributes a hyperbolic (+1, -1) pair.
inline std::pair<int, int> signature_exact(const IntMatrix& gram) {
  const std::size_t n = gram.rows();
  std::vector<QVec> a(n, QVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rat(gram.at(i, j));

  auto sym_swap = [&](std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    for (std::size_t k = 0; k < n; ++k) std::swap(a[k][i], a[k][j]);
  };
  // e_k <- e_k - f*e_i, applied to rows then columns
  auto sym_sub = [&](std::size_t k, const Rat& f, std::size_t i) {
    for (std::size_t c = 0; c < n; ++c) a[k][c] -= f * a[i][c];
    for (std::size_t r = 0; r < n; ++r) a[r][k] -= f * a[r][i];
  };

  int pos = 0, neg = 0;
  std::size_t i = 0;
  while (i < n) {
    if (a[i][i] == 0) {
      for (std::size_t j = i + 1; j < n; ++j)
        if (a[j][j] != 0) {
          sym_swap(i, j);
          break;
        }
    }
    if (a[i][i] != 0) {
      if (a[i][i] > 0) ++pos;
      else ++neg;
      for (std::size_t k = i + 1; k < n; ++k)
        if (a[k][i] != 0) sym_sub(k, a[k][i] / a[i][i], i);
      ++i;
      continue;
    }
    std::size_t j = i;
    for (std::size_t c = i + 1; c < n; ++c)
      if (a[i][c] != 0) {
        j = c;
        break;
      }
    if (j == i) {
      ++i;  // radical direction, contributes nothing
      continue;
    }
    if (j != i + 1) sym_swap(j, i + 1);
    const Rat b = a[i][i + 1];
    ++pos;
    ++neg;
    for (std::size_t k = i + 2; k < n; ++k) {
      const Rat alpha = a[k][i + 1] / b, beta = a[k][i] / b;
      if (alpha != 0) sym_sub(k, alpha, i);
      if (beta != 0) sym_sub(k, beta, i + 1);
    }
    i += 2;
  }
  return {pos, neg};
}

// Discriminant group Z^n / (gram Z^n): orders are the invariant factors > 1,
// generators are rational vectors in the lattice basis (columns of the SNF
// right transform divided by the matching invariant factor).
struct DiscriminantGroup {
  std::vector<Int> orders;
  std::vector<QVec> generators;
};

inline DiscriminantGroup discriminant_group(const Lattice& l) {
  if (l.det() == 0) throw std::invalid_argument("degenerate lattice");
  auto s = smith_normal_form(l.gram);
  DiscriminantGroup g;
  for (std::size_t k = 0; k < s.d.size(); ++k) {
    if (s.d[k] <= 1) continue;
    g.orders.push_back(s.d[k]);
    QVec v(l.rank());
    for (std::size_t i = 0; i < l.rank(); ++i) {
      v[i] = Rat(s.v.at(i, k)) / Rat(s.d[k]);
      v[i].canonicalize();
    }
    g.generators.push_back(std::move(v));
  }
  return g;
}

namespace detail {

// reduce into [0, m)
inline Rat mod_reduce(const Rat& x, long m) {
  Rat y = x / m;
  Int fl;
  mpz_fdiv_q(fl.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  return x - Rat(fl) * m;
}

}  // namespace detail

// q(v) mod 2 for even lattices, bilinear value mod 1 for odd ones
inline Rat disc_form_value(const Lattice& l, const QVec& v) {
  Rat val = bilinear(v, l.gram, v);
  return detail::mod_reduce(val, l.is_even() ? 2 : 1);
}

inline Rat disc_pairing(const Lattice& l, const QVec& v, const QVec& w) {
  Rat val = 0;
  for (std::size_t i = 0; i < l.rank(); ++i) {
    Rat row = 0;
    for (std::size_t j = 0; j < l.rank(); ++j) row += Rat(l.gram.at(i, j)) * w[j];
    val += v[i] * row;
  }
  return detail::mod_reduce(val, 1);
}

struct DiscriminantProfile {
  std::size_t rank = 0;
  std::pair<int, int> signature{0, 0};
  bool even = true;
  std::vector<Int> invariant_factors;  // entries > 1 only
  std::vector<Rat> disc_form_values;   // sorted; mod 2 if even, mod 1 if odd

  Int disc_order() const {
    Int n = 1;
    for (const auto& f : invariant_factors) n *= f;
    return n;
  }
};

inline DiscriminantProfile discriminant_profile(const Lattice& l) {
  if (l.rank() > 0 && l.det() == 0) throw std::invalid_argument("degenerate lattice");
  DiscriminantProfile p;
  p.rank = l.rank();
  p.signature = signature_exact(l.gram);
  p.even = l.is_even();
  if (l.rank() == 0) return p;
  auto g = discriminant_group(l);
  p.invariant_factors = g.orders;
  for (const auto& v : g.generators) p.disc_form_values.push_back(disc_form_value(l, v));
  std::sort(p.disc_form_values.begin(), p.disc_form_values.end());
  return p;
}

namespace detail {

// Multiset of form values over the whole discriminant group; only feasible
// for small groups, callers must check the order first.
inline std::vector<Rat> full_disc_values(const Lattice& l) {
  auto g = discriminant_group(l);
  const std::size_t m = g.orders.size();
  const long modulus = l.is_even() ? 2 : 1;
  std::vector<Rat> qdiag(m);
  std::vector<std::vector<Rat>> pair(m, std::vector<Rat>(m));
  for (std::size_t k = 0; k < m; ++k) {
    qdiag[k] = bilinear(g.generators[k], l.gram, g.generators[k]);
    for (std::size_t j = 0; j < m; ++j)
      pair[k][j] = bilinear(g.generators[k], l.gram, g.generators[j]);
  }
  std::vector<Rat> out;
  std::vector<Int> idx(m, 0);
  for (;;) {
    Rat val = 0;
    for (std::size_t k = 0; k < m; ++k) {
      if (idx[k] == 0) continue;
      val += Rat(idx[k] * idx[k]) * qdiag[k];
      for (std::size_t j = k + 1; j < m; ++j)
        if (idx[j] != 0) val += Rat(2 * idx[k] * idx[j]) * pair[k][j];
    }
    out.push_back(mod_reduce(val, modulus));
    std::size_t pos = 0;
    while (pos < m) {
      idx[pos] += 1;
      if (idx[pos] < g.orders[pos]) break;
      idx[pos] = 0;
      ++pos;
    }
    if (pos == m) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Fingerprint comparison standing in for "isometric to": rank, signature,
// parity, invariant factors, and discriminant form values. Small groups are
// compared by the value multiset over the entire group, which is basis free.
inline bool profile_equal(const Lattice& a, const Lattice& b) {
  auto pa = discriminant_profile(a), pb = discriminant_profile(b);
  if (pa.rank != pb.rank || pa.signature != pb.signature || pa.even != pb.even ||
      pa.invariant_factors != pb.invariant_factors)
    return false;
  const Int order = pa.disc_order();
  if (order <= 65536) return detail::full_disc_values(a) == detail::full_disc_values(b);
  return pa.disc_form_values == pb.disc_form_values;
}

// --- JSON round trip -------------------------------------------------------

inline long to_long_checked(const Int& x) {
  if (!x.fits_slong_p()) throw std::overflow_error("gram entry exceeds json integer range");
  return x.get_si();
}

inline nlohmann::json matrix_to_json(const IntMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_long_checked(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline IntMatrix matrix_from_json(const nlohmann::json& j, std::size_t cols_if_empty = 0) {
  if (!j.is_array()) throw std::invalid_argument("matrix json must be an array");
  const std::size_t r = j.size();
  std::size_t c = r == 0 ? cols_if_empty : j.at(0).size();
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (j.at(i).size() != c) throw std::invalid_argument("ragged matrix json");
    for (std::size_t k = 0; k < c; ++k) m.at(i, k) = Int(j.at(i).at(k).get<long>());
  }
  return m;
}

inline nlohmann::json to_json(const Lattice& l) {
  return nlohmann::json{{"label", l.label}, {"gram", matrix_to_json(l.gram)}};
}

inline Lattice lattice_from_json(const nlohmann::json& j) {
  return Lattice(j.at("label").get<std::string>(), matrix_from_json(j.at("gram")));
}

inline nlohmann::json to_json(const Sublattice& s) {
  return nlohmann::json{{"label", ""},
                        {"gram", matrix_to_json(s.induced_gram())},
                        {"ambient", s.ambient.label},
                        {"basis", matrix_to_json(s.basis)}};
}

// the ambient gram is not embedded in the json, the caller resolves the label
inline Sublattice sublattice_from_json(const nlohmann::json& j, const Lattice& ambient) {
  if (j.at("ambient").get<std::string>() != ambient.label)
    throw std::invalid_argument("ambient label mismatch");
  return Sublattice(ambient, matrix_from_json(j.at("basis"), 0));
}

}  // namespace bblab
