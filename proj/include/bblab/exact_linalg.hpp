#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bblab/int_matrix.hpp"

namespace bblab {

struct SingularMatrix : std::runtime_error {
  SingularMatrix() : std::runtime_error("singular matrix") {}
};

// u * a * v = diag(d) with u, v unimodular; d non-negative, divisibility
// chain d[k] | d[k+1], zeros trailing.
struct SnfDecomposition {
  std::vector<Int> d;
  IntMatrix u, v;
};

namespace detail {

inline void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(a, j), m.at(b, j));
}
inline void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m.at(i, a), m.at(i, b));
}
inline void negate_row(IntMatrix& m, std::size_t r) {
  for (std::size_t j = 0; j < m.cols(); ++j) m.at(r, j) = -m.at(r, j);
}
inline void negate_col(IntMatrix& m, std::size_t c) {
  for (std::size_t i = 0; i < m.rows(); ++i) m.at(i, c) = -m.at(i, c);
}
// row[a] -= q * row[b]
inline void row_sub(IntMatrix& m, std::size_t a, const Int& q, std::size_t b) {
  if (q == 0) return;
  for (std::size_t j = 0; j < m.cols(); ++j) m.at(a, j) -= q * m.at(b, j);
}
inline void col_sub(IntMatrix& m, std::size_t a, const Int& q, std::size_t b) {
  if (q == 0) return;
  for (std::size_t i = 0; i < m.rows(); ++i) m.at(i, a) -= q * m.at(i, b);
}
inline Int fdiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace detail

// Pivots are chosen by minimal absolute value, first occurrence in row-major
// scan order, so the transforms are reproducible run to run.
inline SnfDecomposition smith_normal_form(const IntMatrix& a) {
  using namespace detail;
  const std::size_t r = a.rows(), c = a.cols();
  const std::size_t n = std::min(r, c);
  IntMatrix A = a;
  IntMatrix u = IntMatrix::identity(r), v = IntMatrix::identity(c);
  std::vector<Int> d(n, 0);

  for (std::size_t top = 0; top < n; ++top) {
    for (;;) {
      // minimal-|value| nonzero pivot in the trailing submatrix
      std::size_t pi = 0, pj = 0;
      bool found = false;
      Int best;
      for (std::size_t i = top; i < r; ++i)
        for (std::size_t j = top; j < c; ++j) {
          const Int& x = A.at(i, j);
          if (x == 0) continue;
          Int ax = abs(x);
          if (!found || ax < best) {
            found = true;
            best = ax;
            pi = i;
            pj = j;
          }
        }
      if (!found) {
        // trailing submatrix zero: d[top..] stay 0
        return {d, u, v};
      }
      swap_rows(A, top, pi);
      swap_rows(u, top, pi);
      swap_cols(A, top, pj);
      swap_cols(v, top, pj);
      if (A.at(top, top) < 0) {
        negate_row(A, top);
        negate_row(u, top);
      }
      const Int piv = A.at(top, top);
      bool clean = true;
      for (std::size_t i = top + 1; i < r; ++i) {
        if (A.at(i, top) == 0) continue;
        Int q = fdiv(A.at(i, top), piv);
        row_sub(A, i, q, top);
        row_sub(u, i, q, top);
        if (A.at(i, top) != 0) clean = false;
      }
      for (std::size_t j = top + 1; j < c; ++j) {
        if (A.at(top, j) == 0) continue;
        Int q = fdiv(A.at(top, j), piv);
        col_sub(A, j, q, top);
        col_sub(v, j, q, top);
        if (A.at(top, j) != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility fix-up: fold in a row holding a non-divisible entry
      bool fixed = false;
      for (std::size_t i = top + 1; i < r && !fixed; ++i)
        for (std::size_t j = top + 1; j < c && !fixed; ++j)
          if (A.at(i, j) % piv != 0) {
            row_sub(A, top, Int(-1), i);
            row_sub(u, top, Int(-1), i);
            fixed = true;
          }
      if (!fixed) break;
    }
    d[top] = A.at(top, top);
  }
  return {d, u, v};
}

// Fraction-free Bareiss determinant; exact at any magnitude.
inline Int det_exact(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("det of non-square");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix A = a;
  int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (A.at(k, k) == 0) {
      std::size_t piv = k;
      while (piv < n && A.at(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      detail::swap_rows(A, k, piv);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = A.at(i, j) * A.at(k, k) - A.at(i, k) * A.at(k, j);
        mpz_divexact(A.at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      A.at(i, k) = 0;
    }
    prev = A.at(k, k);
  }
  return sign * A.at(n - 1, n - 1);
}

inline std::size_t rank_exact(const IntMatrix& a) {
  SnfDecomposition s = smith_normal_form(a);
  std::size_t rank = 0;
  for (const Int& x : s.d)
    if (x != 0) ++rank;
  return rank;
}

// Column-style Hermite normal form: echelon columns, positive pivots, entries
// left of each pivot reduced into [0, pivot). Returns the pivot columns only,
// a basis of the column span.
inline IntMatrix hnf_columns(const IntMatrix& a) {
  using namespace detail;
  IntMatrix A = a;
  const std::size_t rows = A.rows(), cols = A.cols();
  std::size_t cpos = 0;
  for (std::size_t rpos = 0; rpos < rows && cpos < cols; ++rpos) {
    for (;;) {
      std::size_t j0 = cols;
      Int best;
      for (std::size_t j = cpos; j < cols; ++j) {
        const Int& x = A.at(rpos, j);
        if (x == 0) continue;
        Int ax = abs(x);
        if (j0 == cols || ax < best) {
          j0 = j;
          best = ax;
        }
      }
      if (j0 == cols) break;  // no pivot in this row
      swap_cols(A, cpos, j0);
      bool clean = true;
      for (std::size_t j = cpos + 1; j < cols; ++j) {
        if (A.at(rpos, j) == 0) continue;
        Int q = fdiv(A.at(rpos, j), A.at(rpos, cpos));
        col_sub(A, j, q, cpos);
        if (A.at(rpos, j) != 0) clean = false;
      }
      if (!clean) continue;
      if (A.at(rpos, cpos) < 0) negate_col(A, cpos);
      for (std::size_t j = 0; j < cpos; ++j) {
        Int q = fdiv(A.at(rpos, j), A.at(rpos, cpos));
        col_sub(A, j, q, cpos);
      }
      ++cpos;
      break;
    }
  }
  IntMatrix h(rows, cpos);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cpos; ++j) h.at(i, j) = A.at(i, j);
  return h;
}

// Saturated basis of {x : a*x = 0}: columns of the SNF right transform past
// the rank (so extendable to a basis of Z^c), put into Hermite form to make
// the output canonical.
inline IntMatrix kernel_basis(const IntMatrix& a) {
  SnfDecomposition s = smith_normal_form(a);
  std::size_t rank = 0;
  for (const Int& x : s.d)
    if (x != 0) ++rank;
  const std::size_t c = a.cols();
  IntMatrix k(c, c - rank);
  for (std::size_t j = rank; j < c; ++j)
    for (std::size_t i = 0; i < c; ++i) k.at(i, j - rank) = s.v.at(i, j);
  return hnf_columns(k);
}

// Exact solutions of a*x = b, one per right-hand side; throws SingularMatrix
// when det a = 0.
inline std::vector<QVec> solve_rational_multi(const IntMatrix& a,
                                              const std::vector<QVec>& rhs) {
  if (a.rows() != a.cols()) throw std::invalid_argument("solve: non-square");
  const std::size_t n = a.rows(), k = rhs.size();
  for (const QVec& b : rhs)
    if (b.size() != n) throw std::invalid_argument("solve: rhs size");
  // augmented [A | b1 .. bk] over Q, Gauss-Jordan with first-nonzero pivoting
  std::vector<QVec> M(n, QVec(n + k));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) M[i][j] = Rat(a.at(i, j));
    for (std::size_t j = 0; j < k; ++j) M[i][n + j] = rhs[j][i];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && M[piv][col] == 0) ++piv;
    if (piv == n) throw SingularMatrix();
    std::swap(M[col], M[piv]);
    Rat p = M[col][col];
    for (std::size_t j = col; j < n + k; ++j) M[col][j] /= p;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || M[i][col] == 0) continue;
      Rat f = M[i][col];
      for (std::size_t j = col; j < n + k; ++j) M[i][j] -= f * M[col][j];
    }
  }
  std::vector<QVec> out(k, QVec(n));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i) out[j][i] = M[i][n + j];
  return out;
}

inline QVec solve_rational(const IntMatrix& a, const QVec& b) {
  return solve_rational_multi(a, {b})[0];
}

inline bool is_integral(const QVec& v) {
  for (const Rat& x : v)
    if (x.get_den() != 1) return false;
  return true;
}

inline std::vector<Int> to_int_vec(const QVec& v) {
  std::vector<Int> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].get_den() != 1) throw std::invalid_argument("non-integral vector");
    out[i] = v[i].get_num();
  }
  return out;
}

namespace detail {

inline IntMatrix inverse_unimodular(const IntMatrix& u) {
  const std::size_t n = u.rows();
  std::vector<QVec> cols(n, QVec(n));
  for (std::size_t j = 0; j < n; ++j) cols[j][j] = 1;
  auto sol = solve_rational_multi(u, cols);
  IntMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!is_integral(sol[j])) throw std::invalid_argument("matrix is not unimodular");
    for (std::size_t i = 0; i < n; ++i) inv.at(i, j) = sol[j][i].get_num();
  }
  return inv;
}

}  // namespace detail

}  // namespace bblab
