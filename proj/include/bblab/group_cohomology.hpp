#pragma once

#include <stdexcept>
#include <vector>

#include "bblab/exact_linalg.hpp"
#include "bblab/int_matrix.hpp"

namespace bblab {

struct InvolutionModule {
  std::size_t rank;
  IntMatrix action;

  InvolutionModule(std::size_t r, IntMatrix a) : rank(r), action(std::move(a)) {
    if (action.rows() != rank || action.cols() != rank)
      throw std::invalid_argument("action size mismatch");
    if (action * action != IntMatrix::identity(rank))
      throw std::invalid_argument("action is not an involution");
  }
};

struct GroupDescription {
  std::size_t free_rank = 0;
  std::vector<Int> invariant_factors;           // entries > 1
  std::vector<std::vector<Int>> generators;     // ambient coordinates, torsion first

  bool is_trivial() const { return free_rank == 0 && invariant_factors.empty(); }
  Int torsion_order() const {
    Int n = 1;
    for (const auto& f : invariant_factors) n *= f;
    return n;
  }
};

// Cohomology of Z/2 acting through the module involution, from the two-step
// periodic resolution: degree 0 is the invariants, odd degrees are
// ker(1+g)/im(g-1), positive even degrees ker(g-1)/im(g+1).
inline GroupDescription cohomology_z2(const InvolutionModule& m, std::size_t p) {
  const std::size_t n = m.rank;
  const IntMatrix id = IntMatrix::identity(n);
  GroupDescription out;

  if (p == 0) {
    IntMatrix k = kernel_basis(m.action - id);
    out.free_rank = k.cols();
    for (std::size_t j = 0; j < k.cols(); ++j) out.generators.push_back(k.column(j));
    return out;
  }

  const IntMatrix ker_of = (p % 2 == 1) ? m.action + id : m.action - id;
  const IntMatrix im_of = (p % 2 == 1) ? m.action - id : m.action + id;
  IntMatrix k = kernel_basis(ker_of);
  const std::size_t r = k.cols();
  if (r == 0) return out;

  // image generators in kernel coordinates; integral because the kernel basis
  // is saturated
  IntMatrix normal = k.transpose() * k;
  IntMatrix rhs = k.transpose() * im_of;
  std::vector<QVec> cols(n, QVec(r));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < r; ++i) cols[j][i] = Rat(rhs.at(i, j));
  auto sols = solve_rational_multi(normal, cols);
  IntMatrix im_coords(r, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!is_integral(sols[j])) throw std::logic_error("image left the kernel");
    for (std::size_t i = 0; i < r; ++i) im_coords.at(i, j) = sols[j][i].get_num();
  }

  auto snf = smith_normal_form(im_coords);
  std::size_t im_rank = 0;
  for (const Int& d : snf.d)
    if (d != 0) ++im_rank;
  out.free_rank = r - im_rank;

  IntMatrix uinv = detail::inverse_unimodular(snf.u);
  for (std::size_t i = 0; i < im_rank; ++i) {
    if (snf.d[i] <= 1) continue;
    out.invariant_factors.push_back(snf.d[i]);
    std::vector<Int> lift(n, 0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < r; ++b) lift[a] += k.at(a, b) * uinv.at(b, i);
    out.generators.push_back(std::move(lift));
  }
  return out;
}

}  // namespace bblab
