#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "bblab/int_matrix.hpp"

namespace bblab {

// B(a,b)B(c,d) + B(a,c)B(b,d) + B(a,d)B(b,c) against the given Gram; the
// degree-4 cup value of a product of four degree-2 classes, with the cubic
// constant already divided out.
inline Int fujiki_quadruple(const IntMatrix& bb, const std::vector<Int>& a,
                            const std::vector<Int>& b, const std::vector<Int>& c,
                            const std::vector<Int>& d) {
  auto B = [&](const std::vector<Int>& x, const std::vector<Int>& y) {
    Int acc = 0;
    for (std::size_t i = 0; i < bb.rows(); ++i) {
      if (x[i] == 0) continue;
      Int row = 0;
      for (std::size_t j = 0; j < bb.cols(); ++j) row += bb.at(i, j) * y[j];
      acc += x[i] * row;
    }
    return acc;
  };
  return B(a, b) * B(c, d) + B(a, c) * B(b, d) + B(a, d) * B(b, c);
}

// One formal degree-4 monomial: the point class, or a product of two
// degree-2 classes (gamma_k gamma_m with k <= m, delta gamma_k, delta delta).
struct Mono {
  enum class Kind : int { point = 0, gamma_gamma = 1, delta_gamma = 2, delta_delta = 3 };
  Kind kind = Kind::point;
  std::size_t k = 0, m = 0;

  static Mono point() { return {}; }
  static Mono gammas(std::size_t k, std::size_t m) {
    if (k > m) std::swap(k, m);
    return {Kind::gamma_gamma, k, m};
  }
  static Mono delta_gamma(std::size_t k) { return {Kind::delta_gamma, k, 0}; }
  static Mono delta_delta() { return {Kind::delta_delta, 0, 0}; }

  friend bool operator<(const Mono& a, const Mono& b) {
    return std::tie(a.kind, a.k, a.m) < std::tie(b.kind, b.k, b.m);
  }
  friend bool operator==(const Mono& a, const Mono& b) {
    return a.kind == b.kind && a.k == b.k && a.m == b.m;
  }
};

struct MonomialCombo {
  std::map<Mono, Rat> terms;

  MonomialCombo& add(const Mono& mono, const Rat& coeff) {
    if (coeff == 0) return *this;
    Rat& slot = terms[mono];
    slot += coeff;
    if (slot == 0) terms.erase(mono);
    return *this;
  }
};

namespace detail {

// factor indices of a product symbol inside the Gram with delta appended last
inline std::pair<std::size_t, std::size_t> mono_factors(const Mono& m,
                                                        std::size_t delta) {
  switch (m.kind) {
    case Mono::Kind::gamma_gamma: return {m.k, m.m};
    case Mono::Kind::delta_gamma: return {delta, m.k};
    case Mono::Kind::delta_delta: return {delta, delta};
    default: throw std::logic_error("point class has no factors");
  }
}

inline Rat mono_pair(const Mono& x, const Mono& y, const IntMatrix& bb,
                     const std::optional<Int>& point_dd) {
  const std::size_t delta = bb.rows() - 1;
  const bool xp = x.kind == Mono::Kind::point, yp = y.kind == Mono::Kind::point;
  if (xp && yp) return 1;
  if (xp || yp) {
    const Mono& other = xp ? y : x;
    switch (other.kind) {
      case Mono::Kind::delta_gamma: return 0;
      case Mono::Kind::gamma_gamma: return Rat(bb.at(other.k, other.m));
      case Mono::Kind::delta_delta:
        if (!point_dd)
          throw std::logic_error("pt against delta*delta needs the resolved constant");
        return Rat(*point_dd);
      default: return 1;
    }
  }
  auto [a, b] = mono_factors(x, delta);
  auto [c, d] = mono_factors(y, delta);
  return Rat(bb.at(a, b) * bb.at(c, d) + bb.at(a, c) * bb.at(b, d) +
             bb.at(a, d) * bb.at(b, c));
}

}  // namespace detail

// Bilinear extension of the pairing rules; point_dd is the contested
// pt*(delta delta) constant, required only when such a term actually pairs.
inline Rat monomial_pairing(const MonomialCombo& x, const MonomialCombo& y,
                            const IntMatrix& bb,
                            const std::optional<Int>& point_dd = std::nullopt) {
  Rat acc = 0;
  for (const auto& [mx, cx] : x.terms)
    for (const auto& [my, cy] : y.terms)
      acc += cx * cy * detail::mono_pair(mx, my, bb, point_dd);
  return acc;
}

}  // namespace bblab
