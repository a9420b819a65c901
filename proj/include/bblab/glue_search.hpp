#pragma once

#include <numeric>
#include <optional>
#include <vector>

#include "bblab/lattice.hpp"
#include "bblab/sublattices.hpp"

namespace bblab {

struct GlueSearchResult {
  enum class Status { found, bound_exhausted };
  Status status = Status::bound_exhausted;
  std::optional<Lattice> overlattice;
  std::vector<QVec> glue;  // coordinates in the direct sum
  std::size_t tried = 0;

  bool found() const { return status == Status::found; }
};

namespace detail {

struct DiscData {
  std::vector<long> orders;
  std::vector<Rat> q;                     // generator squares mod 2
  std::vector<std::vector<Rat>> pairing;  // generator pairings mod 1
  std::vector<QVec> gens;
};

inline DiscData disc_data(const Lattice& l) {
  auto g = discriminant_group(l);
  DiscData d;
  for (const auto& o : g.orders) d.orders.push_back(to_long_checked(o));
  d.gens = g.generators;
  const std::size_t m = d.gens.size();
  d.q.resize(m);
  d.pairing.assign(m, std::vector<Rat>(m));
  for (std::size_t k = 0; k < m; ++k) {
    d.q[k] = mod_reduce(bilinear(d.gens[k], l.gram, d.gens[k]), 2);
    for (std::size_t j = 0; j < m; ++j)
      d.pairing[k][j] = mod_reduce(bilinear(d.gens[k], l.gram, d.gens[j]), 1);
  }
  return d;
}

struct DiscElement {
  std::vector<long> coeffs;
  long order = 1;
  Rat q;  // mod 2
};

inline std::vector<DiscElement> enumerate_group(const DiscData& d) {
  const std::size_t m = d.orders.size();
  std::vector<DiscElement> out;
  std::vector<long> c(m, 0);
  for (;;) {
    DiscElement e;
    e.coeffs = c;
    Rat val = 0;
    for (std::size_t k = 0; k < m; ++k) {
      if (c[k] == 0) continue;
      long ord = d.orders[k] / std::gcd(d.orders[k], c[k]);
      e.order = std::lcm(e.order, ord);
      val += Rat(c[k]) * Rat(c[k]) * d.q[k];
      for (std::size_t j = k + 1; j < m; ++j)
        if (c[j] != 0) val += Rat(2 * c[k] * c[j]) * d.pairing[k][j];
    }
    e.q = mod_reduce(val, 2);
    out.push_back(std::move(e));
    std::size_t pos = 0;
    while (pos < m) {
      ++c[pos];
      if (c[pos] < d.orders[pos]) break;
      c[pos] = 0;
      ++pos;
    }
    if (pos == m) break;
  }
  return out;
}

inline Rat element_pairing(const DiscData& d, const std::vector<long>& x,
                           const std::vector<long>& y) {
  Rat val = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (y[j] != 0) val += Rat(x[k] * y[j]) * d.pairing[k][j];
  }
  return mod_reduce(val, 1);
}

}  // namespace detail

// Bounded search for an anti-isometry of discriminant forms whose graph glues
// the direct sum to an even unimodular overlattice. Exhausting the bound is
// reported as such; the search never claims impossibility.
inline GlueSearchResult glue_unimodular_search(const Lattice& a, const Lattice& b,
                                               std::size_t bound = 1000000) {
  if (!a.is_even() || !b.is_even())
    throw std::invalid_argument("glue search targets even overlattices only");
  auto pa = discriminant_profile(a), pb = discriminant_profile(b);
  if (pa.disc_order() != pb.disc_order())
    throw std::invalid_argument("discriminant group orders differ");
  int sigdiff = pa.signature.first + pb.signature.first - pa.signature.second -
                pb.signature.second;
  if (sigdiff % 8 != 0)
    throw std::invalid_argument("signature sum admits no even unimodular lattice");

  const Lattice sum = direct_sum(a, b);
  GlueSearchResult res;

  auto da = detail::disc_data(a);
  auto db = detail::disc_data(b);
  const std::size_t m = da.orders.size();

  Int group_order = pb.disc_order();
  if (group_order > Int(static_cast<long>(bound))) return res;  // pool too large
  auto pool = detail::enumerate_group(db);
  res.tried = pool.size();

  std::vector<std::size_t> chosen(m, 0);
  std::vector<QVec> glue(m);

  auto build_candidate = [&]() -> std::optional<Lattice> {
    std::vector<QVec> gens;
    const std::size_t n = sum.rank();
    for (std::size_t i = 0; i < n; ++i) {
      QVec unit(n);
      unit[i] = 1;
      gens.push_back(std::move(unit));
    }
    for (std::size_t k = 0; k < m; ++k) {
      QVec v(n);
      for (std::size_t i = 0; i < a.rank(); ++i) v[i] = da.gens[k][i];
      const auto& c = pool[chosen[k]].coeffs;
      for (std::size_t j = 0; j < db.gens.size(); ++j)
        for (std::size_t i = 0; i < b.rank(); ++i)
          v[a.rank() + i] += Rat(c[j]) * db.gens[j][i];
      glue[k] = v;
      gens.push_back(std::move(v));
    }
    auto span = detail::span_lattice(sum.gram, gens);
    Lattice cand("", span.gram);
    if (abs(cand.det()) != 1 || !cand.is_even()) return std::nullopt;
    return cand;
  };

  // depth first over generator images with order, square and pairing pruning
  std::size_t k = 0;
  std::vector<std::size_t> next(m + 1, 0);
  while (true) {
    if (k == m) {
      auto cand = build_candidate();
      if (cand) {
        res.status = GlueSearchResult::Status::found;
        res.overlattice = std::move(*cand);
        res.glue = glue;
        return res;
      }
      if (m == 0) return res;
      --k;
      continue;
    }
    bool advanced = false;
    while (next[k] < pool.size()) {
      const auto& z = pool[next[k]];
      ++res.tried;
      if (res.tried > bound) return res;
      bool ok = z.order == da.orders[k] &&
                detail::mod_reduce(z.q + da.q[k], 2) == 0;
      for (std::size_t j = 0; ok && j < k; ++j) {
        Rat want = detail::mod_reduce(-da.pairing[k][j], 1);
        ok = detail::element_pairing(db, z.coeffs, pool[chosen[j]].coeffs) == want;
      }
      if (ok) {
        chosen[k] = next[k]++;
        next[k + 1] = 0;
        ++k;
        advanced = true;
        break;
      }
      ++next[k];
    }
    if (advanced) continue;
    if (k == 0) return res;  // pool exhausted at the root: no graph in bound
    --k;
  }
}

}  // namespace bblab
