#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bblab/catalog.hpp"
#include "bblab/glue_search.hpp"
#include "bblab/group_cohomology.hpp"
#include "bblab/h4.hpp"
#include "bblab/lattice.hpp"
#include "bblab/sublattices.hpp"

namespace bblab {

struct VerificationReport {
  std::string check;
  std::string anchor;
  nlohmann::json expected;
  std::string provenance;  // PAPER | TRIVIAL | DERIVED
  nlohmann::json actual;
  std::string status;  // pass | fail | blocked
};

inline void to_json(nlohmann::json& j, const VerificationReport& r) {
  j = nlohmann::json{{"check", r.check},         {"anchor", r.anchor},
                     {"expected", r.expected},   {"provenance", r.provenance},
                     {"actual", r.actual},       {"status", r.status}};
}

namespace detail {

inline nlohmann::json int_json(const Int& x) {
  if (x.fits_slong_p()) return nlohmann::json(x.get_si());
  return nlohmann::json(x.get_str());  // decimal string once past native range
}

inline nlohmann::json rat_json(Rat x) {
  x.canonicalize();  // callers may hand over non-canonical fractions
  if (x.get_den() == 1) return int_json(x.get_num());
  return nlohmann::json(x.get_str());
}

inline nlohmann::json profile_json(const DiscriminantProfile& p) {
  nlohmann::json factors = nlohmann::json::array();
  for (const Int& f : p.invariant_factors) factors.push_back(int_json(f));
  nlohmann::json values = nlohmann::json::array();
  for (const Rat& v : p.disc_form_values) values.push_back(rat_json(v));
  return nlohmann::json{{"rank", p.rank},
                        {"signature", {p.signature.first, p.signature.second}},
                        {"even", p.even},
                        {"factors", factors},
                        {"values", values}};
}

inline Int matrix_content(const IntMatrix& m) {
  Int g = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), m.at(i, j).get_mpz_t());
  return g;
}

inline Int pow2(unsigned long n) {
  Int x;
  mpz_ui_pow_ui(x.get_mpz_t(), 2, n);
  return x;
}

}  // namespace detail

inline VerificationReport make_report(std::string check, std::string anchor,
                                      nlohmann::json expected, std::string provenance,
                                      nlohmann::json actual) {
  VerificationReport r;
  r.check = std::move(check);
  r.anchor = std::move(anchor);
  r.expected = std::move(expected);
  r.provenance = std::move(provenance);
  r.actual = std::move(actual);
  r.status = r.expected == r.actual ? "pass" : "fail";
  return r;
}

// Named integer unknowns constrained by exact linear equations (alternating
// sums of known dimensions). Solvable means a unique integer solution.
struct DimensionLedger {
  std::vector<std::string> unknowns;
  struct Equation {
    std::vector<Int> coeffs;
    Int rhs;
  };
  std::vector<Equation> equations;

  void add(std::vector<Int> coeffs, Int rhs) {
    if (coeffs.size() != unknowns.size())
      throw std::invalid_argument("equation arity mismatch");
    equations.push_back({std::move(coeffs), std::move(rhs)});
  }

  // nullopt when the system is inconsistent, underdetermined, or fractional
  std::optional<std::vector<Int>> solve() const {
    const std::size_t m = equations.size(), n = unknowns.size();
    std::vector<QVec> a(m, QVec(n + 1));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) a[i][j] = Rat(equations[i].coeffs[j]);
      a[i][n] = Rat(equations[i].rhs);
    }
    std::vector<std::size_t> pivot_row(n, m);
    std::vector<bool> used(m, false);
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t p = m;
      for (std::size_t i = 0; i < m; ++i)
        if (!used[i] && a[i][col] != 0) {
          p = i;
          break;
        }
      if (p == m) continue;
      used[p] = true;
      pivot_row[col] = p;
      for (std::size_t i = 0; i < m; ++i) {
        if (i == p || a[i][col] == 0) continue;
        Rat f = a[i][col] / a[p][col];
        for (std::size_t j = 0; j <= n; ++j) a[i][j] -= f * a[p][j];
      }
    }
    for (std::size_t col = 0; col < n; ++col)
      if (pivot_row[col] == m) return std::nullopt;  // not unique
    for (std::size_t i = 0; i < m; ++i) {
      if (used[i]) continue;
      for (std::size_t j = 0; j <= n; ++j)
        if (a[i][j] != 0) return std::nullopt;  // inconsistent leftover row
    }
    std::vector<Int> out(n);
    for (std::size_t col = 0; col < n; ++col) {
      Rat x = a[pivot_row[col]][n] / a[pivot_row[col]][col];
      x.canonicalize();
      if (x.get_den() != 1) return std::nullopt;
      out[col] = x.get_num();
    }
    return out;
  }
};

// The one-parameter family of candidate degree-2 forms: scaling the unit-scale
// family by the unique positive rational that lands on an integral form of
// content one. The top-intersection constant follows as 24 over the square.
struct FujikiSolution {
  Rat lambda;
  Rat constant;
  IntMatrix gram;  // family gram at the solved scale, basis: 8 half
                   // pushforwards, 6 plane classes, the two half glue sums
};

namespace detail {

// ambient pushforward form at unit scale: doubled negative E8, three planes,
// the two exceptional squares
inline IntMatrix fujiki_ambient_unit() {
  IntMatrix e8 = make_E8(1).gram;
  IntMatrix f(16, 16);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) f.at(i, j) = -2 * e8.at(i, j);
  for (std::size_t b = 0; b < 3; ++b) {
    f.at(8 + 2 * b, 9 + 2 * b) = 1;
    f.at(9 + 2 * b, 8 + 2 * b) = 1;
  }
  f.at(14, 14) = -2;
  f.at(15, 15) = -2;
  return f;
}

inline std::vector<QVec> fujiki_family_basis() {
  std::vector<QVec> basis;
  for (std::size_t i = 0; i < 8; ++i) {
    QVec v(16);
    v[i] = Rat(1, 2);
    basis.push_back(std::move(v));
  }
  for (std::size_t i = 8; i < 14; ++i) {
    QVec v(16);
    v[i] = 1;
    basis.push_back(std::move(v));
  }
  for (int sign : {1, -1}) {
    QVec v(16);
    v[14] = Rat(1, 2);
    v[15] = Rat(sign, 2);
    basis.push_back(std::move(v));
  }
  return basis;
}

inline Rat form_pairing(const IntMatrix& form, const QVec& x, const QVec& y) {
  Rat acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (y[j] != 0) acc += x[i] * Rat(form.at(i, j)) * y[j];
  }
  return acc;
}

}  // namespace detail

inline FujikiSolution solve_fujiki_constant() {
  IntMatrix f1 = detail::fujiki_ambient_unit();
  auto basis = detail::fujiki_family_basis();
  const std::size_t n = basis.size();
  std::vector<QVec> g1(n, QVec(n));
  Int denom = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      g1[i][j] = detail::form_pairing(f1, basis[i], basis[j]);
      mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), g1[i][j].get_den_mpz_t());
    }
  IntMatrix num(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rat scaled = g1[i][j] * Rat(denom);
      num.at(i, j) = scaled.get_num();
    }
  Int content = detail::matrix_content(num);
  if (content == 0) throw std::logic_error("degenerate candidate family");
  // lambda * g1 integral of content one forces lambda = denom / content; any
  // other integral multiple has divisible entries
  Rat lambda(denom, content);
  lambda.canonicalize();
  IntMatrix gram(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rat x = lambda * g1[i][j];
      if (x.get_den() != 1) throw std::logic_error("family scale is not integral");
      gram.at(i, j) = x.get_num();
    }
  if (detail::matrix_content(gram) != 1)
    throw std::logic_error("family scale is not indivisible");
  Rat constant = Rat(24) / (lambda * lambda);
  constant.canonicalize();
  return {lambda, constant, gram};
}

// Primitivity and divisibility facts the final assembly depends on; a failed
// certificate blocks the assembly instead of silently feeding it.
struct Certificates {
  bool parity = false;       // difference of the distinguished classes
  bool membership = false;   // half sums stay outside except zero
  bool indivisible = false;  // surface class not divisible by 2
  bool all() const { return parity && membership && indivisible; }
};

struct PipelineOptions {
  long glue_bound = 1000000;
};

class Pipeline {
 public:
  explicit Pipeline(PipelineOptions opt = {}) : opt_(opt) {}

  static const std::vector<std::string>& check_ids() {
    static const std::vector<std::string> ids = {
        "k3-quotient",    "torus-quotient", "nikulin",       "h4-gram",
        "h4-invariant",   "k-tilde",        "adf-parity",    "h2-primitivity",
        "fujiki-constant", "final-lattice", "smith-dims",    "betti-euler"};
    return ids;
  }

  static bool is_check_id(const std::string& id) {
    const auto& ids = check_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
  }

  std::vector<VerificationReport> run_check(const std::string& id) {
    if (id == "k3-quotient") return run_k3_quotient();
    if (id == "torus-quotient") return run_torus_quotient();
    if (id == "nikulin") return run_nikulin();
    if (id == "h4-gram") return run_h4_gram();
    if (id == "h4-invariant") return run_h4_invariant();
    if (id == "k-tilde") return run_k_tilde();
    if (id == "adf-parity") return run_adf_parity();
    if (id == "h2-primitivity") return run_h2_primitivity();
    if (id == "fujiki-constant") return run_fujiki_constant();
    if (id == "final-lattice") return run_final_lattice();
    if (id == "smith-dims") return run_smith_dims();
    if (id == "betti-euler") return run_betti_euler();
    throw std::invalid_argument("unknown check id: " + id);
  }

  std::vector<VerificationReport> run_all() {
    std::vector<VerificationReport> out;
    for (const auto& id : check_ids()) {
      auto part = run_check(id);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }

  H4Context& context() {
    if (!ctx_) {
      auto k3 = make_k3();
      ctx_.emplace(k3.lattice.gram, k3.involution.matrix);
    }
    return *ctx_;
  }

  Certificates evaluate_certificates() {
    H4Context& c = context();
    Certificates certs;
    certs.parity = c.adf_parity_check();
    std::size_t hits = 0;
    bool zero_in = false;
    for (unsigned mask = 0; mask < 128; ++mask) {
      std::array<bool, 7> pick{};
      for (unsigned b = 0; b < 7; ++b) pick[b] = (mask >> b) & 1u;
      if (c.half_vector_membership(pick)) {
        ++hits;
        if (mask == 0) zero_in = true;
      }
    }
    certs.membership = zero_in && hits == 1;
    Int g = 0;
    for (const Int& x : c.sigma().coords)
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    certs.indivisible = g == 1;
    return certs;
  }

  std::vector<VerificationReport> run_k3_quotient() {
    using detail::int_json;
    using detail::profile_json;
    auto k3 = make_k3();
    auto nod = norm_overlattice_data(k3.lattice, k3.involution);
    Lattice target = direct_sum(make_E8(-1), u2_cubed());
    std::vector<VerificationReport> out;
    out.push_back(make_report("k3-quotient", "quotient-lattice-profile",
                              profile_json(discriminant_profile(target)), "PAPER",
                              profile_json(discriminant_profile(nod.lattice))));
    out.push_back(make_report("k3-quotient", "pushforward-half-integrality-rank",
                              8, "PAPER", nod.glue_rank));
    out.push_back(make_report("k3-quotient", "quotient-disc-order", 64, "PAPER",
                              int_json(discriminant_profile(nod.lattice).disc_order())));
    Lattice comp = direct_sum(make_nikulin(), make_E8(-1));
    out.push_back(make_report("k3-quotient", "complement-disc-balance", 64, "PAPER",
                              int_json(discriminant_profile(comp).disc_order())));
    auto search = glue_unimodular_search(direct_sum(u2_cubed(), make_E8(-1)),
                                         make_nikulin(),
                                         static_cast<std::size_t>(opt_.glue_bound));
    out.push_back(make_report("k3-quotient", "glue-search-reaches-unimodular", "found",
                              "DERIVED",
                              search.found() ? "found" : "bound_exhausted"));
    return out;
  }

  std::vector<VerificationReport> run_torus_quotient() {
    using detail::int_json;
    Lattice u3 = u_cubed();
    Isometry id(u3, IntMatrix::identity(6));
    auto nod = norm_overlattice_data(u3, id);
    std::vector<VerificationReport> out;
    out.push_back(make_report("torus-quotient", "quotient-gram",
                              matrix_to_json(u2_cubed().gram), "PAPER",
                              matrix_to_json(nod.lattice.gram)));
    auto prof = discriminant_profile(nod.lattice);
    nlohmann::json factors = nlohmann::json::array();
    for (const Int& f : prof.invariant_factors) factors.push_back(int_json(f));
    out.push_back(make_report("torus-quotient", "disc-group-exponents",
                              nlohmann::json{2, 2, 2, 2, 2, 2}, "DERIVED", factors));
    out.push_back(
        make_report("torus-quotient", "no-extra-halves", 0, "TRIVIAL", nod.glue_rank));
    out.push_back(make_report("torus-quotient", "quotient-signature",
                              nlohmann::json{3, 3}, "DERIVED",
                              nlohmann::json{prof.signature.first, prof.signature.second}));
    return out;
  }

  std::vector<VerificationReport> run_nikulin() {
    using detail::int_json;
    auto pres = make_nikulin_presentation();
    auto prof = discriminant_profile(pres.lattice);
    std::vector<VerificationReport> out;
    out.push_back(make_report("nikulin", "disc-order", 64, "PAPER",
                              int_json(prof.disc_order())));
    Sublattice roots(pres.lattice, pres.root_coords);
    out.push_back(make_report("nikulin", "root-glue-index", 2, "PAPER",
                              int_json(saturate(roots).index)));
    Int half_sq =
        (pres.half_sum.transpose() * pres.lattice.gram * pres.half_sum).at(0, 0);
    out.push_back(make_report("nikulin", "half-sum-square", -4, "PAPER",
                              int_json(half_sq)));
    out.push_back(make_report("nikulin", "even-signature",
                              nlohmann::json{true, {0, 8}}, "DERIVED",
                              nlohmann::json{prof.even,
                                             {prof.signature.first, prof.signature.second}}));
    return out;
  }

  std::vector<VerificationReport> run_h4_gram() {
    using detail::int_json;
    H4Context& c = context();
    std::vector<VerificationReport> out;
    out.push_back(make_report("h4-gram", "basis-size", 276, "PAPER", c.size()));
    out.push_back(make_report("h4-gram", "gram-symmetric", true, "DERIVED",
                              c.gram().is_symmetric()));
    Int absdet = 1;
    for (const Int& f : smith_normal_form(c.gram()).d) absdet *= f;
    out.push_back(
        make_report("h4-gram", "gram-unimodular", 1, "PAPER", int_json(absdet)));
    return out;
  }

  std::vector<VerificationReport> run_h4_invariant() {
    using detail::int_json;
    H4Context& c = context();
    const InvariantH4& inv = c.invariant();
    std::vector<VerificationReport> out;
    out.push_back(
        make_report("h4-invariant", "invariant-rank", 156, "PAPER", inv.types.size()));
    auto census = inv.census();
    out.push_back(make_report("h4-invariant", "orbit-type-census",
                              nlohmann::json{27, 56, 36, 8, 28, 1}, "PAPER",
                              nlohmann::json(census)));
    out.push_back(make_report("h4-invariant", "invariant-disc-order",
                              int_json(detail::pow2(120)), "PAPER",
                              int_json(abs(det_exact(inv.induced)))));
    return out;
  }

  std::vector<VerificationReport> run_k_tilde() {
    using detail::int_json;
    H4Context& c = context();
    std::vector<VerificationReport> out;
    out.push_back(make_report("k-tilde", "doubled-disc-order",
                              int_json(detail::pow2(276)), "PAPER",
                              int_json(abs(det_exact(c.k_lattice().gram)))));
    out.push_back(make_report("k-tilde", "halved-disc-order",
                              int_json(detail::pow2(36)), "PAPER",
                              int_json(abs(det_exact(c.k_tilde().gram)))));
    auto census = c.invariant().census();
    std::size_t halved = census[1] + census[2] + census[4];  // the b, c, e kinds
    out.push_back(
        make_report("k-tilde", "halved-generator-count", 120, "DERIVED", halved));
    return out;
  }

  std::vector<VerificationReport> run_adf_parity() {
    using detail::int_json;
    H4Context& c = context();
    const DeltaSquared& d2 = c.delta_squared();
    const H4Class& s = c.sigma();
    std::vector<VerificationReport> out;
    out.push_back(make_report("adf-parity", "diagonal-square-point-coefficient", -1,
                              "DERIVED", int_json(d2.d)));
    out.push_back(make_report("adf-parity", "diagonal-square-negates-printed", true,
                              "DERIVED", d2.matches_negated_printed));
    out.push_back(make_report("adf-parity", "diagonal-square-self-pairing", 12, "PAPER",
                              int_json(c.pair_classes(d2.cls, d2.cls))));
    out.push_back(make_report("adf-parity", "surface-self-pairing", 12, "PAPER",
                              int_json(c.pair_classes(s, s))));
    out.push_back(make_report("adf-parity", "diagonal-square-dot-surface", -4, "PAPER",
                              int_json(c.pair_classes(d2.cls, s))));
    auto fixed_by_iota = [&](const std::vector<Int>& v) {
      const IntMatrix& p = c.iota();
      for (std::size_t i = 0; i < v.size(); ++i) {
        Int acc = 0;
        for (std::size_t j = 0; j < v.size(); ++j)
          if (p.at(i, j) != 0) acc += p.at(i, j) * v[j];
        if (acc != v[i]) return false;
      }
      return true;
    };
    out.push_back(make_report("adf-parity", "classes-fixed-by-involution", true,
                              "DERIVED",
                              fixed_by_iota(d2.cls.coords) && fixed_by_iota(s.coords)));
    Int g = 0;
    for (const Int& x : s.coords) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    out.push_back(
        make_report("adf-parity", "surface-indivisible", true, "PAPER", g == 1));
    out.push_back(make_report("adf-parity", "difference-parity-pass", true, "PAPER",
                              c.adf_parity_check()));
    return out;
  }

  std::vector<VerificationReport> run_h2_primitivity() {
    H4Context& c = context();
    std::size_t nonzero_hits = 0;
    bool zero_in = false;
    for (unsigned mask = 0; mask < 128; ++mask) {
      std::array<bool, 7> pick{};
      for (unsigned b = 0; b < 7; ++b) pick[b] = (mask >> b) & 1u;
      if (c.half_vector_membership(pick)) {
        if (mask == 0) zero_in = true;
        else ++nonzero_hits;
      }
    }
    std::vector<VerificationReport> out;
    out.push_back(make_report("h2-primitivity", "zero-selection-inside", true, "PAPER",
                              zero_in));
    out.push_back(make_report("h2-primitivity", "nonzero-selections-inside", 0, "PAPER",
                              nonzero_hits));
    return out;
  }

  std::vector<VerificationReport> run_fujiki_constant() {
    using detail::int_json;
    using detail::rat_json;
    FujikiSolution sol = solve_fujiki_constant();
    std::vector<VerificationReport> out;
    out.push_back(
        make_report("fujiki-constant", "integral-scale", 2, "PAPER", rat_json(sol.lambda)));
    out.push_back(make_report("fujiki-constant", "top-intersection-constant", 6, "PAPER",
                              rat_json(sol.constant)));
    // the surface class is the difference of the two half glue sums
    Int surface_sq = sol.gram.at(14, 14) + sol.gram.at(15, 15) - 2 * sol.gram.at(14, 15);
    out.push_back(make_report("fujiki-constant", "surface-class-square", -4, "PAPER",
                              int_json(surface_sq)));
    Int ortho = 0;
    for (std::size_t i = 0; i < 14; ++i)
      ortho += abs(sol.gram.at(i, 14) - sol.gram.at(i, 15));
    out.push_back(make_report("fujiki-constant", "pushforward-orthogonal-to-surface", 0,
                              "PAPER", int_json(ortho)));
    out.push_back(make_report("fujiki-constant", "form-content", 1, "DERIVED",
                              int_json(detail::matrix_content(sol.gram))));
    return out;
  }

  std::vector<VerificationReport> run_final_lattice() {
    return final_lattice_reports(evaluate_certificates());
  }

  std::vector<VerificationReport> final_lattice_reports(const Certificates& certs) {
    using detail::int_json;
    using detail::profile_json;
    static const std::vector<std::pair<std::string, std::string>> shape = {
        {"assembled-rank", "PAPER"},
        {"assembled-disc-order", "DERIVED"},
        {"glue-pair-block", "DERIVED"},
        {"base-change-to-standard-form", "PAPER"},
        {"profile-matches-standard-form", "PAPER"}};
    if (!certs.all()) {
      std::vector<VerificationReport> out;
      for (const auto& [anchor, prov] : shape) {
        VerificationReport r;
        r.check = "final-lattice";
        r.anchor = anchor;
        r.expected = "certified-assembly";
        r.provenance = prov;
        r.actual = nullptr;
        r.status = "blocked";
        out.push_back(std::move(r));
      }
      return out;
    }

    FujikiSolution sol = solve_fujiki_constant();
    if (sol.lambda.get_den() != 1)
      throw std::logic_error("fractional family scale cannot assemble a lattice");
    IntMatrix ambient = detail::fujiki_ambient_unit().scaled(sol.lambda.get_num());
    std::vector<QVec> gens;
    for (std::size_t i = 0; i < 8; ++i) {
      QVec v(16);
      v[i] = Rat(1, 2);
      gens.push_back(std::move(v));
    }
    for (std::size_t i = 8; i < 16; ++i) {
      QVec v(16);
      v[i] = 1;
      gens.push_back(std::move(v));
    }
    QVec half(16);
    half[14] = half[15] = Rat(1, 2);
    gens.push_back(std::move(half));
    auto sp = detail::span_lattice(ambient, gens);
    Lattice assembled("H2", sp.gram);

    Lattice target = direct_sum(direct_sum(make_E8(-1), u2_cubed()),
                                direct_sum(make_rank1(-2), make_rank1(-2)));

    std::vector<VerificationReport> out;
    out.push_back(make_report("final-lattice", "assembled-rank", 16, "PAPER",
                              assembled.rank()));
    auto prof = discriminant_profile(assembled);
    out.push_back(make_report("final-lattice", "assembled-disc-order", 256, "DERIVED",
                              int_json(prof.disc_order())));

    // the two half sums of the exceptional pair span an orthogonal (-2) pair
    auto basis = detail::fujiki_family_basis();
    nlohmann::json glue_block = nlohmann::json::array();
    for (std::size_t i = 14; i < 16; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t j = 14; j < 16; ++j)
        row.push_back(detail::rat_json(detail::form_pairing(ambient, basis[i], basis[j])));
      glue_block.push_back(row);
    }
    out.push_back(make_report("final-lattice", "glue-pair-block",
                              nlohmann::json{{-2, 0}, {0, -2}}, "DERIVED", glue_block));

    // base change: express the intended standard basis in the assembled basis
    std::vector<QVec> rhs;
    for (const QVec& v : basis) {
      QVec scaled(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = v[i] * Rat(sp.denom);
      rhs.push_back(std::move(scaled));
    }
    auto coords = solve_rational_multi(sp.scaled_basis, rhs);
    bool integral = true;
    IntMatrix p(16, 16);
    for (std::size_t j = 0; j < 16 && integral; ++j) {
      for (std::size_t i = 0; i < 16; ++i) {
        coords[j][i].canonicalize();
        if (coords[j][i].get_den() != 1) {
          integral = false;
          break;
        }
        p.at(i, j) = coords[j][i].get_num();
      }
    }
    bool congruent = integral && abs(det_exact(p)) == 1 &&
                     p.transpose() * sp.gram * p == target.gram;
    out.push_back(make_report("final-lattice", "base-change-to-standard-form", true,
                              "PAPER", congruent));
    out.push_back(make_report("final-lattice", "profile-matches-standard-form",
                              profile_json(discriminant_profile(target)), "PAPER",
                              profile_json(prof)));
    return out;
  }

  std::vector<VerificationReport> run_smith_dims() {
    using detail::int_json;
    std::vector<VerificationReport> out;

    // quotient-of-surface case: relative cohomology against the eight fixed
    // curves, then the blowup comparison sequence
    long h2_y = static_cast<long>(make_k3().lattice.rank());
    out.push_back(make_report("smith-dims", "surface-h2", 22, "PAPER", h2_y));
    long curves = 8;
    long h2_blowup = h2_y + curves;  // eight exceptional curves appear
    long rhs1_k3 = h2_y - curves;
    out.push_back(make_report("smith-dims", "surface-first-equation-rhs", 14, "DERIVED",
                              rhs1_k3));
    long rhs2_k3 = (curves - 1) + h2_blowup - curves;
    out.push_back(make_report("smith-dims", "surface-second-equation-rhs", 29, "DERIVED",
                              rhs2_k3));
    out.push_back(make_report("smith-dims", "surface-h1-relative", 7, "PAPER",
                              curves - 1));
    DimensionLedger k3_ledger{{"h2", "h3"}, {}};
    k3_ledger.add({1, -1}, rhs1_k3);
    k3_ledger.add({-2, 1}, -rhs2_k3);
    auto k3_sol = k3_ledger.solve();
    out.push_back(make_report("smith-dims", "surface-relative-dimensions",
                              nlohmann::json{15, 1}, "PAPER",
                              k3_sol ? nlohmann::json{int_json((*k3_sol)[0]),
                                                      int_json((*k3_sol)[1])}
                                     : nlohmann::json("unsolvable")));
    long h2s = k3_sol ? (*k3_sol)[0].get_si() : -1;
    out.push_back(make_report("smith-dims", "surface-boundary-image-dimension", 7,
                              "PAPER", h2_y - h2s));

    // Hilbert-square case: the fixed surface plus 28 exceptional components
    long h2_hilb = static_cast<long>(make_hilb2().lattice.rank());
    long points = 28;
    long h2_resolution = h2_hilb + 1 + points;  // surface and point classes push in
    out.push_back(
        make_report("smith-dims", "resolution-h2", 52, "PAPER", h2_resolution));
    long b2_quotient = 16;
    long h2_blownup = b2_quotient + points;
    out.push_back(make_report("smith-dims", "blowup-h2", 44, "PAPER", h2_blownup));
    long h2_fixed_union = h2_hilb + points;
    out.push_back(
        make_report("smith-dims", "fixed-union-h2", 51, "PAPER", h2_fixed_union));
    long rhs1_h = h2_blownup - h2_fixed_union;
    out.push_back(make_report("smith-dims", "hilbert-first-equation-rhs-normalized", -7,
                              "DERIVED", rhs1_h));
    // the source prints +7 here; the alternating sum convention forces the sign
    out.push_back(make_report("smith-dims", "hilbert-printed-rhs-differs", true,
                              "DERIVED", rhs1_h != 7));
    long components = 1 + points;
    long rhs2_h = (components - 1) + h2_resolution - h2_fixed_union;
    out.push_back(make_report("smith-dims", "hilbert-second-equation-rhs", 29, "DERIVED",
                              rhs2_h));
    out.push_back(make_report("smith-dims", "hilbert-h1-relative", 28, "PAPER",
                              components - 1));
    DimensionLedger h_ledger{{"h2", "h3"}, {}};
    h_ledger.add({1, -1}, rhs1_h);
    h_ledger.add({-2, 1}, -rhs2_h);
    auto h_sol = h_ledger.solve();
    out.push_back(make_report("smith-dims", "hilbert-relative-dimensions",
                              nlohmann::json{36, 43}, "PAPER",
                              h_sol ? nlohmann::json{int_json((*h_sol)[0]),
                                                     int_json((*h_sol)[1])}
                                    : nlohmann::json("unsolvable")));
    long h2h = h_sol ? (*h_sol)[0].get_si() : -1;
    out.push_back(make_report("smith-dims", "hilbert-boundary-image-dimension", 8,
                              "PAPER", h2_blownup - h2h));

    // torsion summand of the equivariant degree-2 group, from the cyclic group
    // acting trivially on degree zero
    auto h2g = cohomology_z2(InvolutionModule(1, IntMatrix::identity(1)), 2);
    nlohmann::json torsion = nlohmann::json::array();
    for (const Int& f : h2g.invariant_factors) torsion.push_back(int_json(f));
    out.push_back(make_report("smith-dims", "equivariant-degree2-torsion",
                              nlohmann::json{2}, "PAPER", torsion));
    return out;
  }

  std::vector<VerificationReport> run_betti_euler() {
    std::vector<VerificationReport> out;
    auto hilb = make_hilb2();
    std::size_t invariant_h2 = invariant_sublattice(hilb.involution).rank();
    long b2 = static_cast<long>(invariant_h2) + 1;  // the fixed surface pushes in
    out.push_back(make_report("betti-euler", "b2", 16, "PAPER", b2));
    long b3 = 0;  // the resolution has no odd cohomology to take invariants of
    out.push_back(make_report("betti-euler", "b3", 0, "PAPER", b3));
    long b4 = static_cast<long>(context().invariant().types.size()) + 22;
    out.push_back(make_report("betti-euler", "b4", 178, "PAPER", b4));
    nlohmann::json duality = nlohmann::json{1, 0, b2, b3, b4, b3, b2, 0, 1};
    out.push_back(make_report("betti-euler", "betti-vector",
                              nlohmann::json{1, 0, 16, 0, 178, 0, 16, 0, 1}, "DERIVED",
                              duality));
    long chi = 1 + 0 + b2 + 0 + b4 + 0 + b2 + 0 + 1;
    out.push_back(make_report("betti-euler", "euler-characteristic", 212, "PAPER", chi));
    return out;
  }

 private:
  static Lattice u_cubed() {
    return direct_sum(direct_sum(make_U(), make_U()), make_U());
  }
  static Lattice u2_cubed() { return rescale(u_cubed(), 2); }

  PipelineOptions opt_;
  std::optional<H4Context> ctx_;
};

inline std::string render_json(const std::vector<VerificationReport>& reports) {
  nlohmann::json arr = reports;
  return arr.dump(2) + "\n";
}

inline std::string render_markdown(const std::vector<VerificationReport>& reports) {
  std::ostringstream os;
  os << "| check | anchor | expected | provenance | actual | status |\n";
  os << "|---|---|---|---|---|---|\n";
  std::size_t pass = 0;
  for (const auto& r : reports) {
    if (r.status == "pass") ++pass;
    os << "| " << r.check << " | " << r.anchor << " | " << r.expected.dump() << " | "
       << r.provenance << " | " << r.actual.dump() << " | " << r.status << " |\n";
  }
  os << "\n" << pass << "/" << reports.size() << " report lines pass\n";
  return os.str();
}

inline bool all_pass(const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports)
    if (r.status != "pass") return false;
  return !reports.empty();
}

}  // namespace bblab
