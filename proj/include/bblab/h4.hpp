#pragma once

#include <array>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bblab/exact_linalg.hpp"
#include "bblab/int_matrix.hpp"
#include "bblab/lattice.hpp"
#include "bblab/monomials.hpp"
#include "bblab/sublattices.hpp"

namespace bblab {

// Enumeration of the degree-4 basis over a degree-2 block of rank r:
// the point class, then q2(k), then q1(k)q1(m) with k < m in lexicographic
// order, then m11(k). For r = 22 this is the 276-element basis.
struct QwIndex {
  std::size_t h2_rank;

  explicit QwIndex(std::size_t r) : h2_rank(r) {}

  static constexpr std::size_t point = 0;
  std::size_t pair_count() const { return h2_rank * (h2_rank - 1) / 2; }
  std::size_t size() const { return 1 + 2 * h2_rank + pair_count(); }

  std::size_t q2(std::size_t k) const { return 1 + k; }
  std::size_t q1q1(std::size_t k, std::size_t m) const {
    if (k > m) std::swap(k, m);
    if (k == m) throw std::invalid_argument("q1q1 needs distinct indices");
    return 1 + h2_rank + k * (h2_rank - 1) - k * (k - 1) / 2 + (m - k - 1);
  }
  std::size_t m11(std::size_t k) const { return 1 + h2_rank + pair_count() + k; }

  enum class Type { point, q2, q1q1, m11 };
  Type type_of(std::size_t i) const {
    if (i == 0) return Type::point;
    if (i <= h2_rank) return Type::q2;
    if (i <= h2_rank + pair_count()) return Type::q1q1;
    return Type::m11;
  }
  std::size_t k_of(std::size_t i) const {
    switch (type_of(i)) {
      case Type::q2: return i - 1;
      case Type::m11: return i - 1 - h2_rank - pair_count();
      case Type::q1q1: {
        std::size_t p = i - 1 - h2_rank;
        std::size_t k = 0;
        while (p >= h2_rank - 1 - k) p -= h2_rank - 1 - k, ++k;
        return k;
      }
      default: throw std::invalid_argument("point class has no index");
    }
  }
  std::size_t m_of(std::size_t i) const {
    if (type_of(i) != Type::q1q1) throw std::invalid_argument("not a pair element");
    std::size_t k = k_of(i);
    return i - q1q1(k, k + 1) + k + 1;
  }
};

struct H4Class {
  std::vector<Int> coords;
};

enum class InvariantType : int { a = 0, b, c, d, e, f };

struct InvariantH4 {
  IntMatrix basis;                    // columns inside the degree-4 space
  std::vector<InvariantType> types;   // one per column
  std::vector<std::size_t> leads;     // first basis index of each generator
  IntMatrix induced;

  std::array<std::size_t, 6> census() const {
    std::array<std::size_t, 6> out{};
    for (auto t : types) ++out[static_cast<int>(t)];
    return out;
  }
};

struct DeltaSquared {
  H4Class cls;
  Int d;            // the resolved pt*(delta delta) constant
  H4Class printed;  // the dual-basis expansion the sources print
  bool matches_printed = false;
  bool matches_negated_printed = false;
  bool pt_matches_printed = false;
};

// Degree-4 calculus over a chosen unimodular even block with involution:
// Gram assembly from the monomial expansions, the two distinguished classes,
// the induced involution, and the invariant-lattice bookkeeping. The real
// object of interest uses the rank-22 block; a small block exercises the same
// rules for cross-validation.
class H4Context {
 public:
  H4Context(IntMatrix block_gram, IntMatrix istar)
      : block_(std::move(block_gram)), idx_(block_.rows()) {
    const std::size_t r = block_.rows();
    if (block_.cols() != r || !block_.is_symmetric())
      throw std::invalid_argument("block gram must be square symmetric");
    Int det = det_exact(block_);
    if (det != 1 && det != -1)
      throw std::invalid_argument("block gram must be unimodular");
    for (std::size_t i = 0; i < r; ++i)
      if (block_.at(i, i) % 2 != 0)
        throw std::invalid_argument("block gram must be even");

    if (istar.rows() != r || istar.cols() != r)
      throw std::invalid_argument("involution size mismatch");
    if (istar * istar != IntMatrix::identity(r))
      throw std::invalid_argument("block involution must square to identity");
    if (istar.transpose() * block_ * istar != block_)
      throw std::invalid_argument("block involution must preserve the form");
    perm_.resize(r);
    for (std::size_t j = 0; j < r; ++j) {
      std::size_t image = r;
      for (std::size_t i = 0; i < r; ++i) {
        const Int& x = istar.at(i, j);
        if (x == 0) continue;
        if (x != 1 || image != r)
          throw std::invalid_argument("block involution must be a permutation");
        image = i;
      }
      if (image == r) throw std::invalid_argument("block involution must be a permutation");
      perm_[j] = image;
    }

    // the degree-2 Gram with the half-diagonal class appended last
    bb_ = IntMatrix(r + 1, r + 1);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) bb_.at(i, j) = block_.at(i, j);
    bb_.at(r, r) = -2;

    mu_ = detail::inverse_unimodular(block_);
    build_gram();
  }

  const QwIndex& index() const { return idx_; }
  const IntMatrix& block() const { return block_; }
  const IntMatrix& bb_gram() const { return bb_; }
  const IntMatrix& gram() const { return gram_; }
  const IntMatrix& gram_inverse() const { return inv_gram_; }
  const IntMatrix& mu() const { return mu_; }
  std::size_t size() const { return idx_.size(); }
  std::size_t istar_image(std::size_t k) const { return perm_[k]; }

  // expansion of a basis element into formal monomials; none involves
  // delta*delta, which keeps the Gram independent of the contested constant
  MonomialCombo expansion(std::size_t i) const {
    const auto t = idx_.type_of(i);
    MonomialCombo out;
    switch (t) {
      case QwIndex::Type::point:
        out.add(Mono::point(), 1);
        break;
      case QwIndex::Type::q2:
        out.add(Mono::delta_gamma(idx_.k_of(i)), 1);
        break;
      case QwIndex::Type::q1q1: {
        std::size_t k = idx_.k_of(i), m = idx_.m_of(i);
        out.add(Mono::gammas(k, m), 1);
        out.add(Mono::point(), -Rat(block_.at(k, m)));
        break;
      }
      case QwIndex::Type::m11: {
        std::size_t k = idx_.k_of(i);
        out.add(Mono::gammas(k, k), Rat(1, 2));
        out.add(Mono::delta_gamma(k), Rat(-1, 2));
        out.add(Mono::point(), -Rat(block_.at(k, k)) / 2);
        break;
      }
    }
    return out;
  }

  Int pair_classes(const H4Class& x, const H4Class& y) const {
    Int acc = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      if (x.coords[i] == 0) continue;
      Int row = 0;
      for (std::size_t j = 0; j < size(); ++j) row += gram_.at(i, j) * y.coords[j];
      acc += x.coords[i] * row;
    }
    return acc;
  }

  const DeltaSquared& delta_squared() {
    if (!delta2_) resolve_delta_squared();
    return *delta2_;
  }

  const H4Class& sigma() {
    if (!sigma_) solve_sigma();
    return *sigma_;
  }

  const IntMatrix& iota() {
    if (!iota_) build_iota();
    return *iota_;
  }

  const InvariantH4& invariant() {
    if (!invariant_) build_invariant();
    return *invariant_;
  }

  // the invariant part carrying the doubled form
  Lattice k_lattice() { return Lattice("K", invariant().induced.scaled(2)); }

  // overlattice of K halving every type b), c), e) generator
  Lattice k_tilde() {
    const InvariantH4& inv = invariant();
    std::vector<QVec> glue;
    for (std::size_t j = 0; j < inv.types.size(); ++j) {
      InvariantType t = inv.types[j];
      if (t == InvariantType::b || t == InvariantType::c || t == InvariantType::e) {
        QVec v(inv.types.size());
        v[j] = Rat(1, 2);
        glue.push_back(std::move(v));
      }
    }
    Lattice kt = adjoin_glue_vectors(k_lattice(), glue);
    kt.label = "K~";
    return kt;
  }

  // even coordinates on every type a), d), f) generator of the invariant part
  bool adf_parity(const H4Class& c) {
    const InvariantH4& inv = invariant();
    for (std::size_t j = 0; j < inv.types.size(); ++j) {
      InvariantType t = inv.types[j];
      if (t != InvariantType::a && t != InvariantType::d && t != InvariantType::f)
        continue;
      if (c.coords[inv.leads[j]] % 2 != 0) return false;
    }
    return true;
  }

  bool adf_parity_check() {
    H4Class diff;
    diff.coords.resize(size());
    const H4Class& d2 = delta_squared().cls;
    const H4Class& s = sigma();
    for (std::size_t i = 0; i < size(); ++i) diff.coords[i] = d2.coords[i] - s.coords[i];
    return adf_parity(diff);
  }

  // coordinates of a formal monomial combination; delta*delta terms are
  // rewritten through the resolved diagonal square
  H4Class class_from_monomials(const MonomialCombo& combo) {
    QVec coords(size());
    for (const auto& [mono, coeff] : combo.terms) {
      switch (mono.kind) {
        case Mono::Kind::point:
          coords[QwIndex::point] += coeff;
          break;
        case Mono::Kind::delta_gamma:
          coords[idx_.q2(mono.k)] += coeff;
          break;
        case Mono::Kind::gamma_gamma:
          if (mono.k == mono.m) {
            coords[idx_.m11(mono.k)] += coeff * 2;
            coords[idx_.q2(mono.k)] += coeff;
            coords[QwIndex::point] += coeff * Rat(block_.at(mono.k, mono.k));
          } else {
            coords[idx_.q1q1(mono.k, mono.m)] += coeff;
            coords[QwIndex::point] += coeff * Rat(block_.at(mono.k, mono.m));
          }
          break;
        case Mono::Kind::delta_delta: {
          const H4Class& d2 = delta_squared().cls;
          for (std::size_t i = 0; i < size(); ++i) coords[i] += coeff * Rat(d2.coords[i]);
          break;
        }
      }
    }
    if (!is_integral(coords))
      throw std::invalid_argument("combination has non-integral coordinates");
    H4Class out;
    out.coords = to_int_vec(coords);
    return out;
  }

  // Squares half of a sum of degree-2 generators (the first six block classes
  // and the half-diagonal) and asks whether the result lands in the halved
  // overlattice; the parity of the square on type a/d/f generators decides.
  bool half_vector_membership(const std::array<bool, 7>& pick) {
    const std::size_t r = block_.rows();
    if (r < 6) throw std::invalid_argument("block too small for the membership test");
    std::vector<std::size_t> sel;
    for (std::size_t i = 0; i < 6; ++i)
      if (pick[i]) sel.push_back(i);
    const std::size_t delta = r;
    if (pick[6]) sel.push_back(delta);

    MonomialCombo square;
    for (std::size_t a = 0; a < sel.size(); ++a)
      for (std::size_t b = a; b < sel.size(); ++b) {
        const Rat c = (a == b) ? 1 : 2;
        std::size_t i = sel[a], j = sel[b];
        if (i == delta && j == delta) square.add(Mono::delta_delta(), c);
        else if (j == delta) square.add(Mono::delta_gamma(i), c);
        else square.add(Mono::gammas(i, j), c);
      }
    return adf_parity(class_from_monomials(square));
  }

 private:
  void build_gram() {
    const std::size_t n = size();
    std::vector<MonomialCombo> exp(n);
    for (std::size_t i = 0; i < n; ++i) exp[i] = expansion(i);
    gram_ = IntMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        Rat v = monomial_pairing(exp[i], exp[j], bb_);
        if (v.get_den() != 1) {
          std::ostringstream os;
          os << "pairing rule produced a non-integral entry at (" << i << "," << j
             << "): " << v.get_str();
          throw std::logic_error(os.str());
        }
        gram_.at(i, j) = v.get_num();
        gram_.at(j, i) = v.get_num();
      }
    // rational elimination on a matrix this size is costly; the Smith
    // transforms certify unimodularity and hand over the integer inverse
    SnfDecomposition snf = smith_normal_form(gram_);
    for (const Int& f : snf.d)
      if (f != 1) {
        std::ostringstream os;
        os << "degree-4 gram is not unimodular, invariant factor " << f.get_str();
        throw std::logic_error(os.str());
      }
    inv_gram_ = snf.v * snf.u;
    if (inv_gram_ * gram_ != IntMatrix::identity(n))
      throw std::logic_error("gram inverse reconstruction failed");
  }

  QVec apply_inverse(const QVec& v) const {
    const std::size_t n = size();
    QVec out(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (v[j] == 0) continue;
      for (std::size_t i = 0; i < n; ++i) {
        const Int& g = inv_gram_.at(i, j);
        if (g != 0) out[i] += Rat(g) * v[j];
      }
    }
    return out;
  }

  void resolve_delta_squared() {
    const std::size_t n = size(), r = block_.rows();
    // pairing vector of delta^2 against the basis is affine in the contested
    // pt constant: v(d) = v0 + d*v1
    QVec v0(n), v1(n);
    v1[QwIndex::point] = 1;
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t m = k + 1; m < r; ++m) {
        const Int& bkm = block_.at(k, m);
        v0[idx_.q1q1(k, m)] = Rat(-2 * bkm);
        v1[idx_.q1q1(k, m)] = Rat(-bkm);
      }
    for (std::size_t k = 0; k < r; ++k) {
      const Int& bkk = block_.at(k, k);
      v0[idx_.m11(k)] = Rat(-bkk);
      v1[idx_.m11(k)] = -Rat(bkk) / 2;
    }
    QVec x0 = apply_inverse(v0), x1 = apply_inverse(v1);

    const Int target = fujiki_self(r);  // the diagonal class squares to this
    std::vector<Int> winners;
    std::ostringstream diag;
    for (long d = -4; d <= 4; ++d) {
      QVec x(n);
      Rat self = 0;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = x0[i] + Rat(d) * x1[i];
        self += (v0[i] + Rat(d) * v1[i]) * x[i];
      }
      bool integral = is_integral(x);
      diag << "d=" << d << " integral=" << integral << " self=" << self.get_str() << "; ";
      if (integral && self == target) winners.push_back(Int(d));
    }
    if (winners.size() != 1)
      throw std::logic_error("diagonal-square resolution is not unique: " + diag.str());

    DeltaSquared out;
    out.d = winners[0];
    QVec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = x0[i] + Rat(out.d) * x1[i];
    out.cls.coords = to_int_vec(x);

    // dual-basis expansion as printed: pt + sum mu_km q1q1 + sum mu_kk m11
    // + (1/2) sum mu_kk q2
    QVec printed(n);
    printed[QwIndex::point] = 1;
    for (std::size_t k = 0; k < r; ++k) {
      for (std::size_t m = k + 1; m < r; ++m) printed[idx_.q1q1(k, m)] = Rat(mu_.at(k, m));
      printed[idx_.m11(k)] = Rat(mu_.at(k, k));
      printed[idx_.q2(k)] = Rat(mu_.at(k, k)) / 2;
    }
    if (!is_integral(printed))
      throw std::logic_error("printed expansion is not integral");
    out.printed.coords = to_int_vec(printed);
    out.matches_printed = out.cls.coords == out.printed.coords;
    bool neg = true;
    for (std::size_t i = 0; i < n; ++i)
      if (out.cls.coords[i] != -out.printed.coords[i]) {
        neg = false;
        break;
      }
    out.matches_negated_printed = neg;
    out.pt_matches_printed =
        out.cls.coords[QwIndex::point] == out.printed.coords[QwIndex::point];
    delta2_ = std::move(out);
  }

  Int fujiki_self(std::size_t r) const {
    std::vector<Int> dlt(r + 1, 0);
    dlt[r] = 1;
    return fujiki_quadruple(bb_, dlt, dlt, dlt, dlt);
  }

  void solve_sigma() {
    const std::size_t n = size(), r = block_.rows();
    QVec v(n);
    v[QwIndex::point] = 1;
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t m = k + 1; m < r; ++m)
        v[idx_.q1q1(k, m)] = Rat(block_.at(k, perm_[m]));
    for (std::size_t k = 0; k < r; ++k) {
      Rat half = Rat(block_.at(k, perm_[k])) / 2;
      if (half.get_den() != 1)
        throw std::logic_error("surface-cycle pairing against m11 is not integral");
      v[idx_.m11(k)] = half;
    }
    QVec x = apply_inverse(v);
    if (!is_integral(x))
      throw std::logic_error("surface-cycle class has non-integral coordinates");
    H4Class out;
    out.coords = to_int_vec(x);
    sigma_ = std::move(out);
  }

  std::size_t iota_index(std::size_t i) const {
    switch (idx_.type_of(i)) {
      case QwIndex::Type::point: return i;
      case QwIndex::Type::q2: return idx_.q2(perm_[idx_.k_of(i)]);
      case QwIndex::Type::m11: return idx_.m11(perm_[idx_.k_of(i)]);
      case QwIndex::Type::q1q1: {
        std::size_t k = perm_[idx_.k_of(i)], m = perm_[idx_.m_of(i)];
        return idx_.q1q1(k, m);
      }
    }
    return i;
  }

  void build_iota() {
    const std::size_t n = size();
    IntMatrix p(n, n);
    for (std::size_t i = 0; i < n; ++i) p.at(iota_index(i), i) = 1;
    if (p * p != IntMatrix::identity(n)) throw std::logic_error("induced map is not an involution");
    if (p.transpose() * gram_ * p != gram_)
      throw std::logic_error("induced map does not preserve the pairing");
    iota_ = std::move(p);
  }

  void build_invariant() {
    const std::size_t n = size();
    InvariantH4 inv;
    std::vector<std::pair<std::size_t, InvariantType>> cols;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t img = iota_index(i);
      if (img < i) continue;  // the partner already produced this orbit
      cols.push_back({i, classify(i, img)});
    }
    inv.basis = IntMatrix(n, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      std::size_t i = cols[j].first;
      inv.basis.at(i, j) = 1;
      std::size_t img = iota_index(i);
      if (img != i) inv.basis.at(img, j) = 1;
      inv.types.push_back(cols[j].second);
      inv.leads.push_back(i);
    }
    inv.induced = inv.basis.transpose() * gram_ * inv.basis;
    invariant_ = std::move(inv);
  }

  InvariantType classify(std::size_t i, std::size_t img) const {
    const auto t = idx_.type_of(i);
    if (t == QwIndex::Type::point) return InvariantType::f;
    if (img == i) {
      if (t != QwIndex::Type::q1q1) return InvariantType::a;
      std::size_t k = idx_.k_of(i), m = idx_.m_of(i);
      if (perm_[k] == k && perm_[m] == m) return InvariantType::a;
      return InvariantType::d;  // the two factors swap with each other
    }
    if (t == QwIndex::Type::q2) return InvariantType::b;
    if (t == QwIndex::Type::m11) return InvariantType::c;
    std::size_t k = idx_.k_of(i), m = idx_.m_of(i);
    const bool k_fixed = perm_[k] == k, m_fixed = perm_[m] == m;
    if (k_fixed || m_fixed) return InvariantType::b;
    const bool k_lower = k < perm_[k], m_lower = m < perm_[m];
    return k_lower == m_lower ? InvariantType::c : InvariantType::e;
  }

  IntMatrix block_;
  QwIndex idx_;
  std::vector<std::size_t> perm_;
  IntMatrix bb_;
  IntMatrix mu_;
  IntMatrix gram_;
  IntMatrix inv_gram_;
  std::optional<DeltaSquared> delta2_;
  std::optional<H4Class> sigma_;
  std::optional<IntMatrix> iota_;
  std::optional<InvariantH4> invariant_;
};

}  // namespace bblab
