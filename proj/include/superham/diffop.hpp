#ifndef SUPERHAM_DIFFOP_HPP
#define SUPERHAM_DIFFOP_HPP

#include "superham/symbols.hpp"
#include "superham/varcalc.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace superham {

/// sum_n a_n D^n with coefficients to the left of the powers of D.
class DiffOpEntry {
 public:
  using Coefficients = std::map<std::uint32_t, SuperPoly>;

  DiffOpEntry() = default;
  DiffOpEntry(std::initializer_list<std::pair<const std::uint32_t, SuperPoly>> init) {
    for (const auto& [n, a] : init) {
      add(n, a);
    }
  }

  static DiffOpEntry multiplication(const SuperPoly& a) { return DiffOpEntry{{0, a}}; }
  static DiffOpEntry power(std::uint32_t n, const Rational& c = 1) { return DiffOpEntry{{n, SuperPoly::constant(c)}}; }

  void add(std::uint32_t n, const SuperPoly& a) {
    if (a.isZero()) {
      return;
    }
    auto [it, inserted] = coefficients_.try_emplace(n, a);
    if (!inserted) {
      it->second += a;
      if (it->second.isZero()) {
        coefficients_.erase(it);
      }
    }
  }

  const Coefficients& coefficients() const noexcept { return coefficients_; }
  bool isZero() const noexcept { return coefficients_.empty(); }

  SuperPoly coefficient(std::uint32_t n) const {
    auto it = coefficients_.find(n);
    return it == coefficients_.end() ? SuperPoly{} : it->second;
  }

  SuperPoly apply(const SuperPoly& v) const {
    SuperPoly r;
    SuperPoly dv = v;
    std::uint32_t at = 0;
    for (const auto& [n, a] : coefficients_) {
      dv = totalDerivative(dv, n - at);
      at = n;
      r += a * dv;
    }
    return r;
  }

  DiffOpEntry& operator+=(const DiffOpEntry& o) {
    for (const auto& [n, a] : o.coefficients_) {
      add(n, a);
    }
    return *this;
  }

  DiffOpEntry& operator*=(const Rational& c) {
    Coefficients next;
    if (sgn(c) != 0) {
      for (auto& [n, a] : coefficients_) {
        next.emplace(n, a * c);
      }
    }
    coefficients_ = std::move(next);
    return *this;
  }

  friend DiffOpEntry operator+(DiffOpEntry a, const DiffOpEntry& b) { return a += b; }
  friend DiffOpEntry operator*(const Rational& c, DiffOpEntry a) { return a *= c; }
  friend bool operator==(const DiffOpEntry&, const DiffOpEntry&) = default;

 private:
  Coefficients coefficients_;
};

class ParityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Finitely supported matrix (row family, column family) -> DiffOpEntry.
/// Every coefficient of the (row, col) entry has parity row + col.
class MatrixDiffOp {
 public:
  using Key = std::pair<Family, Family>;
  using Entries = std::map<Key, DiffOpEntry>;

  void add(Family row, Family col, const DiffOpEntry& e) {
    const Parity want = row.parity + col.parity;
    for (const auto& [n, a] : e.coefficients()) {
      if (!hasParity(a, want)) {
        throw ParityError("coefficient of D^" + std::to_string(n) + " has the wrong parity for its entry");
      }
    }
    auto& slot = entries_[{row, col}];
    slot += e;
    if (slot.isZero()) {
      entries_.erase({row, col});
    }
  }

  DiffOpEntry entry(Family row, Family col) const {
    auto it = entries_.find({row, col});
    return it == entries_.end() ? DiffOpEntry{} : it->second;
  }

  const Entries& entries() const noexcept { return entries_; }
  bool isZero() const noexcept { return entries_.empty(); }

  /// Row and column families.
  std::set<Family> families() const {
    std::set<Family> out;
    for (const auto& [key, e] : entries_) {
      out.insert(key.first);
      out.insert(key.second);
    }
    return out;
  }

  MatrixDiffOp& operator+=(const MatrixDiffOp& o) {
    for (const auto& [key, e] : o.entries_) {
      add(key.first, key.second, e);
    }
    return *this;
  }

  MatrixDiffOp& operator*=(const Rational& c) {
    Entries next;
    if (sgn(c) != 0) {
      for (const auto& [key, e] : entries_) {
        next.emplace(key, c * e);
      }
    }
    entries_ = std::move(next);
    return *this;
  }

  friend MatrixDiffOp operator+(MatrixDiffOp a, const MatrixDiffOp& b) { return a += b; }
  friend MatrixDiffOp operator*(const Rational& c, MatrixDiffOp a) { return a *= c; }
  friend bool operator==(const MatrixDiffOp&, const MatrixDiffOp&) = default;

 private:
  Entries entries_;
};

/// One violated constraint instance. `subjects` names the families involved
/// (entry row and column, or the differentiated family); residual is nonzero.
struct Witness {
  std::string constraint;
  std::vector<Family> subjects;
  std::variant<SuperPoly, DiffOpEntry, std::string> residual;
};

struct Verdict {
  bool pass = true;
  std::vector<Witness> witnesses;

  void fail(Witness w) {
    pass = false;
    witnesses.push_back(std::move(w));
  }
};

/// H(u)_row = sum_col sum_n a_n D^n(u_col).
inline VectorField applyOperator(const MatrixDiffOp& h, const Covector& u) {
  if (!u.isEvenSector()) {
    throw ParityError("covector is not in the even sector");
  }
  VectorField r;
  for (const auto& [key, e] : h.entries()) {
    auto it = u.components().find(key.second);
    if (it != u.components().end()) {
      r.add(key.first, e.apply(it->second));
    }
  }
  return r;
}

/// K_{r,c} = (-1)^{l_r l_c} sum_n (-D)^n o a^{c,r}_n, using
/// (-D)^n o a = (-1)^n sum_k C(n,k) D^{n-k}(a) D^k.
inline MatrixDiffOp superAdjoint(const MatrixDiffOp& h) {
  MatrixDiffOp k;
  for (const auto& [key, e] : h.entries()) {
    const auto& [col, row] = key;
    const int outer = koszulSign(row.parity, col.parity);
    DiffOpEntry adj;
    for (const auto& [n, a] : e.coefficients()) {
      SuperPoly da = a;
      for (std::uint32_t j = 0; j <= n; ++j) {
        // da = D^j(a) contributes to D^{n-j}
        adj.add(n - j, da * Rational(binomial(n, j) * outer * signPower(n)));
        da = totalDerivative(da);
      }
    }
    k.add(row, col, adj);
  }
  return k;
}

inline Verdict checkSkew(const MatrixDiffOp& h) {
  Verdict v;
  const MatrixDiffOp sum = h + superAdjoint(h);
  for (const auto& [key, e] : sum.entries()) {
    v.fail({"skew", {key.first, key.second}, e});
  }
  return v;
}

/// Applies the evolutionary derivation of `field` to every coefficient.
inline MatrixDiffOp coefficientDerivative(const MatrixDiffOp& h, const VectorField& field) {
  MatrixDiffOp r;
  for (const auto& [key, e] : h.entries()) {
    DiffOpEntry d;
    for (const auto& [n, a] : e.coefficients()) {
      d.add(n, evolutionaryDerivative(field, a));
    }
    r.add(key.first, key.second, d);
  }
  return r;
}

/// d_u(H): coefficients differentiated along the field H(u).
inline MatrixDiffOp directionalDerivative(const MatrixDiffOp& h, const Covector& u) {
  return coefficientDerivative(h, applyOperator(h, u));
}

/// Generic covector for slot s: u_f = the fresh generator shadowing f.
inline Covector testCovector(const std::set<Family>& families, std::uint32_t slot) {
  Covector u;
  for (const Family f : families) {
    u.set(f, SuperPoly::generator(Generator{testFamily(f, slot), 0}));
  }
  return u;
}

/// A functional expression together with its variational gradient; the
/// class of `expression` in A/D(A) vanishes iff the gradient is empty.
struct ResidualCertificate {
  SuperPoly expression;
  std::map<Family, SuperPoly> gradient;

  bool empty() const noexcept { return gradient.empty(); }
};

inline ResidualCertificate certify(SuperPoly expression) {
  ResidualCertificate c;
  c.gradient = variationalGradient(expression);
  c.expression = std::move(expression);
  return c;
}

namespace detail {

/// u3[d_{X(u2)}(Y)(u1)] + u1[d_{X(u3)}(Y)(u2)] + u2[d_{X(u1)}(Y)(u3)]
inline SuperPoly cyclicTerm(const MatrixDiffOp& x, const MatrixDiffOp& y, const Covector& u1, const Covector& u2,
                            const Covector& u3) {
  const auto term = [&](const Covector& outer, const Covector& along, const Covector& arg) {
    return pairing(outer, applyOperator(coefficientDerivative(y, applyOperator(x, along)), arg));
  };
  return term(u3, u2, u1) + term(u1, u3, u2) + term(u2, u1, u3);
}

inline std::set<Family> unionFamilies(const MatrixDiffOp& a, const MatrixDiffOp& b) {
  std::set<Family> s = a.families();
  const std::set<Family> t = b.families();
  s.insert(t.begin(), t.end());
  return s;
}

}  // namespace detail

/// The closedness expression evaluated on three generic test covectors.
inline SuperPoly closednessExpression(const MatrixDiffOp& h) {
  const std::set<Family> fams = h.families();
  return detail::cyclicTerm(h, h, testCovector(fams, 1), testCovector(fams, 2), testCovector(fams, 3));
}

inline ResidualCertificate closednessResidual(const MatrixDiffOp& h) {
  if (!checkSkew(h).pass) {
    throw std::invalid_argument("closednessResidual: operator is not skew-symmetric");
  }
  return certify(closednessExpression(h));
}

/// Witnesses for a nonempty certificate: the first nonzero variational
/// derivative of the expression.
inline void reportCertificate(Verdict& v, const std::string& constraint, const ResidualCertificate& c) {
  if (!c.empty()) {
    const auto& [f, d] = *c.gradient.begin();
    v.fail({constraint, {f}, d});
  }
}

/// Skew-symmetry, then closedness.
inline Verdict checkHamiltonian(const MatrixDiffOp& h) {
  Verdict v = checkSkew(h);
  if (!v.pass) {
    return v;
  }
  reportCertificate(v, "closedness", certify(closednessExpression(h)));
  return v;
}

/// Schouten-Nijenhuis bracket on generic test covectors.
inline ResidualCertificate schoutenBracket(const MatrixDiffOp& h1, const MatrixDiffOp& h2) {
  if (!checkSkew(h1).pass || !checkSkew(h2).pass) {
    throw std::invalid_argument("schoutenBracket: operands must be skew-symmetric");
  }
  const std::set<Family> fams = detail::unionFamilies(h1, h2);
  const Covector u1 = testCovector(fams, 1);
  const Covector u2 = testCovector(fams, 2);
  const Covector u3 = testCovector(fams, 3);
  return certify(detail::cyclicTerm(h1, h2, u1, u2, u3) + detail::cyclicTerm(h2, h1, u1, u2, u3));
}

/// Both skew and [H1,H1] = [H2,H2] = [H1,H2] = 0.
inline Verdict checkPair(const MatrixDiffOp& h1, const MatrixDiffOp& h2) {
  Verdict v;
  for (const auto& [label, h] : {std::pair{"skew[1]", &h1}, std::pair{"skew[2]", &h2}}) {
    for (Witness& w : checkSkew(*h).witnesses) {
      w.constraint = label;
      v.fail(std::move(w));
    }
  }
  if (!v.pass) {
    return v;
  }
  reportCertificate(v, "schouten[1,1]", schoutenBracket(h1, h1));
  reportCertificate(v, "schouten[2,2]", schoutenBracket(h2, h2));
  reportCertificate(v, "schouten[1,2]", schoutenBracket(h1, h2));
  return v;
}

/// psi_t = H(delta L) for every row family of H.
inline std::map<Family, SuperPoly> evolutionEquation(const MatrixDiffOp& h, const SuperPoly& density) {
  Covector grad;
  for (const Family f : h.families()) {
    grad.set(f, variationalDerivative(f, density));
  }
  std::map<Family, SuperPoly> out;
  for (const Family f : h.families()) {
    out.emplace(f, SuperPoly{});
  }
  const VectorField flow = applyOperator(h, grad);
  for (const auto& [f, p] : flow.components()) {
    out[f] = p;
  }
  return out;
}

struct FormKey {
  Family left;
  Family right;
  std::uint32_t order = 0;

  friend auto operator<=>(const FormKey&, const FormKey&) = default;
};

/// Values <psi_left, psi_right>_m of bilinear forms on each parity sector.
struct BilinearFormFamily {
  std::map<FormKey, Rational> values;

  void set(Family left, Family right, std::uint32_t order, const Rational& value) {
    if (sgn(value) == 0) {
      values.erase({left, right, order});
    } else {
      values[{left, right, order}] = value;
    }
  }

  Rational get(Family left, Family right, std::uint32_t order) const {
    auto it = values.find({left, right, order});
    return it == values.end() ? Rational(0) : it->second;
  }
};

class FormSymmetryError : public std::invalid_argument {
 public:
  FormSymmetryError(const std::string& what, FormKey key) : std::invalid_argument(what), key(key) {}
  FormKey key;
};

/// Rejects forms mixing sectors or breaking <u,v>_{i,m} = (-1)^{1+i+m} <v,u>_{i,m}.
inline void validateForms(const BilinearFormFamily& forms) {
  for (const auto& [key, value] : forms.values) {
    if (key.left.parity != key.right.parity) {
      throw FormSymmetryError("form pairs families of different parity", key);
    }
    const int sign = signPower(1 + (isOdd(key.left.parity) ? 1 : 0) + key.order);
    if (forms.get(key.right, key.left, key.order) != sign * value) {
      throw FormSymmetryError("form violates its symmetry law", key);
    }
  }
}

/// Block-diagonal constant-coefficient operator sum_m <psi_j1, psi_j2>_m D^m.
inline MatrixDiffOp bilinearFormOperator(const BilinearFormFamily& forms) {
  validateForms(forms);
  MatrixDiffOp h;
  for (const auto& [key, value] : forms.values) {
    h.add(key.left, key.right, DiffOpEntry::power(key.order, value));
  }
  return h;
}

}  // namespace superham

#endif  // SUPERHAM_DIFFOP_HPP
