#ifndef SUPERHAM_CONFORMAL_HPP
#define SUPERHAM_CONFORMAL_HPP

#include "superham/diffop.hpp"
#include "superham/lie.hpp"
#include "superham/symbols.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace superham {

/// Y+(s_left, z) s_right has coefficient lambda of d^n s_target z^{-m-1}.
struct LambdaKey {
  std::size_t left = 0;
  std::size_t right = 0;
  std::size_t target = 0;
  std::uint32_t n = 0;
  std::uint32_t m = 0;

  friend auto operator<=>(const LambdaKey&, const LambdaKey&) = default;
};

/// Y+(s_left, z) s_right has coefficient mu of 1 z^{-m-1}.
struct MuKey {
  std::size_t left = 0;
  std::size_t right = 0;
  std::uint32_t m = 0;

  friend auto operator<=>(const MuKey&, const MuKey&) = default;
};

using LambdaTable = std::map<LambdaKey, Rational>;
using MuTable = std::map<MuKey, Rational>;

/// Structure constants of a conformal superalgebra that is free over C[d]
/// on `basis`, optionally extended by a central element 1.
struct ConformalStructure {
  std::vector<BasisElement> basis;
  LambdaTable lambda;
  MuTable mu;

  bool hasCenter() const noexcept { return !mu.empty(); }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (basis[k].name == name) {
        return k;
      }
    }
    return std::nullopt;
  }

  Parity parity(std::size_t k) const { return basis.at(k).parity; }

  void setLambda(const LambdaKey& key, const Rational& c) {
    if (key.left >= basis.size() || key.right >= basis.size() || key.target >= basis.size()) {
      throw std::out_of_range("lambda references an unknown basis element");
    }
    if (parity(key.target) != parity(key.left) + parity(key.right)) {
      throw ParityError("lambda(" + basis[key.left].name + "," + basis[key.right].name + "->" +
                        basis[key.target].name + ") breaks the grading");
    }
    if (sgn(c) == 0) {
      lambda.erase(key);
    } else {
      lambda[key] = c;
    }
  }

  void setMu(const MuKey& key, const Rational& c) {
    if (key.left >= basis.size() || key.right >= basis.size()) {
      throw std::out_of_range("mu references an unknown basis element");
    }
    if (parity(key.left) != parity(key.right)) {
      throw ParityError("mu(" + basis[key.left].name + "," + basis[key.right].name + ") pairs different parities");
    }
    if (sgn(c) == 0) {
      mu.erase(key);
    } else {
      mu[key] = c;
    }
  }

  friend bool operator==(const ConformalStructure&, const ConformalStructure&) = default;
};

/// Element of C[d]V + C1: coefficients of d^k s_b, plus the central part.
struct ConformalElement {
  std::map<std::pair<std::size_t, std::uint32_t>, Rational> terms;
  Rational center;

  static ConformalElement basisElement(std::size_t b, std::uint32_t k = 0, const Rational& c = 1) {
    ConformalElement e;
    e.add(b, k, c);
    return e;
  }

  void add(std::size_t b, std::uint32_t k, const Rational& c) {
    if (sgn(c) == 0) {
      return;
    }
    auto [it, inserted] = terms.try_emplace({b, k}, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) {
        terms.erase(it);
      }
    }
  }

  void addScaled(const ConformalElement& o, const Rational& c) {
    for (const auto& [key, x] : o.terms) {
      add(key.first, key.second, x * c);
    }
    center += o.center * c;
  }

  bool isZero() const { return terms.empty() && sgn(center) == 0; }

  friend bool operator==(const ConformalElement&, const ConformalElement&) = default;
};

/// sum_m coefficients[m] z^{-m-1}.
struct YProduct {
  std::map<std::uint32_t, ConformalElement> coefficients;

  void add(std::uint32_t m, const ConformalElement& e, const Rational& c) {
    ConformalElement& slot = coefficients[m];
    slot.addScaled(e, c);
    if (slot.isZero()) {
      coefficients.erase(m);
    }
  }

  friend bool operator==(const YProduct&, const YProduct&) = default;
};

namespace detail {

/// Y+(s_i, z) s_j read off the tables.
inline YProduct basisProduct(const ConformalStructure& s, std::size_t i, std::size_t j) {
  YProduct y;
  for (const auto& [key, c] : s.lambda) {
    if (key.left == i && key.right == j) {
      y.add(key.m, ConformalElement::basisElement(key.target, key.n), c);
    }
  }
  for (const auto& [key, c] : s.mu) {
    if (key.left == i && key.right == j) {
      ConformalElement one;
      one.center = 1;
      y.add(key.m, one, c);
    }
  }
  return y;
}

/// (m+1)(m+2)...(m+q)
inline Integer risingFrom(std::uint32_t m, std::uint32_t q) {
  Integer r = 1;
  for (std::uint32_t i = 1; i <= q; ++i) {
    r *= m + i;
  }
  return r;
}

}  // namespace detail

/// Y+(a, z) b for elements of C[d]V + C1, using
/// Y+(d^k s_i, z) d^l s_j = sum_p C(l,p) d^{l-p} (-1)^p (d/dz)^{k+p} Y+(s_i, z) s_j.
inline YProduct yPlusProduct(const ConformalStructure& s, const ConformalElement& a, const ConformalElement& b) {
  for (const auto* e : {&a, &b}) {
    for (const auto& [key, c] : e->terms) {
      if (key.first >= s.basis.size()) {
        throw std::out_of_range("element references an unknown basis element");
      }
    }
  }
  YProduct out;
  for (const auto& [ka, ca] : a.terms) {
    for (const auto& [kb, cb] : b.terms) {
      const auto [i, k] = ka;
      const auto [j, l] = kb;
      const YProduct base = detail::basisProduct(s, i, j);
      for (std::uint32_t p = 0; p <= l; ++p) {
        const std::uint32_t q = k + p;
        // (d/dz)^q z^{-m-1} = (-1)^q (m+1)...(m+q) z^{-m-q-1}
        const Rational scale = ca * cb * Rational(binomial(l, p)) * signPower(p) * signPower(q);
        for (const auto& [m, elem] : base.coefficients) {
          ConformalElement shifted;
          for (const auto& [kt, ct] : elem.terms) {
            shifted.add(kt.first, kt.second + (l - p), ct);
          }
          if (l == p) {
            shifted.center = elem.center;
          }
          out.add(m + q, shifted, scale * Rational(detail::risingFrom(m, q)));
        }
      }
    }
  }
  return out;
}

/// The right-hand side of the conjugation identity as a map on lambda tables:
/// (T lambda)^{n,m}_{1;2} = -(-1)^{l1 l2} sum_{p=m}^{m+n} (-1)^p/(p-m)! lambda^{m+n-p,p}_{2;1}.
/// T is an involution.
inline LambdaTable conjugationTransform(const std::vector<BasisElement>& basis, const LambdaTable& table) {
  LambdaTable out;
  for (const auto& [key, c] : table) {
    // key is (2;1) with n = a, m = p; feeds (1;2) at every m' <= p.
    const int outer = -koszulSign(basis.at(key.left).parity, basis.at(key.right).parity);
    for (std::uint32_t m = 0; m <= key.m; ++m) {
      const LambdaKey target{key.right, key.left, key.target, key.n + key.m - m, m};
      Rational contrib = c * outer * signPower(key.m);
      contrib /= Rational(factorial(key.m - m));
      Rational& slot = out[target];
      slot += contrib;
      if (sgn(slot) == 0) {
        out.erase(target);
      }
    }
  }
  return out;
}

inline std::string lambdaLabel(const std::vector<BasisElement>& basis, const LambdaKey& k) {
  return basis.at(k.left).name + "," + basis.at(k.right).name + "->" + basis.at(k.target).name +
         "; n=" + std::to_string(k.n) + ",m=" + std::to_string(k.m);
}

/// lambda = T(lambda), and mu^m_{1;2} = (-1)^{l1 l2} (-1)^{m+1} mu^m_{2;1}.
inline Verdict checkConjugation(const ConformalStructure& s) {
  Verdict v;
  LambdaTable diff = s.lambda;
  for (const auto& [key, c] : conjugationTransform(s.basis, s.lambda)) {
    Rational& slot = diff[key];
    slot -= c;
    if (sgn(slot) == 0) {
      diff.erase(key);
    }
  }
  for (const auto& [key, c] : diff) {
    v.fail({"conjugation(" + lambdaLabel(s.basis, key) + ")", {}, toString(c)});
  }
  std::map<MuKey, Rational> muDiff = s.mu;
  for (const auto& [key, c] : s.mu) {
    const MuKey swapped{key.right, key.left, key.m};
    const int sign = koszulSign(s.parity(key.left), s.parity(key.right)) * signPower(key.m + 1);
    Rational& slot = muDiff[swapped];
    slot -= sign * c;
    if (sgn(slot) == 0) {
      muDiff.erase(swapped);
    }
  }
  for (const auto& [key, c] : muDiff) {
    v.fail({"conjugation(" + s.basis[key.left].name + "," + s.basis[key.right].name + "; m=" + std::to_string(key.m) +
                ")",
            {},
            toString(c)});
  }
  return v;
}

/// Index of one Jacobi constraint: basis triple (b1, b2, b3), output element
/// d^{n2} s_{j5}, and the product orders m1 (of b1) and m2 (of b2).
struct JacobiKey {
  std::size_t b1 = 0;
  std::size_t b2 = 0;
  std::size_t b3 = 0;
  std::size_t j5 = 0;
  std::uint32_t m1 = 0;
  std::uint32_t m2 = 0;
  std::uint32_t n2 = 0;

  friend auto operator<=>(const JacobiKey&, const JacobiKey&) = default;
};

/// Nonzero residuals of
/// b1_(m1)(b2_(m2) b3) - (-1)^{l1 l2} b2_(m2)(b1_(m1) b3) - sum_j C(m1,j) (b1_(j) b2)_(m1+m2-j) b3
/// in terms of the structure constants, assembled as sparse sums.
inline std::map<JacobiKey, Rational> jacobiResidual(const ConformalStructure& s) {
  std::map<JacobiKey, Rational> r;
  const auto add = [&r](const JacobiKey& k, const Rational& c) {
    Rational& slot = r[k];
    slot += c;
    if (sgn(slot) == 0) {
      r.erase(k);
    }
  };
  // Group constants by their right argument for the inner products.
  std::multimap<std::size_t, std::pair<LambdaKey, Rational>> byRight;
  for (const auto& [key, c] : s.lambda) {
    byRight.emplace(key.right, std::pair{key, c});
  }
  for (const auto& [inner, ci] : s.lambda) {
    const std::size_t j4 = inner.target;
    // inner = lambda_{x;b3}^{j4,a,mx}; outer = lambda_{y;j4}^{j5,n1,b}.
    auto range = byRight.equal_range(j4);
    for (auto it = range.first; it != range.second; ++it) {
      const auto& [outer, co] = it->second;
      const Rational prod = ci * co;
      for (std::uint32_t p = 0; p <= inner.n; ++p) {
        const std::uint32_t mOuter = outer.m + p;
        const Rational weight = prod * Rational(binomial(inner.n, p) * fallingFactorial(mOuter, p));
        const std::uint32_t n2 = inner.n + outer.n - p;
        // b1 = outer.left, b2 = inner.left: first sum.
        add({outer.left, inner.left, inner.right, outer.target, mOuter, inner.m, n2}, weight);
        // b1 = inner.left, b2 = outer.left: second sum.
        const int sign = -koszulSign(s.parity(inner.left), s.parity(outer.left));
        add({inner.left, outer.left, inner.right, outer.target, inner.m, mOuter, n2}, weight * sign);
      }
    }
  }
  // Third sum: lambda_{1;2}^{j4,n1,c} lambda_{j4;3}^{j5,n2,d}.
  for (const auto& [first, cf] : s.lambda) {
    for (const auto& [second, cs] : s.lambda) {
      if (second.left != first.target) {
        continue;
      }
      const std::uint32_t total = second.m + first.n;
      const Rational base = cf * cs * signPower(first.n) * Rational(fallingFactorial(total, first.n));
      for (std::uint32_t p = 0; p <= total; ++p) {
        const std::uint32_t m1 = first.m + p;
        add({first.left, first.right, second.right, second.target, m1, total - p, second.n},
            -base * Rational(binomial(m1, p)));
      }
    }
  }
  return r;
}

inline Verdict checkJacobiConformal(const ConformalStructure& s) {
  Verdict v;
  const SymbolTable symbols = basisSymbols(s.basis);
  for (const auto& [k, c] : jacobiResidual(s)) {
    v.fail({"jacobi(" + s.basis[k.b1].name + "," + s.basis[k.b2].name + "," + s.basis[k.b3].name + "; m1=" +
                std::to_string(k.m1) + ",m2=" + std::to_string(k.m2) + ")",
            {},
            renderPoly(symbols, SuperPoly::generator(Generator{basisFamily(s.basis, k.j5), k.n2}, c))});
  }
  return v;
}

/// Matrix operator with (row j1, col j2) entry
/// sum (1/n!) lambda^{j3, m, n}_{j2; j1} psi_{j3}^{(m)} D^n + (1/n!) mu^n_{j2; j1} D^n,
/// where m is the d-power and n the z-power; note the column-first indices.
inline MatrixDiffOp toHamiltonian(const ConformalStructure& s) {
  MatrixDiffOp h;
  for (const auto& [key, c] : s.lambda) {
    const Generator g{basisFamily(s.basis, key.target), key.n};
    const Rational coeff = c / Rational(factorial(key.m));
    h.add(basisFamily(s.basis, key.right), basisFamily(s.basis, key.left),
          DiffOpEntry{{key.m, SuperPoly::generator(g, coeff)}});
  }
  for (const auto& [key, c] : s.mu) {
    h.add(basisFamily(s.basis, key.right), basisFamily(s.basis, key.left),
          DiffOpEntry::power(key.m, c / Rational(factorial(key.m))));
  }
  return h;
}

class NonAffineError : public std::invalid_argument {
 public:
  NonAffineError(const std::string& what, Family row, Family col, std::uint32_t order, Word word)
      : std::invalid_argument(what), row(row), col(col), order(order), word(std::move(word)) {}
  Family row;
  Family col;
  std::uint32_t order;
  Word word;
};

/// Inverse of toHamiltonian. The basis is `basis`; element k stands for
/// basisFamily(basis, k). Every coefficient must be a constant plus a
/// combination of single generators.
inline ConformalStructure fromLinearOperator(const MatrixDiffOp& h, const std::vector<BasisElement>& basis) {
  ConformalStructure s;
  s.basis = basis;
  const auto indexOf = [&](Family f) {
    auto k = basisIndex(basis, f);
    if (!k) {
      throw std::invalid_argument("operator family is not in the basis");
    }
    return *k;
  };
  for (const auto& [key, e] : h.entries()) {
    const std::size_t row = indexOf(key.first);
    const std::size_t col = indexOf(key.second);
    for (const auto& [n, a] : e.coefficients()) {
      const Rational nf(factorial(n));
      for (const auto& [w, c] : a.terms()) {
        if (w.empty()) {
          s.setMu({col, row, n}, c * nf);
        } else if (w.size() == 1) {
          s.setLambda({col, row, indexOf(w[0].family), w[0].order, n}, c * nf);
        } else {
          throw NonAffineError("coefficient is not affine in the generators", key.first, key.second, n, w);
        }
      }
    }
  }
  return s;
}

/// Conjugation and Jacobi on the basis; structures with a center are judged
/// through their operator instead.
inline Verdict checkConformal(const ConformalStructure& s) {
  if (s.hasCenter()) {
    return checkHamiltonian(toHamiltonian(s));
  }
  Verdict v = checkConjugation(s);
  for (Witness& w : checkJacobiConformal(s).witnesses) {
    v.fail(std::move(w));
  }
  return v;
}

/// Current-type structure of the algebra L plus the central part
/// mu^m_{a;b} = <a,b>_m; with forms at m = 1 this is the affine algebra.
inline ConformalStructure affineStructure(const LieSuperData& lie, const BilinearFormFamily& form) {
  for (const BasisElement& b : lie.basis) {
    if (isOdd(b.parity)) {
      throw ParityError("affine structure needs an all-even basis");
    }
  }
  validateForms(form);
  ConformalStructure s;
  s.basis = lie.basis;
  for (const auto& [key, c] : lie.constants) {
    s.setLambda({key[0], key[1], key[2], 0, 0}, c);
  }
  for (const auto& [key, c] : form.values) {
    const auto a = basisIndex(lie.basis, key.left);
    const auto b = basisIndex(lie.basis, key.right);
    if (!a || !b) {
      throw std::invalid_argument("form references an element outside the basis");
    }
    s.setMu({*a, *b, key.order}, c);
  }
  return s;
}

class CocyclePreconditionError : public std::invalid_argument {
 public:
  enum class Kind { lieInvalid, formInvalid, mixedOrders };
  CocyclePreconditionError(Kind kind, const std::string& what) : std::invalid_argument(what), kind(kind) {}
  Kind kind;
};

struct CocycleResult {
  Verdict verdict;
  /// Order-0 forms: the one-dimensional central extension.
  std::optional<LieSuperData> centralExtension;
  /// Order-1 forms: the affine conformal structure.
  std::optional<ConformalStructure> affine;
};

/// Order-0 forms: closedness
///   <[c,a],b> + (-1)^{lc} <[a,b],c> + (-1)^{lb} <[b,c],a> = 0 for la+lb+lc = 0.
/// Order-1 forms: invariance <[a,b],c> = <a,[b,c]>, the condition making the
/// order-one form operator and the Lie operator a compatible pair.
inline CocycleResult checkCocycle(const LieSuperData& lie, const BilinearFormFamily& form) {
  if (!checkLieSuper(lie).pass) {
    throw CocyclePreconditionError(CocyclePreconditionError::Kind::lieInvalid, "bracket is not a Lie superalgebra");
  }
  try {
    validateForms(form);
  } catch (const FormSymmetryError& e) {
    throw CocyclePreconditionError(CocyclePreconditionError::Kind::formInvalid, e.what());
  }
  std::optional<std::uint32_t> order;
  const std::size_t n = lie.basis.size();
  std::map<std::array<std::size_t, 2>, Rational> values;
  for (const auto& [key, c] : form.values) {
    if (order && *order != key.order) {
      throw CocyclePreconditionError(CocyclePreconditionError::Kind::mixedOrders, "form mixes orders");
    }
    order = key.order;
    const auto a = basisIndex(lie.basis, key.left);
    const auto b = basisIndex(lie.basis, key.right);
    if (!a || !b) {
      throw CocyclePreconditionError(CocyclePreconditionError::Kind::formInvalid, "form references an element outside the basis");
    }
    values[{*a, *b}] = c;
  }
  if (order && *order > 1) {
    throw CocyclePreconditionError(CocyclePreconditionError::Kind::mixedOrders, "form order must be 0 or 1");
  }
  const auto pair = [&](const BasisVector& x, std::size_t b) {
    Rational r;
    for (const auto& [k, c] : x) {
      auto it = values.find({k, b});
      if (it != values.end()) {
        r += c * it->second;
      }
    }
    return r;
  };
  const auto pairRight = [&](std::size_t a, const BasisVector& x) {
    Rational r;
    for (const auto& [k, c] : x) {
      auto it = values.find({a, k});
      if (it != values.end()) {
        r += c * it->second;
      }
    }
    return r;
  };
  CocycleResult result;
  const bool invariance = order.value_or(0) == 1;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        const Parity la = lie.parity(a);
        const Parity lb = lie.parity(b);
        const Parity lc = lie.parity(c);
        Rational sum;
        if (invariance) {
          sum = pair(lie.bracket(a, b), c) - pairRight(a, lie.bracket(b, c));
        } else {
          if (isOdd(la + lb + lc)) {
            continue;
          }
          sum = pair(lie.bracket(c, a), b) + signPower(isOdd(lc)) * pair(lie.bracket(a, b), c) +
                signPower(isOdd(lb)) * pair(lie.bracket(b, c), a);
        }
        if (sgn(sum) != 0) {
          result.verdict.fail({std::string(invariance ? "invariance(" : "cocycle(") + lie.basis[a].name + "," +
                                   lie.basis[b].name + "," + lie.basis[c].name + ")",
                               {},
                               toString(sum)});
        }
      }
    }
  }
  if (!result.verdict.pass) {
    return result;
  }
  if (invariance) {
    const bool allEven =
        std::none_of(lie.basis.begin(), lie.basis.end(), [](const BasisElement& b) { return isOdd(b.parity); });
    if (allEven) {
      result.affine = affineStructure(lie, form);
    }
  } else {
    LieSuperData ext = lie;
    std::string name = "c";
    while (ext.find(name)) {
      name += "_";
    }
    ext.basis.push_back({name, Parity::even});
    for (const auto& [key, c] : values) {
      ext.set(key[0], key[1], n, c);
    }
    result.centralExtension = std::move(ext);
  }
  return result;
}

}  // namespace superham

#endif  // SUPERHAM_CONFORMAL_HPP
