#ifndef SUPERHAM_LIE_HPP
#define SUPERHAM_LIE_HPP

#include "superham/diffop.hpp"
#include "superham/symbols.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace superham {

struct BasisElement {
  std::string name;
  Parity parity = Parity::even;

  friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

/// Family standing for basis element k when a basis is turned into an
/// operator: elements of each parity are numbered in order, matching the
/// numbering of declared families.
inline Family basisFamily(const std::vector<BasisElement>& basis, std::size_t k) {
  const Parity p = basis.at(k).parity;
  std::uint32_t index = 0;
  for (std::size_t i = 0; i < k; ++i) {
    index += basis[i].parity == p ? 1 : 0;
  }
  return Family{p, index};
}

/// Inverse of basisFamily.
inline std::optional<std::size_t> basisIndex(const std::vector<BasisElement>& basis, Family f) {
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (basisFamily(basis, k) == f) {
      return k;
    }
  }
  return std::nullopt;
}

inline SymbolTable basisSymbols(const std::vector<BasisElement>& basis) {
  SymbolTable t;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    t.bind(basis[k].name, basisFamily(basis, k));
  }
  return t;
}

/// Linear combination of basis elements.
using BasisVector = std::map<std::size_t, Rational>;

inline void accumulate(BasisVector& into, std::size_t k, const Rational& c) {
  if (sgn(c) == 0) {
    return;
  }
  auto [it, inserted] = into.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) {
      into.erase(it);
    }
  }
}

inline std::string renderBasisVector(const std::vector<BasisElement>& basis, const BasisVector& v) {
  std::vector<SignedTerm> terms;
  for (const auto& [k, c] : v) {
    const Rational mag = abs(c);
    terms.push_back({sgn(c) < 0, (mag == 1 ? "" : toString(mag) + "*") + basis.at(k).name});
  }
  return joinTerms(terms);
}

/// Structure constants [b1, b2] = sum_b3 c(b1,b2,b3) b3 on a graded basis.
struct LieSuperData {
  using Key = std::array<std::size_t, 3>;

  std::vector<BasisElement> basis;
  std::map<Key, Rational> constants;

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (basis[k].name == name) {
        return k;
      }
    }
    return std::nullopt;
  }

  Parity parity(std::size_t k) const { return basis.at(k).parity; }

  /// Sets a constant; rejects targets of the wrong parity.
  void set(std::size_t b1, std::size_t b2, std::size_t b3, const Rational& c) {
    if (b1 >= basis.size() || b2 >= basis.size() || b3 >= basis.size()) {
      throw std::out_of_range("structure constant references an unknown basis element");
    }
    if (parity(b3) != parity(b1) + parity(b2)) {
      throw ParityError("bracket [" + basis[b1].name + "," + basis[b2].name + "] cannot produce " + basis[b3].name);
    }
    if (sgn(c) == 0) {
      constants.erase({b1, b2, b3});
    } else {
      constants[{b1, b2, b3}] = c;
    }
  }

  BasisVector bracket(std::size_t a, std::size_t b) const {
    BasisVector r;
    for (auto it = constants.lower_bound({a, b, 0}); it != constants.end() && it->first[0] == a && it->first[1] == b;
         ++it) {
      accumulate(r, it->first[2], it->second);
    }
    return r;
  }

  /// [x, b] for x a combination of basis elements.
  BasisVector bracket(const BasisVector& x, std::size_t b) const {
    BasisVector r;
    for (const auto& [a, c] : x) {
      for (const auto& [k, d] : bracket(a, b)) {
        accumulate(r, k, c * d);
      }
    }
    return r;
  }

  friend bool operator==(const LieSuperData&, const LieSuperData&) = default;
};

/// Order-zero operator with (row b1, col b2) entry sum_b3 c(b1,b2,b3) psi_b3.
inline MatrixDiffOp linearLieOperator(const LieSuperData& lie) {
  MatrixDiffOp h;
  for (const auto& [key, c] : lie.constants) {
    const SuperPoly coeff = SuperPoly::generator(Generator{basisFamily(lie.basis, key[2]), 0}, c);
    h.add(basisFamily(lie.basis, key[0]), basisFamily(lie.basis, key[1]), DiffOpEntry::multiplication(coeff));
  }
  return h;
}

/// Super skew-symmetry of the constants and the graded Jacobi sum
/// [[c,a],b] + (-1)^{(la+lb)lc} [[a,b],c] + (-1)^{(la+lc)lb} [[b,c],a] = 0.
inline Verdict checkLieSuper(const LieSuperData& lie) {
  Verdict v;
  const std::size_t n = lie.basis.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      BasisVector sum = lie.bracket(a, b);
      const int sign = koszulSign(lie.parity(a), lie.parity(b));
      for (const auto& [k, c] : lie.bracket(b, a)) {
        accumulate(sum, k, sign * c);
      }
      if (!sum.empty()) {
        v.fail({"skew(" + lie.basis[a].name + "," + lie.basis[b].name + ")", {}, renderBasisVector(lie.basis, sum)});
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        const Parity la = lie.parity(a);
        const Parity lb = lie.parity(b);
        const Parity lc = lie.parity(c);
        BasisVector sum = lie.bracket(lie.bracket(c, a), b);
        for (const auto& [k, x] : lie.bracket(lie.bracket(a, b), c)) {
          accumulate(sum, k, koszulSign(la + lb, lc) * x);
        }
        for (const auto& [k, x] : lie.bracket(lie.bracket(b, c), a)) {
          accumulate(sum, k, koszulSign(la + lc, lb) * x);
        }
        if (!sum.empty()) {
          v.fail({"jacobi(" + lie.basis[a].name + "," + lie.basis[b].name + "," + lie.basis[c].name + ")", {},
                  renderBasisVector(lie.basis, sum)});
        }
      }
    }
  }
  return v;
}

}  // namespace superham

#endif  // SUPERHAM_LIE_HPP
