#ifndef SUPERHAM_SUPERPOLY_HPP
#define SUPERHAM_SUPERPOLY_HPP

#include "superham/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace superham {

enum class Parity : std::uint8_t { even = 0, odd = 1 };

constexpr Parity operator+(Parity a, Parity b) noexcept {
  return static_cast<Parity>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}

constexpr bool isOdd(Parity p) noexcept { return p == Parity::odd; }

/// (-1)^{ab}
constexpr int koszulSign(Parity a, Parity b) noexcept { return (isOdd(a) && isOdd(b)) ? -1 : 1; }

/// A family psi_{i,j}: parity i and position j. Identity is the pair
/// (parity, index); names live in a SymbolTable.
struct Family {
  Parity parity = Parity::even;
  std::uint32_t index = 0;

  friend auto operator<=>(const Family&, const Family&) = default;
};

/// psi_{i,j}^{(n)}
struct Generator {
  Family family;
  std::uint32_t order = 0;

  Parity parity() const noexcept { return family.parity; }
  Generator derivative(std::uint32_t n = 1) const { return {family, order + n}; }

  friend auto operator<=>(const Generator&, const Generator&) = default;
};

/// Factor list of a monomial. In normal form it is sorted by
/// (family parity, family index, order) and holds no repeated odd factor.
using Word = std::vector<Generator>;

/// Term order: shorter words first, then lexicographic.
struct WordOrder {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) {
      return a.size() < b.size();
    }
    return a < b;
  }
};

inline Parity parityOf(const Word& w) {
  Parity p = Parity::even;
  for (const Generator& g : w) {
    p = p + g.parity();
  }
  return p;
}

/// Sorts w into normal order. Returns the sign from odd-odd transpositions,
/// or 0 when an odd generator occurs twice (the word vanishes).
inline int normalizeWord(Word& w) {
  int sign = 1;
  for (std::size_t i = 1; i < w.size(); ++i) {
    for (std::size_t j = i; j > 0 && w[j] < w[j - 1]; --j) {
      if (isOdd(w[j].parity()) && isOdd(w[j - 1].parity())) {
        sign = -sign;
      }
      std::swap(w[j], w[j - 1]);
    }
  }
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (isOdd(w[i].parity()) && w[i] == w[i - 1]) {
      return 0;
    }
  }
  return sign;
}

/// Product of two normal words. Both inputs sorted, so only cross pairs
/// (a_i > b_j, both odd) contribute to the sign.
inline int multiplyWords(const Word& a, const Word& b, Word& out) {
  out.clear();
  out.reserve(a.size() + b.size());
  int sign = 1;
  std::size_t oddRemainingInA = 0;
  for (const Generator& g : a) {
    oddRemainingInA += isOdd(g.parity()) ? 1 : 0;
  }
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && !(b[j] < a[i]))) {
      if (j < b.size() && isOdd(a[i].parity()) && a[i] == b[j]) {
        return 0;
      }
      if (isOdd(a[i].parity())) {
        --oddRemainingInA;
      }
      out.push_back(a[i++]);
    } else {
      if (isOdd(b[j].parity()) && (oddRemainingInA % 2 == 1)) {
        sign = -sign;
      }
      out.push_back(b[j++]);
    }
  }
  return sign;
}

/// Element of the super-commutative differential polynomial algebra.
/// Terms are kept in normal form with nonzero coefficients, so equality is
/// structural.
class SuperPoly {
 public:
  using Terms = std::map<Word, Rational, WordOrder>;

  SuperPoly() = default;

  static SuperPoly constant(const Rational& c) {
    SuperPoly p;
    p.addNormal(Word{}, c);
    return p;
  }

  static SuperPoly generator(Generator g, const Rational& c = 1) {
    SuperPoly p;
    p.addNormal(Word{g}, c);
    return p;
  }

  /// Builds c * (factors in the given order), normalizing with signs.
  static SuperPoly monomial(Word factors, const Rational& c = 1) {
    SuperPoly p;
    p.addTerm(std::move(factors), c);
    return p;
  }

  const Terms& terms() const noexcept { return terms_; }
  bool isZero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  Rational constantTerm() const {
    auto it = terms_.find(Word{});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  SuperPoly withoutConstant() const {
    SuperPoly p = *this;
    p.terms_.erase(Word{});
    return p;
  }

  /// Adds c * word, normalizing the word first.
  void addTerm(Word w, const Rational& c) {
    const int s = normalizeWord(w);
    if (s == 0 || sgn(c) == 0) {
      return;
    }
    addNormal(std::move(w), s > 0 ? c : Rational(-c));
  }

  /// Adds c * w where w is already in normal form.
  void addNormal(Word w, const Rational& c) {
    if (sgn(c) == 0) {
      return;
    }
    auto [it, inserted] = terms_.try_emplace(std::move(w), c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) {
        terms_.erase(it);
      }
    }
  }

  SuperPoly& operator+=(const SuperPoly& o) {
    for (const auto& [w, c] : o.terms_) {
      addNormal(w, c);
    }
    return *this;
  }

  SuperPoly& operator-=(const SuperPoly& o) {
    for (const auto& [w, c] : o.terms_) {
      addNormal(w, -c);
    }
    return *this;
  }

  SuperPoly& operator*=(const Rational& c) {
    if (sgn(c) == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [w, coeff] : terms_) {
      coeff *= c;
    }
    return *this;
  }

  friend SuperPoly operator+(SuperPoly a, const SuperPoly& b) { return a += b; }
  friend SuperPoly operator-(SuperPoly a, const SuperPoly& b) { return a -= b; }
  friend SuperPoly operator-(SuperPoly a) { return a *= Rational(-1); }
  friend SuperPoly operator*(SuperPoly a, const Rational& c) { return a *= c; }
  friend SuperPoly operator*(const Rational& c, SuperPoly a) { return a *= c; }

  friend SuperPoly operator*(const SuperPoly& a, const SuperPoly& b) {
    SuperPoly r;
    Word scratch;
    for (const auto& [wa, ca] : a.terms_) {
      for (const auto& [wb, cb] : b.terms_) {
        const int s = multiplyWords(wa, wb, scratch);
        if (s == 0) {
          continue;
        }
        Rational c = ca * cb;
        if (s < 0) {
          c = -c;
        }
        r.addNormal(scratch, c);
      }
    }
    return r;
  }

  friend bool operator==(const SuperPoly& a, const SuperPoly& b) { return a.terms_ == b.terms_; }

  std::set<Family> families() const {
    std::set<Family> out;
    for (const auto& [w, c] : terms_) {
      for (const Generator& g : w) {
        out.insert(g.family);
      }
    }
    return out;
  }

  std::set<Generator> generators() const {
    std::set<Generator> out;
    for (const auto& [w, c] : terms_) {
      out.insert(w.begin(), w.end());
    }
    return out;
  }

  /// Highest derivative order of f present, if any.
  std::optional<std::uint32_t> maxOrder(Family f) const {
    std::optional<std::uint32_t> best;
    for (const auto& [w, c] : terms_) {
      for (const Generator& g : w) {
        if (g.family == f && (!best || g.order > *best)) {
          best = g.order;
        }
      }
    }
    return best;
  }

 private:
  Terms terms_;
};

inline SuperPoly multiply(const SuperPoly& p, const SuperPoly& q) { return p * q; }

enum class ParityClass { even, odd, mixed, zero };

inline ParityClass parityOf(const SuperPoly& p) {
  if (p.isZero()) {
    return ParityClass::zero;
  }
  bool sawEven = false;
  bool sawOdd = false;
  for (const auto& [w, c] : p.terms()) {
    (isOdd(parityOf(w)) ? sawOdd : sawEven) = true;
  }
  if (sawEven && sawOdd) {
    return ParityClass::mixed;
  }
  return sawOdd ? ParityClass::odd : ParityClass::even;
}

/// True when p is zero or homogeneous of parity `parity`.
inline bool hasParity(const SuperPoly& p, Parity parity) {
  const ParityClass c = parityOf(p);
  return c == ParityClass::zero || (c == (isOdd(parity) ? ParityClass::odd : ParityClass::even));
}

/// d/dx = sum psi^{(n+1)} d/dpsi^{(n)}.
inline SuperPoly totalDerivative(const SuperPoly& p) {
  SuperPoly r;
  Word w;
  for (const auto& [word, c] : p.terms()) {
    for (std::size_t i = 0; i < word.size(); ++i) {
      // Identical even neighbours give identical summands; fold them.
      if (i > 0 && word[i] == word[i - 1]) {
        continue;
      }
      std::size_t run = 1;
      while (i + run < word.size() && word[i + run] == word[i]) {
        ++run;
      }
      w = word;
      ++w[i].order;
      r.addTerm(w, run == 1 ? c : Rational(c * static_cast<long>(run)));
    }
  }
  return r;
}

inline SuperPoly totalDerivative(SuperPoly p, std::uint32_t n) {
  for (std::uint32_t k = 0; k < n; ++k) {
    p = totalDerivative(p);
  }
  return p;
}

/// Left super-derivation: d_g(ab) = d_g(a) b + (-1)^{|g||a|} a d_g(b).
inline SuperPoly partialDerivative(const Generator& g, const SuperPoly& p) {
  SuperPoly r;
  const bool oddG = isOdd(g.parity());
  for (const auto& [word, c] : p.terms()) {
    std::size_t oddBefore = 0;
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (word[i] == g) {
        Word rest;
        rest.reserve(word.size() - 1);
        rest.insert(rest.end(), word.begin(), word.begin() + static_cast<std::ptrdiff_t>(i));
        rest.insert(rest.end(), word.begin() + static_cast<std::ptrdiff_t>(i) + 1, word.end());
        const bool flip = oddG && (oddBefore % 2 == 1);
        r.addNormal(std::move(rest), flip ? Rational(-c) : c);
      }
      oddBefore += isOdd(word[i].parity()) ? 1 : 0;
    }
  }
  return r;
}

/// Degree operator: a length-k word is scaled by k.
inline SuperPoly degreeOperator(const SuperPoly& p) {
  SuperPoly r;
  for (const auto& [word, c] : p.terms()) {
    r.addNormal(word, c * static_cast<long>(word.size()));
  }
  return r;
}

/// Inverse of the degree operator on polynomials without constant term.
inline SuperPoly inverseDegreeOperator(const SuperPoly& p) {
  SuperPoly r;
  for (const auto& [word, c] : p.terms()) {
    if (word.empty()) {
      throw std::invalid_argument("inverseDegreeOperator: constant term present");
    }
    r.addNormal(word, c / static_cast<long>(word.size()));
  }
  return r;
}

}  // namespace superham

#endif  // SUPERHAM_SUPERPOLY_HPP
