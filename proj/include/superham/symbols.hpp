#ifndef SUPERHAM_SYMBOLS_HPP
#define SUPERHAM_SYMBOLS_HPP

#include "superham/superpoly.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace superham {

/// Offset that separates the formal test covector families from the user's
/// families. Test family for slot s shadowing f has index s * offset + f.index.
inline constexpr std::uint32_t kTestFamilyStride = 1u << 28;

inline Family testFamily(Family f, std::uint32_t slot) {
  return Family{f.parity, slot * kTestFamilyStride + f.index};
}

inline std::uint32_t testSlotOf(Family f) { return f.index / kTestFamilyStride; }

inline Family baseFamilyOf(Family f) { return Family{f.parity, f.index % kTestFamilyStride}; }

/// Bidirectional Family <-> name map.
class SymbolTable {
 public:
  /// Declares a family; index is the count of existing families of that parity.
  Family declare(const std::string& name, Parity parity) {
    if (byName_.count(name) != 0) {
      throw std::invalid_argument("duplicate family '" + name + "'");
    }
    std::uint32_t next = 0;
    for (const auto& [f, n] : names_) {
      if (f.parity == parity) {
        ++next;
      }
    }
    return bind(name, Family{parity, next});
  }

  /// Registers a family under an explicit index.
  Family bind(const std::string& name, Family f) {
    if (byName_.count(name) != 0 || names_.count(f) != 0) {
      throw std::invalid_argument("duplicate family '" + name + "'");
    }
    names_.emplace(f, name);
    byName_.emplace(name, f);
    order_.push_back(f);
    return f;
  }

  std::optional<Family> find(const std::string& name) const {
    auto it = byName_.find(name);
    if (it == byName_.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  /// Families in declaration order.
  const std::vector<Family>& families() const noexcept { return order_; }

  std::string nameOf(Family f) const {
    if (auto it = names_.find(f); it != names_.end()) {
      return it->second;
    }
    if (const std::uint32_t slot = testSlotOf(f); slot > 0) {
      return "u" + std::to_string(slot) + "_" + nameOf(baseFamilyOf(f));
    }
    return std::string(isOdd(f.parity) ? "theta" : "psi") + "_" + std::to_string(f.index);
  }

  friend bool operator==(const SymbolTable& a, const SymbolTable& b) { return a.order_ == b.order_ && a.names_ == b.names_; }

 private:
  std::map<Family, std::string> names_;
  std::map<std::string, Family> byName_;
  std::vector<Family> order_;
};

inline std::string renderGenerator(const SymbolTable& symbols, const Generator& g) {
  const std::string name = symbols.nameOf(g.family);
  if (g.order <= 3) {
    return name + std::string(g.order, '\'');
  }
  return "D^" + std::to_string(g.order) + "[" + name + "]";
}

/// Product text for a normal word, folding even powers: "psi^2*psi'".
inline std::string renderWord(const SymbolTable& symbols, const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t run = 1;
    while (i + run < w.size() && w[i + run] == w[i]) {
      ++run;
    }
    if (!out.empty()) {
      out += "*";
    }
    out += renderGenerator(symbols, w[i]);
    if (run > 1) {
      out += "^" + std::to_string(run);
    }
    i += run;
  }
  return out;
}

/// A rendered summand: sign and magnitude text.
struct SignedTerm {
  bool negative = false;
  std::string body;
};

inline std::string joinTerms(const std::vector<SignedTerm>& terms) {
  if (terms.empty()) {
    return "0";
  }
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i == 0) {
      out += terms[i].negative ? "-" : "";
    } else {
      out += terms[i].negative ? " - " : " + ";
    }
    out += terms[i].body;
  }
  return out;
}

/// Summands of p: non-constant words in term order, then the constant.
inline std::vector<SignedTerm> polyTerms(const SymbolTable& symbols, const SuperPoly& p) {
  std::vector<SignedTerm> out;
  for (const auto& [w, c] : p.terms()) {
    if (w.empty()) {
      continue;
    }
    const Rational mag = abs(c);
    std::string body = renderWord(symbols, w);
    if (mag != 1) {
      body = toString(mag) + "*" + body;
    }
    out.push_back({sgn(c) < 0, std::move(body)});
  }
  if (const Rational c = p.constantTerm(); sgn(c) != 0) {
    out.push_back({sgn(c) < 0, toString(Rational(abs(c)))});
  }
  return out;
}

/// Surface syntax accepted by the workspace parser, e.g. "psi''' + 6*psi*psi'".
inline std::string renderPoly(const SymbolTable& symbols, const SuperPoly& p) { return joinTerms(polyTerms(symbols, p)); }

}  // namespace superham

#endif  // SUPERHAM_SYMBOLS_HPP
