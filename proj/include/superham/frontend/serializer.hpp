#ifndef SUPERHAM_FRONTEND_SERIALIZER_HPP
#define SUPERHAM_FRONTEND_SERIALIZER_HPP

#include "superham/frontend/workspace.hpp"

#include <string>
#include <vector>

namespace superham::frontend {

inline std::string parityName(Parity p) { return isOdd(p) ? "odd" : "even"; }

inline std::string renderDPower(std::uint32_t n) { return n == 1 ? "D" : "D^" + std::to_string(n); }

/// Operator text in descending D order: "D^3 + 4*psi*D + 2*psi'".
inline std::string renderEntry(const SymbolTable& symbols, const DiffOpEntry& e) {
  std::vector<SignedTerm> terms;
  for (auto it = e.coefficients().rbegin(); it != e.coefficients().rend(); ++it) {
    const auto& [n, a] = *it;
    for (SignedTerm t : polyTerms(symbols, a)) {
      if (n > 0) {
        t.body = t.body == "1" ? renderDPower(n) : t.body + "*" + renderDPower(n);
      }
      terms.push_back(std::move(t));
    }
  }
  return joinTerms(terms);
}

inline std::string renderOperator(const std::string& name, const SymbolTable& symbols, const MatrixDiffOp& h) {
  std::string out = "operator " + name + " {\n";
  for (const auto& [key, e] : h.entries()) {
    out += "  entry(" + symbols.nameOf(key.first) + ", " + symbols.nameOf(key.second) + ") = " + renderEntry(symbols, e) +
           ";\n";
  }
  return out + "}\n";
}

inline std::string renderBasis(const std::vector<BasisElement>& basis) {
  std::string out;
  for (const BasisElement& b : basis) {
    out += "  basis " + b.name + " parity " + parityName(b.parity) + ";\n";
  }
  return out;
}

inline std::string renderLie(const std::string& name, const LieSuperData& lie) {
  std::string out = "lie " + name + " {\n" + renderBasis(lie.basis);
  for (const auto& [key, c] : lie.constants) {
    out += "  bracket(" + lie.basis[key[0]].name + ", " + lie.basis[key[1]].name + " -> " + lie.basis[key[2]].name +
           ") = " + toString(c) + ";\n";
  }
  return out + "}\n";
}

inline std::string renderForm(const std::string& name, const FormSpec& form) {
  std::string out = "form " + name + " {\n";
  for (const auto& [key, c] : form.pairs) {
    const auto& [left, right, m] = key;
    out += "  pair(" + left + ", " + right + ")[m=" + std::to_string(m) + "] = " + toString(c) + ";\n";
  }
  return out + "}\n";
}

inline std::string renderConformal(const std::string& name, const ConformalStructure& s) {
  std::string out = "conformal " + name + " {\n" + renderBasis(s.basis);
  for (const auto& [k, c] : s.lambda) {
    out += "  lambda(" + s.basis[k.left].name + ", " + s.basis[k.right].name + " -> " + s.basis[k.target].name +
           ")[n=" + std::to_string(k.n) + ", m=" + std::to_string(k.m) + "] = " + toString(c) + ";\n";
  }
  for (const auto& [k, c] : s.mu) {
    out += "  mu(" + s.basis[k.left].name + ", " + s.basis[k.right].name + ")[m=" + std::to_string(k.m) +
           "] = " + toString(c) + ";\n";
  }
  return out + "}\n";
}

/// Canonical text: families in declaration order, then polys, operators,
/// lie, forms and conformal blocks, each sorted by name; blank lines
/// between sections.
inline std::string serializeWorkspace(const Workspace& ws) {
  std::vector<std::string> sections;
  if (!ws.symbols.families().empty()) {
    std::string s;
    for (const Family f : ws.symbols.families()) {
      s += "family " + ws.symbols.nameOf(f) + " parity " + parityName(f.parity) + ";\n";
    }
    sections.push_back(std::move(s));
  }
  if (!ws.polys.empty()) {
    std::string s;
    for (const auto& [name, p] : ws.polys) {
      s += "poly " + name + " = " + renderPoly(ws.symbols, p) + ";\n";
    }
    sections.push_back(std::move(s));
  }
  for (const auto& [name, h] : ws.operators) {
    sections.push_back(renderOperator(name, ws.symbols, h));
  }
  for (const auto& [name, lie] : ws.lie) {
    sections.push_back(renderLie(name, lie));
  }
  for (const auto& [name, form] : ws.forms) {
    sections.push_back(renderForm(name, form));
  }
  for (const auto& [name, s] : ws.conformal) {
    sections.push_back(renderConformal(name, s));
  }
  std::string out;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    out += (i == 0 ? "" : "\n") + sections[i];
  }
  return out;
}

}  // namespace superham::frontend

#endif  // SUPERHAM_FRONTEND_SERIALIZER_HPP
