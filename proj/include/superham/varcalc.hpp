#ifndef SUPERHAM_VARCALC_HPP
#define SUPERHAM_VARCALC_HPP

#include "superham/superpoly.hpp"

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace superham {

/// Finitely supported map Family -> SuperPoly; zero components are dropped.
/// The tag keeps vector fields and covectors from being mixed up.
template <class Tag>
class FamilyAssignment {
 public:
  using Map = std::map<Family, SuperPoly>;

  FamilyAssignment() = default;
  FamilyAssignment(std::initializer_list<std::pair<const Family, SuperPoly>> init) {
    for (const auto& [f, p] : init) {
      add(f, p);
    }
  }

  void set(Family f, SuperPoly p) {
    if (p.isZero()) {
      components_.erase(f);
    } else {
      components_[f] = std::move(p);
    }
  }

  void add(Family f, const SuperPoly& p) {
    if (p.isZero()) {
      return;
    }
    auto it = components_.find(f);
    if (it == components_.end()) {
      components_.emplace(f, p);
      return;
    }
    it->second += p;
    if (it->second.isZero()) {
      components_.erase(it);
    }
  }

  SuperPoly get(Family f) const {
    auto it = components_.find(f);
    return it == components_.end() ? SuperPoly{} : it->second;
  }

  const Map& components() const noexcept { return components_; }
  bool isZero() const noexcept { return components_.empty(); }

  /// Every component at a parity-l family has parity l.
  bool isEvenSector() const {
    for (const auto& [f, p] : components_) {
      if (!hasParity(p, f.parity)) {
        return false;
      }
    }
    return true;
  }

  friend bool operator==(const FamilyAssignment& a, const FamilyAssignment& b) { return a.components_ == b.components_; }

 private:
  Map components_;
};

struct VectorFieldTag {};
struct CovectorTag {};
using VectorField = FamilyAssignment<VectorFieldTag>;
using Covector = FamilyAssignment<CovectorTag>;

inline std::set<Family> familiesOf(const SuperPoly& p) { return p.families(); }

/// delta_f = sum_n (-D)^n d/dpsi_f^{(n)}, evaluated by Horner's rule in D.
inline SuperPoly variationalDerivative(Family f, const SuperPoly& p) {
  const auto top = p.maxOrder(f);
  if (!top) {
    return {};
  }
  SuperPoly r = partialDerivative(Generator{f, *top}, p);
  for (std::uint32_t k = *top; k-- > 0;) {
    r = partialDerivative(Generator{f, k}, p) - totalDerivative(r);
  }
  return r;
}

struct TildeVerdict {
  bool isTrivial = false;
  SuperPoly antiderivative;
  Rational constant;
  /// First family with a nonzero variational derivative.
  std::optional<std::pair<Family, SuperPoly>> witness;
};

/// All nonzero variational derivatives of p, keyed by family.
inline std::map<Family, SuperPoly> variationalGradient(const SuperPoly& p) {
  std::map<Family, SuperPoly> out;
  for (const Family f : p.families()) {
    SuperPoly d = variationalDerivative(f, p);
    if (!d.isZero()) {
      out.emplace(f, std::move(d));
    }
  }
  return out;
}

/// Decides p in D(A) + constants. When it is, recovers v and lambda with
/// p = D(v) + lambda.
///
/// With Y the degree operator, Y(p) = sum_g g * d_g(p). Moving each
/// psi^{(k)} down to psi by parts leaves sum_f psi_f * delta_f(p) = 0, so
/// Y(p) = D(w) with w = sum_f sum_{j<k} psi_f^{(j)} (-D)^{k-j-1} d_{psi_f^{(k)}} p,
/// and since Y commutes with D, v = Y^{-1}(w).
inline TildeVerdict decideTrivial(const SuperPoly& p) {
  TildeVerdict verdict;
  for (const Family f : p.families()) {
    SuperPoly d = variationalDerivative(f, p);
    if (!d.isZero()) {
      verdict.witness.emplace(f, std::move(d));
      return verdict;
    }
  }
  const SuperPoly body = p.withoutConstant();
  SuperPoly w;
  for (const Family f : body.families()) {
    const std::uint32_t top = *body.maxOrder(f);
    // tail_j = sum_{k>j} (-D)^{k-j-1} d_{psi^{(k)}} body
    SuperPoly tail;
    for (std::uint32_t j = top; j-- > 0;) {
      tail = partialDerivative(Generator{f, j + 1}, body) - totalDerivative(tail);
      w += SuperPoly::generator(Generator{f, j}) * tail;
    }
  }
  verdict.isTrivial = true;
  verdict.antiderivative = inverseDegreeOperator(w);
  verdict.constant = p.constantTerm();
  if (totalDerivative(verdict.antiderivative) + SuperPoly::constant(verdict.constant) != p) {
    throw std::logic_error("decideTrivial: reconstruction mismatch");
  }
  return verdict;
}

/// Even evolutionary derivation: sum D^n(u_f) d/dpsi_f^{(n)}.
inline SuperPoly evolutionaryDerivative(const VectorField& u, const SuperPoly& p) {
  SuperPoly r;
  std::map<Family, std::vector<SuperPoly>> derivatives;
  for (const Generator& g : p.generators()) {
    auto it = u.components().find(g.family);
    if (it == u.components().end()) {
      continue;
    }
    auto& cache = derivatives[g.family];
    if (cache.empty()) {
      cache.push_back(it->second);
    }
    while (cache.size() <= g.order) {
      cache.push_back(totalDerivative(cache.back()));
    }
    r += cache[g.order] * partialDerivative(g, p);
  }
  return r;
}

/// [u,v] = d_u(v) - d_v(u), componentwise.
inline VectorField fieldBracket(const VectorField& u, const VectorField& v) {
  VectorField r;
  std::set<Family> support;
  for (const auto& [f, p] : u.components()) {
    support.insert(f);
  }
  for (const auto& [f, p] : v.components()) {
    support.insert(f);
  }
  for (const Family f : support) {
    r.set(f, evolutionaryDerivative(u, v.get(f)) - evolutionaryDerivative(v, u.get(f)));
  }
  return r;
}

/// Representative of u(v) = (sum_f v_f u_f)~.
inline SuperPoly pairing(const Covector& u, const VectorField& v) {
  SuperPoly r;
  for (const auto& [f, uf] : u.components()) {
    auto it = v.components().find(f);
    if (it != v.components().end()) {
      r += it->second * uf;
    }
  }
  return r;
}

/// The class of u(v) in A/D(A) is zero.
inline bool pairIsZero(const Covector& u, const VectorField& v) {
  const TildeVerdict t = decideTrivial(pairing(u, v));
  return t.isTrivial && sgn(t.constant) == 0;
}

/// Replaces every psi_f^{(n)} with D^n(values[f]); families absent from
/// `values` stay as they are.
inline SuperPoly substitute(const SuperPoly& p, const std::map<Family, SuperPoly>& values) {
  std::map<Generator, SuperPoly> images;
  for (const Generator& g : p.generators()) {
    auto it = values.find(g.family);
    images.emplace(g, it == values.end() ? SuperPoly::generator(g) : totalDerivative(it->second, g.order));
  }
  SuperPoly r;
  for (const auto& [w, c] : p.terms()) {
    SuperPoly term = SuperPoly::constant(c);
    for (const Generator& g : w) {
      term = term * images.at(g);
    }
    r += term;
  }
  return r;
}

}  // namespace superham

#endif  // SUPERHAM_VARCALC_HPP
