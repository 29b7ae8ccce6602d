#ifndef SUPERHAM_TESTS_CONFORMAL_SAMPLES_HPP
#define SUPERHAM_TESTS_CONFORMAL_SAMPLES_HPP

#include "lie_samples.hpp"

namespace superham::testing {

inline ConformalStructure virasoroStructure(const Rational& scale = 1) {
  ConformalStructure s;
  s.basis = {{"L", Parity::even}};
  s.setLambda({0, 0, 0, 1, 0}, scale);
  s.setLambda({0, 0, 0, 0, 1}, 2 * scale);
  return s;
}

/// Center-free Neveu-Schwarz algebra: L even, G odd.
inline ConformalStructure neveuSchwarz() {
  ConformalStructure s;
  s.basis = {{"L", Parity::even}, {"G", Parity::odd}};
  s.setLambda({0, 0, 0, 1, 0}, 1);
  s.setLambda({0, 0, 0, 0, 1}, 2);
  s.setLambda({0, 1, 1, 1, 0}, 1);
  s.setLambda({0, 1, 1, 0, 1}, makeRational(3, 2));
  s.setLambda({1, 0, 1, 1, 0}, makeRational(1, 2));
  s.setLambda({1, 0, 1, 0, 1}, makeRational(3, 2));
  s.setLambda({1, 1, 0, 0, 0}, 2);
  return s;
}

/// lambda^{0,0} = bracket constants and nothing else.
inline ConformalStructure currentStructure(const LieSuperData& lie) {
  ConformalStructure s;
  s.basis = lie.basis;
  for (const auto& [key, c] : lie.constants) {
    s.setLambda({key[0], key[1], key[2], 0, 0}, c);
  }
  return s;
}

/// Replaces lambda by a table satisfying the conjugation identity: entries
/// with left < right are kept and mirrored, diagonal blocks are averaged
/// with their transform.
inline void enforceConjugation(ConformalStructure& s) {
  LambdaTable upper;
  LambdaTable diag;
  for (const auto& [k, c] : s.lambda) {
    if (k.left < k.right) {
      upper[k] = c;
    } else if (k.left == k.right) {
      diag[k] = c;
    }
  }
  LambdaTable out = upper;
  for (const auto& [k, c] : conjugationTransform(s.basis, upper)) {
    out[k] += c;
  }
  for (const auto& [k, c] : diag) {
    out[k] += c / 2;
  }
  for (const auto& [k, c] : conjugationTransform(s.basis, diag)) {
    out[k] += c / 2;
  }
  s.lambda.clear();
  for (const auto& [k, c] : out) {
    s.setLambda(k, c);
  }
}

/// Virasoro plus a primary field A of weight delta (A_(m)A = 0).
inline ConformalStructure virasoroWithPrimary(const Rational& delta, Parity parity) {
  ConformalStructure s;
  s.basis = {{"L", Parity::even}, {"A", parity}};
  s.setLambda({0, 0, 0, 1, 0}, 1);
  s.setLambda({0, 0, 0, 0, 1}, 2);
  s.setLambda({0, 1, 1, 1, 0}, 1);
  s.setLambda({0, 1, 1, 0, 1}, delta);
  enforceConjugation(s);
  return s;
}

/// Random center-free structure on <= 2 even + 1 odd elements with
/// n, m <= 2: raw tables, conjugation-completed tables, and perturbations
/// of known conformal algebras.
inline ConformalStructure randomStructure(Sampler& s) {
  const int mode = s.uniform(0, 5);
  ConformalStructure c;
  if (mode >= 3) {
    const int base = s.uniform(0, 4);
    switch (base) {
      case 0: c = virasoroStructure(s.uniform(-2, 2)); break;
      case 1: c = virasoroWithPrimary(s.uniform(-2, 2), s.uniform(0, 1) ? Parity::odd : Parity::even); break;
      case 2: c = currentStructure(s.uniform(0, 1) ? oddSquare() : solvable(s.uniform(-2, 2))); break;
      case 3: c = currentStructure(superBorel()); break;
      default: c = neveuSchwarz(); break;
    }
    if (mode == 5) {
      // Perturb one constant and restore conjugation.
      const std::size_t nb = c.basis.size();
      for (int tries = 0; tries < 20; ++tries) {
        LambdaKey k{std::size_t(s.uniform(0, int(nb) - 1)), std::size_t(s.uniform(0, int(nb) - 1)),
                    std::size_t(s.uniform(0, int(nb) - 1)), std::uint32_t(s.uniform(0, 1)), std::uint32_t(s.uniform(0, 1))};
        if (c.parity(k.target) == c.parity(k.left) + c.parity(k.right)) {
          c.setLambda(k, s.uniform(-2, 2));
          break;
        }
      }
      enforceConjugation(c);
    }
    return c;
  }
  const int evens = s.uniform(1, 2);
  const int odds = s.uniform(0, 1);
  for (int i = 0; i < evens; ++i) {
    c.basis.push_back({"a" + std::to_string(i + 1), Parity::even});
  }
  for (int i = 0; i < odds; ++i) {
    c.basis.push_back({"b" + std::to_string(i + 1), Parity::odd});
  }
  const std::size_t nb = c.basis.size();
  const int entries = s.uniform(1, 4);
  for (int e = 0; e < entries; ++e) {
    const std::uint32_t n = s.uniform(0, 2);
    const std::uint32_t m = s.uniform(0, 2 - int(n));
    LambdaKey k{std::size_t(s.uniform(0, int(nb) - 1)), std::size_t(s.uniform(0, int(nb) - 1)),
                std::size_t(s.uniform(0, int(nb) - 1)), n, m};
    if (c.parity(k.target) == c.parity(k.left) + c.parity(k.right)) {
      c.setLambda(k, s.uniform(-2, 2));
    }
  }
  if (mode >= 1) {
    enforceConjugation(c);
  }
  return c;
}

}  // namespace superham::testing

#endif  // SUPERHAM_TESTS_CONFORMAL_SAMPLES_HPP
