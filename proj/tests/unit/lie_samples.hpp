#ifndef SUPERHAM_TESTS_LIE_SAMPLES_HPP
#define SUPERHAM_TESTS_LIE_SAMPLES_HPP

#include "generators.hpp"

#include <string>
#include <utility>
#include <vector>

namespace superham::testing {

inline LieSuperData makeLie(std::vector<BasisElement> basis,
                            const std::vector<std::tuple<std::string, std::string, std::string, long>>& brackets) {
  LieSuperData lie;
  lie.basis = std::move(basis);
  for (const auto& [a, b, c, v] : brackets) {
    lie.set(*lie.find(a), *lie.find(b), *lie.find(c), v);
  }
  return lie;
}

inline LieSuperData sl2() {
  return makeLie({{"e", Parity::even}, {"f", Parity::even}, {"h", Parity::even}},
                 {{"e", "f", "h", 1}, {"f", "e", "h", -1}, {"h", "e", "e", 2}, {"e", "h", "e", -2}, {"h", "f", "f", -2},
                  {"f", "h", "f", 2}});
}

/// Antisymmetric but [[e3,e1],e2] + [[e1,e2],e3] + [[e2,e3],e1] = 3 e1.
inline LieSuperData nonJacobi() {
  return makeLie({{"e1", Parity::even}, {"e2", Parity::even}, {"e3", Parity::even}},
                 {{"e1", "e2", "e2", 1}, {"e2", "e1", "e2", -1}, {"e1", "e3", "e3", 2}, {"e3", "e1", "e3", -2},
                  {"e2", "e3", "e1", 1}, {"e3", "e2", "e1", -1}});
}

/// [q,q] = h with q odd and h even central.
inline LieSuperData oddSquare() { return makeLie({{"h", Parity::even}, {"q", Parity::odd}}, {{"q", "q", "h", 1}}); }

/// [h,x] = 2x, [h,q] = q, [q,q] = x.
inline LieSuperData superBorel() {
  return makeLie({{"h", Parity::even}, {"x", Parity::even}, {"q", Parity::odd}},
                 {{"h", "x", "x", 2}, {"x", "h", "x", -2}, {"h", "q", "q", 1}, {"q", "h", "q", -1}, {"q", "q", "x", 1}});
}

/// [e1,e2] = e2, [e1,e3] = alpha e3: a Lie algebra for every alpha.
inline LieSuperData solvable(long alpha) {
  return makeLie({{"e1", Parity::even}, {"e2", Parity::even}, {"e3", Parity::even}},
                 {{"e1", "e2", "e2", 1}, {"e2", "e1", "e2", -1}, {"e1", "e3", "e3", alpha}, {"e3", "e1", "e3", -alpha}});
}

/// Sets [a,b] = v c together with the super skew-symmetric partner.
inline void setSkewPair(LieSuperData& lie, std::size_t a, std::size_t b, std::size_t c, long v) {
  lie.set(a, b, c, v);
  lie.set(b, a, c, -koszulSign(lie.parity(a), lie.parity(b)) * v);
}

/// Super skew-symmetric constant table: from a known algebra, a perturbed
/// known algebra, or uniformly random, on <= 3 even + 1 odd elements.
inline LieSuperData randomSkewTable(Sampler& s) {
  const int mode = s.uniform(0, 3);
  LieSuperData lie;
  if (mode <= 1) {
    const int base = s.uniform(0, 4);
    lie = base == 0 ? sl2() : base == 1 ? oddSquare() : base == 2 ? superBorel() : base == 3 ? solvable(s.uniform(-2, 2)) : nonJacobi();
    if (mode == 1) {
      // Perturb one bracket.
      const std::size_t n = lie.basis.size();
      for (int tries = 0; tries < 20; ++tries) {
        const std::size_t a = s.uniform(0, int(n) - 1);
        const std::size_t b = s.uniform(0, int(n) - 1);
        const std::size_t c = s.uniform(0, int(n) - 1);
        if (lie.parity(c) != lie.parity(a) + lie.parity(b) || (a == b && !isOdd(lie.parity(a)))) {
          continue;
        }
        setSkewPair(lie, a, b, c, s.uniform(-2, 2));
        break;
      }
    }
    return lie;
  }
  const int evens = s.uniform(1, 3);
  const int odds = s.uniform(0, 1);
  for (int i = 0; i < evens; ++i) {
    lie.basis.push_back({"e" + std::to_string(i + 1), Parity::even});
  }
  for (int i = 0; i < odds; ++i) {
    lie.basis.push_back({"q" + std::to_string(i + 1), Parity::odd});
  }
  const std::size_t n = lie.basis.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      if (a == b && !isOdd(lie.parity(a))) {
        continue;
      }
      for (std::size_t c = 0; c < n; ++c) {
        if (lie.parity(c) == lie.parity(a) + lie.parity(b) && s.uniform(0, 2) == 0) {
          setSkewPair(lie, a, b, c, s.uniform(-2, 2));
        }
      }
    }
  }
  return lie;
}

}  // namespace superham::testing

#endif  // SUPERHAM_TESTS_LIE_SAMPLES_HPP
