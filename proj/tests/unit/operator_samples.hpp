#ifndef SUPERHAM_TESTS_OPERATOR_SAMPLES_HPP
#define SUPERHAM_TESTS_OPERATOR_SAMPLES_HPP

#include "generators.hpp"

namespace superham::testing {

/// Parity-consistent operator on psi, phi, theta with D-orders <= 2.
inline MatrixDiffOp randomOperator(Sampler& s, bool constantCoefficients) {
  MatrixDiffOp h;
  for (const Family r : {kPsi, kTheta}) {
    for (const Family c : {kPsi, kTheta, kPhi}) {
      if (s.uniform(0, 1) == 0) {
        continue;
      }
      DiffOpEntry e;
      for (std::uint32_t n = 0; n <= 2; ++n) {
        if (s.uniform(0, 1) == 0) {
          continue;
        }
        const Parity want = r.parity + c.parity;
        e.add(n, constantCoefficients ? (isOdd(want) ? SuperPoly{} : SuperPoly::constant(s.coefficient()))
                                      : s.homogeneous(want, 2));
      }
      h.add(r, c, e);
    }
  }
  return h;
}

}  // namespace superham::testing

#endif  // SUPERHAM_TESTS_OPERATOR_SAMPLES_HPP
