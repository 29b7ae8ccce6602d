// Acceptance run: one [PASS]/[FAIL] line per criterion, with elapsed time.

#include "superham/frontend/cli.hpp"

#include "conformal_samples.hpp"
#include "generators.hpp"
#include "lie_samples.hpp"
#include "operator_samples.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace superham;
using namespace superham::frontend;
using namespace superham::testing;

namespace {

/// Collects the first few reasons a criterion failed.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      ++failures_;
      if (notes_.size() < 5) {
        notes_.push_back(what);
      }
    }
  }

  bool ok() const { return failures_ == 0; }
  int failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  int failures_ = 0;
  std::vector<std::string> notes_;
};

std::string fixture(const std::string& name) { return std::string(SUPERHAM_FIXTURE_DIR) + "/" + name; }

Workspace loadFixture(const std::string& name) {
  std::ifstream in(fixture(name), std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return parseWorkspace(s.str());
}

bool nonzeroWitness(const Verdict& v) {
  if (v.witnesses.empty()) {
    return false;
  }
  return std::visit(
      [](const auto& r) {
        if constexpr (std::is_same_v<std::decay_t<decltype(r)>, std::string>) {
          return !r.empty();
        } else {
          return !r.isZero();
        }
      },
      v.witnesses.front().residual);
}

MatrixDiffOp single(Family f, const DiffOpEntry& e) {
  MatrixDiffOp h;
  h.add(f, f, e);
  return h;
}

void kdvEndToEnd(Check& c) {
  const std::string kdv = fixture("kdv.shs");
  const Report skew = runCommand({"check-skew", kdv, "--operator", "H"});
  c.expect(skew.exitCode == 0 && skew.verdicts.size() == 1 && skew.verdicts[0].pass, "check-skew H");
  const Report ham = runCommand({"check-hamiltonian", kdv, "--operator", "H"});
  c.expect(ham.exitCode == 0 && ham.verdicts.size() == 1 && ham.verdicts[0].pass, "check-hamiltonian H");
  const Report ev = runCommand({"evolve", kdv, "--operator", "H", "--density", "L"});
  c.expect(ev.exitCode == 0 && ev.output == std::vector<std::string>{"psi_t = psi''' + 6*psi*psi'"},
           "evolve output: " + (ev.output.empty() ? ev.error : ev.output.front()));
}

void boundaryCases(Check& c) {
  const MatrixDiffOp dPsi = single(kPsi, DiffOpEntry::power(1));
  c.expect(checkSkew(dPsi).pass && checkHamiltonian(dPsi).pass, "D on psi");
  const Verdict odd = checkSkew(single(kTheta, DiffOpEntry::power(1)));
  c.expect(!odd.pass && nonzeroWitness(odd), "D on theta must fail skew with a witness");
  const MatrixDiffOp constant = single(kTheta, DiffOpEntry{{0, cst(1)}});
  c.expect(checkSkew(constant).pass, "constant on theta must be skew");
  const Report cli = runCommand({"check-skew", fixture("super.shs"), "--operator", "Dtheta", "--operator", "Ctheta"});
  c.expect(cli.exitCode == 1 && cli.verdicts.size() == 2 && !cli.verdicts[0].pass && cli.verdicts[1].pass,
           "check-skew Dtheta Ctheta via CLI");
}

void lieEquivalence(Check& c) {
  Sampler s(9003);
  int passes = 0;
  for (int i = 0; i < 60; ++i) {
    const LieSuperData lie = randomSkewTable(s);
    const bool expected = checkLieSuper(lie).pass;
    c.expect(checkHamiltonian(linearLieOperator(lie)).pass == expected, "random table " + std::to_string(i));
    passes += expected;
  }
  c.expect(passes > 0 && passes < 60, "sample mix has both verdicts");
  const Verdict broken = checkHamiltonian(linearLieOperator(nonJacobi()));
  c.expect(!broken.pass && nonzeroWitness(broken), "non-Jacobi table");
  c.expect(checkHamiltonian(linearLieOperator(sl2())).pass, "sl2");
  c.expect(checkHamiltonian(linearLieOperator(oddSquare())).pass, "odd square");
}

void conformalEquivalence(Check& c) {
  Sampler s(9004);
  for (int i = 0; i < 60; ++i) {
    const ConformalStructure st = randomStructure(s);
    c.expect(checkConformal(st).pass == checkHamiltonian(toHamiltonian(st)).pass,
             "random structure " + std::to_string(i));
  }
  const ConformalStructure vir = virasoroStructure();
  const MatrixDiffOp h = toHamiltonian(vir);
  const Family l = basisFamily(vir.basis, 0);
  c.expect(checkConformal(vir).pass && checkHamiltonian(h).pass, "Virasoro passes both checks");
  c.expect(h == single(l, DiffOpEntry{{1, cst(2) * gen(l)}, {0, gen(l, 1)}}), "Virasoro operator is 2*L*D + L'");
}

void roundTrips(Check& c) {
  Sampler s(9005);
  for (int i = 0; i < 200; ++i) {
    const ConformalStructure st = randomStructure(s);
    const MatrixDiffOp h = toHamiltonian(st);
    c.expect(fromLinearOperator(h, st.basis) == st, "structure round trip " + std::to_string(i));
  }
  const std::vector<BasisElement> basis{{"a", Parity::even}, {"b", Parity::even}, {"q", Parity::odd}};
  for (int i = 0; i < 200; ++i) {
    MatrixDiffOp h;
    for (int t = s.uniform(0, 5); t > 0; --t) {
      const std::size_t r = s.uniform(0, 2);
      const std::size_t col = s.uniform(0, 2);
      const Parity target = basis[r].parity + basis[col].parity;
      SuperPoly coeff;
      if (!isOdd(target)) {
        coeff += SuperPoly::constant(s.uniform(-2, 2));
      }
      for (std::size_t k = 0; k < basis.size(); ++k) {
        if (basis[k].parity == target && s.uniform(0, 1)) {
          coeff += cst(s.uniform(-2, 2)) * gen(basisFamily(basis, k), s.uniform(0, 2));
        }
      }
      h.add(basisFamily(basis, r), basisFamily(basis, col), DiffOpEntry{{std::uint32_t(s.uniform(0, 2)), coeff}});
    }
    c.expect(toHamiltonian(fromLinearOperator(h, basis)) == h, "operator round trip " + std::to_string(i));
  }
  const Workspace kdv = loadFixture("kdv.shs");
  const Workspace vir = loadFixture("virasoro.shs");
  const MatrixDiffOp& kdvOp = kdv.operators.at("H");
  const std::vector<BasisElement> psiBasis{{"psi", Parity::even}};
  ConformalStructure virC = vir.conformal.at("VirC");
  virC.basis = psiBasis;
  c.expect(fromLinearOperator(kdvOp, psiBasis) == virC, "KdV operator maps to VirC");
  c.expect(toHamiltonian(virC) == kdvOp, "VirC maps to the KdV operator");
}

void trivialDensities(Check& c) {
  Sampler s(9006);
  for (int i = 0; i < 100; ++i) {
    const SuperPoly p = s.poly();
    const Rational lambda = s.coefficient();
    const SuperPoly input = totalDerivative(p) + SuperPoly::constant(lambda);
    const TildeVerdict t = decideTrivial(input);
    c.expect(t.isTrivial && totalDerivative(t.antiderivative) + SuperPoly::constant(t.constant) == input &&
                 t.constant == lambda,
             "reconstruction " + std::to_string(i));
  }
  for (const SuperPoly& p : {gen(kPsi) * gen(kPsi, 2), gen(kTheta) * gen(kTheta, 1), gen(kPsi) * gen(kPsi)}) {
    const TildeVerdict t = decideTrivial(p);
    c.expect(!t.isTrivial && t.witness && !t.witness->second.isZero(), "nontrivial density " + renderPoly(standardSymbols(), p));
  }
}

void pairsAndPencils(Check& c) {
  const std::string pair = fixture("pair.shs");
  const std::string lie = fixture("lie.shs");
  c.expect(runCommand({"check-pair", pair, "--operator", "P", "--operator", "H"}).exitCode == 0, "pair (D, KdV)");
  const Report trace = runCommand({"check-pair", lie, "--lie", "sl2", "--form", "trace"});
  c.expect(trace.exitCode == 0, "pair (trace, sl2)");
  c.expect(runCommand({"check-cocycle", lie, "--lie", "sl2", "--form", "trace"}).exitCode == 0, "cocycle trace");
  c.expect(runCommand({"check-pair", lie, "--lie", "sl2", "--form", "skewed"}).exitCode == 1, "pair skewed fails");
  c.expect(runCommand({"check-cocycle", lie, "--lie", "sl2", "--form", "skewed"}).exitCode == 1,
           "cocycle skewed fails");

  const Workspace pw = loadFixture("pair.shs");
  const Workspace lw = loadFixture("lie.shs");
  const LieSuperData& g = lw.lie.at("sl2");
  const std::vector<std::pair<MatrixDiffOp, MatrixDiffOp>> pairs{
      {pw.operators.at("P"), pw.operators.at("H")},
      {bilinearFormOperator(resolveForm(lw, lw.forms.at("trace"), &g.basis)), linearLieOperator(g)}};
  Sampler s(9007);
  for (const auto& [a, b] : pairs) {
    c.expect(checkPair(a, b).pass, "library checkPair");
    for (int i = 0; i < 3; ++i) {
      c.expect(checkHamiltonian(s.coefficient() * a + s.coefficient() * b).pass, "pencil member");
    }
  }
}

constexpr int kLawSamples = 200;

void lawSuites(Check& c) {
  Sampler s(9008);
  for (int i = 0; i < kLawSamples; ++i) {
    const Parity pa = s.uniform(0, 1) ? Parity::odd : Parity::even;
    const Parity pb = s.uniform(0, 1) ? Parity::odd : Parity::even;
    const SuperPoly a = s.homogeneous(pa);
    const SuperPoly b = s.homogeneous(pb);
    c.expect(a * b == Rational(koszulSign(pa, pb)) * (b * a), "super-commutativity");
  }
  for (int i = 0; i < kLawSamples; ++i) {
    const Generator g{s.family(), static_cast<std::uint32_t>(s.uniform(0, 2))};
    const Parity pa = s.uniform(0, 1) ? Parity::odd : Parity::even;
    const SuperPoly a = s.homogeneous(pa);
    const SuperPoly b = s.poly();
    c.expect(totalDerivative(a * b) == totalDerivative(a) * b + a * totalDerivative(b), "D is a derivation");
    c.expect(partialDerivative(g, a * b) == partialDerivative(g, a) * b +
                                                Rational(koszulSign(g.parity(), pa)) * (a * partialDerivative(g, b)),
             "partial is a left super-derivation");
  }
  for (int i = 0; i < kLawSamples; ++i) {
    const SuperPoly p = s.poly();
    c.expect(degreeOperator(totalDerivative(p)) == totalDerivative(degreeOperator(p)), "degree operator and D");
  }
  for (int i = 0; i < kLawSamples; ++i) {
    const SuperPoly p = s.poly();
    const Family f = s.family();
    const std::uint32_t n = static_cast<std::uint32_t>(s.uniform(0, 3));
    const SuperPoly commutator =
        partialDerivative(Generator{f, n}, totalDerivative(p)) - totalDerivative(partialDerivative(Generator{f, n}, p));
    c.expect(n == 0 ? commutator.isZero() : commutator == partialDerivative(Generator{f, n - 1}, p),
             "partial commutator with D");
  }
  for (int i = 0; i < kLawSamples; ++i) {
    const MatrixDiffOp h = randomOperator(s, false);
    c.expect(superAdjoint(superAdjoint(h)) == h, "adjoint involution");
  }
  for (int i = 0; i < kLawSamples; ++i) {
    const SuperPoly dp = totalDerivative(s.poly());
    for (const Family f : {kPsi, kPhi, kTheta, kEta}) {
      c.expect(variationalDerivative(f, dp).isZero(), "delta kills total derivatives");
    }
  }
  for (int i = 0; i < kLawSamples; ++i) {
    const ConformalStructure st = randomStructure(s);
    c.expect(conjugationTransform(st.basis, conjugationTransform(st.basis, st.lambda)) == st.lambda,
             "conjugation involution");
  }
  for (int i = 0; i < kLawSamples; ++i) {
    ConformalStructure st = randomStructure(s);
    enforceConjugation(st);
    const auto r = jacobiResidual(st);
    std::map<JacobiKey, Rational> swapped;
    for (const auto& [k, x] : r) {
      swapped[{k.b2, k.b1, k.b3, k.j5, k.m2, k.m1, k.n2}] = -koszulSign(st.parity(k.b1), st.parity(k.b2)) * x;
    }
    c.expect(checkConjugation(st).pass && swapped == r, "Jacobi symmetry in the first two arguments");
  }
}

struct Criterion {
  const char* title;
  double budgetSeconds;
  std::function<void(Check&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"KdV workspace: skew, Hamiltonian and evolution equation", 5, kdvEndToEnd},
      {"Boundary verdicts for D and constants on even and odd diagonals", 5, boundaryCases},
      {"Linear Lie operators are Hamiltonian exactly for Lie superalgebras", 30, lieEquivalence},
      {"Conformal superalgebras agree with their Hamiltonian operators", 60, conformalEquivalence},
      {"Structure and operator round trips", 30, roundTrips},
      {"Triviality of densities with reconstruction", 30, trivialDensities},
      {"Compatible pairs, cocycles and pencils", 30, pairsAndPencils},
      {"Algebraic law suites", 60, lawSuites},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& k = criteria[i];
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      k.body(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.expect(seconds < k.budgetSeconds, "over time budget");
    const bool pass = check.ok();
    failed += !pass;
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << (i + 1) << ". " << k.title << " (" << std::fixed
              << std::setprecision(3) << seconds << " s)\n";
    for (const std::string& note : check.notes()) {
      std::cout << "       " << note << "\n";
    }
    if (check.failures() > int(check.notes().size())) {
      std::cout << "       ... " << check.failures() - int(check.notes().size()) << " more\n";
    }
  }
  return failed == 0 ? 0 : 1;
}
