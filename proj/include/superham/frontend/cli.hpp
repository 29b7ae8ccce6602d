#ifndef SUPERHAM_FRONTEND_CLI_HPP
#define SUPERHAM_FRONTEND_CLI_HPP

#include "superham/frontend/parser.hpp"
#include "superham/frontend/serializer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace superham::frontend {

struct ReportWitness {
  std::string constraint;
  std::vector<std::string> subjects;
  /// In the surface syntax of the workspace format.
  std::string expression;
};

struct ReportVerdict {
  std::string name;
  bool pass = true;
  std::vector<ReportWitness> witnesses;
};

struct Report {
  std::string command;
  std::vector<ReportVerdict> verdicts;
  std::vector<std::string> output;
  /// Nonempty when no check could be attempted.
  std::string error;
  /// Help or usage text.
  std::string usage;
  bool json = false;
  int exitCode = 0;
};

inline nlohmann::json toJson(const Report& r) {
  nlohmann::json verdicts = nlohmann::json::array();
  for (const ReportVerdict& v : r.verdicts) {
    nlohmann::json witnesses = nlohmann::json::array();
    for (const ReportWitness& w : v.witnesses) {
      witnesses.push_back({{"constraint", w.constraint}, {"subjects", w.subjects}, {"expression", w.expression}});
    }
    verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"witnesses", std::move(witnesses)}});
  }
  nlohmann::json j{{"command", r.command}, {"verdicts", std::move(verdicts)}, {"exitCode", r.exitCode}, {"output", r.output}};
  if (!r.error.empty()) {
    j["error"] = r.error;
  }
  return j;
}

inline void writeReport(const Report& r, std::ostream& out, std::ostream& err) {
  if (r.json) {
    out << toJson(r).dump(2) << "\n";
    if (!r.usage.empty() && r.exitCode == 2) {
      err << r.usage;
    }
    return;
  }
  for (const ReportVerdict& v : r.verdicts) {
    out << (v.pass ? "PASS " : "FAIL ") << v.name << "\n";
    for (const ReportWitness& w : v.witnesses) {
      out << "  " << w.constraint;
      if (!w.subjects.empty()) {
        out << "(";
        for (std::size_t i = 0; i < w.subjects.size(); ++i) {
          out << (i ? ", " : "") << w.subjects[i];
        }
        out << ")";
      }
      out << ": " << w.expression << "\n";
    }
  }
  for (const std::string& line : r.output) {
    out << line << "\n";
  }
  if (!r.error.empty()) {
    err << "error: " << r.error << "\n";
  }
  if (!r.usage.empty()) {
    (r.exitCode == 0 ? out : err) << r.usage;
  }
}

namespace detail {

/// Failure before any check ran: bad input, unresolved names, unmet
/// preconditions.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Missing or conflicting flags; reported together with usage text.
struct UsageError : InputError {
  using InputError::InputError;
};

struct Options {
  std::string format = "text";
  std::string workspace;
  std::string positional;
  std::vector<std::string> operators;
  std::vector<std::string> lie;
  std::vector<std::string> forms;
  std::vector<std::string> structures;
  std::vector<std::string> families;
  std::string density;
  std::string name;
};

struct Operand {
  std::string label;
  MatrixDiffOp op;
  SymbolTable symbols;
};

inline std::vector<std::string> splitLines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    lines.push_back(line);
  }
  return lines;
}

inline Workspace loadWorkspace(const Options& o) {
  if (!o.workspace.empty() && !o.positional.empty()) {
    throw UsageError("give the workspace either positionally or with --workspace, not both");
  }
  const std::string path = o.workspace.empty() ? o.positional : o.workspace;
  if (path.empty()) {
    throw UsageError("no workspace file given");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot read '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parseWorkspace(text.str());
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
}

inline ReportWitness renderWitness(const SymbolTable& symbols, const Witness& w) {
  ReportWitness r;
  r.constraint = w.constraint;
  for (const Family f : w.subjects) {
    r.subjects.push_back(symbols.nameOf(f));
  }
  r.expression = std::visit(
      [&](const auto& residual) -> std::string {
        using T = std::decay_t<decltype(residual)>;
        if constexpr (std::is_same_v<T, SuperPoly>) {
          return renderPoly(symbols, residual);
        } else if constexpr (std::is_same_v<T, DiffOpEntry>) {
          return renderEntry(symbols, residual);
        } else {
          return residual;
        }
      },
      w.residual);
  return r;
}

inline ReportVerdict renderVerdict(const std::string& name, const SymbolTable& symbols, const Verdict& v) {
  ReportVerdict r{name, v.pass, {}};
  for (const Witness& w : v.witnesses) {
    r.witnesses.push_back(renderWitness(symbols, w));
  }
  return r;
}

inline BilinearFormFamily validatedForm(const Workspace& ws, const std::string& name,
                                        const std::vector<BasisElement>* basis) {
  BilinearFormFamily form = resolveForm(ws, lookup(ws.forms, "form", name), basis);
  try {
    validateForms(form);
  } catch (const FormSymmetryError& e) {
    throw InputError("form '" + name + "': " + e.what());
  }
  return form;
}

/// Operators named by --operator, then the Lie operators of --lie, then
/// the form operators of --form (over the first Lie basis when given).
inline std::vector<Operand> operands(const Workspace& ws, const Options& o) {
  std::vector<Operand> out;
  for (const std::string& name : o.operators) {
    out.push_back({name, lookup(ws.operators, "operator", name), ws.symbols});
  }
  for (const std::string& name : o.lie) {
    const LieSuperData& lie = lookup(ws.lie, "lie", name);
    out.push_back({name, linearLieOperator(lie), basisSymbols(lie.basis)});
  }
  const LieSuperData* basisLie = o.lie.empty() ? nullptr : &lookup(ws.lie, "lie", o.lie.front());
  for (const std::string& name : o.forms) {
    const std::vector<BasisElement>* basis = basisLie ? &basisLie->basis : nullptr;
    out.push_back({name, bilinearFormOperator(validatedForm(ws, name, basis)),
                   basisLie ? basisSymbols(basisLie->basis) : ws.symbols});
  }
  return out;
}

inline std::vector<Operand> requireOperands(const Workspace& ws, const Options& o, std::size_t lo, std::size_t hi) {
  std::vector<Operand> ops = operands(ws, o);
  if (ops.size() < lo || ops.size() > hi) {
    const std::string want = lo == hi        ? std::to_string(lo)
                             : hi == SIZE_MAX ? "at least " + std::to_string(lo)
                                              : std::to_string(lo) + " or " + std::to_string(hi);
    throw UsageError("expected " + want + " operator operand(s) from --operator/--lie/--form, got " +
                     std::to_string(ops.size()));
  }
  return ops;
}

template <class T>
const T& single(const std::map<std::string, T>& m, const std::vector<std::string>& names, const std::string& kind,
                const std::string& flag) {
  if (names.size() != 1) {
    throw UsageError("expected exactly one " + flag);
  }
  return lookup(m, kind, names.front());
}

inline std::string operandList(const std::vector<Operand>& ops) {
  std::string s;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    s += (i ? ", " : "") + ops[i].label;
  }
  return s;
}

/// Family declarations for a basis, for pasteable conversion output.
inline std::string basisFamilies(const std::vector<BasisElement>& basis) {
  std::string out;
  for (const BasisElement& b : basis) {
    out += "family " + b.name + " parity " + parityName(b.parity) + ";\n";
  }
  return out;
}

using Handler = std::function<void(const Workspace&, const Options&, Report&)>;

inline void cmdCheckSkew(const Workspace& ws, const Options& o, Report& r) {
  for (const Operand& op : requireOperands(ws, o, 1, SIZE_MAX)) {
    r.verdicts.push_back(renderVerdict("skew(" + op.label + ")", op.symbols, checkSkew(op.op)));
  }
}

inline void cmdCheckHamiltonian(const Workspace& ws, const Options& o, Report& r) {
  for (const Operand& op : requireOperands(ws, o, 1, SIZE_MAX)) {
    r.verdicts.push_back(renderVerdict("hamiltonian(" + op.label + ")", op.symbols, checkHamiltonian(op.op)));
  }
}

inline void cmdCheckPair(const Workspace& ws, const Options& o, Report& r) {
  const std::vector<Operand> ops = requireOperands(ws, o, 2, 2);
  r.verdicts.push_back(
      renderVerdict("pair(" + operandList(ops) + ")", ops.back().symbols, checkPair(ops[0].op, ops[1].op)));
}

inline void cmdSchouten(const Workspace& ws, const Options& o, Report& r) {
  const std::vector<Operand> ops = requireOperands(ws, o, 1, 2);
  const Operand& a = ops.front();
  const Operand& b = ops.back();
  for (const Operand* op : {&a, &b}) {
    if (!checkSkew(op->op).pass) {
      throw InputError("the Schouten bracket needs skew-symmetric operands; '" + op->label + "' is not");
    }
  }
  const ResidualCertificate c = schoutenBracket(a.op, b.op);
  const std::string label = "[" + a.label + ", " + b.label + "]";
  Verdict v;
  reportCertificate(v, "schouten", c);
  r.verdicts.push_back(renderVerdict("schouten(" + a.label + ", " + b.label + ")", b.symbols, v));
  r.output.push_back(label + (c.empty() ? " = 0" : " != 0"));
}

inline void cmdCheckLie(const Workspace& ws, const Options& o, Report& r) {
  if (o.lie.empty()) {
    throw UsageError("expected at least one --lie");
  }
  for (const std::string& name : o.lie) {
    const LieSuperData& lie = lookup(ws.lie, "lie", name);
    r.verdicts.push_back(renderVerdict("lie(" + name + ")", basisSymbols(lie.basis), checkLieSuper(lie)));
  }
}

inline void cmdCheckCocycle(const Workspace& ws, const Options& o, Report& r) {
  const LieSuperData& lie = single(ws.lie, o.lie, "lie", "--lie");
  if (o.forms.size() != 1) {
    throw UsageError("expected exactly one --form");
  }
  const BilinearFormFamily form = resolveForm(ws, lookup(ws.forms, "form", o.forms.front()), &lie.basis);
  CocycleResult result;
  try {
    result = checkCocycle(lie, form);
  } catch (const CocyclePreconditionError& e) {
    throw InputError(e.what());
  }
  r.verdicts.push_back(renderVerdict("cocycle(" + o.forms.front() + ")", basisSymbols(lie.basis), result.verdict));
  const std::string name = o.name.empty() ? o.lie.front() + "_" + o.forms.front() : o.name;
  if (result.centralExtension) {
    for (std::string& line : splitLines(renderLie(name, *result.centralExtension))) {
      r.output.push_back(std::move(line));
    }
  }
  if (result.affine) {
    for (std::string& line : splitLines(renderConformal(name, *result.affine))) {
      r.output.push_back(std::move(line));
    }
  }
}

inline void cmdCheckConformal(const Workspace& ws, const Options& o, Report& r) {
  if (o.structures.empty()) {
    throw UsageError("expected at least one --structure");
  }
  for (const std::string& name : o.structures) {
    const ConformalStructure& s = lookup(ws.conformal, "conformal structure", name);
    r.verdicts.push_back(renderVerdict("conformal(" + name + ")", basisSymbols(s.basis), checkConformal(s)));
  }
}

inline void cmdToOperator(const Workspace& ws, const Options& o, Report& r) {
  const ConformalStructure& s = single(ws.conformal, o.structures, "conformal structure", "--structure");
  const std::string name = o.name.empty() ? o.structures.front() : o.name;
  const std::string text = basisFamilies(s.basis) + "\n" + renderOperator(name, basisSymbols(s.basis), toHamiltonian(s));
  r.output = splitLines(text);
}

inline void cmdFromOperator(const Workspace& ws, const Options& o, Report& r) {
  const MatrixDiffOp& h = single(ws.operators, o.operators, "operator", "--operator");
  std::vector<BasisElement> basis;
  for (const Family f : ws.symbols.families()) {
    basis.push_back({ws.symbols.nameOf(f), f.parity});
  }
  ConformalStructure s;
  try {
    s = fromLinearOperator(h, basis);
  } catch (const NonAffineError& e) {
    throw InputError("entry (" + ws.symbols.nameOf(e.row) + ", " + ws.symbols.nameOf(e.col) + ") coefficient of " +
                     renderDPower(e.order) + " contains " + renderWord(ws.symbols, e.word) +
                     ", which is not affine in the generators");
  }
  r.output = splitLines(renderConformal(o.name.empty() ? o.operators.front() : o.name, s));
}

inline const SuperPoly& density(const Workspace& ws, const Options& o) {
  if (o.density.empty()) {
    throw UsageError("expected --density");
  }
  return lookup(ws.polys, "poly", o.density);
}

inline void cmdEvolve(const Workspace& ws, const Options& o, Report& r) {
  const MatrixDiffOp& h = single(ws.operators, o.operators, "operator", "--operator");
  const SuperPoly& l = density(ws, o);
  if (!hasParity(l, Parity::even)) {
    throw InputError("the density must be even");
  }
  for (const auto& [f, rhs] : evolutionEquation(h, l)) {
    r.output.push_back(ws.symbols.nameOf(f) + "_t = " + renderPoly(ws.symbols, rhs));
  }
}

inline void cmdVardelta(const Workspace& ws, const Options& o, Report& r) {
  const SuperPoly& l = density(ws, o);
  std::vector<Family> families;
  for (const std::string& name : o.families) {
    auto f = ws.symbols.find(name);
    if (!f) {
      throw ResolutionError("unknown family '" + name + "'");
    }
    families.push_back(*f);
  }
  if (families.empty()) {
    families = ws.symbols.families();
  }
  for (const Family f : families) {
    r.output.push_back("delta_" + ws.symbols.nameOf(f) + " " + o.density + " = " +
                       renderPoly(ws.symbols, variationalDerivative(f, l)));
  }
}

inline void cmdFmt(const Workspace& ws, const Options&, Report& r) { r.output = splitLines(serializeWorkspace(ws)); }

inline std::string joinArgs(const std::vector<std::string>& args) {
  std::string s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    s += (i ? " " : "") + args[i];
  }
  return s;
}

inline bool wantsJson(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--format=json" || (args[i] == "--format" && i + 1 < args.size() && args[i + 1] == "json")) {
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Runs one CLI invocation; `args` excludes the program name.
/// Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 nothing was checked.
inline Report runCommand(const std::vector<std::string>& args) {
  using namespace detail;
  Report report;
  report.command = joinArgs(args);
  report.json = wantsJson(args);

  CLI::App app{"Exact checks for Hamiltonian superoperators and conformal superalgebras.", "superham"};
  app.require_subcommand(1, 1);
  Options o;

  enum Flag : unsigned { kOperator = 1, kLie = 2, kForm = 4, kStructure = 8, kDensity = 16, kFamily = 32, kName = 64 };
  struct Command {
    const char* name;
    const char* help;
    unsigned flags;
    Handler run;
  };
  const std::vector<Command> commands{
      {"check-skew", "Check skew-symmetry of operators.", kOperator | kLie | kForm, cmdCheckSkew},
      {"check-hamiltonian", "Check that operators are Hamiltonian.", kOperator | kLie | kForm, cmdCheckHamiltonian},
      {"check-pair", "Check that two operators form a Hamiltonian pair.", kOperator | kLie | kForm, cmdCheckPair},
      {"schouten", "Compute the Schouten bracket of one or two skew operators.", kOperator | kLie | kForm, cmdSchouten},
      {"check-lie", "Check the Lie superalgebra axioms of structure constants.", kLie, cmdCheckLie},
      {"check-cocycle", "Check a bilinear form against a Lie superalgebra.", kLie | kForm | kName, cmdCheckCocycle},
      {"check-conformal", "Check the conformal superalgebra axioms.", kStructure, cmdCheckConformal},
      {"to-operator", "Convert a conformal structure to its linear operator.", kStructure | kName, cmdToOperator},
      {"from-operator", "Convert a linear operator to a conformal structure.", kOperator | kName, cmdFromOperator},
      {"evolve", "Print the evolution equation of a density under an operator.", kOperator | kDensity, cmdEvolve},
      {"vardelta", "Print variational derivatives of a density.", kDensity | kFamily, cmdVardelta},
      {"fmt", "Print the workspace in canonical form.", 0, cmdFmt},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("file", o.positional, "Workspace file");
    sub->add_option("--workspace", o.workspace, "Workspace file");
    sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "json"}));
    if (c.flags & kOperator) {
      sub->add_option("--operator", o.operators, "Operator name (repeatable)");
    }
    if (c.flags & kLie) {
      sub->add_option("--lie", o.lie, "Lie superalgebra name (repeatable)");
    }
    if (c.flags & kForm) {
      sub->add_option("--form", o.forms, "Bilinear form name (repeatable)");
    }
    if (c.flags & kStructure) {
      sub->add_option("--structure", o.structures, "Conformal structure name (repeatable)");
    }
    if (c.flags & kDensity) {
      sub->add_option("--density", o.density, "Name of a poly");
    }
    if (c.flags & kFamily) {
      sub->add_option("--family", o.families, "Family name (repeatable)");
    }
    if (c.flags & kName) {
      sub->add_option("--name", o.name, "Name for the produced object");
    }
    subs.emplace_back(sub, &c);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    report.usage = app.help();
    return report;
  } catch (const CLI::ParseError& e) {
    report.error = e.what();
    report.usage = app.help();
    report.exitCode = 2;
    return report;
  }

  for (const auto& [sub, c] : subs) {
    if (!sub->parsed()) {
      continue;
    }
    try {
      const Workspace ws = loadWorkspace(o);
      c->run(ws, o, report);
    } catch (const UsageError& e) {
      report.error = e.what();
      report.usage = sub->help();
    } catch (const InputError& e) {
      report.error = e.what();
    } catch (const ResolutionError& e) {
      report.error = e.what();
    } catch (const ParityError& e) {
      report.error = e.what();
    }
    if (!report.error.empty()) {
      report.verdicts.clear();
      report.output.clear();
      report.exitCode = 2;
      return report;
    }
  }
  report.exitCode = std::all_of(report.verdicts.begin(), report.verdicts.end(), [](const ReportVerdict& v) { return v.pass; })
                        ? 0
                        : 1;
  return report;
}

inline int runMain(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  const Report r = runCommand(std::vector<std::string>(argv + 1, argv + argc));
  writeReport(r, out, err);
  return r.exitCode;
}

}  // namespace superham::frontend

#endif  // SUPERHAM_FRONTEND_CLI_HPP
