#ifndef SUPERHAM_FRONTEND_WORKSPACE_HPP
#define SUPERHAM_FRONTEND_WORKSPACE_HPP

#include "superham/conformal.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <tuple>

namespace superham::frontend {

/// Bilinear form values keyed by (left name, right name, order). Names are
/// resolved against a Lie basis or the workspace families when used.
struct FormSpec {
  std::map<std::tuple<std::string, std::string, std::uint32_t>, Rational> pairs;

  friend bool operator==(const FormSpec&, const FormSpec&) = default;
};

struct Workspace {
  SymbolTable symbols;
  std::map<std::string, SuperPoly> polys;
  std::map<std::string, MatrixDiffOp> operators;
  std::map<std::string, LieSuperData> lie;
  std::map<std::string, FormSpec> forms;
  std::map<std::string, ConformalStructure> conformal;

  friend bool operator==(const Workspace&, const Workspace&) = default;
};

/// A name that does not resolve to an object of the requested kind.
class ResolutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <class Map>
const typename Map::mapped_type& lookup(const Map& m, const std::string& kind, const std::string& name) {
  auto it = m.find(name);
  if (it == m.end()) {
    throw ResolutionError("unknown " + kind + " '" + name + "'");
  }
  return it->second;
}

/// Form values over basisFamily numbering when `basis` is given, else over
/// the workspace families.
inline BilinearFormFamily resolveForm(const Workspace& ws, const FormSpec& spec,
                                      const std::vector<BasisElement>* basis = nullptr) {
  const auto family = [&](const std::string& name) -> Family {
    if (basis) {
      for (std::size_t k = 0; k < basis->size(); ++k) {
        if ((*basis)[k].name == name) {
          return basisFamily(*basis, k);
        }
      }
      throw ResolutionError("'" + name + "' is not a basis element");
    }
    if (auto f = ws.symbols.find(name)) {
      return *f;
    }
    throw ResolutionError("'" + name + "' is not a declared family");
  };
  BilinearFormFamily out;
  for (const auto& [key, value] : spec.pairs) {
    const auto& [left, right, order] = key;
    out.set(family(left), family(right), order, value);
  }
  return out;
}

}  // namespace superham::frontend

#endif  // SUPERHAM_FRONTEND_WORKSPACE_HPP
