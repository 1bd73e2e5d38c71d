#ifndef RLFG_CLASSICAL_HPP_
#define RLFG_CLASSICAL_HPP_

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rlfg {

// (f1 SUBJ NUM) — an f-variable plus an attribute path. Inside annotation
// schemata the variable may be "^" (the mother's node) or "v" (the node's
// own); instantiation replaces both with real variables f1, f2, ...
struct PathExpr {
  std::string var;
  std::vector<std::string> attrs;
};

enum class EqKind { Defining, Constraining };

// lhs = rhs where rhs is a path or a constant. Defining equations build
// structure; constraining ones (spelled =c) only check it. `site` tags the
// annotation occurrence the equation came from, used by relaxed solving.
struct Equation {
  PathExpr lhs;
  PathExpr rhs_path;
  std::string rhs_const;
  bool rhs_is_path = false;
  EqKind kind = EqKind::Defining;
  int site = -1;
};

std::string path_text(const PathExpr& path);
std::string equation_text(const Equation& eq);

class FDescription;
using FDescPtr = std::shared_ptr<const FDescription>;

// Boolean combination of equations: leaves, conjunctions, disjunctions.
class FDescription {
public:
  enum class Op { Leaf, And, Or };

  Op op() const { return op_; }
  const Equation& eq() const { return eq_; }
  const std::vector<FDescPtr>& children() const { return children_; }

  static FDescPtr leaf(Equation eq);
  static FDescPtr conj(std::vector<FDescPtr> children);
  static FDescPtr disj(std::vector<FDescPtr> children);

private:
  FDescription() = default;
  Op op_ = Op::Leaf;
  Equation eq_;
  std::vector<FDescPtr> children_;
};

std::string description_text(const FDescPtr& d);

class FDescParseError : public std::runtime_error {
public:
  FDescParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

// Concrete syntax: `(f1 SUBJ NUM)=SG`, `=c` for constraining equations,
// `&`, `|`, parentheses. Variables are `f` + digits; `^`/`v` are accepted
// for annotation schemata. A bare identifier on the right is a constant
// unless it is a variable.
FDescPtr parse_fdescription(std::string_view text);

// `;`-separated conjunction of equations, the annotation payload syntax.
std::vector<Equation> parse_equation_set(std::string_view text);

// Attribute-value structure. In standard mode every node has at most one
// entry per attribute; relaxed solving may leave several. An entry whose
// value was only ever required by a constraining equation carries
// `constraint_mark` and renders as "=c VALUE".
struct FStructure {
  struct Value {
    int node = -1;
    std::string constant;
    bool is_node() const { return node >= 0; }
  };
  struct Entry {
    std::string attr;
    Value value;
    bool constraint_mark = false;
  };

  std::vector<std::vector<Entry>> nodes;
  std::map<std::string, int> bindings;  // f-variable -> node index
  // f-variables forced equal to an atomic constant live here instead
  std::map<std::string, std::string> constant_bindings;

  // Node bound to the numerically first variable (f1 before f2 before f10).
  int root_node() const;
  std::string to_text() const;  // single-line bracketed rendering
  std::string to_json() const;  // nested {attr: value}; lists for repeats
};

// Expands the boolean tree into a disjunction of conjunctions,
// left-to-right, preserving equation order inside each conjunct.
std::vector<std::vector<Equation>> dnf(const FDescPtr& d);

// Unifies the defining equations of one conjunct into the unique minimal
// satisfying structure; constraining equations are ignored here. Absent on
// inconsistency (two distinct constants forced equal, or a constant forced
// to carry attributes).
std::optional<FStructure> solve_conjunct(const std::vector<Equation>& eqs);

// True iff every constraining equation's left path is already defined in
// the model with exactly the required value.
bool verify_constraints(const FStructure& model, const std::vector<Equation>& eqs);

// Full pipeline: dnf, per-conjunct minimal model, constraint verification,
// deduplicated union.
std::vector<FStructure> solve(const FDescPtr& d);

// Demonstration mode: functionality is not enforced across equations from
// different annotation sites, so walking a path may either join an existing
// attribute entry or split off a new one; every consistent combination of
// choices yields a candidate. A constraining equation must find its value
// inside the entry it walked into; failing candidates are kept, marked.
struct RelaxedCandidate {
  FStructure structure;
  bool passed = false;
};

std::vector<RelaxedCandidate> solve_relaxed(const FDescPtr& d);
std::vector<FStructure> solve_relaxed_passing(const FDescPtr& d);

}  // namespace rlfg

#endif  // RLFG_CLASSICAL_HPP_
