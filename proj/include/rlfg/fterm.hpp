#ifndef RLFG_FTERM_HPP_
#define RLFG_FTERM_HPP_

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rlfg/decls.hpp"

namespace rlfg {

// F-terms are configurations of typed resources:
//   Atom      a single resource, identified by its type
//   Multiset  a bag of resource structures (order irrelevant, count matters)
//   Embed     a structure placed under an attribute
//   Limp      linear implication: consumes one antecedent, yields the consequent
//   Opt       an optional occurrence, resolved by deletion or materialization
//   PathEq    a single-use restructuring license between attribute paths
//   MetaVar   the rule metavariable "v"; only valid inside annotation templates
enum class TermKind { Atom, MetaVar, Embed, Limp, PathEq, Opt, Multiset };

class FTerm;
using TermPtr = std::shared_ptr<const FTerm>;

// Immutable. Construction via the static factories, which build the node
// exactly as given; canonicalize() establishes the canonical form. Every
// node caches its serialization, so comparisons are string compares.
class FTerm {
public:
  TermKind kind() const { return kind_; }

  // Atom: type name.  Embed: attribute name.
  const std::string& name() const { return name_; }

  // Multiset: elements.  Embed: [body].  Limp: [antecedent, consequent].
  // Opt: [body].
  const std::vector<TermPtr>& children() const { return children_; }
  const TermPtr& body() const { return children_[0]; }
  const TermPtr& antecedent() const { return children_[0]; }
  const TermPtr& consequent() const { return children_[1]; }

  // PathEq: nonempty attribute sequences, src = dst.
  const std::vector<std::string>& path_src() const { return path_src_; }
  const std::vector<std::string>& path_dst() const { return path_dst_; }

  const std::string& text() const { return text_; }

  static TermPtr atom(std::string name);
  static TermPtr meta_var();
  static TermPtr embed(std::string attr, TermPtr body);
  static TermPtr limp(TermPtr antecedent, TermPtr consequent);
  static TermPtr opt(TermPtr body);
  static TermPtr path_eq(std::vector<std::string> src, std::vector<std::string> dst);
  static TermPtr multiset(std::vector<TermPtr> elements);

private:
  FTerm() = default;

  TermKind kind_ = TermKind::Atom;
  std::string name_;
  std::vector<TermPtr> children_;
  std::vector<std::string> path_src_, path_dst_;
  std::string text_;
};

// Fixed total order used to sort multiset elements: constructor rank first
// (Atom < MetaVar < Embed < Limp < PathEq < Opt < Multiset), then the
// serialized form. Gives every term a unique canonical spelling.
int term_rank(TermKind kind);
bool term_less(const TermPtr& a, const TermPtr& b);

// Flattens nested multisets, collapses singletons, sorts elements.
// Idempotent; descends everywhere, including implication and optional
// bodies (those are inert for *reduction*, not for canonical form).
TermPtr canonicalize(const TermPtr& term);

bool is_canonical(const TermPtr& term);

// Canonical-form equality.
bool equal(const TermPtr& a, const TermPtr& b);

std::string serialize(const TermPtr& term);

class FTermParseError : public std::runtime_error {
public:
  FTermParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

class UndeclaredIdentifierError : public std::runtime_error {
public:
  UndeclaredIdentifierError(const std::string& ident, std::size_t position)
      : std::runtime_error("undeclared identifier '" + ident + "' (at offset " +
                           std::to_string(position) + ")"),
        ident_(ident) {}
  const std::string& identifier() const { return ident_; }

private:
  std::string ident_;
};

// Parses the concrete f-term syntax and returns the canonicalized term.
// All atoms must be declared types and all attributes declared attributes.
TermPtr parse_fterm(std::string_view text, const DeclTable& decls);

// Same grammar, but the reserved identifier "v" parses to MetaVar.
TermPtr parse_fterm_template(std::string_view text, const DeclTable& decls);

// Replaces every MetaVar in the template by `value`; result canonical.
TermPtr substitute_meta(const TermPtr& tmpl, const TermPtr& value);

bool contains_meta(const TermPtr& term);

}  // namespace rlfg

#endif  // RLFG_FTERM_HPP_
