#ifndef RLFG_GRAMMAR_HPP_
#define RLFG_GRAMMAR_HPP_

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rlfg/classical.hpp"
#include "rlfg/decls.hpp"
#include "rlfg/fterm.hpp"

namespace rlfg {

enum class GrammarMode { RLFG, Classical };

// One annotation occurrence: an f-term template over the child metavariable
// `v` (resource mode) or a set of equation schemata over `^`/`v` (classical
// mode). Only the field matching the grammar mode is populated.
struct Annotation {
  TermPtr fterm;
  std::vector<Equation> eqs;
};

struct RhsElement {
  std::string category;
  bool optional = false;
  Annotation annotation;
};

struct Rule {
  std::string lhs;
  std::vector<RhsElement> rhs;
  int line = 0;
};

struct LexEntry {
  std::string word;
  std::string category;
  Annotation payload;
  int line = 0;
};

struct Grammar {
  GrammarMode mode = GrammarMode::RLFG;
  DeclTable decls;
  std::string start;
  std::vector<Rule> rules;
  std::vector<LexEntry> lexicon;
  std::map<std::string, std::vector<int>> lex_index;  // word -> lexicon indices
};

class GrammarError : public std::runtime_error {
public:
  GrammarError(const std::string& msg, int line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

class UnknownWordError : public std::runtime_error {
public:
  explicit UnknownWordError(const std::string& word)
      : std::runtime_error("unknown word: " + word), word_(word) {}
  const std::string& word() const { return word_; }

private:
  std::string word_;
};

// Line-oriented grammar file format (UTF-8, `#` comments):
//   mode rlfg|lfg
//   start S
//   type e contentful / type NOM vacuous / attr SUBJ / cat NP
//   S -> NP:{SUBJ(NOM, v)} VP:{v}        optional elements: [ NP:{OBJ v} ]
//   lex she NP {NOM -o e}
//   lex Sandy NP {(^ PRED)=Sandy; (^ NUM)=SG}
Grammar parse_grammar(std::string_view text);
Grammar load_grammar(const std::string& path);

// Constituent tree. Leaves pair a preterminal category with a surface word
// and remember the lexicon entry; internal nodes remember the rule and, per
// child, which rule right-hand-side element licensed it (optional elements
// may be absent, so child positions and rhs positions differ).
struct CStructure {
  std::string category;
  std::string word;  // nonempty iff leaf
  int lex_index = -1;
  int rule_index = -1;
  std::vector<int> rhs_indices;
  std::vector<std::shared_ptr<const CStructure>> children;
  bool is_leaf() const { return !word.empty(); }
};
using CTreePtr = std::shared_ptr<const CStructure>;

std::vector<std::string> tokenize_sentence(std::string_view sentence);

// All parse trees of the token sequence rooted in the start category, in a
// deterministic order (rule order, then optional-subset order, then split
// points). Unknown tokens raise UnknownWordError; no parse is an empty list.
std::vector<CTreePtr> parse_sentence(const Grammar& g, const std::vector<std::string>& words);

std::string tree_text(const CTreePtr& tree);  // (S (NP she) (VP snores))

// Bottom-up f-term assembly: a leaf contributes its lexical payload; an
// internal node bundles its children's annotation templates with `v`
// replaced by the child's term. Result is canonical.
TermPtr instantiate_rlfg(const Grammar& g, const CTreePtr& tree);

// Fresh f-variables in preorder (root f1), `^` instantiated to the mother's
// variable and `v` to the child's own; a leaf's payload uses its own
// variable for both. Equations are conjoined in emission order: per child,
// the rule annotation first, then the child's own contribution.
FDescPtr instantiate_lfg(const Grammar& g, const CTreePtr& tree);

}  // namespace rlfg

#endif  // RLFG_GRAMMAR_HPP_
