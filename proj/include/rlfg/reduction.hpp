#ifndef RLFG_REDUCTION_HPP_
#define RLFG_REDUCTION_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlfg/fterm.hpp"

namespace rlfg {

// The six rewrite rules. Each consumes what it matches:
//   ApplyLimp    a, a -o b            => b        (one sibling, exact match)
//   ApplyPathEq  f1(..fm(x)..), (f1..fm = g1..gn) => g1(..gn(x)..)
//   Distribute   f(x1, .., xn)        => f(x1), .., f(xn)   for n >= 2
//   Factor       f(x), f(y)           => f(x, y)
//   OptDelete    (x)?                 =>                    (element removed)
//   OptKeep      (x)?                 => x
enum class RuleKind { ApplyLimp, ApplyPathEq, Distribute, Factor, OptDelete, OptKeep };

const char* rule_name(RuleKind rule);

// Where a rule fired, as a path from the root of the before-state: an index
// selects a multiset element, a 0 on an Embed descends into its body. The
// path ends at the rewritten configuration. Empty path = the root itself.
using Locus = std::vector<int>;

std::string locus_string(const Locus& locus);  // "root" or dotted, e.g. "0.0"

struct ReductionStep {
  RuleKind rule;
  Locus locus;
  TermPtr before;  // whole state, canonical
  TermPtr after;   // whole state, canonical
};

// All single-step successors of a canonical state, deduplicated by
// (rule, locus, resulting state) and deterministically ordered.
// Rules apply at the root, inside Embed bodies, and at multiset elements —
// never inside implication or optional bodies.
std::vector<ReductionStep> enumerate_steps(const TermPtr& state);

enum class Verdict { Grammatical, Ungrammatical, Undecided };

const char* verdict_name(Verdict verdict);

struct SearchConfig {
  std::size_t max_states = 100000;  // distinct states admitted to the frontier
  std::size_t max_depth = 200;      // longest reduction sequence explored
};

struct ReductionResult {
  Verdict verdict = Verdict::Undecided;
  std::vector<ReductionStep> witness;  // shortest derivation when Grammatical
  std::size_t states_explored = 0;     // states expanded during the search
  bool limit_hit = false;              // some successor was cut off by a limit
  TermPtr start;                       // canonical start state
};

// Breadth-first search over canonical states. A state is grammatical iff it
// reduces to the single resource `t`. Exhausting the space without reaching
// `t` is Ungrammatical; hitting a limit first leaves the verdict Undecided.
ReductionResult reduce_search(const TermPtr& start, const SearchConfig& config = {});

// Thrown by is_grammatical when the search hit a limit before deciding.
class UndecidedError : public std::runtime_error {
public:
  explicit UndecidedError(std::size_t states_explored)
      : std::runtime_error("reduction search hit its limits after exploring " +
                           std::to_string(states_explored) + " states"),
        states_explored_(states_explored) {}
  std::size_t states_explored() const { return states_explored_; }

private:
  std::size_t states_explored_;
};

bool is_grammatical(const TermPtr& start, const SearchConfig& config = {});

// True when `state` is the goal: the single resource t.
bool is_goal(const TermPtr& state);

// Multi-line rendering of a search result: the start state, then one line
// per witness step.
std::string trace_witness(const ReductionResult& result);

// JSON rendering (verdict, statesExplored, limitHit, start, witness).
std::string result_to_json(const ReductionResult& result);

}  // namespace rlfg

#endif  // RLFG_REDUCTION_HPP_
