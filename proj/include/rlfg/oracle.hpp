#ifndef RLFG_ORACLE_HPP_
#define RLFG_ORACLE_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlfg/classical.hpp"
#include "rlfg/fterm.hpp"

// Brute-force reference implementations used to validate the main engine
// and solver. They share the core term and structure types but none of the
// engine code: successor generation, search, and satisfaction checking are
// written independently, so agreement is evidence rather than tautology.

namespace rlfg {

struct GenConfig {
  int maxDepth = 3;
  int maxMultisetSize = 3;
  std::vector<std::string> atomAlphabet;
  std::vector<std::string> attrAlphabet;
  std::uint64_t seed = 0;
};

// Seed-deterministic random canonical term. Uses only modulo draws from a
// fixed-width generator, so the same config yields the same term on every
// platform.
TermPtr gen_random_fterm(const GenConfig& cfg);

class OracleLimitError : public std::runtime_error {
public:
  explicit OracleLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class OracleVerdict { Grammatical, Ungrammatical };

// All single-rewrite successors of a term, canonical and deduplicated.
std::vector<TermPtr> oracle_one_step(const TermPtr& term);

// Exhaustive breadth-first exploration of the entire reachable state space
// (no goal short-circuit, no depth cutoff); Grammatical iff the single
// resource t is reachable. Throws OracleLimitError past 10^6 states.
OracleVerdict oracle_reduce(const TermPtr& term);

// Every f-structure with at most `bound` nodes over the alphabet mentioned
// in the equations that satisfies all defining equations, smallest first
// (node count, then entry count). Variables range over nodes only.
std::vector<FStructure> enumerate_structures(const std::vector<Equation>& eqs, int bound);

// True iff `a` maps homomorphically into `b`: variable bindings carry over
// and every attribute entry of a mapped node exists in the image with the
// same constant or a consistently mapped node. A node of `a` without any
// entries asserts existence only and may also land on a constant. The
// minimal model subsumes into every satisfying structure.
bool subsumes(const FStructure& a, const FStructure& b);

}  // namespace rlfg

#endif  // RLFG_ORACLE_HPP_
