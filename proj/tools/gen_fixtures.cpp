// Regenerates tests/fixtures/oracle_verdicts.tsv: 500 distinct
// seed-deterministic terms (serialized length <= 60) with their brute-force
// verdicts. Raw random draws alone almost never reduce to t, so three of
// every four entries wrap the draws in resource/consumer shapes; the
// brute-force search still decides every verdict from scratch.
// The file is committed; rerun only if the term syntax itself changes.
#include <fstream>
#include <iostream>
#include <set>

#include "rlfg/oracle.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_fixtures <output.tsv>\n";
    return 2;
  }
  std::ofstream out(argv[1], std::ios::binary);
  if (!out) {
    std::cerr << "cannot open " << argv[1] << "\n";
    return 2;
  }

  rlfg::GenConfig cfg;
  cfg.atomAlphabet = {"e", "t", "NOM", "ACC"};
  cfg.attrAlphabet = {"SUBJ", "OBJ", "XCOMP"};

  auto draw = [&cfg](std::uint64_t seed, int depth) {
    cfg.seed = seed;
    cfg.maxDepth = depth;
    return rlfg::gen_random_fterm(cfg);
  };

  std::set<std::string> seen;
  int written = 0;
  for (std::uint64_t seed = 1; written < 500; ++seed) {
    using rlfg::FTerm;
    rlfg::TermPtr alpha = draw(seed * 2, 3);
    rlfg::TermPtr term;
    switch (seed % 4) {
      case 0:  // raw draw, mixing shallow and deep terms
        term = draw(seed, int(3 + (seed / 4) % 4));
        break;
      case 1:  // resource next to a consumer of exactly that resource
        term = FTerm::multiset({alpha, FTerm::limp(alpha, FTerm::atom("t"))});
        break;
      case 2: {  // consumption nested under an attribute
        std::string attr = cfg.attrAlphabet[seed % cfg.attrAlphabet.size()];
        term = FTerm::multiset(
            {FTerm::embed(attr, FTerm::multiset({alpha, FTerm::limp(alpha, FTerm::atom("e"))})),
             FTerm::limp(FTerm::embed(attr, FTerm::atom("e")), FTerm::atom("t"))});
        break;
      }
      default: {  // curried two-resource consumer
        rlfg::TermPtr beta = draw(seed * 2 + 1, 2);
        term = FTerm::multiset(
            {alpha, beta, FTerm::limp(alpha, FTerm::limp(beta, FTerm::atom("t")))});
        break;
      }
    }
    term = rlfg::canonicalize(term);
    std::string text = rlfg::serialize(term);
    if (text.size() > 60 || !seen.insert(text).second) continue;
    try {
      rlfg::OracleVerdict v = rlfg::oracle_reduce(term);
      out << text << "\t"
          << (v == rlfg::OracleVerdict::Grammatical ? "grammatical" : "ungrammatical")
          << "\n";
      ++written;
    } catch (const rlfg::OracleLimitError&) {
      continue;
    }
  }
  std::cout << "wrote " << written << " fixtures to " << argv[1] << "\n";
  return 0;
}
