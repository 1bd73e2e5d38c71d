#ifndef RLFG_CLI_HPP_
#define RLFG_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "rlfg/grammar.hpp"
#include "rlfg/reduction.hpp"

namespace rlfg {

// One sentence judged under a grammar: its tokens, the number of chart
// parses, the overall verdict, and one analysis/result pair per parse.
struct CheckReport {
  std::vector<std::string> sentence;
  GrammarMode mode = GrammarMode::RLFG;
  int parses = 0;
  std::string verdict;  // "grammatical" | "ungrammatical" | "no-parse" | "undecided"
  struct PerParse {
    std::string analysis;  // instantiated f-term (rlfg) or f-description (lfg)
    std::string result;    // this parse's own verdict
  };
  std::vector<PerParse> per_parse;
  double parse_ms = 0.0;  // chart parsing
  double check_ms = 0.0;  // reduction search / description solving
};

// Judge one sentence. The sentence is grammatical as soon as any parse
// checks out; no-parse when the chart is empty (unknown words included);
// undecided only when a search limit was hit and no parse succeeded.
CheckReport run_check(const Grammar& g, const std::string& sentence,
                      const SearchConfig& config = {});

std::string check_report_text(const CheckReport& report);
std::string check_report_json(const CheckReport& report);  // one object, 2-space indent

// 0 grammatical / 1 ungrammatical / 2 no-parse / 3 undecided
int verdict_exit_code(const std::string& verdict);

// Entry point behind main(); `args` excludes the program name. Commands:
//   check <grammar> <sentence...>   judge one sentence (--json for machine output)
//   trace <grammar> <sentence...>   print the reduction derivation, one term per line
//   batch <grammar> <corpus>        judge a corpus, JSON array out, expectations checked
//   solve <description>             solve an f-description file (--relaxed for candidates)
// `--max-states` / `--max-depth` bound the reduction search where it runs.
// Returns the process exit code; 4 signals a usage or file problem.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rlfg

#endif  // RLFG_CLI_HPP_
