#include "rlfg/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "rlfg/classical.hpp"

namespace rlfg {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

CheckReport run_check(const Grammar& g, const std::string& sentence,
                      const SearchConfig& config) {
  CheckReport report;
  report.sentence = tokenize_sentence(sentence);
  report.mode = g.mode;

  const auto t0 = Clock::now();
  std::vector<CTreePtr> trees;
  if (!report.sentence.empty()) {
    try {
      trees = parse_sentence(g, report.sentence);
    } catch (const UnknownWordError&) {
      // a word outside the lexicon can head no parse at all
    }
  }
  const auto t1 = Clock::now();

  report.parses = int(trees.size());
  bool any_grammatical = false;
  bool any_undecided = false;
  for (const auto& tree : trees) {
    if (g.mode == GrammarMode::RLFG) {
      TermPtr term = instantiate_rlfg(g, tree);
      ReductionResult result = reduce_search(term, config);
      report.per_parse.push_back({serialize(term), verdict_name(result.verdict)});
      any_grammatical = any_grammatical || result.verdict == Verdict::Grammatical;
      any_undecided = any_undecided || result.verdict == Verdict::Undecided;
    } else {
      FDescPtr desc = instantiate_lfg(g, tree);
      bool consistent = !solve(desc).empty();
      report.per_parse.push_back(
          {description_text(desc), consistent ? "grammatical" : "ungrammatical"});
      any_grammatical = any_grammatical || consistent;
    }
  }
  const auto t2 = Clock::now();

  report.parse_ms = ms_between(t0, t1);
  report.check_ms = ms_between(t1, t2);
  report.verdict = trees.empty()       ? "no-parse"
                   : any_grammatical   ? "grammatical"
                   : any_undecided     ? "undecided"
                                       : "ungrammatical";
  return report;
}

std::string check_report_text(const CheckReport& report) {
  std::string out = "sentence: " + join_words(report.sentence) + "\n";
  out += "parses: " + std::to_string(report.parses) + "\n";
  out += "verdict: " + report.verdict + "\n";
  for (const CheckReport::PerParse& p : report.per_parse)
    out += "  " + p.result + ": " + p.analysis + "\n";
  return out;
}

std::string check_report_json(const CheckReport& report) {
  json per_parse = json::array();
  const char* analysis_key = report.mode == GrammarMode::RLFG ? "fterm" : "fdescription";
  for (const CheckReport::PerParse& p : report.per_parse)
    per_parse.push_back({{analysis_key, p.analysis}, {"result", p.result}});
  json j{{"sentence", report.sentence},
         {"parses", report.parses},
         {"verdict", report.verdict},
         {"perParse", per_parse},
         {"timings", {{"parseMs", report.parse_ms}, {"checkMs", report.check_ms}}}};
  return j.dump(2);
}

int verdict_exit_code(const std::string& verdict) {
  if (verdict == "grammatical") return 0;
  if (verdict == "ungrammatical") return 1;
  if (verdict == "no-parse") return 2;
  return 3;
}

namespace {

int cmd_check(const Grammar& g, const std::string& sentence, const SearchConfig& config,
              bool json_out, std::ostream& out) {
  CheckReport report = run_check(g, sentence, config);
  if (json_out)
    out << check_report_json(report) << "\n";
  else
    out << check_report_text(report);
  return verdict_exit_code(report.verdict);
}

int cmd_trace(const Grammar& g, const std::string& sentence, const SearchConfig& config,
              std::ostream& out, std::ostream& err) {
  if (g.mode != GrammarMode::RLFG) {
    err << "error: trace needs an rlfg-mode grammar\n";
    return 4;
  }
  std::vector<std::string> tokens = tokenize_sentence(sentence);
  std::vector<CTreePtr> trees;
  if (!tokens.empty()) {
    try {
      trees = parse_sentence(g, tokens);
    } catch (const UnknownWordError&) {
    }
  }
  if (trees.empty()) {
    err << "error: no parse for \"" << sentence << "\"\n";
    return 2;
  }
  bool any_undecided = false;
  for (const auto& tree : trees) {
    ReductionResult result = reduce_search(instantiate_rlfg(g, tree), config);
    if (result.verdict == Verdict::Grammatical) {
      out << serialize(result.start) << "\n";
      for (const ReductionStep& step : result.witness) out << serialize(step.after) << "\n";
      return 0;
    }
    any_undecided = any_undecided || result.verdict == Verdict::Undecided;
  }
  if (any_undecided) {
    err << "error: search limits hit before a derivation was found\n";
    return 3;
  }
  err << "error: \"" << sentence << "\" is ungrammatical; nothing to trace\n";
  return 1;
}

int cmd_batch(const Grammar& g, const std::string& corpus_path, const SearchConfig& config,
              std::ostream& out, std::ostream& err) {
  std::ifstream in(corpus_path, std::ios::binary);
  if (!in) {
    err << "error: cannot read corpus " << corpus_path << "\n";
    return 4;
  }
  json reports = json::array();
  bool all_met = true;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    // an optional trailing "\t+" / "\t-" carries the expected verdict
    std::string sentence = line;
    char expected = 0;
    const auto tab = line.find_last_of('\t');
    if (tab != std::string::npos) {
      std::string suffix = line.substr(tab + 1);
      const auto end = suffix.find_last_not_of(" \t");
      suffix = end == std::string::npos ? "" : suffix.substr(0, end + 1);
      if (suffix == "+" || suffix == "-") {
        expected = suffix[0];
        sentence = line.substr(0, tab);
      }
    }

    CheckReport report = run_check(g, sentence, config);
    json entry = json::parse(check_report_json(report));
    if (expected != 0) {
      const bool met = expected == '+'
                           ? report.verdict == "grammatical"
                           : report.verdict == "ungrammatical" || report.verdict == "no-parse";
      entry["expected"] = expected == '+' ? "grammatical" : "ungrammatical";
      entry["met"] = met;
      if (!met) {
        all_met = false;
        err << "line " << line_no << ": expected " << entry["expected"].get<std::string>()
            << ", got " << report.verdict << ": " << join_words(report.sentence) << "\n";
      }
    }
    reports.push_back(std::move(entry));
  }
  out << reports.dump(2) << "\n";
  return all_met ? 0 : 1;
}

int cmd_solve(const std::string& desc_path, bool relaxed, std::ostream& out,
              std::ostream& err) {
  std::ifstream in(desc_path, std::ios::binary);
  if (!in) {
    err << "error: cannot read description " << desc_path << "\n";
    return 4;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  // the other file formats allow # comments, so honour them here too
  std::string text = buf.str();
  for (auto pos = text.find('#'); pos != std::string::npos; pos = text.find('#', pos)) {
    auto eol = text.find('\n', pos);
    text.erase(pos, eol == std::string::npos ? std::string::npos : eol - pos);
  }
  FDescPtr desc = parse_fdescription(text);
  json results = json::array();
  if (relaxed) {
    for (const RelaxedCandidate& cand : solve_relaxed(desc))
      results.push_back(
          {{"structure", json::parse(cand.structure.to_json())}, {"passed", cand.passed}});
  } else {
    for (const FStructure& model : solve(desc)) results.push_back(json::parse(model.to_json()));
  }
  out << results.dump(2) << "\n";
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"R-LFG grammar workbench: linear-resource and classical LFG checking"};
  app.name("rlfg");
  app.require_subcommand(1);

  std::string grammar_path, corpus_path, desc_path;
  std::vector<std::string> sentence_words;
  SearchConfig config;
  bool json_out = false;
  bool relaxed = false;

  CLI::App* check = app.add_subcommand("check", "judge one sentence under a grammar");
  check->add_option("grammar", grammar_path, "grammar file")->required();
  check->add_option("sentence", sentence_words, "sentence (quoted or word by word)")->required();
  check->add_option("--max-states", config.max_states, "reduction search state budget");
  check->add_option("--max-depth", config.max_depth, "reduction search depth budget");
  check->add_flag("--json", json_out, "machine-readable report");

  CLI::App* trace = app.add_subcommand("trace", "print a reduction derivation, one term per line");
  trace->add_option("grammar", grammar_path, "grammar file (rlfg mode)")->required();
  trace->add_option("sentence", sentence_words, "sentence (quoted or word by word)")->required();
  trace->add_option("--max-states", config.max_states, "reduction search state budget");
  trace->add_option("--max-depth", config.max_depth, "reduction search depth budget");

  CLI::App* batch = app.add_subcommand("batch", "judge a whole corpus, checking expectations");
  batch->add_option("grammar", grammar_path, "grammar file")->required();
  batch->add_option("corpus", corpus_path, "corpus file: sentences, # comments, \\t+/\\t-")
      ->required();
  batch->add_option("--max-states", config.max_states, "reduction search state budget");
  batch->add_option("--max-depth", config.max_depth, "reduction search depth budget");

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve an f-description file");
  solve_cmd->add_option("description", desc_path, "f-description file")->required();
  solve_cmd->add_flag("--relaxed", relaxed, "enumerate per-site candidates with pass/fail marks");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? 0 : 4;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 4;
  }

  try {
    if (*solve_cmd) return cmd_solve(desc_path, relaxed, out, err);
    Grammar g = load_grammar(grammar_path);
    if (*check) return cmd_check(g, join_words(sentence_words), config, json_out, out);
    if (*trace) return cmd_trace(g, join_words(sentence_words), config, out, err);
    return cmd_batch(g, corpus_path, config, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace rlfg
