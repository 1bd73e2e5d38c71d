// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every check loads shipped grammars/corpora/fixtures and runs the
// public APIs end to end; the property suites rerun here in full.
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rlfg/classical.hpp"
#include "rlfg/cli.hpp"
#include "rlfg/grammar.hpp"
#include "rlfg/oracle.hpp"
#include "rlfg/reduction.hpp"
#include "testutil.hpp"

using namespace rlfg;
using nlohmann::json;

namespace {

std::string repo_path(const std::string& rel) { return std::string(RLFG_REPO_DIR) + "/" + rel; }

// --- criterion 1: the worked English derivation ----------------------------------

bool criterion1(std::string& detail) {
  Grammar g = load_grammar(repo_path("grammars/english-rlfg.rlfg"));
  auto trees = parse_sentence(g, tokenize_sentence("she snores"));
  if (trees.size() != 1) {
    detail = "expected a unique parse, got " + std::to_string(trees.size());
    return false;
  }
  ReductionResult r = reduce_search(instantiate_rlfg(g, trees[0]));
  if (r.verdict != Verdict::Grammatical) {
    detail = "verdict was " + std::string(verdict_name(r.verdict));
    return false;
  }
  std::vector<std::string> lines{serialize(r.start)};
  for (const ReductionStep& step : r.witness) lines.push_back(serialize(step.after));
  const std::vector<std::string> expected{
      "SUBJ(NOM, NOM -o e), SUBJ e -o t",
      "SUBJ e, SUBJ e -o t",
      "t",
  };
  if (lines != expected) {
    detail = "derivation differs:";
    for (const auto& l : lines) detail += " | " + l;
    return false;
  }
  detail = "\"she snores\" grammatical; witness replays the three-line derivation exactly";
  return true;
}

// --- criterion 2: the Icelandic case battery --------------------------------------

bool criterion2(std::string& detail) {
  Grammar g = load_grammar(repo_path("grammars/icelandic.rlfg"));
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"drengurinn kyssti stúlkuna", "grammatical"},
      {"drengina vantar mat", "grammatical"},
      {"hann virðist elska hana", "grammatical"},
      {"hana virðist vanta peninga", "grammatical"},
      {"drengurinn vantar mat", "ungrammatical"},
      {"drengina kyssti stúlkuna", "ungrammatical"},
  };
  int hits = 0;
  for (const auto& [sentence, want] : cases) {
    CheckReport r = run_check(g, sentence);  // default limits
    if (r.verdict == want) {
      ++hits;
    } else {
      detail += "\"" + sentence + "\" -> " + r.verdict + " (wanted " + want + "); ";
    }
  }
  if (hits != int(cases.size())) return false;
  detail = "6/6 verdicts exact, none undecided, default limits";
  return true;
}

// --- criteria 3/4: the agreement fragments generate the same two sentences --------

std::set<std::string> accepted_language(const Grammar& g) {
  std::set<std::string> accepted;
  for (const char* subject : {"Sandy", "Professors"})
    for (const char* verb : {"snores", "snore"}) {
      std::string sentence = std::string(subject) + " " + verb;
      if (run_check(g, sentence).verdict == "grammatical") accepted.insert(sentence);
    }
  return accepted;
}

const std::set<std::string> kAgreementLanguage = {"Sandy snores", "Professors snore"};

bool criterion3(std::string& detail) {
  Grammar g = load_grammar(repo_path("grammars/english-lfg-defining.rlfg"));
  auto accepted = accepted_language(g);
  if (accepted != kAgreementLanguage) {
    detail = "accepted set has " + std::to_string(accepted.size()) + " sentences";
    return false;
  }
  auto trees = parse_sentence(g, tokenize_sentence("Sandy snores"));
  if (trees.size() != 1) {
    detail = "expected a unique parse for \"Sandy snores\"";
    return false;
  }
  auto models = solve(instantiate_lfg(g, trees[0]));
  if (models.size() != 1) {
    detail = "expected one model, got " + std::to_string(models.size());
    return false;
  }
  const json expected = {{"PRED", "snore"}, {"SUBJ", {{"NUM", "SG"}, {"PRED", "Sandy"}}}};
  if (json::parse(models[0].to_json()) != expected) {
    detail = "model differs: " + models[0].to_text();
    return false;
  }
  detail = "defining fragment accepts exactly the two sentences; model matches";
  return true;
}

bool criterion4(std::string& detail) {
  Grammar g = load_grammar(repo_path("grammars/english-lfg-constraining.rlfg"));
  auto accepted = accepted_language(g);
  if (accepted != kAgreementLanguage) {
    detail = "accepted set has " + std::to_string(accepted.size()) + " sentences";
    return false;
  }
  detail = "constraining fragment accepts exactly the same two sentences";
  return true;
}

// --- criterion 5: a fresh attribute on every lexical entry changes nothing --------

bool criterion5(std::string& detail) {
  Grammar base = load_grammar(repo_path("grammars/english-lfg-defining.rlfg"));
  Grammar marked = load_grammar(repo_path("grammars/english-lfg-defining.rlfg"));
  marked.decls.declare_attr("HISTORICAL-ORIGIN");
  marked.decls.declare_type("ROMANCE", false);
  const Equation extra = parse_equation_set("(^ HISTORICAL-ORIGIN)=ROMANCE")[0];
  for (LexEntry& lex : marked.lexicon) lex.payload.eqs.push_back(extra);

  for (const char* subject : {"Sandy", "Professors"})
    for (const char* verb : {"snores", "snore"}) {
      std::string sentence = std::string(subject) + " " + verb;
      std::string before = run_check(base, sentence).verdict;
      std::string after = run_check(marked, sentence).verdict;
      if (before != after) {
        detail = "\"" + sentence + "\": " + before + " became " + after;
        return false;
      }
    }
  detail = "all four verdicts unchanged after marking every lexical entry";
  return true;
}

// --- criterion 6: relaxed solving surfaces the duplicated-SUBJ candidate ----------

bool criterion6(std::string& detail) {
  Grammar g = load_grammar(repo_path("grammars/english-lfg-constraining.rlfg"));
  auto trees = parse_sentence(g, tokenize_sentence("Sandy snores"));
  if (trees.size() != 1) {
    detail = "expected a unique parse";
    return false;
  }
  auto candidates = solve_relaxed(instantiate_lfg(g, trees[0]));
  for (const RelaxedCandidate& cand : candidates) {
    if (cand.passed) continue;
    int root = cand.structure.root_node();
    int subj_entries = 0;
    for (const auto& entry : cand.structure.nodes[root])
      if (entry.attr == "SUBJ") ++subj_entries;
    if (subj_entries >= 2) {
      detail = "a duplicated-SUBJ candidate fails verification (" +
               std::to_string(candidates.size()) + " candidates total)";
      return true;
    }
  }
  detail = "no failing candidate with duplicated SUBJ among " +
           std::to_string(candidates.size());
  return false;
}

// --- criterion 7: 500-term fixture agreement --------------------------------------

bool criterion7(std::string& detail) {
  DeclTable decls = testutil::test_decls();
  std::ifstream in(repo_path("tests/fixtures/oracle_verdicts.tsv"));
  if (!in) {
    detail = "fixture file missing";
    return false;
  }
  std::string line;
  int agreements = 0, total = 0;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    ++total;
    TermPtr term = parse_fterm(line.substr(0, tab), decls);
    const std::string frozen = line.substr(tab + 1);
    const std::string engine = verdict_name(reduce_search(term).verdict);
    const std::string oracle =
        oracle_reduce(term) == OracleVerdict::Grammatical ? "grammatical" : "ungrammatical";
    if (engine == oracle && engine == frozen) ++agreements;
  }
  detail = std::to_string(agreements) + "/" + std::to_string(total) +
           " engine/oracle/fixture agreement";
  return agreements == 500 && total == 500;
}

// --- criterion 8: the six property suites ------------------------------------------

// satisfaction of equations/descriptions over enumerated structures, written
// from the definition (variables denote nodes)
struct Den {
  int node = -1;
  std::string constant;
};

std::optional<Den> den_of(const FStructure& s, const PathExpr& p) {
  auto it = s.bindings.find(p.var);
  if (it == s.bindings.end()) return std::nullopt;
  Den cur{it->second, ""};
  for (const auto& attr : p.attrs) {
    if (cur.node < 0) return std::nullopt;
    const FStructure::Entry* hit = nullptr;
    for (const auto& e : s.nodes[cur.node])
      if (e.attr == attr) {
        hit = &e;
        break;
      }
    if (!hit) return std::nullopt;
    cur = hit->value.is_node() ? Den{hit->value.node, ""} : Den{-1, hit->value.constant};
  }
  return cur;
}

bool eq_sat(const FStructure& s, const Equation& eq) {
  auto lhs = den_of(s, eq.lhs);
  if (!lhs) return false;
  if (!eq.rhs_is_path) return lhs->node < 0 && lhs->constant == eq.rhs_const;
  auto rhs = den_of(s, eq.rhs_path);
  if (!rhs) return false;
  return lhs->node == rhs->node && lhs->constant == rhs->constant;
}

bool desc_sat(const FStructure& s, const FDescPtr& d) {
  switch (d->op()) {
    case FDescription::Op::Leaf:
      return eq_sat(s, d->eq());
    case FDescription::Op::And:
      for (const auto& c : d->children())
        if (!desc_sat(s, c)) return false;
      return true;
    default:
      for (const auto& c : d->children())
        if (desc_sat(s, c)) return true;
      return false;
  }
}

Equation gen_eq(std::mt19937_64& rng) {
  static const std::vector<std::string> vars{"f1", "f2"};
  static const std::vector<std::string> attrs{"A", "B"};
  static const std::vector<std::string> consts{"X", "Y"};
  Equation eq;
  eq.lhs.var = vars[rng() % vars.size()];
  std::size_t lhs_len = rng() % 3;
  for (std::size_t i = 0; i < lhs_len; ++i) eq.lhs.attrs.push_back(attrs[rng() % attrs.size()]);
  if (rng() % 2) {
    eq.rhs_is_path = true;
    eq.rhs_path.var = vars[rng() % vars.size()];
    std::size_t rhs_len = rng() % 3;
    for (std::size_t i = 0; i < rhs_len; ++i)
      eq.rhs_path.attrs.push_back(attrs[rng() % attrs.size()]);
  } else {
    eq.rhs_const = consts[rng() % consts.size()];
  }
  return eq;
}

FDescPtr gen_desc(std::mt19937_64& rng, int depth) {
  if (depth == 0 || rng() % 3 == 0) return FDescription::leaf(gen_eq(rng));
  std::vector<FDescPtr> kids;
  std::size_t arity = 2 + rng() % 2;
  for (std::size_t i = 0; i < arity; ++i) kids.push_back(gen_desc(rng, depth - 1));
  return rng() % 2 ? FDescription::conj(std::move(kids)) : FDescription::disj(std::move(kids));
}

std::vector<Equation> collect_leaves(const FDescPtr& d) {
  if (d->op() == FDescription::Op::Leaf) return {d->eq()};
  std::vector<Equation> out;
  for (const auto& c : d->children()) {
    auto sub = collect_leaves(c);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

bool suite_canonical_idempotent(int& cases) {
  std::mt19937_64 rng(8101);
  for (cases = 0; cases < 300; ++cases) {
    TermPtr c = canonicalize(testutil::gen_term(rng, 4));
    if (!equal(canonicalize(c), c) || !is_canonical(c)) return false;
  }
  return true;
}

bool suite_round_trip(int& cases) {
  DeclTable decls = testutil::test_decls();
  std::mt19937_64 rng(8102);
  for (cases = 0; cases < 300; ++cases) {
    TermPtr c = canonicalize(testutil::gen_term(rng, 4));
    if (!equal(parse_fterm(serialize(c), decls), c)) return false;
  }
  return true;
}

bool suite_distribute_factor(int& cases) {
  std::mt19937_64 rng(8103);
  cases = 0;
  for (int i = 0; i < 260 && cases < 200; ++i) {
    TermPtr a = testutil::gen_element(rng, 2);
    TermPtr b = testutil::gen_element(rng, 2);
    const std::string attr = testutil::kAttrs[rng() % testutil::kAttrs.size()];
    TermPtr state = canonicalize(FTerm::embed(attr, FTerm::multiset({a, b})));
    TermPtr spread = canonicalize(
        FTerm::multiset({FTerm::embed(attr, a), FTerm::embed(attr, b)}));

    bool distributed = false;
    for (const ReductionStep& step : enumerate_steps(state))
      if (step.rule == RuleKind::Distribute && equal(step.after, spread)) distributed = true;
    if (!distributed) return false;
    bool refactored = false;
    for (const ReductionStep& step : enumerate_steps(spread))
      if (step.rule == RuleKind::Factor && equal(step.after, state)) refactored = true;
    if (!refactored) return false;
    ++cases;
  }
  return cases >= 200;
}

bool suite_witness_replay(int& cases) {
  DeclTable decls = testutil::test_decls();
  std::ifstream in(repo_path("tests/fixtures/oracle_verdicts.tsv"));
  if (!in) return false;
  std::string line;
  cases = 0;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.substr(tab + 1) != "grammatical") continue;
    ReductionResult r = reduce_search(parse_fterm(line.substr(0, tab), decls));
    if (r.verdict != Verdict::Grammatical) return false;
    TermPtr state = r.start;
    for (const ReductionStep& step : r.witness) {
      bool legal = false;
      for (const ReductionStep& cand : enumerate_steps(state))
        if (cand.rule == step.rule && cand.locus == step.locus && equal(cand.after, step.after))
          legal = true;
      if (!legal) return false;
      state = step.after;
    }
    if (!is_goal(state)) return false;
    ++cases;
  }
  return cases >= 200;
}

bool suite_dnf_structures(int& cases) {
  std::mt19937_64 rng(8105);
  for (cases = 0; cases < 210; ++cases) {
    FDescPtr desc = gen_desc(rng, 3);
    std::vector<Equation> alphabet = collect_leaves(desc);
    auto conjuncts = dnf(desc);
    for (Equation& eq : alphabet) eq.kind = EqKind::Constraining;  // filter nothing
    for (const FStructure& s : enumerate_structures(alphabet, 2)) {
      bool via_dnf = false;
      for (const auto& conj : conjuncts) {
        bool all_sat = true;
        for (const Equation& eq : conj)
          if (!eq_sat(s, eq)) {
            all_sat = false;
            break;
          }
        if (all_sat) {
          via_dnf = true;
          break;
        }
      }
      if (desc_sat(s, desc) != via_dnf) return false;
    }
  }
  return true;
}

bool suite_minimality(int& cases) {
  std::mt19937_64 rng(8106);
  cases = 0;
  for (int draws = 0; draws < 6000 && cases < 200; ++draws) {
    std::vector<Equation> eqs;
    std::size_t count = 3 + rng() % 3;
    for (std::size_t i = 0; i < count; ++i) eqs.push_back(gen_eq(rng));
    auto model = solve_conjunct(eqs);
    if (!model.has_value()) {
      if (!enumerate_structures(eqs, 2).empty()) return false;  // clash must mean unsatisfiable
      continue;
    }
    if (!model->constant_bindings.empty()) continue;  // enumeration is node-valued only
    int bound = int(model->nodes.size());
    if (bound > 3) continue;
    auto all = enumerate_structures(eqs, bound);
    if (all.empty()) return false;  // the model itself satisfies within the bound
    bool has_isomorph = false;
    for (const FStructure& s : all) {
      if (!subsumes(*model, s)) return false;
      if (subsumes(s, *model)) has_isomorph = true;
    }
    if (!has_isomorph) return false;
    ++cases;
  }
  return cases >= 200;
}

bool criterion8(std::string& detail) {
  struct Suite {
    const char* name;
    bool (*run)(int&);
  };
  const Suite suites[] = {
      {"canonicalize idempotence", suite_canonical_idempotent},
      {"parse/serialize round-trip", suite_round_trip},
      {"distribute-factor identity", suite_distribute_factor},
      {"witness replay validity", suite_witness_replay},
      {"dnf preservation over structures", suite_dnf_structures},
      {"minimal-model subsumption", suite_minimality},
  };
  bool ok = true;
  for (const Suite& suite : suites) {
    int cases = 0;
    bool passed = suite.run(cases);
    if (!passed) ok = false;
    if (!detail.empty()) detail += ", ";
    detail += std::string(suite.name) + " " + (passed ? "ok" : "FAILED") + " (" +
              std::to_string(cases) + " cases)";
  }
  return ok;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    bool (*run)(std::string&);
  };
  const Criterion criteria[] = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
      {5, criterion5}, {6, criterion6}, {7, criterion7}, {8, criterion8},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.number << ": " << detail << "\n";
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
