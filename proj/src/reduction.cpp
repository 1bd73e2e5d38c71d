#include "rlfg/reduction.hpp"

#include <deque>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include <json.hpp>

namespace rlfg {

const char* rule_name(RuleKind rule) {
  switch (rule) {
    case RuleKind::ApplyLimp: return "ApplyLimp";
    case RuleKind::ApplyPathEq: return "ApplyPathEq";
    case RuleKind::Distribute: return "Distribute";
    case RuleKind::Factor: return "Factor";
    case RuleKind::OptDelete: return "OptDelete";
    case RuleKind::OptKeep: return "OptKeep";
  }
  return "?";
}

const char* verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::Grammatical: return "grammatical";
    case Verdict::Ungrammatical: return "ungrammatical";
    case Verdict::Undecided: return "undecided";
  }
  return "?";
}

std::string locus_string(const Locus& locus) {
  if (locus.empty()) return "root";
  std::string out;
  for (std::size_t i = 0; i < locus.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(locus[i]);
  }
  return out;
}

namespace {

// A configuration is a bag of resource structures: a multiset's elements,
// or any other term viewed as the sole element.
std::vector<TermPtr> as_bag(const TermPtr& node) {
  if (node->kind() == TermKind::Multiset) return node->children();
  return {node};
}

TermPtr bag_to_term(std::vector<TermPtr> bag) {
  if (bag.size() == 1) return bag[0];
  return FTerm::multiset(std::move(bag));
}

// Replaces the configuration node addressed by `path` (multiset index /
// Embed-body descent) and returns the rebuilt whole term, not yet canonical.
TermPtr rebuild(const TermPtr& node, const Locus& path, std::size_t k,
                const TermPtr& replacement) {
  if (k == path.size()) return replacement;
  if (node->kind() == TermKind::Multiset) {
    std::vector<TermPtr> kids = node->children();
    kids[path[k]] = rebuild(kids[path[k]], path, k + 1, replacement);
    return FTerm::multiset(std::move(kids));
  }
  // Embed body descent
  return FTerm::embed(node->name(), rebuild(node->body(), path, k + 1, replacement));
}

struct LocalStep {
  RuleKind rule;
  std::vector<TermPtr> bag;
};

std::vector<TermPtr> bag_without(const std::vector<TermPtr>& bag, std::size_t i,
                                 std::size_t j = std::size_t(-1)) {
  std::vector<TermPtr> out;
  out.reserve(bag.size());
  for (std::size_t k = 0; k < bag.size(); ++k)
    if (k != i && k != j) out.push_back(bag[k]);
  return out;
}

// Matches element against the exact nested chain f1(..fm(x)..) and returns x.
bool match_chain(const TermPtr& element, const std::vector<std::string>& attrs,
                 TermPtr& out) {
  TermPtr cur = element;
  for (const std::string& attr : attrs) {
    if (cur->kind() != TermKind::Embed || cur->name() != attr) return false;
    cur = cur->body();
  }
  out = cur;
  return true;
}

TermPtr build_chain(const std::vector<std::string>& attrs, TermPtr inner) {
  for (auto it = attrs.rbegin(); it != attrs.rend(); ++it)
    inner = FTerm::embed(*it, std::move(inner));
  return inner;
}

std::vector<LocalStep> local_rewrites(const std::vector<TermPtr>& bag) {
  std::vector<LocalStep> out;
  for (std::size_t i = 0; i < bag.size(); ++i) {
    const TermPtr& e = bag[i];
    switch (e->kind()) {
      case TermKind::Limp:
        for (std::size_t j = 0; j < bag.size(); ++j) {
          if (j == i || bag[j]->text() != e->antecedent()->text()) continue;
          auto next = bag_without(bag, i, j);
          next.push_back(e->consequent());
          out.push_back({RuleKind::ApplyLimp, std::move(next)});
        }
        break;
      case TermKind::PathEq:
        for (std::size_t j = 0; j < bag.size(); ++j) {
          if (j == i) continue;
          TermPtr inner;
          if (!match_chain(bag[j], e->path_src(), inner)) continue;
          auto next = bag_without(bag, i, j);
          next.push_back(build_chain(e->path_dst(), std::move(inner)));
          out.push_back({RuleKind::ApplyPathEq, std::move(next)});
        }
        break;
      case TermKind::Embed: {
        const TermPtr& body = e->body();
        if (body->kind() == TermKind::Multiset && body->children().size() >= 2) {
          auto next = bag_without(bag, i);
          for (const TermPtr& part : body->children())
            next.push_back(FTerm::embed(e->name(), part));
          out.push_back({RuleKind::Distribute, std::move(next)});
        }
        for (std::size_t j = i + 1; j < bag.size(); ++j) {
          if (bag[j]->kind() != TermKind::Embed || bag[j]->name() != e->name()) continue;
          auto next = bag_without(bag, i, j);
          next.push_back(
              FTerm::embed(e->name(), FTerm::multiset({e->body(), bag[j]->body()})));
          out.push_back({RuleKind::Factor, std::move(next)});
        }
        break;
      }
      case TermKind::Opt: {
        out.push_back({RuleKind::OptDelete, bag_without(bag, i)});
        auto next = bag_without(bag, i);
        next.push_back(e->body());
        out.push_back({RuleKind::OptKeep, std::move(next)});
        break;
      }
      default:
        break;
    }
  }
  return out;
}

// Visits every configuration node: the root, then Embed bodies, recursively
// through multiset elements. Implication and optional bodies are skipped.
template <typename Fn>
void visit_configs(const TermPtr& node, Locus& path, Fn&& fn) {
  fn(node, path);
  if (node->kind() == TermKind::Multiset) {
    const auto& kids = node->children();
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (kids[i]->kind() != TermKind::Embed) continue;
      path.push_back(int(i));
      path.push_back(0);
      visit_configs(kids[i]->body(), path, fn);
      path.pop_back();
      path.pop_back();
    }
  } else if (node->kind() == TermKind::Embed) {
    path.push_back(0);
    visit_configs(node->body(), path, fn);
    path.pop_back();
  }
}

}  // namespace

std::vector<ReductionStep> enumerate_steps(const TermPtr& state_in) {
  TermPtr state = canonicalize(state_in);
  std::vector<ReductionStep> steps;
  std::set<std::string> seen;
  Locus path;
  visit_configs(state, path, [&](const TermPtr& node, const Locus& at) {
    for (auto& local : local_rewrites(as_bag(node))) {
      TermPtr after = canonicalize(rebuild(state, at, 0, bag_to_term(std::move(local.bag))));
      std::string key =
          std::string(rule_name(local.rule)) + '|' + locus_string(at) + '|' + after->text();
      if (!seen.insert(std::move(key)).second) continue;
      steps.push_back({local.rule, at, state, after});
    }
  });
  std::sort(steps.begin(), steps.end(), [](const ReductionStep& a, const ReductionStep& b) {
    if (a.locus != b.locus) return a.locus < b.locus;
    if (a.rule != b.rule) return int(a.rule) < int(b.rule);
    return a.after->text() < b.after->text();
  });
  return steps;
}

bool is_goal(const TermPtr& state) {
  return state->kind() == TermKind::Atom && state->name() == "t";
}

ReductionResult reduce_search(const TermPtr& start_in, const SearchConfig& config) {
  ReductionResult res;
  res.start = canonicalize(start_in);

  std::unordered_set<std::string> visited;
  std::unordered_map<std::string, std::pair<std::string, ReductionStep>> parent;
  std::deque<std::pair<TermPtr, std::size_t>> queue;

  visited.insert(res.start->text());
  queue.emplace_back(res.start, 0);

  TermPtr goal;
  while (!queue.empty()) {
    auto [state, depth] = queue.front();
    queue.pop_front();
    ++res.states_explored;

    if (is_goal(state)) {
      goal = state;
      break;
    }

    auto steps = enumerate_steps(state);
    if (depth >= config.max_depth) {
      if (!steps.empty()) res.limit_hit = true;
      continue;
    }
    for (ReductionStep& step : steps) {
      const std::string& key = step.after->text();
      if (visited.count(key)) continue;
      if (visited.size() >= config.max_states) {
        res.limit_hit = true;
        continue;
      }
      parent.emplace(key, std::make_pair(state->text(), step));
      visited.insert(key);
      queue.emplace_back(step.after, depth + 1);
    }
  }

  if (goal) {
    res.verdict = Verdict::Grammatical;
    std::string cur = goal->text();
    const std::string start_key = res.start->text();
    while (cur != start_key) {
      auto it = parent.find(cur);
      res.witness.push_back(it->second.second);
      cur = it->second.first;
    }
    std::reverse(res.witness.begin(), res.witness.end());
  } else {
    res.verdict = res.limit_hit ? Verdict::Undecided : Verdict::Ungrammatical;
  }
  return res;
}

bool is_grammatical(const TermPtr& start, const SearchConfig& config) {
  ReductionResult res = reduce_search(start, config);
  if (res.verdict == Verdict::Undecided) throw UndecidedError(res.states_explored);
  return res.verdict == Verdict::Grammatical;
}

std::string trace_witness(const ReductionResult& result) {
  std::string out = result.start->text();
  out += '\n';
  for (const ReductionStep& step : result.witness) {
    out += "  --[";
    out += rule_name(step.rule);
    out += " @ ";
    out += locus_string(step.locus);
    out += "]--> ";
    out += step.after->text();
    out += '\n';
  }
  out += "verdict: ";
  out += verdict_name(result.verdict);
  out += " (" + std::to_string(result.states_explored) + " states explored)";
  out += '\n';
  return out;
}

std::string result_to_json(const ReductionResult& result) {
  nlohmann::json j;
  j["verdict"] = verdict_name(result.verdict);
  j["statesExplored"] = result.states_explored;
  j["limitHit"] = result.limit_hit;
  j["start"] = result.start->text();
  nlohmann::json steps = nlohmann::json::array();
  for (const ReductionStep& step : result.witness) {
    steps.push_back({{"rule", rule_name(step.rule)},
                     {"locus", locus_string(step.locus)},
                     {"term", step.after->text()}});
  }
  j["witness"] = std::move(steps);
  return j.dump(2);
}

}  // namespace rlfg
