#include "rlfg/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>

namespace rlfg {

// --- random term generation ------------------------------------------------------

namespace {

TermPtr gen_term(std::mt19937_64& rng, const GenConfig& cfg, int depth) {
  auto atom = [&] { return FTerm::atom(cfg.atomAlphabet[rng() % cfg.atomAlphabet.size()]); };
  auto attr = [&] { return cfg.attrAlphabet[rng() % cfg.attrAlphabet.size()]; };
  if (depth <= 1) return atom();
  switch (rng() % 20) {
    case 0: case 1: case 2: case 3: case 4:
      return atom();
    case 5: case 6: case 7: case 8:
      return FTerm::embed(attr(), gen_term(rng, cfg, depth - 1));
    case 9: case 10: case 11:
      return FTerm::limp(gen_term(rng, cfg, depth - 1), gen_term(rng, cfg, depth - 1));
    case 12: case 13:
      return FTerm::opt(gen_term(rng, cfg, depth - 1));
    case 14: case 15: {
      auto path = [&] {
        std::vector<std::string> p{attr()};
        if (rng() % 2) p.push_back(attr());
        return p;
      };
      return FTerm::path_eq(path(), path());
    }
    default: {
      std::size_t n = rng() % (std::size_t(cfg.maxMultisetSize) + 1);
      std::vector<TermPtr> kids;
      for (std::size_t i = 0; i < n; ++i) kids.push_back(gen_term(rng, cfg, depth - 1));
      return FTerm::multiset(std::move(kids));
    }
  }
}

}  // namespace

TermPtr gen_random_fterm(const GenConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  return canonicalize(gen_term(rng, cfg, cfg.maxDepth));
}

// --- independent rewriting -------------------------------------------------------

namespace {

std::vector<TermPtr> items_of(const TermPtr& t) {
  if (t->kind() == TermKind::Multiset) return t->children();
  return {t};
}

TermPtr from_items(std::vector<TermPtr> items) {
  if (items.size() == 1) return items[0];
  return FTerm::multiset(std::move(items));
}

// the source chain of a path equation must match exactly, attribute by
// attribute; whatever sits at the end moves under the target chain
bool peel_chain(const TermPtr& element, const std::vector<std::string>& attrs, TermPtr& inner) {
  TermPtr cur = element;
  for (const auto& a : attrs) {
    if (cur->kind() != TermKind::Embed || cur->name() != a) return false;
    cur = cur->body();
  }
  inner = cur;
  return true;
}

TermPtr wrap_chain(const std::vector<std::string>& attrs, TermPtr inner) {
  for (auto it = attrs.rbegin(); it != attrs.rend(); ++it) inner = FTerm::embed(*it, inner);
  return inner;
}

}  // namespace

std::vector<TermPtr> oracle_one_step(const TermPtr& term) {
  std::vector<TermPtr> out;
  std::set<std::string> seen;
  const TermPtr start = canonicalize(term);
  const std::vector<TermPtr> items = items_of(start);

  auto emit = [&](std::vector<TermPtr> next) {
    TermPtr built = canonicalize(from_items(std::move(next)));
    if (seen.insert(serialize(built)).second) out.push_back(std::move(built));
  };
  auto without = [&](std::size_t a, std::size_t b) {
    std::vector<TermPtr> rest;
    for (std::size_t k = 0; k < items.size(); ++k)
      if (k != a && k != b) rest.push_back(items[k]);
    return rest;
  };
  const std::size_t none = std::size_t(-1);

  for (std::size_t i = 0; i < items.size(); ++i) {
    const TermPtr& it = items[i];
    switch (it->kind()) {
      case TermKind::Opt: {
        emit(without(i, none));
        std::vector<TermPtr> kept = items;
        kept[i] = it->body();
        emit(std::move(kept));
        break;
      }
      case TermKind::Limp:
        for (std::size_t j = 0; j < items.size(); ++j) {
          if (j == i || !equal(items[j], it->antecedent())) continue;
          std::vector<TermPtr> rest = without(i, j);
          rest.push_back(it->consequent());
          emit(std::move(rest));
        }
        break;
      case TermKind::PathEq:
        for (std::size_t j = 0; j < items.size(); ++j) {
          if (j == i) continue;
          TermPtr inner;
          if (!peel_chain(items[j], it->path_src(), inner)) continue;
          std::vector<TermPtr> rest = without(i, j);
          rest.push_back(wrap_chain(it->path_dst(), inner));
          emit(std::move(rest));
        }
        break;
      case TermKind::Embed: {
        if (it->body()->kind() == TermKind::Multiset && it->body()->children().size() >= 2) {
          std::vector<TermPtr> rest = without(i, none);
          for (const auto& part : it->body()->children())
            rest.push_back(FTerm::embed(it->name(), part));
          emit(std::move(rest));
        }
        for (std::size_t j = i + 1; j < items.size(); ++j) {
          if (items[j]->kind() != TermKind::Embed || items[j]->name() != it->name()) continue;
          std::vector<TermPtr> rest = without(i, j);
          rest.push_back(
              FTerm::embed(it->name(), FTerm::multiset({it->body(), items[j]->body()})));
          emit(std::move(rest));
        }
        for (const auto& sub : oracle_one_step(it->body())) {
          std::vector<TermPtr> next = items;
          next[i] = FTerm::embed(it->name(), sub);
          emit(std::move(next));
        }
        break;
      }
      default:
        break;
    }
  }
  return out;
}

OracleVerdict oracle_reduce(const TermPtr& term) {
  const TermPtr start = canonicalize(term);
  std::set<std::string> visited{serialize(start)};
  std::deque<TermPtr> queue{start};
  bool reached = serialize(start) == "t";
  while (!queue.empty()) {
    TermPtr cur = queue.front();
    queue.pop_front();
    for (const auto& next : oracle_one_step(cur)) {
      if (!visited.insert(serialize(next)).second) continue;
      if (visited.size() > 1000000)
        throw OracleLimitError("state space exceeded 10^6 states");
      if (serialize(next) == "t") reached = true;
      queue.push_back(next);
    }
  }
  return reached ? OracleVerdict::Grammatical : OracleVerdict::Ungrammatical;
}

// --- structure enumeration -------------------------------------------------------

namespace {

struct SimpleVal {
  int node = -1;
  std::string constant;
};

std::optional<SimpleVal> path_value(const FStructure& s, const PathExpr& p) {
  auto it = s.bindings.find(p.var);
  if (it == s.bindings.end()) return std::nullopt;
  SimpleVal cur{it->second, ""};
  for (const auto& attr : p.attrs) {
    if (cur.node < 0) return std::nullopt;
    const FStructure::Entry* hit = nullptr;
    for (const auto& e : s.nodes[cur.node])
      if (e.attr == attr) {
        hit = &e;
        break;
      }
    if (!hit) return std::nullopt;
    cur = hit->value.is_node() ? SimpleVal{hit->value.node, ""}
                               : SimpleVal{-1, hit->value.constant};
  }
  return cur;
}

bool eq_satisfied(const FStructure& s, const Equation& eq) {
  auto lhs = path_value(s, eq.lhs);
  if (!lhs) return false;
  if (!eq.rhs_is_path)
    return lhs->node < 0 && lhs->constant == eq.rhs_const;
  auto rhs = path_value(s, eq.rhs_path);
  if (!rhs) return false;
  return lhs->node == rhs->node && lhs->constant == rhs->constant;
}

}  // namespace

std::vector<FStructure> enumerate_structures(const std::vector<Equation>& eqs, int bound) {
  std::set<std::string> var_set, attr_set, const_set;
  for (const Equation& eq : eqs) {
    var_set.insert(eq.lhs.var);
    for (const auto& a : eq.lhs.attrs) attr_set.insert(a);
    if (eq.rhs_is_path) {
      var_set.insert(eq.rhs_path.var);
      for (const auto& a : eq.rhs_path.attrs) attr_set.insert(a);
    } else {
      const_set.insert(eq.rhs_const);
    }
  }
  const std::vector<std::string> vars(var_set.begin(), var_set.end());
  const std::vector<std::string> attrs(attr_set.begin(), attr_set.end());
  const std::vector<std::string> consts(const_set.begin(), const_set.end());

  std::vector<FStructure> out;
  for (int n = 1; n <= bound; ++n) {
    const std::size_t slots = std::size_t(n) * attrs.size();
    const std::size_t value_base = 1 + std::size_t(n) + consts.size();
    double combos = 1.0;
    for (std::size_t k = 0; k < vars.size(); ++k) combos *= n;
    for (std::size_t k = 0; k < slots; ++k) combos *= double(value_base);
    if (combos > 5e6) throw OracleLimitError("structure enumeration too large");

    std::vector<int> var_digit(vars.size(), 0);
    std::vector<std::size_t> slot_digit(slots, 0);
    while (true) {
      FStructure s;
      s.nodes.resize(n);
      for (std::size_t v = 0; v < vars.size(); ++v) s.bindings[vars[v]] = var_digit[v];
      for (int node = 0; node < n; ++node) {
        for (std::size_t a = 0; a < attrs.size(); ++a) {
          std::size_t d = slot_digit[std::size_t(node) * attrs.size() + a];
          if (d == 0) continue;
          FStructure::Value v;
          if (d <= std::size_t(n))
            v.node = int(d - 1);
          else
            v.constant = consts[d - n - 1];
          s.nodes[node].push_back({attrs[a], v, false});
        }
      }
      bool ok = true;
      for (const Equation& eq : eqs)
        if (eq.kind == EqKind::Defining && !eq_satisfied(s, eq)) {
          ok = false;
          break;
        }
      if (ok) out.push_back(std::move(s));

      // odometer: variable digits first, then value slots
      std::size_t k = 0;
      for (; k < vars.size(); ++k) {
        if (++var_digit[k] < n) break;
        var_digit[k] = 0;
      }
      if (k < vars.size()) continue;
      std::size_t m = 0;
      for (; m < slots; ++m) {
        if (++slot_digit[m] < value_base) break;
        slot_digit[m] = 0;
      }
      if (m == slots) break;
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const FStructure& a, const FStructure& b) {
    if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
    std::size_t ea = 0, eb = 0;
    for (const auto& node : a.nodes) ea += node.size();
    for (const auto& node : b.nodes) eb += node.size();
    return ea < eb;
  });
  return out;
}

bool subsumes(const FStructure& a, const FStructure& b) {
  std::map<int, int> node_image;
  std::map<int, std::string> const_image;
  std::vector<std::pair<int, int>> pending;
  auto map_to_node = [&](int from, int to) {
    if (const_image.count(from)) return false;
    auto [it, fresh] = node_image.emplace(from, to);
    if (!fresh) return it->second == to;
    pending.emplace_back(from, to);
    return true;
  };
  // a node with no entries asserts existence only, so it may land on a
  // constant in the larger structure — but on the same constant everywhere
  auto map_to_const = [&](int from, const std::string& c) {
    if (!a.nodes[from].empty() || node_image.count(from)) return false;
    auto [it, fresh] = const_image.emplace(from, c);
    return fresh || it->second == c;
  };
  for (const auto& [var, node] : a.bindings) {
    auto it = b.bindings.find(var);
    if (it == b.bindings.end()) return false;
    if (!map_to_node(node, it->second)) return false;
  }
  for (const auto& [var, c] : a.constant_bindings) {
    auto it = b.constant_bindings.find(var);
    if (it == b.constant_bindings.end() || it->second != c) return false;
  }
  while (!pending.empty()) {
    auto [ma, mb] = pending.back();
    pending.pop_back();
    for (const auto& entry : a.nodes[ma]) {
      const FStructure::Entry* hit = nullptr;
      for (const auto& cand : b.nodes[mb])
        if (cand.attr == entry.attr) {
          hit = &cand;
          break;
        }
      if (!hit) return false;
      if (!entry.value.is_node()) {
        if (hit->value.is_node() || hit->value.constant != entry.value.constant) return false;
      } else if (hit->value.is_node()) {
        if (!map_to_node(entry.value.node, hit->value.node)) return false;
      } else {
        if (!map_to_const(entry.value.node, hit->value.constant)) return false;
      }
    }
  }
  return true;
}

}  // namespace rlfg
