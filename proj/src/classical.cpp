#include "rlfg/classical.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

#include <json.hpp>

namespace rlfg {

// --- rendering ----------------------------------------------------------------

std::string path_text(const PathExpr& path) {
  if (path.attrs.empty()) return path.var;
  std::string out = "(" + path.var;
  for (const auto& a : path.attrs) out += " " + a;
  return out + ")";
}

std::string equation_text(const Equation& eq) {
  std::string out = path_text(eq.lhs);
  out += eq.kind == EqKind::Constraining ? "=c " : "=";
  out += eq.rhs_is_path ? path_text(eq.rhs_path) : eq.rhs_const;
  return out;
}

FDescPtr FDescription::leaf(Equation eq) {
  auto d = std::shared_ptr<FDescription>(new FDescription());
  d->op_ = Op::Leaf;
  d->eq_ = std::move(eq);
  return d;
}

FDescPtr FDescription::conj(std::vector<FDescPtr> children) {
  auto d = std::shared_ptr<FDescription>(new FDescription());
  d->op_ = Op::And;
  d->children_ = std::move(children);
  return d;
}

FDescPtr FDescription::disj(std::vector<FDescPtr> children) {
  auto d = std::shared_ptr<FDescription>(new FDescription());
  d->op_ = Op::Or;
  d->children_ = std::move(children);
  return d;
}

std::string description_text(const FDescPtr& d) {
  switch (d->op()) {
    case FDescription::Op::Leaf:
      return equation_text(d->eq());
    case FDescription::Op::And:
    case FDescription::Op::Or: {
      const char* sep = d->op() == FDescription::Op::And ? " & " : " | ";
      std::string out;
      for (std::size_t i = 0; i < d->children().size(); ++i) {
        if (i) out += sep;
        const FDescPtr& c = d->children()[i];
        if (c->op() == FDescription::Op::Leaf)
          out += description_text(c);
        else
          out += "(" + description_text(c) + ")";
      }
      return out;
    }
  }
  return {};
}

// --- parsing ------------------------------------------------------------------

namespace {

enum class DTok { Ident, LParen, RParen, Eq, EqC, Amp, Pipe, Semi, End };

struct DToken {
  DTok kind;
  std::string text;
  std::size_t pos;
};

bool dident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c == '^' || c >= 0x80;
}
bool dident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c >= 0x80;
}

std::vector<DToken> dtokenize(std::string_view text) {
  std::vector<DToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = text[i];
    if (std::isspace(c)) { ++i; continue; }
    std::size_t start = i;
    switch (c) {
      case '(': out.push_back({DTok::LParen, "(", start}); ++i; continue;
      case ')': out.push_back({DTok::RParen, ")", start}); ++i; continue;
      case '&': out.push_back({DTok::Amp, "&", start}); ++i; continue;
      case '|': out.push_back({DTok::Pipe, "|", start}); ++i; continue;
      case ';': out.push_back({DTok::Semi, ";", start}); ++i; continue;
      case '=':
        // "=c" only when the c is not the start of a longer identifier
        if (i + 1 < text.size() && text[i + 1] == 'c' &&
            (i + 2 >= text.size() || !dident_char(text[i + 2]))) {
          out.push_back({DTok::EqC, "=c", start});
          i += 2;
        } else {
          out.push_back({DTok::Eq, "=", start});
          ++i;
        }
        continue;
      default: break;
    }
    if (c == '^') {  // single-character token
      out.push_back({DTok::Ident, "^", start});
      ++i;
      continue;
    }
    if (dident_start(c)) {
      std::size_t j = i + 1;
      while (j < text.size() && dident_char(text[j])) ++j;
      out.push_back({DTok::Ident, std::string(text.substr(i, j - i)), start});
      i = j;
      continue;
    }
    throw FDescParseError("unexpected character '" + std::string(1, char(c)) + "'", start);
  }
  out.push_back({DTok::End, "", text.size()});
  return out;
}

bool is_fvar(const std::string& name) {
  if (name == "^" || name == "v") return true;
  if (name.size() < 2 || name[0] != 'f') return false;
  for (std::size_t i = 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
  return true;
}

// expr := term ('|' term)* ;  term := factor ('&' factor)*
// factor := equation | '(' expr ')'    -- "(" VAR "=" opens a group,
//                                         "(" VAR ATTR/")" opens a path
class DescParser {
public:
  explicit DescParser(std::string_view text) : toks_(dtokenize(text)) {}

  FDescPtr parse_expr_all() {
    FDescPtr d = parse_expr();
    need_end();
    return d;
  }

  std::vector<Equation> parse_set_all() {
    std::vector<Equation> eqs;
    eqs.push_back(parse_equation());
    while (peek().kind == DTok::Semi) {
      ++pos_;
      eqs.push_back(parse_equation());
    }
    need_end();
    return eqs;
  }

private:
  const DToken& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  void need_end() {
    if (peek().kind != DTok::End)
      throw FDescParseError("unexpected '" + peek().text + "'", peek().pos);
  }
  void expect(DTok kind, const char* what) {
    if (peek().kind != kind)
      throw FDescParseError(std::string("expected ") + what, peek().pos);
    ++pos_;
  }

  FDescPtr parse_expr() {
    std::vector<FDescPtr> terms;
    terms.push_back(parse_term());
    while (peek().kind == DTok::Pipe) {
      ++pos_;
      terms.push_back(parse_term());
    }
    return terms.size() == 1 ? terms[0] : FDescription::disj(std::move(terms));
  }

  FDescPtr parse_term() {
    std::vector<FDescPtr> factors;
    factors.push_back(parse_factor());
    while (peek().kind == DTok::Amp) {
      ++pos_;
      factors.push_back(parse_factor());
    }
    return factors.size() == 1 ? factors[0] : FDescription::conj(std::move(factors));
  }

  bool paren_opens_group() const {
    // after '(': another '(' is a group; an identifier followed by '='
    // is a group around a bare-variable equation; otherwise a path
    if (peek(1).kind == DTok::LParen) return true;
    if (peek(1).kind == DTok::Ident)
      return peek(2).kind == DTok::Eq || peek(2).kind == DTok::EqC;
    return false;
  }

  FDescPtr parse_factor() {
    if (peek().kind == DTok::LParen && paren_opens_group()) {
      ++pos_;
      FDescPtr inner = parse_expr();
      expect(DTok::RParen, "')'");
      return inner;
    }
    return FDescription::leaf(parse_equation());
  }

  Equation parse_equation() {
    Equation eq;
    eq.lhs = parse_path();
    if (peek().kind == DTok::EqC) {
      eq.kind = EqKind::Constraining;
      ++pos_;
    } else {
      expect(DTok::Eq, "'=' or '=c'");
      eq.kind = EqKind::Defining;
    }
    // right-hand side: a path, a variable, or a constant
    if (peek().kind == DTok::LParen) {
      eq.rhs_path = parse_path();
      eq.rhs_is_path = true;
    } else if (peek().kind == DTok::Ident) {
      const DToken& t = toks_[pos_++];
      if (is_fvar(t.text)) {
        eq.rhs_path = PathExpr{t.text, {}};
        eq.rhs_is_path = true;
      } else {
        eq.rhs_const = t.text;
      }
    } else {
      throw FDescParseError("expected a value after '='", peek().pos);
    }
    eq.site = next_site_++;
    return eq;
  }

  PathExpr parse_path() {
    PathExpr p;
    if (peek().kind == DTok::Ident) {
      const DToken& t = toks_[pos_++];
      if (!is_fvar(t.text))
        throw FDescParseError("expected an f-variable, got '" + t.text + "'", t.pos);
      p.var = t.text;
      return p;
    }
    expect(DTok::LParen, "an f-variable or '('");
    const DToken& v = peek();
    if (v.kind != DTok::Ident || !is_fvar(v.text))
      throw FDescParseError("expected an f-variable", v.pos);
    p.var = v.text;
    ++pos_;
    while (peek().kind == DTok::Ident) p.attrs.push_back(toks_[pos_++].text);
    expect(DTok::RParen, "')'");
    return p;
  }

  std::vector<DToken> toks_;
  std::size_t pos_ = 0;
  int next_site_ = 0;
};

}  // namespace

FDescPtr parse_fdescription(std::string_view text) {
  return DescParser(text).parse_expr_all();
}

std::vector<Equation> parse_equation_set(std::string_view text) {
  return DescParser(text).parse_set_all();
}

// --- DNF ------------------------------------------------------------------------

std::vector<std::vector<Equation>> dnf(const FDescPtr& d) {
  switch (d->op()) {
    case FDescription::Op::Leaf:
      return {{d->eq()}};
    case FDescription::Op::Or: {
      std::vector<std::vector<Equation>> out;
      for (const auto& c : d->children())
        for (auto& conjunct : dnf(c)) out.push_back(std::move(conjunct));
      return out;
    }
    case FDescription::Op::And: {
      std::vector<std::vector<Equation>> acc = {{}};
      for (const auto& c : d->children()) {
        std::vector<std::vector<Equation>> next;
        for (const auto& left : acc)
          for (const auto& right : dnf(c)) {
            std::vector<Equation> merged = left;
            merged.insert(merged.end(), right.begin(), right.end());
            next.push_back(std::move(merged));
          }
        acc = std::move(next);
      }
      return acc;
    }
  }
  return {};
}

// --- minimal-model construction ---------------------------------------------------

namespace {

// Union-find over f-structure elements with per-attribute edge maps.
// Constants are interned as labeled elements; two distinct labels in one
// class, or a labeled class with outgoing edges, is a clash.
struct UnionSolver {
  std::vector<int> parent;
  std::vector<std::map<std::string, int>> edges;
  std::vector<std::string> label;
  std::map<std::string, int> vars;
  std::map<std::string, int> consts;
  bool failed = false;

  int fresh() {
    parent.push_back(int(parent.size()));
    edges.emplace_back();
    label.emplace_back();
    return int(parent.size()) - 1;
  }

  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  int var_node(const std::string& v) {
    auto it = vars.find(v);
    if (it != vars.end()) return it->second;
    int n = fresh();
    vars.emplace(v, n);
    return n;
  }

  int const_node(const std::string& c) {
    auto it = consts.find(c);
    if (it != consts.end()) return it->second;
    int n = fresh();
    label[n] = c;
    consts.emplace(c, n);
    return n;
  }

  // Union first, then unify children, so cyclic structures terminate.
  void unite(int a, int b) {
    if (failed) return;
    a = find(a);
    b = find(b);
    if (a == b) return;
    parent[b] = a;
    if (label[a].empty()) {
      label[a] = label[b];
    } else if (!label[b].empty() && label[b] != label[a]) {
      failed = true;  // distinct constants denote distinct elements
      return;
    }
    std::map<std::string, int> moved = std::move(edges[b]);
    edges[b].clear();
    for (auto& [attr, target] : moved) {
      auto it = edges[a].find(attr);
      if (it == edges[a].end()) {
        edges[a][attr] = target;
      } else {
        unite(it->second, target);  // functionality: one value per attribute
        if (failed) return;
      }
      a = find(a);  // the class representative may have moved
    }
  }

  int walk(const PathExpr& p) {
    int cur = find(var_node(p.var));
    for (const auto& attr : p.attrs) {
      cur = find(cur);
      auto it = edges[cur].find(attr);
      if (it == edges[cur].end()) {
        int n = fresh();
        edges[cur][attr] = n;
        cur = n;
      } else {
        cur = find(it->second);
      }
    }
    return find(cur);
  }

  bool atomic_constants_ok() {
    for (std::size_t i = 0; i < parent.size(); ++i)
      if (find(int(i)) == int(i) && !label[i].empty() && !edges[i].empty()) return false;
    return true;
  }

  FStructure extract() {
    FStructure out;
    std::map<int, int> index;
    for (std::size_t i = 0; i < parent.size(); ++i)
      if (find(int(i)) == int(i) && label[i].empty())
        index.emplace(int(i), int(index.size()));
    out.nodes.resize(index.size());
    for (auto [cls, id] : index) {
      for (auto& [attr, target] : edges[cls]) {
        int r = find(target);
        FStructure::Value v;
        if (label[r].empty())
          v.node = index.at(r);
        else
          v.constant = label[r];
        out.nodes[id].push_back({attr, v, false});
      }
    }
    for (auto& [var, node] : vars) {
      int r = find(node);
      if (label[r].empty())
        out.bindings[var] = index.at(r);
      else
        out.constant_bindings[var] = label[r];
    }
    return out;
  }
};

}  // namespace

std::optional<FStructure> solve_conjunct(const std::vector<Equation>& eqs) {
  UnionSolver s;
  for (const Equation& eq : eqs) {
    if (eq.kind != EqKind::Defining) continue;  // constraints are checked later
    int lhs = s.walk(eq.lhs);
    int rhs = eq.rhs_is_path ? s.walk(eq.rhs_path) : s.const_node(eq.rhs_const);
    s.unite(lhs, rhs);
    if (s.failed) return std::nullopt;
  }
  if (!s.atomic_constants_ok()) return std::nullopt;
  return s.extract();
}

// --- structure rendering -----------------------------------------------------------

namespace {

// f1 < f2 < f10: numeric where possible.
bool var_less(const std::string& a, const std::string& b) {
  auto num = [](const std::string& s) -> long {
    if (s.size() < 2 || s[0] != 'f') return -1;
    for (std::size_t i = 1; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return -1;
    return std::stol(s.substr(1));
  };
  long na = num(a), nb = num(b);
  if (na >= 0 && nb >= 0) return na < nb;
  if ((na >= 0) != (nb >= 0)) return na >= 0;
  return a < b;
}

std::vector<FStructure::Entry> sorted_entries(const std::vector<FStructure::Entry>& in) {
  std::vector<FStructure::Entry> out = in;
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.attr < b.attr; });
  return out;
}

nlohmann::json value_json(const FStructure& s, const FStructure::Entry& entry,
                          std::vector<bool>& active);

nlohmann::json node_json(const FStructure& s, int node, std::vector<bool>& active) {
  if (active[node]) return "<cycle>";
  active[node] = true;
  nlohmann::json obj = nlohmann::json::object();
  auto entries = sorted_entries(s.nodes[node]);
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    while (j < entries.size() && entries[j].attr == entries[i].attr) ++j;
    if (j - i == 1) {
      obj[entries[i].attr] = value_json(s, entries[i], active);
    } else {
      nlohmann::json arr = nlohmann::json::array();
      for (std::size_t k = i; k < j; ++k) arr.push_back(value_json(s, entries[k], active));
      obj[entries[i].attr] = std::move(arr);
    }
    i = j;
  }
  active[node] = false;
  return obj;
}

nlohmann::json value_json(const FStructure& s, const FStructure::Entry& entry,
                          std::vector<bool>& active) {
  if (entry.value.is_node()) return node_json(s, entry.value.node, active);
  if (entry.constraint_mark) return "=c " + entry.value.constant;
  return entry.value.constant;
}

std::string value_text(const FStructure& s, const FStructure::Entry& entry,
                       std::vector<bool>& active);

std::string node_text(const FStructure& s, int node, std::vector<bool>& active) {
  if (active[node]) return "<cycle>";
  active[node] = true;
  std::string out = "[";
  auto entries = sorted_entries(s.nodes[node]);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) out += ", ";
    out += entries[i].attr + ": " + value_text(s, entries[i], active);
  }
  out += "]";
  active[node] = false;
  return out;
}

std::string value_text(const FStructure& s, const FStructure::Entry& entry,
                       std::vector<bool>& active) {
  if (entry.value.is_node()) return node_text(s, entry.value.node, active);
  if (entry.constraint_mark) return "=c " + entry.value.constant;
  return entry.value.constant;
}

}  // namespace

int FStructure::root_node() const {
  if (bindings.empty()) return nodes.empty() ? -1 : 0;
  const std::string* best = nullptr;
  for (const auto& [var, node] : bindings)
    if (!best || var_less(var, *best)) best = &var;
  return bindings.at(*best);
}

std::string FStructure::to_json() const {
  int root = root_node();
  if (root < 0) return "{}";
  std::vector<bool> active(nodes.size(), false);
  return node_json(*this, root, active).dump(2);
}

std::string FStructure::to_text() const {
  int root = root_node();
  if (root < 0) return "[]";
  std::vector<bool> active(nodes.size(), false);
  return node_text(*this, root, active);
}

// --- constraint verification --------------------------------------------------------

namespace {

std::optional<FStructure::Value> walk_value(const FStructure& model, const PathExpr& p) {
  FStructure::Value cur;
  auto it = model.bindings.find(p.var);
  if (it != model.bindings.end()) {
    cur.node = it->second;
  } else {
    auto ct = model.constant_bindings.find(p.var);
    if (ct == model.constant_bindings.end()) return std::nullopt;
    cur.constant = ct->second;
  }
  for (const auto& attr : p.attrs) {
    if (!cur.is_node()) return std::nullopt;  // constants have no attributes
    const auto& entries = model.nodes[cur.node];
    const FStructure::Entry* hit = nullptr;
    for (const auto& e : entries)
      if (e.attr == attr && !e.constraint_mark) {
        hit = &e;
        break;
      }
    if (!hit) return std::nullopt;
    cur = hit->value;
  }
  return cur;
}

}  // namespace

bool verify_constraints(const FStructure& model, const std::vector<Equation>& eqs) {
  for (const Equation& eq : eqs) {
    if (eq.kind != EqKind::Constraining) continue;
    auto lhs = walk_value(model, eq.lhs);
    if (!lhs) return false;
    if (eq.rhs_is_path) {
      auto rhs = walk_value(model, eq.rhs_path);
      if (!rhs) return false;
      bool same = lhs->is_node() ? (rhs->is_node() && lhs->node == rhs->node)
                                 : (!rhs->is_node() && lhs->constant == rhs->constant);
      if (!same) return false;
    } else {
      if (lhs->is_node() || lhs->constant != eq.rhs_const) return false;
    }
  }
  return true;
}

std::vector<FStructure> solve(const FDescPtr& d) {
  std::vector<FStructure> out;
  std::set<std::string> seen;
  for (const auto& conjunct : dnf(d)) {
    auto model = solve_conjunct(conjunct);
    if (!model) continue;
    if (!verify_constraints(*model, conjunct)) continue;
    std::string key = model->to_json();
    if (seen.insert(std::move(key)).second) out.push_back(std::move(*model));
  }
  return out;
}

// --- relaxed solving -----------------------------------------------------------------
//
// Walking a path may either join an existing attribute entry or split off a
// new one; defining equations are placed first (every consistent combination
// of choices), then each constraining equation walks the result and must
// find a defined value inside the entry it lands on. Entries created by a
// constraint's final step carry only the required value, rendered "=c V".

namespace {

struct RelaxState {
  struct REntry {
    std::string attr;
    int node = -1;          // >= 0: structure-valued
    std::string constant;   // nonempty: constant-valued
    bool cmark = false;     // required by a constraint, never defined
    bool is_node() const { return node >= 0; }
  };

  std::vector<std::vector<REntry>> entries;
  std::vector<int> parent;
  std::map<std::string, int> vars;

  int fresh() {
    parent.push_back(int(parent.size()));
    entries.emplace_back();
    return int(parent.size()) - 1;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  int var_node(const std::string& v) {
    auto it = vars.find(v);
    if (it != vars.end()) return find(it->second);
    int n = fresh();
    vars.emplace(v, n);
    return n;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    parent[b] = a;
    auto moved = std::move(entries[b]);
    entries[b].clear();
    entries[a].insert(entries[a].end(), moved.begin(), moved.end());
  }
};

// All (state, node) outcomes of walking var.attrs, where every step either
// descends into an existing structure-valued entry or creates a new one.
// `mark_created` marks entries created at the final step.
std::vector<std::pair<RelaxState, int>> relax_walk_node(const RelaxState& start,
                                                        const PathExpr& path) {
  std::vector<std::pair<RelaxState, int>> frontier;
  {
    RelaxState s = start;
    int n = s.var_node(path.var);
    frontier.emplace_back(std::move(s), n);
  }
  for (const auto& attr : path.attrs) {
    std::vector<std::pair<RelaxState, int>> next;
    for (auto& [state, node] : frontier) {
      int at = state.find(node);
      for (std::size_t i = 0; i < state.entries[at].size(); ++i) {
        const auto& e = state.entries[at][i];
        if (e.attr != attr || !e.is_node()) continue;
        RelaxState branch = state;
        next.emplace_back(std::move(branch), state.find(e.node));
      }
      RelaxState created = state;
      int child = created.fresh();
      created.entries[created.find(node)].push_back({attr, child, "", false});
      next.emplace_back(std::move(created), child);
    }
    frontier = std::move(next);
  }
  return frontier;
}

// Outcomes of asserting one defining equation.
std::vector<RelaxState> relax_define(const RelaxState& start, const Equation& eq) {
  std::vector<RelaxState> out;

  if (eq.lhs.attrs.empty()) {
    // bare variable on the left: identify with the right-hand node
    if (!eq.rhs_is_path)
      throw std::runtime_error("binding a bare f-variable to a constant is not supported");
    for (auto& [state, rnode] : relax_walk_node(start, eq.rhs_path)) {
      RelaxState s = std::move(state);
      int l = s.var_node(eq.lhs.var);
      s.unite(l, rnode);
      out.push_back(std::move(s));
    }
    return out;
  }

  PathExpr prefix = eq.lhs;
  std::string last = prefix.attrs.back();
  prefix.attrs.pop_back();

  if (!eq.rhs_is_path) {
    for (auto& [state, node] : relax_walk_node(start, prefix)) {
      int at = state.find(node);
      // join an existing entry with the same constant
      for (std::size_t i = 0; i < state.entries[at].size(); ++i) {
        const auto& e = state.entries[at][i];
        if (e.attr != last || e.is_node() || e.constant != eq.rhs_const) continue;
        RelaxState branch = state;
        branch.entries[at][i].cmark = false;  // now defined
        out.push_back(std::move(branch));
      }
      // or split off a new one
      RelaxState created = state;
      created.entries[at].push_back({last, -1, eq.rhs_const, false});
      out.push_back(std::move(created));
    }
    return out;
  }

  for (auto& [state, rnode] : relax_walk_node(start, eq.rhs_path)) {
    for (auto& [lstate, node] : relax_walk_node(state, prefix)) {
      int at = lstate.find(node);
      int target = lstate.find(rnode);
      for (std::size_t i = 0; i < lstate.entries[at].size(); ++i) {
        const auto& e = lstate.entries[at][i];
        if (e.attr != last || !e.is_node()) continue;
        RelaxState branch = lstate;
        branch.unite(branch.find(e.node), target);
        out.push_back(std::move(branch));
      }
      RelaxState created = lstate;
      created.entries[at].push_back({last, target, "", false});
      out.push_back(std::move(created));
    }
  }
  return out;
}

// Outcomes of checking one constraining equation: (state, satisfied).
std::vector<std::pair<RelaxState, bool>> relax_constrain(const RelaxState& start,
                                                         const Equation& eq) {
  std::vector<std::pair<RelaxState, bool>> out;

  if (eq.rhs_is_path || eq.lhs.attrs.empty()) {
    // path-valued or bare-variable constraints: evaluate without creating
    // entries; unsupported shapes simply fail the candidate
    RelaxState s = start;
    out.emplace_back(std::move(s), false);
    return out;
  }

  PathExpr prefix = eq.lhs;
  std::string last = prefix.attrs.back();
  prefix.attrs.pop_back();

  for (auto& [state, node] : relax_walk_node(start, prefix)) {
    int at = state.find(node);
    for (std::size_t i = 0; i < state.entries[at].size(); ++i) {
      const auto& e = state.entries[at][i];
      if (e.attr != last) continue;
      if (e.is_node()) continue;  // a structure can never equal a constant
      RelaxState branch = state;
      bool satisfied = !e.cmark && e.constant == eq.rhs_const;
      out.emplace_back(std::move(branch), satisfied);
    }
    // the constraint records its requirement in a fresh entry; nothing
    // defines a value there, so the candidate fails
    RelaxState created = state;
    created.entries[created.find(node)].push_back({last, -1, eq.rhs_const, true});
    out.emplace_back(std::move(created), false);
  }
  return out;
}

FStructure relax_extract(RelaxState& s) {
  FStructure out;
  std::map<int, int> index;
  for (std::size_t i = 0; i < s.parent.size(); ++i)
    if (s.find(int(i)) == int(i)) index.emplace(int(i), int(index.size()));
  out.nodes.resize(index.size());
  for (auto [cls, id] : index) {
    for (const auto& e : s.entries[cls]) {
      FStructure::Value v;
      if (e.is_node())
        v.node = index.at(s.find(e.node));
      else
        v.constant = e.constant;
      out.nodes[id].push_back({e.attr, v, e.cmark});
    }
  }
  for (auto& [var, node] : s.vars) out.bindings[var] = index.at(s.find(node));
  return out;
}

}  // namespace

std::vector<RelaxedCandidate> solve_relaxed(const FDescPtr& d) {
  std::vector<RelaxedCandidate> out;
  std::set<std::string> seen;
  for (const auto& conjunct : dnf(d)) {
    // defining equations first, every consistent placement
    std::vector<RelaxState> states = {RelaxState{}};
    for (const Equation& eq : conjunct) {
      if (eq.kind != EqKind::Defining) continue;
      std::vector<RelaxState> next;
      for (const RelaxState& s : states)
        for (RelaxState& r : relax_define(s, eq)) next.push_back(std::move(r));
      states = std::move(next);
      if (states.size() > 100000)
        throw std::runtime_error("relaxed solving exceeded the candidate budget");
    }
    // then each constraining equation walks every candidate
    std::vector<std::pair<RelaxState, bool>> cands;
    cands.reserve(states.size());
    for (RelaxState& s : states) cands.emplace_back(std::move(s), true);
    for (const Equation& eq : conjunct) {
      if (eq.kind != EqKind::Constraining) continue;
      std::vector<std::pair<RelaxState, bool>> next;
      for (auto& [s, passed] : cands)
        for (auto& [r, sat] : relax_constrain(s, eq))
          next.emplace_back(std::move(r), passed && sat);
      cands = std::move(next);
      if (cands.size() > 100000)
        throw std::runtime_error("relaxed solving exceeded the candidate budget");
    }
    for (auto& [s, passed] : cands) {
      FStructure structure = relax_extract(s);
      std::string key = structure.to_json() + (passed ? "#pass" : "#fail");
      if (seen.insert(std::move(key)).second)
        out.push_back({std::move(structure), passed});
    }
  }
  return out;
}

std::vector<FStructure> solve_relaxed_passing(const FDescPtr& d) {
  std::vector<FStructure> out;
  for (auto& cand : solve_relaxed(d))
    if (cand.passed) out.push_back(std::move(cand.structure));
  return out;
}

}  // namespace rlfg
