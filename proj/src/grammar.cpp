#include "rlfg/grammar.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace rlfg {

namespace {

bool gident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c >= 0x80;
}

struct LineScanner {
  std::string_view s;
  int line;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
  bool peek_is(char c) {
    skip_ws();
    return i < s.size() && s[i] == c;
  }
  void expect(char c, const char* what) {
    skip_ws();
    if (i >= s.size() || s[i] != c) throw GrammarError(std::string("expected ") + what, line);
    ++i;
  }
  std::string ident(const char* what) {
    skip_ws();
    std::size_t start = i;
    while (i < s.size() && gident_char(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) throw GrammarError(std::string("expected ") + what, line);
    return std::string(s.substr(start, i - start));
  }
  std::string word_token(const char* what) {
    skip_ws();
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) throw GrammarError(std::string("expected ") + what, line);
    return std::string(s.substr(start, i - start));
  }
  // `{ ... }`; the payload syntax never contains a closing brace
  std::string brace_payload() {
    expect('{', "'{'");
    std::size_t start = i;
    while (i < s.size() && s[i] != '}') ++i;
    if (i >= s.size()) throw GrammarError("unterminated '{'", line);
    std::string inner(s.substr(start, i - start));
    ++i;
    return inner;
  }
};

void require_schema_var(const std::string& var, int line) {
  if (var != "^" && var != "v")
    throw GrammarError("annotation variables must be ^ or v, got '" + var + "'", line);
}

Annotation parse_annotation(const std::string& payload, GrammarMode mode, const DeclTable& decls,
                            int line) {
  Annotation a;
  try {
    if (mode == GrammarMode::RLFG) {
      a.fterm = parse_fterm_template(payload, decls);
      return a;
    }
    a.eqs = parse_equation_set(payload);
  } catch (const std::exception& e) {
    throw GrammarError(std::string("bad annotation: ") + e.what(), line);
  }
  for (const Equation& eq : a.eqs) {
    require_schema_var(eq.lhs.var, line);
    for (const auto& at : eq.lhs.attrs)
      if (!decls.is_attr(at)) throw GrammarError("undeclared attribute '" + at + "'", line);
    if (eq.rhs_is_path) {
      require_schema_var(eq.rhs_path.var, line);
      for (const auto& at : eq.rhs_path.attrs)
        if (!decls.is_attr(at)) throw GrammarError("undeclared attribute '" + at + "'", line);
    } else if (!decls.is_type(eq.rhs_const)) {
      throw GrammarError("undeclared constant '" + eq.rhs_const + "'", line);
    }
  }
  return a;
}

std::vector<RhsElement> parse_rhs(LineScanner& sc, GrammarMode mode, const DeclTable& decls) {
  std::vector<RhsElement> rhs;
  while (!sc.eof()) {
    RhsElement el;
    if (sc.peek_is('[')) {
      ++sc.i;
      el.optional = true;
    }
    el.category = sc.ident("a category");
    if (!decls.is_category(el.category))
      throw GrammarError("undeclared category '" + el.category + "'", sc.line);
    sc.expect(':', "':' after the category");
    el.annotation = parse_annotation(sc.brace_payload(), mode, decls, sc.line);
    if (el.optional) sc.expect(']', "']'");
    rhs.push_back(std::move(el));
  }
  if (rhs.empty()) throw GrammarError("rule has an empty right-hand side", sc.line);
  return rhs;
}

}  // namespace

Grammar parse_grammar(std::string_view text) {
  Grammar g;
  bool have_mode = false;
  bool have_start = false;

  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    std::string_view content = raw.substr(0, raw.find('#'));
    LineScanner sc{content, line_no};
    if (sc.eof()) continue;

    // a rule line is `LHS -> ...`; everything else starts with a directive
    std::size_t arrow = content.find("->");
    bool is_rule = false;
    if (arrow != std::string_view::npos) {
      // the left of the arrow must be a single identifier
      LineScanner lhs_sc{content.substr(0, arrow), line_no};
      if (!lhs_sc.eof()) {
        std::size_t save = lhs_sc.i;
        lhs_sc.skip_ws();
        std::size_t start = lhs_sc.i;
        while (lhs_sc.i < lhs_sc.s.size() &&
               gident_char(static_cast<unsigned char>(lhs_sc.s[lhs_sc.i])))
          ++lhs_sc.i;
        is_rule = lhs_sc.i > start && lhs_sc.eof();
        (void)save;
      }
    }

    try {
      if (is_rule) {
        if (!have_mode) throw GrammarError("rules must come after the mode line", line_no);
        LineScanner lhs_sc{content.substr(0, arrow), line_no};
        Rule rule;
        rule.lhs = lhs_sc.ident("a category");
        rule.line = line_no;
        if (!g.decls.is_category(rule.lhs))
          throw GrammarError("undeclared category '" + rule.lhs + "'", line_no);
        LineScanner rhs_sc{content.substr(arrow + 2), line_no};
        rule.rhs = parse_rhs(rhs_sc, g.mode, g.decls);
        g.rules.push_back(std::move(rule));
        continue;
      }

      std::string head = sc.ident("a directive");
      if (head == "mode") {
        std::string m = sc.ident("rlfg or lfg");
        if (m == "rlfg")
          g.mode = GrammarMode::RLFG;
        else if (m == "lfg")
          g.mode = GrammarMode::Classical;
        else
          throw GrammarError("mode must be rlfg or lfg", line_no);
        have_mode = true;
      } else if (head == "start") {
        g.start = sc.ident("a category");
        have_start = true;
      } else if (head == "type") {
        std::string name = sc.ident("a type name");
        std::string flavor = sc.ident("contentful or vacuous");
        if (flavor != "contentful" && flavor != "vacuous")
          throw GrammarError("type must be contentful or vacuous", line_no);
        g.decls.declare_type(name, flavor == "contentful");
      } else if (head == "attr") {
        g.decls.declare_attr(sc.ident("an attribute name"));
      } else if (head == "cat") {
        g.decls.declare_category(sc.ident("a category name"));
      } else if (head == "lex") {
        if (!have_mode) throw GrammarError("lexicon must come after the mode line", line_no);
        LexEntry entry;
        entry.word = sc.word_token("a word");
        entry.category = sc.ident("a category");
        entry.line = line_no;
        if (!g.decls.is_category(entry.category))
          throw GrammarError("undeclared category '" + entry.category + "'", line_no);
        entry.payload = parse_annotation(sc.brace_payload(), g.mode, g.decls, line_no);
        g.lexicon.push_back(std::move(entry));
      } else {
        throw GrammarError("unknown directive '" + head + "'", line_no);
      }
      if (!sc.eof()) throw GrammarError("trailing text", line_no);
    } catch (const DeclError& e) {
      throw GrammarError(e.what(), line_no);
    }
  }

  if (!have_mode) throw GrammarError("missing mode line", 0);
  if (!have_start) throw GrammarError("missing start line", 0);
  if (!g.decls.is_category(g.start)) throw GrammarError("start category is not declared", 0);
  if (g.mode == GrammarMode::RLFG && !g.decls.has_goal_type())
    throw GrammarError("rlfg grammars need the contentful type t", 0);

  bool start_used = false;
  for (const Rule& r : g.rules) start_used = start_used || r.lhs == g.start;
  for (const LexEntry& e : g.lexicon) start_used = start_used || e.category == g.start;
  if (!start_used)
    throw GrammarError("start category has no rule and no lexical entry", 0);

  for (int i = 0; i < int(g.lexicon.size()); ++i) g.lex_index[g.lexicon[i].word].push_back(i);
  return g;
}

Grammar load_grammar(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GrammarError("cannot open grammar file: " + path, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_grammar(buf.str());
}

std::vector<std::string> tokenize_sentence(std::string_view sentence) {
  std::istringstream in{std::string(sentence)};
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

std::vector<CTreePtr> parse_sentence(const Grammar& g, const std::vector<std::string>& words) {
  if (words.empty()) return {};
  for (const auto& w : words)
    if (!g.lex_index.count(w)) throw UnknownWordError(w);

  // optionality compiled away: every subset of a rule's optional elements,
  // subset masks ascending, becomes one variant
  struct Variant {
    int rule;
    std::vector<int> keep;
  };
  std::vector<Variant> variants;
  for (int r = 0; r < int(g.rules.size()); ++r) {
    const auto& rhs = g.rules[r].rhs;
    std::vector<int> opts;
    for (int e = 0; e < int(rhs.size()); ++e)
      if (rhs[e].optional) opts.push_back(e);
    for (unsigned mask = 0; mask < (1u << opts.size()); ++mask) {
      Variant v{r, {}};
      std::size_t opt_pos = 0;
      for (int e = 0; e < int(rhs.size()); ++e) {
        if (!rhs[e].optional) {
          v.keep.push_back(e);
        } else {
          if (mask >> opt_pos & 1u) v.keep.push_back(e);
          ++opt_pos;
        }
      }
      if (!v.keep.empty()) variants.push_back(std::move(v));
    }
  }

  // direct enumeration; `active` blocks unary cycles within one span
  std::function<std::vector<CTreePtr>(const std::string&, int, int, std::set<std::string>&)>
      derive = [&](const std::string& cat, int lo, int hi,
                   std::set<std::string>& active) -> std::vector<CTreePtr> {
    std::vector<CTreePtr> out;
    if (hi - lo == 1) {
      auto it = g.lex_index.find(words[lo]);
      if (it != g.lex_index.end()) {
        for (int li : it->second) {
          if (g.lexicon[li].category != cat) continue;
          auto leaf = std::make_shared<CStructure>();
          leaf->category = cat;
          leaf->word = words[lo];
          leaf->lex_index = li;
          out.push_back(std::move(leaf));
        }
      }
    }
    for (const Variant& v : variants) {
      if (g.rules[v.rule].lhs != cat) continue;
      int k = int(v.keep.size());
      if (k == 1) {
        const std::string& child_cat = g.rules[v.rule].rhs[v.keep[0]].category;
        if (active.count(child_cat)) continue;
        active.insert(cat);
        auto subs = derive(child_cat, lo, hi, active);
        active.erase(cat);
        for (auto& sub : subs) {
          auto node = std::make_shared<CStructure>();
          node->category = cat;
          node->rule_index = v.rule;
          node->rhs_indices = v.keep;
          node->children = {std::move(sub)};
          out.push_back(std::move(node));
        }
        continue;
      }
      if (hi - lo < k) continue;
      // boundary vectors in lexicographic order
      std::vector<int> cuts;
      std::function<void(int, int)> place = [&](int part, int at) {
        if (part == k) {
          std::vector<std::vector<CTreePtr>> lists(k);
          for (int c = 0; c < k; ++c) {
            int a = c == 0 ? lo : cuts[c - 1];
            int b = c == k - 1 ? hi : cuts[c];
            std::set<std::string> fresh;
            lists[c] = derive(g.rules[v.rule].rhs[v.keep[c]].category, a, b, fresh);
            if (lists[c].empty()) return;
          }
          std::vector<std::size_t> idx(k, 0);
          while (true) {
            auto node = std::make_shared<CStructure>();
            node->category = cat;
            node->rule_index = v.rule;
            node->rhs_indices = v.keep;
            for (int c = 0; c < k; ++c) node->children.push_back(lists[c][idx[c]]);
            out.push_back(std::move(node));
            int c = k - 1;
            while (c >= 0 && ++idx[c] == lists[c].size()) {
              idx[c] = 0;
              --c;
            }
            if (c < 0) break;
          }
          return;
        }
        // the remaining parts each need at least one token
        for (int cut = at + 1; cut <= hi - (k - part - 1); ++cut) {
          cuts.push_back(cut);
          place(part + 1, cut);
          cuts.pop_back();
        }
      };
      place(1, lo);
    }
    return out;
  };

  std::set<std::string> active;
  return derive(g.start, 0, int(words.size()), active);
}

std::string tree_text(const CTreePtr& tree) {
  if (tree->is_leaf()) return "(" + tree->category + " " + tree->word + ")";
  std::string out = "(" + tree->category;
  for (const auto& c : tree->children) out += " " + tree_text(c);
  return out + ")";
}

TermPtr instantiate_rlfg(const Grammar& g, const CTreePtr& tree) {
  if (tree->is_leaf()) return canonicalize(g.lexicon[tree->lex_index].payload.fterm);
  const Rule& rule = g.rules[tree->rule_index];
  std::vector<TermPtr> parts;
  for (std::size_t i = 0; i < tree->children.size(); ++i) {
    const Annotation& ann = rule.rhs[tree->rhs_indices[i]].annotation;
    parts.push_back(substitute_meta(ann.fterm, instantiate_rlfg(g, tree->children[i])));
  }
  return canonicalize(FTerm::multiset(parts));
}

FDescPtr instantiate_lfg(const Grammar& g, const CTreePtr& tree) {
  std::vector<FDescPtr> leaves;
  int last_var = 1;  // the root is f1
  int next_site = 0;
  auto var_name = [](int n) { return "f" + std::to_string(n); };

  auto rebind = [](PathExpr& p, const std::string& mother, const std::string& self) {
    if (p.var == "^") p.var = mother;
    if (p.var == "v") p.var = self;
  };

  std::function<void(const CTreePtr&, int)> visit = [&](const CTreePtr& node, int my) {
    if (node->is_leaf()) {
      int site = next_site++;
      for (Equation eq : g.lexicon[node->lex_index].payload.eqs) {
        rebind(eq.lhs, var_name(my), var_name(my));
        if (eq.rhs_is_path) rebind(eq.rhs_path, var_name(my), var_name(my));
        eq.site = site;
        leaves.push_back(FDescription::leaf(std::move(eq)));
      }
      return;
    }
    const Rule& rule = g.rules[node->rule_index];
    for (std::size_t i = 0; i < node->children.size(); ++i) {
      int child = ++last_var;  // preorder: the child is visited next
      int site = next_site++;
      for (Equation eq : rule.rhs[node->rhs_indices[i]].annotation.eqs) {
        rebind(eq.lhs, var_name(my), var_name(child));
        if (eq.rhs_is_path) rebind(eq.rhs_path, var_name(my), var_name(child));
        eq.site = site;
        leaves.push_back(FDescription::leaf(std::move(eq)));
      }
      visit(node->children[i], child);
    }
  };

  visit(tree, 1);
  return FDescription::conj(std::move(leaves));
}

}  // namespace rlfg
