#include "rlfg/fterm.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <utility>

namespace rlfg {

namespace {

// Comma-joined multiset body, no surrounding parens.
std::string multiset_inner(const std::vector<TermPtr>& elems) {
  std::string out;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i) out += ", ";
    out += elems[i]->text();
  }
  return out;
}

std::string join_path(const std::vector<std::string>& attrs) {
  std::string out;
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (i) out += ' ';
    out += attrs[i];
  }
  return out;
}

}  // namespace

int term_rank(TermKind kind) {
  switch (kind) {
    case TermKind::Atom: return 0;
    case TermKind::MetaVar: return 1;
    case TermKind::Embed: return 2;
    case TermKind::Limp: return 3;
    case TermKind::PathEq: return 4;
    case TermKind::Opt: return 5;
    case TermKind::Multiset: return 6;
  }
  return 7;
}

bool term_less(const TermPtr& a, const TermPtr& b) {
  int ra = term_rank(a->kind()), rb = term_rank(b->kind());
  if (ra != rb) return ra < rb;
  return a->text() < b->text();
}

// --- factories --------------------------------------------------------------
//
// Precedence, loosest to tightest: ',' < '-o' < embedding < primary. The
// serializer inserts parens exactly where re-parsing would otherwise bind
// differently, so text() round-trips.

TermPtr FTerm::atom(std::string name) {
  assert(!name.empty());
  assert(name != "v" && "'v' is the reserved metavariable");
  auto n = std::shared_ptr<FTerm>(new FTerm());
  n->kind_ = TermKind::Atom;
  n->name_ = std::move(name);
  n->text_ = n->name_;
  return n;
}

TermPtr FTerm::meta_var() {
  auto n = std::shared_ptr<FTerm>(new FTerm());
  n->kind_ = TermKind::MetaVar;
  n->text_ = "v";
  return n;
}

TermPtr FTerm::embed(std::string attr, TermPtr body) {
  assert(!attr.empty());
  auto n = std::shared_ptr<FTerm>(new FTerm());
  n->kind_ = TermKind::Embed;
  n->name_ = std::move(attr);
  switch (body->kind()) {
    case TermKind::Atom:
    case TermKind::MetaVar:
    case TermKind::Embed:
      n->text_ = n->name_ + " " + body->text();
      break;
    case TermKind::Opt:
      n->text_ = n->name_ + body->text();  // "SUBJ(NOM)?"
      break;
    case TermKind::Multiset:
      n->text_ = n->name_ + "(" + multiset_inner(body->children()) + ")";
      break;
    default:
      n->text_ = n->name_ + "(" + body->text() + ")";
      break;
  }
  n->children_.push_back(std::move(body));
  return n;
}

TermPtr FTerm::limp(TermPtr antecedent, TermPtr consequent) {
  auto n = std::shared_ptr<FTerm>(new FTerm());
  n->kind_ = TermKind::Limp;
  std::string lhs = antecedent->text();
  if (antecedent->kind() == TermKind::Limp || antecedent->kind() == TermKind::Multiset ||
      antecedent->kind() == TermKind::PathEq)
    lhs = "(" + lhs + ")";
  std::string rhs = consequent->text();
  if (consequent->kind() == TermKind::Multiset || consequent->kind() == TermKind::PathEq)
    rhs = "(" + rhs + ")";
  n->text_ = lhs + " -o " + rhs;
  n->children_.push_back(std::move(antecedent));
  n->children_.push_back(std::move(consequent));
  return n;
}

TermPtr FTerm::opt(TermPtr body) {
  auto n = std::shared_ptr<FTerm>(new FTerm());
  n->kind_ = TermKind::Opt;
  n->text_ = "(" + body->text() + ")?";
  n->children_.push_back(std::move(body));
  return n;
}

TermPtr FTerm::path_eq(std::vector<std::string> src, std::vector<std::string> dst) {
  assert(!src.empty() && !dst.empty());
  auto n = std::shared_ptr<FTerm>(new FTerm());
  n->kind_ = TermKind::PathEq;
  n->path_src_ = std::move(src);
  n->path_dst_ = std::move(dst);
  n->text_ = join_path(n->path_src_) + " = " + join_path(n->path_dst_);
  return n;
}

TermPtr FTerm::multiset(std::vector<TermPtr> elements) {
  auto n = std::shared_ptr<FTerm>(new FTerm());
  n->kind_ = TermKind::Multiset;
  n->text_ = elements.empty() ? "()" : multiset_inner(elements);
  n->children_ = std::move(elements);
  return n;
}

// --- canonical form ----------------------------------------------------------

TermPtr canonicalize(const TermPtr& term) {
  switch (term->kind()) {
    case TermKind::Atom:
    case TermKind::MetaVar:
    case TermKind::PathEq:
      return term;
    case TermKind::Embed:
      return FTerm::embed(term->name(), canonicalize(term->body()));
    case TermKind::Limp:
      return FTerm::limp(canonicalize(term->antecedent()), canonicalize(term->consequent()));
    case TermKind::Opt:
      return FTerm::opt(canonicalize(term->body()));
    case TermKind::Multiset: {
      std::vector<TermPtr> flat;
      for (const auto& child : term->children()) {
        TermPtr c = canonicalize(child);
        if (c->kind() == TermKind::Multiset) {
          // already flat and sorted; splice the elements
          flat.insert(flat.end(), c->children().begin(), c->children().end());
        } else {
          flat.push_back(std::move(c));
        }
      }
      if (flat.size() == 1) return flat[0];
      std::stable_sort(flat.begin(), flat.end(), term_less);
      return FTerm::multiset(std::move(flat));
    }
  }
  return term;
}

bool is_canonical(const TermPtr& term) {
  switch (term->kind()) {
    case TermKind::Atom:
    case TermKind::MetaVar:
    case TermKind::PathEq:
      return true;
    case TermKind::Embed:
    case TermKind::Opt:
      return is_canonical(term->body());
    case TermKind::Limp:
      return is_canonical(term->antecedent()) && is_canonical(term->consequent());
    case TermKind::Multiset: {
      const auto& kids = term->children();
      if (kids.size() == 1) return false;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (kids[i]->kind() == TermKind::Multiset) return false;
        if (i + 1 < kids.size() && term_less(kids[i + 1], kids[i])) return false;
        if (!is_canonical(kids[i])) return false;
      }
      return true;
    }
  }
  return false;
}

bool equal(const TermPtr& a, const TermPtr& b) {
  return canonicalize(a)->text() == canonicalize(b)->text();
}

std::string serialize(const TermPtr& term) { return term->text(); }

bool contains_meta(const TermPtr& term) {
  if (term->kind() == TermKind::MetaVar) return true;
  for (const auto& c : term->children())
    if (contains_meta(c)) return true;
  return false;
}

namespace {

TermPtr substitute_raw(const TermPtr& tmpl, const TermPtr& value) {
  switch (tmpl->kind()) {
    case TermKind::MetaVar:
      return value;
    case TermKind::Atom:
    case TermKind::PathEq:
      return tmpl;
    case TermKind::Embed:
      return FTerm::embed(tmpl->name(), substitute_raw(tmpl->body(), value));
    case TermKind::Limp:
      return FTerm::limp(substitute_raw(tmpl->antecedent(), value),
                         substitute_raw(tmpl->consequent(), value));
    case TermKind::Opt:
      return FTerm::opt(substitute_raw(tmpl->body(), value));
    case TermKind::Multiset: {
      std::vector<TermPtr> kids;
      kids.reserve(tmpl->children().size());
      for (const auto& c : tmpl->children()) kids.push_back(substitute_raw(c, value));
      return FTerm::multiset(std::move(kids));
    }
  }
  return tmpl;
}

}  // namespace

TermPtr substitute_meta(const TermPtr& tmpl, const TermPtr& value) {
  return canonicalize(substitute_raw(tmpl, value));
}

// --- parser -------------------------------------------------------------------
//
//   term        := element (',' element)*
//   element     := pathEq | implication
//   pathEq      := IDENT+ '=' IDENT+
//   implication := operand ('-o' implication)?
//   operand     := IDENT operand | IDENT | group
//   group       := '(' term? ')' '?'?
//
// An IDENT followed by another IDENT or '(' is an attribute (embedding);
// otherwise it is an atom. Path equations are recognized by token lookahead.

namespace {

enum class Tok { Ident, Comma, LParen, RParen, QMark, Limp, Eq, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c >= 0x80;
}

// True when the '-' at `i` starts the '-o' operator rather than continuing
// an identifier such as HISTORICAL-ORIGIN.
bool limp_at(std::string_view text, std::size_t i) {
  return i + 1 < text.size() && text[i + 1] == 'o' &&
         (i + 2 >= text.size() || !ident_char(text[i + 2]));
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = text[i];
    if (std::isspace(c)) { ++i; continue; }
    std::size_t start = i;
    if (c == ',') { out.push_back({Tok::Comma, ",", start}); ++i; continue; }
    if (c == '(') { out.push_back({Tok::LParen, "(", start}); ++i; continue; }
    if (c == ')') { out.push_back({Tok::RParen, ")", start}); ++i; continue; }
    if (c == '?') { out.push_back({Tok::QMark, "?", start}); ++i; continue; }
    if (c == '=') { out.push_back({Tok::Eq, "=", start}); ++i; continue; }
    if (c == '-') {
      if (limp_at(text, i)) {
        out.push_back({Tok::Limp, "-o", start});
        i += 2;
        continue;
      }
      throw FTermParseError("unexpected '-'", start);
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) {
        if (text[j] == '-' && limp_at(text, j)) break;
        ++j;
      }
      out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), start});
      i = j;
      continue;
    }
    throw FTermParseError("unexpected character '" + std::string(1, char(c)) + "'", start);
  }
  out.push_back({Tok::End, "", text.size()});
  return out;
}

class TermParser {
public:
  TermParser(std::string_view text, const DeclTable& decls, bool allow_meta)
      : toks_(tokenize(text)), decls_(decls), allow_meta_(allow_meta) {}

  TermPtr run() {
    TermPtr t = parse_term();
    if (peek().kind != Tok::End)
      throw FTermParseError("unexpected '" + peek().text + "'", peek().pos);
    return canonicalize(t);
  }

private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  void expect(Tok kind, const char* what) {
    if (peek().kind != kind)
      throw FTermParseError(std::string("expected ") + what, peek().pos);
    ++pos_;
  }

  TermPtr parse_term() {
    std::vector<TermPtr> elems;
    elems.push_back(parse_element());
    while (peek().kind == Tok::Comma) {
      ++pos_;
      elems.push_back(parse_element());
    }
    if (elems.size() == 1) return elems[0];
    return FTerm::multiset(std::move(elems));
  }

  bool path_eq_ahead() const {
    if (peek().kind != Tok::Ident) return false;
    std::size_t k = 0;
    while (peek(k).kind == Tok::Ident) ++k;
    return peek(k).kind == Tok::Eq;
  }

  TermPtr parse_element() {
    if (path_eq_ahead()) return parse_path_eq();
    return parse_implication();
  }

  TermPtr parse_path_eq() {
    std::vector<std::string> src = parse_attr_seq();
    expect(Tok::Eq, "'='");
    std::vector<std::string> dst = parse_attr_seq();
    const Token& t = peek();
    // A path equation is a whole element: parenthesize to embed it anywhere.
    if (t.kind != Tok::Comma && t.kind != Tok::RParen && t.kind != Tok::End)
      throw FTermParseError("unexpected '" + t.text + "' after path equation", t.pos);
    return FTerm::path_eq(std::move(src), std::move(dst));
  }

  std::vector<std::string> parse_attr_seq() {
    std::vector<std::string> attrs;
    while (peek().kind == Tok::Ident) {
      const Token& t = next();
      check_attr(t);
      attrs.push_back(t.text);
    }
    if (attrs.empty()) throw FTermParseError("expected attribute name", peek().pos);
    return attrs;
  }

  TermPtr parse_implication() {
    TermPtr lhs = parse_operand();
    if (peek().kind == Tok::Limp) {
      ++pos_;
      return FTerm::limp(std::move(lhs), parse_implication());
    }
    return lhs;
  }

  TermPtr parse_operand() {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      Token head = next();
      if (peek().kind == Tok::Ident || peek().kind == Tok::LParen) {
        check_attr(head);
        return FTerm::embed(head.text, parse_operand());
      }
      return make_atom(head);
    }
    if (t.kind == Tok::LParen) {
      ++pos_;
      TermPtr inner = peek().kind == Tok::RParen ? FTerm::multiset({}) : parse_term();
      expect(Tok::RParen, "')'");
      if (peek().kind == Tok::QMark) {
        ++pos_;
        return FTerm::opt(std::move(inner));
      }
      return inner;
    }
    throw FTermParseError("expected identifier or '('", t.pos);
  }

  TermPtr make_atom(const Token& t) {
    if (t.text == "v") {
      if (allow_meta_) return FTerm::meta_var();
      throw FTermParseError("metavariable 'v' is only allowed in annotation templates",
                            t.pos);
    }
    if (!decls_.is_type(t.text)) throw UndeclaredIdentifierError(t.text, t.pos);
    return FTerm::atom(t.text);
  }

  void check_attr(const Token& t) const {
    if (t.text == "v")
      throw FTermParseError("metavariable 'v' cannot be used as an attribute", t.pos);
    if (!decls_.is_attr(t.text)) throw UndeclaredIdentifierError(t.text, t.pos);
  }

  std::vector<Token> toks_;
  const DeclTable& decls_;
  bool allow_meta_;
  std::size_t pos_ = 0;
};

}  // namespace

TermPtr parse_fterm(std::string_view text, const DeclTable& decls) {
  return TermParser(text, decls, /*allow_meta=*/false).run();
}

TermPtr parse_fterm_template(std::string_view text, const DeclTable& decls) {
  return TermParser(text, decls, /*allow_meta=*/true).run();
}

}  // namespace rlfg
