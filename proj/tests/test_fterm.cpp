#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "rlfg/fterm.hpp"
#include "testutil.hpp"

using namespace rlfg;
using testutil::gen_term;
using testutil::test_decls;

TEST_CASE("parse builds the expected structure") {
  DeclTable d = test_decls();

  TermPtr t = parse_fterm("SUBJ(NOM, NOM -o e)", d);
  REQUIRE(t->kind() == TermKind::Embed);
  CHECK(t->name() == "SUBJ");
  const TermPtr& body = t->body();
  REQUIRE(body->kind() == TermKind::Multiset);
  REQUIRE(body->children().size() == 2);
  CHECK(body->children()[0]->kind() == TermKind::Atom);
  CHECK(body->children()[0]->name() == "NOM");
  CHECK(body->children()[1]->kind() == TermKind::Limp);
  CHECK(body->children()[1]->antecedent()->name() == "NOM");
  CHECK(body->children()[1]->consequent()->name() == "e");
}

TEST_CASE("implication binds looser than embedding") {
  DeclTable d = test_decls();

  TermPtr chain = parse_fterm("SUBJ e -o t", d);
  REQUIRE(chain->kind() == TermKind::Limp);
  CHECK(chain->antecedent()->kind() == TermKind::Embed);
  CHECK(chain->consequent()->name() == "t");

  TermPtr grouped = parse_fterm("SUBJ (e -o t)", d);
  REQUIRE(grouped->kind() == TermKind::Embed);
  CHECK(grouped->body()->kind() == TermKind::Limp);

  // right-associative
  TermPtr nested = parse_fterm("OBJ e -o SUBJ e -o t", d);
  REQUIRE(nested->kind() == TermKind::Limp);
  CHECK(nested->consequent()->kind() == TermKind::Limp);
  CHECK(serialize(nested) == "OBJ e -o SUBJ e -o t");
}

TEST_CASE("optional and path-equation elements") {
  DeclTable d = test_decls();

  TermPtr o = parse_fterm("(NOM)?", d);
  REQUIRE(o->kind() == TermKind::Opt);
  CHECK(o->body()->name() == "NOM");

  TermPtr under = parse_fterm("SUBJ(NOM)?", d);
  REQUIRE(under->kind() == TermKind::Embed);
  CHECK(under->body()->kind() == TermKind::Opt);
  CHECK(serialize(under) == "SUBJ(NOM)?");

  TermPtr eq = parse_fterm("SUBJ = XCOMP SUBJ", d);
  REQUIRE(eq->kind() == TermKind::PathEq);
  CHECK(eq->path_src() == std::vector<std::string>{"SUBJ"});
  CHECK((eq->path_dst() == std::vector<std::string>{"XCOMP", "SUBJ"}));
  CHECK(serialize(eq) == "SUBJ = XCOMP SUBJ");

  TermPtr entry = parse_fterm("XCOMP t -o t, SUBJ = XCOMP SUBJ", d);
  REQUIRE(entry->kind() == TermKind::Multiset);
  CHECK(entry->children()[0]->kind() == TermKind::Limp);
  CHECK(entry->children()[1]->kind() == TermKind::PathEq);
}

TEST_CASE("hyphenated identifiers coexist with the -o operator") {
  DeclTable d = test_decls();
  TermPtr t = parse_fterm("HISTORICAL-ORIGIN ROMANCE", d);
  REQUIRE(t->kind() == TermKind::Embed);
  CHECK(t->name() == "HISTORICAL-ORIGIN");
  CHECK(t->body()->name() == "ROMANCE");

  // no space needed before the operator
  TermPtr l = parse_fterm("NOM-o e", d);
  REQUIRE(l->kind() == TermKind::Limp);
  CHECK(l->antecedent()->name() == "NOM");
}

TEST_CASE("canonical form sorts, flattens and collapses") {
  DeclTable d = test_decls();

  // atoms before embeds before implications
  CHECK(serialize(parse_fterm("SUBJ e -o t, NOM, SUBJ(NOM)", d)) ==
        "NOM, SUBJ NOM, SUBJ e -o t");

  // spec ordering of the sentence configuration
  CHECK(serialize(parse_fterm("SUBJ e -o t, SUBJ(NOM, NOM -o e)", d)) ==
        "SUBJ(NOM, NOM -o e), SUBJ e -o t");

  TermPtr collapsed = canonicalize(FTerm::multiset({FTerm::atom("NOM")}));
  CHECK(collapsed->kind() == TermKind::Atom);

  TermPtr flat = canonicalize(FTerm::multiset(
      {FTerm::atom("e"),
       FTerm::multiset({FTerm::atom("e"), FTerm::atom("NOM")})}));
  CHECK(serialize(flat) == "NOM, e, e");

  CHECK(serialize(parse_fterm("()", d)) == "()");
  CHECK(serialize(parse_fterm("( )", d)) == "()");
}

TEST_CASE("equality respects multiplicity, not order") {
  DeclTable d = test_decls();
  CHECK(equal(parse_fterm("NOM, e", d), parse_fterm("e, NOM", d)));
  CHECK_FALSE(equal(parse_fterm("e, e", d), parse_fterm("e", d)));
  CHECK_FALSE(equal(parse_fterm("()", d), parse_fterm("t", d)));
  CHECK(equal(parse_fterm("SUBJ(NOM, e)", d), parse_fterm("SUBJ(e, NOM)", d)));
}

TEST_CASE("parse errors carry positions and identifiers") {
  DeclTable d = test_decls();
  CHECK_THROWS_AS(parse_fterm("SUBJ(NOM,", d), FTermParseError);
  CHECK_THROWS_AS(parse_fterm("", d), FTermParseError);
  CHECK_THROWS_AS(parse_fterm("NOM NOM", d), UndeclaredIdentifierError);  // NOM is not an attribute

  try {
    parse_fterm("SUBJ(NOM, UNKNOWN)", d);
    FAIL("expected an undeclared-identifier error");
  } catch (const UndeclaredIdentifierError& e) {
    CHECK(e.identifier() == "UNKNOWN");
  }

  // the metavariable needs template parsing
  CHECK_THROWS_AS(parse_fterm("SUBJ(NOM, v)", d), FTermParseError);
  CHECK_NOTHROW(parse_fterm_template("SUBJ(NOM, v)", d));
}

TEST_CASE("metavariable substitution") {
  DeclTable d = test_decls();
  TermPtr tmpl = parse_fterm_template("SUBJ(NOM, v)", d);
  CHECK(contains_meta(tmpl));
  TermPtr inst = substitute_meta(tmpl, parse_fterm("NOM -o e", d));
  CHECK_FALSE(contains_meta(inst));
  CHECK(serialize(inst) == "SUBJ(NOM, NOM -o e)");

  // splicing: a multiset value merges into the surrounding bag
  TermPtr spliced = substitute_meta(parse_fterm_template("e, v", d),
                                    parse_fterm("NOM, ACC", d));
  CHECK(serialize(spliced) == "ACC, NOM, e");
}

TEST_CASE("canonicalize is idempotent and serialization round-trips" *
          doctest::description("property, 300 random terms")) {
  DeclTable d = test_decls();
  std::mt19937_64 rng(20240901);
  for (int i = 0; i < 300; ++i) {
    TermPtr raw = gen_term(rng, 4);
    TermPtr canon = canonicalize(raw);
    CAPTURE(serialize(raw));
    CHECK(is_canonical(canon));
    CHECK(serialize(canonicalize(canon)) == serialize(canon));
    // the raw term and its canonical form are the same term
    CHECK(equal(raw, canon));
    // concrete syntax round-trips
    TermPtr reparsed = parse_fterm(serialize(canon), d);
    CHECK(serialize(reparsed) == serialize(canon));
  }
}
