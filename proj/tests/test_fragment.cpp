#include <doctest.h>

#include "core/fragment.hpp"
#include "core/sqlparse.hpp"

using namespace fragmap;

TEST_CASE("fragment extraction covers projections, relations, and predicates") {
  auto q = parse_query("SELECT table1.a FROM table1, table2 WHERE table1.b = 15");
  auto frags = extract_fragments(q);
  REQUIRE(frags.size() == 4);
  CHECK(frags[0].context == FragmentContext::Select);
  CHECK(frags[0].expression == "table1.a");
  CHECK(frags[1].context == FragmentContext::From);
  CHECK(frags[1].expression == "table1");
  CHECK(frags[2].context == FragmentContext::From);
  CHECK(frags[2].expression == "table2");
  CHECK(frags[3].context == FragmentContext::Where);
  CHECK(frags[3].expression == "table1.b = 15");
}

TEST_CASE("join conditions never become fragments") {
  auto q = parse_query(
      "SELECT a.name FROM author a, writes w WHERE a.aid = w.aid AND a.name = 'X'");
  auto frags = extract_fragments(q);
  REQUIRE(frags.size() == 4);
  CHECK(frags[3].expression == "author.name = 'X'");
}

TEST_CASE("masking literals and operators") {
  QueryFragment f{"publication.year > 2000", FragmentContext::Where,
                  ObscurityLevel::Full};
  auto noconst = obscure(f, ObscurityLevel::NoConst);
  CHECK(noconst.expression == "publication.year > ?val");
  CHECK(noconst.obscurity == ObscurityLevel::NoConst);
  auto noconstop = obscure(f, ObscurityLevel::NoConstOp);
  CHECK(noconstop.expression == "publication.year ?op ?val");
  // masking an already-masked fragment is a no-op at the same level
  CHECK(obscure(noconst, ObscurityLevel::NoConst).expression ==
        noconst.expression);
  CHECK(obscure(noconstop, ObscurityLevel::NoConstOp).expression ==
        noconstop.expression);
  // and masking further only ever masks more
  CHECK(obscure(noconst, ObscurityLevel::NoConstOp).expression ==
        "publication.year ?op ?val");
}

TEST_CASE("projection and relation fragments are unchanged by masking") {
  QueryFragment sel{"publication.title", FragmentContext::Select,
                    ObscurityLevel::Full};
  QueryFragment rel{"publication", FragmentContext::From, ObscurityLevel::Full};
  CHECK(obscure(sel, ObscurityLevel::NoConstOp).expression == "publication.title");
  CHECK(obscure(rel, ObscurityLevel::NoConstOp).expression == "publication");
}

TEST_CASE("string literals mask like numeric ones") {
  QueryFragment f{"journal.name = 'VLDB Journal'", FragmentContext::Where,
                  ObscurityLevel::Full};
  CHECK(obscure(f, ObscurityLevel::NoConst).expression == "journal.name = ?val");
  CHECK(obscure(f, ObscurityLevel::NoConstOp).expression ==
        "journal.name ?op ?val");
}

TEST_CASE("fragments order by context then expression") {
  QueryFragment a{"b", FragmentContext::Select, ObscurityLevel::Full};
  QueryFragment b{"a", FragmentContext::From, ObscurityLevel::Full};
  QueryFragment c{"a", FragmentContext::Select, ObscurityLevel::Full};
  CHECK(c < a);
  CHECK(a < b);
  CHECK(a == a);
}

TEST_CASE("context and level names round-trip") {
  for (auto ctx : {FragmentContext::Select, FragmentContext::From,
                   FragmentContext::Where}) {
    FragmentContext parsed;
    REQUIRE(parse_context(context_name(ctx), &parsed));
    CHECK(parsed == ctx);
  }
  for (auto lvl : {ObscurityLevel::Full, ObscurityLevel::NoConst,
                   ObscurityLevel::NoConstOp}) {
    ObscurityLevel parsed;
    REQUIRE(parse_obscurity(obscurity_name(lvl), &parsed));
    CHECK(parsed == lvl);
  }
  FragmentContext ctx;
  CHECK_FALSE(parse_context("bogus", &ctx));
  ObscurityLevel lvl;
  CHECK_FALSE(parse_obscurity("bogus", &lvl));
}
