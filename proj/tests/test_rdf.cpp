#include <gtest/gtest.h>

#include "lodaudit/rdf.hpp"
#include "test_util.hpp"

using namespace lodaudit;

TEST(Rdf, TurtleBasics) {
    auto g = rdf::parse_turtle(R"(
@prefix ex: <http://example.org/> .
@prefix xl: <http://www.w3.org/2008/05/skos-xl#> .
ex:a a xl:Label ;
    xl:literalForm "slave"@en , "slaaf"@nl ;
    ex:weight 3 .
ex:b ex:note "multi\nline"@en-GB .
)");
    EXPECT_EQ(g.size(), 5u);
    auto forms = g.objects("http://example.org/a", std::string(rdf::vocab::xl_literal_form));
    ASSERT_EQ(forms.size(), 2u);
    EXPECT_EQ(forms[0]->value, "slave");
    EXPECT_EQ(forms[0]->lang, "en");
    auto note = g.literal("http://example.org/b", "http://example.org/note");
    ASSERT_NE(note, nullptr);
    EXPECT_EQ(note->value, "multi\nline");
    EXPECT_EQ(note->lang, "en-gb");
    auto labels = g.subjects_of_type("http://www.w3.org/2008/05/skos-xl#Label");
    ASSERT_EQ(labels.size(), 1u);
    EXPECT_EQ(labels[0], "http://example.org/a");
}

TEST(Rdf, NTriplesAndEscapes) {
    auto g = rdf::parse_turtle(
        "<http://x/s> <http://x/p> \"a \\\"quoted\\\" value\" .\n"
        "<http://x/s> <http://x/p2> \"tab\\there\"@en .\n"
        "_:b1 <http://x/p> <http://x/o> .\n");
    EXPECT_EQ(g.size(), 3u);
    auto lit = g.literal("http://x/s", "http://x/p");
    ASSERT_NE(lit, nullptr);
    EXPECT_EQ(lit->value, "a \"quoted\" value");
}

TEST(Rdf, LongStringsAndDatatypes) {
    auto g = rdf::parse_turtle(
        "@prefix ex: <http://e/> .\n"
        "ex:s ex:p \"\"\"two\nlines with \"quotes\" inside\"\"\" ;\n"
        "     ex:q \"42\"^^<http://www.w3.org/2001/XMLSchema#integer> .\n");
    auto v = g.literal("http://e/s", "http://e/p");
    ASSERT_NE(v, nullptr);
    EXPECT_EQ(v->value, "two\nlines with \"quotes\" inside");
    auto q = g.literal("http://e/s", "http://e/q");
    ASSERT_NE(q, nullptr);
    EXPECT_EQ(q->datatype, "http://www.w3.org/2001/XMLSchema#integer");
}

TEST(Rdf, PrefixedLocalNamesWithDots) {
    auto g = rdf::parse_turtle(
        "@prefix pwn: <http://wordnet-rdf.princeton.edu/id/> .\n"
        "@prefix ex: <http://e/> .\n"
        "ex:s ex:p pwn:disparagement.n.01 .\n");
    auto objs = g.objects("http://e/s", "http://e/p");
    ASSERT_EQ(objs.size(), 1u);
    EXPECT_EQ(objs[0]->value, "http://wordnet-rdf.princeton.edu/id/disparagement.n.01");
}

TEST(Rdf, AnonymousBlankNodes) {
    auto g = rdf::parse_turtle(
        "@prefix ex: <http://e/> .\n"
        "ex:s ex:p [ ex:q \"inner\" ] .\n");
    EXPECT_EQ(g.size(), 2u);
}

TEST(Rdf, ParseErrorsCarryLine) {
    try {
        rdf::parse_turtle("@prefix ex: <http://e/> .\nex:s ex:p \"unterminated .\n");
        FAIL() << "expected parse error";
    } catch (const AuditError& e) {
        EXPECT_EQ(e.code(), "rdf-parse");
    }
    EXPECT_THROW(rdf::parse_turtle("ex:s ex:p ex:o ."), AuditError);  // undeclared prefix
}

TEST(Rdf, CanonicalSerializationIsStableAndSorted) {
    auto g1 = rdf::parse_turtle("@prefix ex: <http://e/> . ex:b ex:p \"2\" . ex:a ex:p \"1\" .");
    auto g2 = rdf::parse_turtle("@prefix ex: <http://e/> . ex:a ex:p \"1\" . ex:b ex:p \"2\" .");
    EXPECT_EQ(rdf::to_canonical_ntriples(g1), rdf::to_canonical_ntriples(g2));
    auto round = rdf::parse_turtle(rdf::to_canonical_ntriples(g1));
    EXPECT_EQ(round.size(), 2u);
}

TEST(Rdf, ReferenceKgParses) {
    auto g = rdf::parse_turtle_file(testutil::repo_path("data/reference/terms_kg.ttl"));
    EXPECT_GT(g.size(), 600u);
    auto race = g.objects("https://example.org/contentious/label_en_race",
                          std::string(rdf::vocab::skos_related_match));
    bool found = false;
    for (auto* o : race)
        if (o->value == "http://www.wikidata.org/entity/Q3254959") found = true;
    EXPECT_TRUE(found);
}
