#include <gtest/gtest.h>

#include "lodaudit/lexicon.hpp"
#include "test_util.hpp"

using namespace lodaudit;

namespace {

TermLexicon load_reference() {
    return load_lexicon(testutil::repo_path("data/reference/terms_kg.ttl"),
                        testutil::repo_path("data/reference/inflections.csv"),
                        testutil::repo_path("data/reference/odwn_links.csv"));
}

}  // namespace

TEST(Lexicon, ReferenceFormCounts) {
    TermLexicon lex = load_reference();
    EXPECT_EQ(lex.form_count(Language::en), 154u);
    EXPECT_EQ(lex.form_count(Language::nl), 242u);
}

TEST(Lexicon, AboriginalPluralFolds) {
    TermLexicon lex = load_reference();
    const ContentiousTerm* t = lex.lookup_form(Language::en, "aboriginals");
    ASSERT_NE(t, nullptr);
    EXPECT_EQ(t->canonical_form, "aboriginal");
    EXPECT_TRUE(t->inflected_forms.count("aboriginal"));
    EXPECT_TRUE(t->inflected_forms.count("aboriginals"));
}

TEST(Lexicon, EmptyInflectionsGiveIdentityForms) {
    testutil::TempDir dir("lex");
    testutil::write_file(dir.file("kg.ttl"),
                         "@prefix xl: <http://www.w3.org/2008/05/skos-xl#> .\n"
                         "@prefix ex: <http://e/> .\n"
                         "ex:l1 a xl:Label ; xl:literalForm \"Slave\"@en .\n");
    testutil::write_file(dir.file("inf.csv"), "canonical,language,form\n");
    TermLexicon lex = load_lexicon(dir.file("kg.ttl"), dir.file("inf.csv"));
    const ContentiousTerm* t = lex.find(Language::en, "slave");
    ASSERT_NE(t, nullptr);
    EXPECT_EQ(t->inflected_forms, std::set<std::string>{"slave"});
    EXPECT_EQ(t->source_id, "http://e/l1");
}

TEST(Lexicon, FormCollisionAcrossTermsReportsBoth) {
    testutil::TempDir dir("lex");
    testutil::write_file(dir.file("kg.ttl"),
                         "@prefix xl: <http://www.w3.org/2008/05/skos-xl#> .\n"
                         "@prefix ex: <http://e/> .\n"
                         "ex:l1 a xl:Label ; xl:literalForm \"gypsy\"@en .\n"
                         "ex:l2 a xl:Label ; xl:literalForm \"roma\"@en .\n");
    testutil::write_file(dir.file("inf.csv"),
                         "canonical,language,form\ngypsy,en,travellers\nroma,en,travellers\n");
    try {
        load_lexicon(dir.file("kg.ttl"), dir.file("inf.csv"));
        FAIL() << "expected collision";
    } catch (const AuditError& e) {
        EXPECT_EQ(e.code(), "form-collision");
        std::string msg = e.what();
        EXPECT_NE(msg.find("gypsy"), std::string::npos);
        EXPECT_NE(msg.find("roma"), std::string::npos);
    }
}

TEST(Lexicon, UnknownLanguageTagFails) {
    testutil::TempDir dir("lex");
    testutil::write_file(dir.file("kg.ttl"),
                         "@prefix xl: <http://www.w3.org/2008/05/skos-xl#> .\n"
                         "@prefix ex: <http://e/> .\n"
                         "ex:l1 a xl:Label ; xl:literalForm \"terme\"@fr .\n");
    testutil::write_file(dir.file("inf.csv"), "canonical,language,form\n");
    EXPECT_THROW(load_lexicon(dir.file("kg.ttl"), dir.file("inf.csv")), AuditError);
}

TEST(Lexicon, RelatedResourcesRaceIncludesAttestedEntity) {
    TermLexicon lex = load_reference();
    auto refs = related_resources(lex, "race", Language::en, Dataset::wikidata);
    bool found = false;
    for (const auto& r : refs)
        if (r.resource_id == "Q3254959") found = true;
    EXPECT_TRUE(found);
}

TEST(Lexicon, TermWithoutRelatedResourcesYieldsEmptyList) {
    TermLexicon lex = load_reference();
    EXPECT_TRUE(related_resources(lex, "baboo", Language::en).empty());
    EXPECT_TRUE(related_resources(lex, "roots", Language::nl).empty());
}

TEST(Lexicon, UnknownTermErrors) {
    TermLexicon lex = load_reference();
    try {
        related_resources(lex, "xyzzy", Language::en);
        FAIL() << "expected unknown-term";
    } catch (const AuditError& e) {
        EXPECT_EQ(e.code(), "unknown-term");
    }
}

TEST(Lexicon, RelatedResourcesSortedAndFiltered) {
    TermLexicon lex = load_reference();
    auto all = related_resources(lex, "eskimo", Language::en);
    auto aat_only = related_resources(lex, "eskimo", Language::en, Dataset::aat);
    EXPECT_EQ(aat_only.size(), 2u);  // two curated AAT concepts
    EXPECT_LE(aat_only.size(), all.size());
    for (std::size_t i = 1; i < all.size(); ++i)
        EXPECT_LE(all[i - 1].resource_id, all[i].resource_id);
}

TEST(Lexicon, FormIndexRoundTrip) {
    TermLexicon lex = load_reference();
    for (Language lang : {Language::en, Language::nl}) {
        for (const auto& f : lex.forms(lang)) {
            const ContentiousTerm* t = lex.lookup_form(lang, f);
            ASSERT_NE(t, nullptr) << f;
            EXPECT_TRUE(t->inflected_forms.count(f)) << f;
        }
    }
}

TEST(Lexicon, OdwnLinkTableHas65Rows) {
    auto rows = csv::read_with_header(testutil::repo_path("data/reference/odwn_links.csv"),
                                      {"canonical", "language", "resource_id"});
    EXPECT_EQ(rows.size(), 65u);
}

TEST(Lexicon, LoadingIsDeterministic) {
    TermLexicon a = load_reference();
    TermLexicon b = load_reference();
    EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
}

TEST(Lexicon, JsonSnapshotRoundTrip) {
    TermLexicon a = load_reference();
    TermLexicon b = TermLexicon::from_json(a.to_json());
    EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
    EXPECT_EQ(b.form_count(Language::en), 154u);
}

TEST(Lexicon, SuggestionsLoaded) {
    TermLexicon lex = load_reference();
    const ContentiousTerm* berber = lex.find(Language::en, "berber");
    ASSERT_NE(berber, nullptr);
    EXPECT_EQ(berber->suggestions, (std::vector<std::string>{"Amazigh", "Imazighen"}));
}
