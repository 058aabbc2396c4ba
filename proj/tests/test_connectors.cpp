#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>

#include "lodaudit/connectors/aat.hpp"
#include "lodaudit/connectors/http.hpp"
#include "lodaudit/connectors/httplib_transport.hpp"
#include "lodaudit/connectors/odwn.hpp"
#include "lodaudit/connectors/pwn.hpp"
#include "lodaudit/connectors/wikidata.hpp"
#include "fixture_servers.hpp"
#include "test_util.hpp"

using namespace lodaudit;

namespace {

net::CachingFetcher online_fetcher(const std::string& cache_dir, double rate = 500.0) {
    return net::CachingFetcher(std::make_shared<net::HttplibTransport>(), cache_dir, rate,
                               /*max_attempts=*/2, std::chrono::milliseconds(10));
}

net::CachingFetcher offline_fetcher(const std::string& cache_dir) {
    return net::CachingFetcher(nullptr, cache_dir);
}

}  // namespace

TEST(Http, UrlSplit) {
    auto p = net::split_url("http://example.org:8080/w/api.php?x=1");
    EXPECT_EQ(p.host, "example.org");
    EXPECT_EQ(p.port, 8080);
    EXPECT_EQ(p.target, "/w/api.php?x=1");
    auto q = net::split_url("http://example.org");
    EXPECT_EQ(q.port, 80);
    EXPECT_EQ(q.target, "/");
    EXPECT_THROW(net::split_url("not a url"), AuditError);
}

TEST(Http, RateLimiterSpacesRequests) {
    net::RateLimiter limiter(50.0);  // burst capacity ~50, so drain it first
    for (int i = 0; i < 50; ++i) limiter.acquire("host");
    auto t0 = std::chrono::steady_clock::now();
    limiter.acquire("host");
    limiter.acquire("host");
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_GT(elapsed, 0.025);  // two forced waits at 20ms spacing
    // distinct hosts do not share a bucket
    auto t1 = std::chrono::steady_clock::now();
    limiter.acquire("other-host");
    double other = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
    EXPECT_LT(other, 0.015);
}

TEST(Http, CacheMissOfflineFails) {
    testutil::TempDir dir("cache");
    auto fetcher = offline_fetcher(dir.str());
    net::HttpRequest req;
    req.url = "http://127.0.0.1:1/unreachable";
    try {
        fetcher.fetch(req);
        FAIL() << "expected offline-cache-miss";
    } catch (const AuditError& e) {
        EXPECT_EQ(e.code(), "offline-cache-miss");
    }
}

TEST(Http, ResponsesCachedAndReplayed) {
    testutil::LocalServer server;
    std::atomic<int> hits{0};
    server.server().Get("/data", [&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.set_content("payload-123", "text/plain");
    });
    server.start();
    testutil::TempDir dir("cache");
    net::HttpRequest req;
    req.url = server.base_url() + "/data";
    {
        auto fetcher = online_fetcher(dir.str());
        EXPECT_EQ(fetcher.fetch(req).body, "payload-123");
        EXPECT_EQ(fetcher.fetch(req).body, "payload-123");  // second hit from cache
    }
    EXPECT_EQ(hits.load(), 1);
    server.stop();
    auto replay = offline_fetcher(dir.str());
    EXPECT_EQ(replay.fetch(req).body, "payload-123");
}

TEST(Http, RetriesThenFails) {
    testutil::LocalServer server;
    std::atomic<int> hits{0};
    server.server().Get("/flaky", [&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 503;
    });
    server.start();
    testutil::TempDir dir("cache");
    auto fetcher = online_fetcher(dir.str());
    net::HttpRequest req;
    req.url = server.base_url() + "/flaky";
    try {
        fetcher.fetch(req);
        FAIL() << "expected network error";
    } catch (const AuditError& e) {
        EXPECT_EQ(e.code(), "network");
        std::string msg = e.what();
        EXPECT_NE(msg.find("/flaky"), std::string::npos);  // request context surfaced
    }
    EXPECT_EQ(hits.load(), 2);  // max_attempts
}

TEST(Wikidata, SearchCapsAtTenThousandTopRanked) {
    testutil::LocalServer server;
    testutil::FakeWikidataApi api;
    std::vector<std::string> ranked;
    for (int i = 1; i <= 10500; ++i) ranked.push_back("Q" + std::to_string(i));
    api.search_results["colored"] = ranked;
    for (const auto& id : ranked) {
        testutil::FakeEntity e;
        e.id = id;
        e.labels["en"] = "entity " + id;
        api.entities[id] = e;
    }
    api.mount(server.server());
    server.start();
    testutil::TempDir dir("cache");
    auto fetcher = online_fetcher(dir.str(), 100000.0);
    auto records = search_wikidata(fetcher, server.base_url() + "/w/api.php", "colored", 10000);
    ASSERT_EQ(records.size(), 10000u);
    EXPECT_EQ(records.front().entity_id, "Q1");
    EXPECT_EQ(records.back().entity_id, "Q10000");
    for (std::size_t i = 1; i < records.size(); ++i)
        EXPECT_GT(records[i - 1].incoming_link_rank, records[i].incoming_link_rank);
    EXPECT_THROW(search_wikidata(fetcher, server.base_url() + "/w/api.php", "colored", 10001),
                 AuditError);

    // replay from cache with networking disabled: identical list
    server.stop();
    auto replay = offline_fetcher(dir.str());
    auto records2 = search_wikidata(replay, server.base_url() + "/w/api.php", "colored", 10000);
    EXPECT_EQ(records, records2);
}

TEST(Wikidata, MalformedPayloadSurfaces) {
    testutil::LocalServer server;
    server.server().Get("/w/api.php", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("<html>not json</html>", "text/html");
    });
    server.start();
    testutil::TempDir dir("cache");
    auto fetcher = online_fetcher(dir.str());
    try {
        search_wikidata(fetcher, server.base_url() + "/w/api.php", "x", 10);
        FAIL() << "expected malformed-response";
    } catch (const AuditError& e) {
        EXPECT_EQ(e.code(), "malformed-response");
    }
}

TEST(Aat, LiteralWithoutLanguageTagSkipped) {
    auto g = rdf::parse_turtle(
        "@prefix xl: <http://www.w3.org/2008/05/skos-xl#> .\n"
        "@prefix aat: <http://vocab.getty.edu/aat/> .\n"
        "aat:c xl:prefLabel aat:l1 .\n"
        "aat:l1 xl:literalForm \"untagged label\" .\n"
        "aat:c xl:altLabel aat:l2 .\n"
        "aat:l2 xl:literalForm \"tagged\"@en .\n");
    std::vector<std::string> skipped;
    auto literals = extract_aat_literals(g, Language::en, &skipped);
    ASSERT_EQ(literals.size(), 1u);
    EXPECT_EQ(literals[0].text, "tagged");
    ASSERT_EQ(skipped.size(), 1u);
    EXPECT_EQ(skipped[0], "http://vocab.getty.edu/aat/l1");
}

TEST(Wikidata, EmptySearch) {
    testutil::LocalServer server;
    testutil::FakeWikidataApi api;
    api.search_results["nothing"] = {};
    api.mount(server.server());
    server.start();
    testutil::TempDir dir("cache");
    auto fetcher = online_fetcher(dir.str());
    EXPECT_TRUE(
        search_wikidata(fetcher, server.base_url() + "/w/api.php", "nothing", 1000).empty());
}

TEST(Wikidata, EntityHydrationParsesLabelsAliasesClaims) {
    testutil::LocalServer server;
    testutil::FakeWikidataApi api;
    testutil::FakeEntity e;
    e.id = "Q45315";
    e.labels["en"] = "Berbers";
    e.labels["nl"] = "Berbers";
    e.aliases["en"] = {"Berber", "Amazigh", "Imazighen"};
    e.descriptions["en"] = "ethnic group indigenous to North Africa";
    e.p31 = {"Q41710"};
    e.p2559 = {"check local naming guidance"};
    api.search_results["berber"] = {"Q45315"};
    api.entities["Q45315"] = e;
    api.mount(server.server());
    server.start();
    testutil::TempDir dir("cache");
    auto fetcher = online_fetcher(dir.str());
    auto records = search_wikidata(fetcher, server.base_url() + "/w/api.php", "berber", 100);
    ASSERT_EQ(records.size(), 1u);
    EXPECT_EQ(records[0].preferred_label.at("en"), "Berbers");
    EXPECT_EQ(records[0].alternative_labels.at("en").size(), 3u);
    EXPECT_EQ(records[0].instance_of, std::vector<std::string>{"Q41710"});
    EXPECT_EQ(records[0].usage_instructions,
              std::vector<std::string>{"check local naming guidance"});

    auto literals = extract_wikidata_literals(records);
    // en: pref + 3 aliases + description; nl: pref
    EXPECT_EQ(literals.size(), 6u);
}

TEST(Wikidata, FilterFixtureRetainsHandListedSurvivors) {
    nlohmann::json doc = nlohmann::json::parse(
        csv::read_file(testutil::repo_path("tests/fixtures/wikidata_filter_fixture.json")));
    std::vector<WikidataEntityRecord> records;
    for (const auto& rj : doc["records"]) records.push_back(wikidata_record_from_json(rj));
    ASSERT_EQ(records.size(), 20u);
    std::set<std::string> excluded = {"Q13442814", "Q16521"};
    auto kept = filter_wikidata(records, excluded, doc["term_form"].get<std::string>());
    std::vector<std::string> kept_ids;
    for (const auto& r : kept) kept_ids.push_back(r.entity_id);
    EXPECT_EQ(kept_ids, doc["expected_survivors"].get<std::vector<std::string>>());
    // idempotent and monotone
    auto again = filter_wikidata(kept, excluded, doc["term_form"].get<std::string>());
    EXPECT_EQ(again.size(), kept.size());
}

TEST(Wikidata, FilterRequiresMandatoryCategories) {
    EXPECT_THROW(filter_wikidata({}, {"Q13442814"}, "black"), AuditError);
}

TEST(Wikidata, DescriptionFilterLanguagesConfigurable) {
    WikidataEntityRecord rec;
    rec.entity_id = "Q1";
    rec.descriptions["nl"] = "vertaling van een scholarly article";
    std::set<std::string> excluded = {"Q13442814", "Q16521"};
    // shipped default scans English descriptions only
    EXPECT_EQ(filter_wikidata({rec}, excluded, "black").size(), 1u);
    EXPECT_EQ(filter_wikidata({rec}, excluded, "black", {"en", "nl"}).size(), 0u);
}

TEST(Wikidata, PassThroughEntityRetained) {
    WikidataEntityRecord plain;
    plain.entity_id = "Q1";
    plain.preferred_label["en"] = "black paint";
    plain.descriptions["en"] = "a kind of paint";
    auto kept = filter_wikidata({plain}, {"Q13442814", "Q16521"}, "black");
    EXPECT_EQ(kept.size(), 1u);
}

TEST(Aat, SubgraphBuildCountAndIdempotence) {
    testutil::LocalServer server;
    testutil::FakeSparqlEndpoint sparql;
    sparql.pages["aat-prefLabel-literalForm"] = {
        "<http://vocab.getty.edu/aat/300016430> <http://www.w3.org/2008/05/skos-xl#prefLabel> <http://vocab.getty.edu/aat/term/1> .",
        "<http://vocab.getty.edu/aat/term/1> <http://www.w3.org/2008/05/skos-xl#literalForm> \"Pygmy (African culture or style)\"@en .",
        "<http://vocab.getty.edu/aat/300017447> <http://www.w3.org/2008/05/skos-xl#prefLabel> <http://vocab.getty.edu/aat/term/2> .",
        "<http://vocab.getty.edu/aat/term/2> <http://www.w3.org/2008/05/skos-xl#literalForm> \"Eskimo (culture or style)\"@en .",
        "<http://vocab.getty.edu/aat/300230899> <http://www.w3.org/2008/05/skos-xl#prefLabel> <http://vocab.getty.edu/aat/term/3> .",
        "<http://vocab.getty.edu/aat/term/3> <http://www.w3.org/2008/05/skos-xl#literalForm> \"slaves\"@en .",
        "<http://vocab.getty.edu/aat/term/3> <http://vocab.getty.edu/ontology#termKind> \"Pejorative\" .",
    };
    sparql.pages["aat-scopeNote-value"] = {
        "<http://vocab.getty.edu/aat/300016430> <http://www.w3.org/2004/02/skos/core#scopeNote> <http://vocab.getty.edu/aat/note/1> .",
        "<http://vocab.getty.edu/aat/note/1> <http://www.w3.org/1999/02/22-rdf-syntax-ns#value> \"Use of \\\"Pygmy\\\" for a culture is considered pejorative\"@en .",
    };
    sparql.mount(server.server());
    server.start();
    testutil::TempDir dir("aat");
    auto fetcher = online_fetcher(dir.str());
    std::size_t n = build_aat_subgraph(fetcher, server.base_url() + "/sparql", Language::en,
                                       dir.file("aat_en.nt"), 100);
    EXPECT_EQ(n, 9u);
    // independent count: parse the emitted file again
    auto reparsed = rdf::parse_turtle_file(dir.file("aat_en.nt"));
    EXPECT_EQ(reparsed.size(), 9u);
    std::string first = csv::read_file(dir.file("aat_en.nt"));

    // re-run on the unchanged fixture: identical bytes (cache replays)
    std::size_t n2 = build_aat_subgraph(fetcher, server.base_url() + "/sparql", Language::en,
                                        dir.file("aat_en.nt"), 100);
    EXPECT_EQ(n2, n);
    EXPECT_EQ(csv::read_file(dir.file("aat_en.nt")), first);

    auto literals = extract_aat_literals(reparsed, Language::en);
    EXPECT_EQ(literals.size(), 4u);  // 3 pref labels + 1 scope note
    auto props = collect_aat_properties(reparsed, Language::en);
    ASSERT_EQ(props.size(), 1u);
    EXPECT_EQ(props[0].entries.front().second, "Pejorative");
}

TEST(Aat, EmptyEndpointGivesEmptyValidFile) {
    testutil::LocalServer server;
    testutil::FakeSparqlEndpoint sparql;
    sparql.mount(server.server());
    server.start();
    testutil::TempDir dir("aat");
    auto fetcher = online_fetcher(dir.str());
    std::size_t n = build_aat_subgraph(fetcher, server.base_url() + "/sparql", Language::nl,
                                       dir.file("aat_nl.nt"), 100);
    EXPECT_EQ(n, 0u);
    EXPECT_EQ(csv::read_file(dir.file("aat_nl.nt")), "");
    EXPECT_EQ(rdf::parse_turtle_file(dir.file("aat_nl.nt")).size(), 0u);
}

TEST(Aat, PagingWalksAllPagesAndDetectsDuplicates) {
    testutil::LocalServer server;
    testutil::FakeSparqlEndpoint sparql;
    for (int i = 0; i < 25; ++i)
        sparql.pages["aat-prefLabel-literalForm"].push_back(
            "<http://vocab.getty.edu/aat/3009" + std::to_string(1000 + i) +
            "> <http://www.w3.org/2008/05/skos-xl#prefLabel> <http://vocab.getty.edu/aat/t/" +
            std::to_string(i) + "> .");
    sparql.mount(server.server());
    server.start();
    testutil::TempDir dir("aat");
    auto fetcher = online_fetcher(dir.str());
    std::size_t n = build_aat_subgraph(fetcher, server.base_url() + "/sparql", Language::en,
                                       dir.file("aat.nt"), 10);
    EXPECT_EQ(n, 25u);

    // a shifting endpoint that repeats a triple across pages must fail
    testutil::LocalServer server2;
    testutil::FakeSparqlEndpoint broken;
    for (int i = 0; i < 12; ++i)
        broken.pages["aat-prefLabel-literalForm"].push_back(
            "<http://vocab.getty.edu/aat/1> <http://www.w3.org/2008/05/skos-xl#prefLabel> "
            "<http://vocab.getty.edu/aat/t/dup> .");
    broken.mount(server2.server());
    server2.start();
    testutil::TempDir dir2("aat");
    auto fetcher2 = online_fetcher(dir2.str());
    try {
        build_aat_subgraph(fetcher2, server2.base_url() + "/sparql", Language::en,
                           dir2.file("aat.nt"), 10);
        FAIL() << "expected page-boundary error";
    } catch (const AuditError& e) {
        EXPECT_EQ(e.code(), "page-boundary");
    }
}

TEST(Aat, TwoAltLabelsTwoLiterals) {
    auto g = rdf::parse_turtle(
        "@prefix xl: <http://www.w3.org/2008/05/skos-xl#> .\n"
        "@prefix aat: <http://vocab.getty.edu/aat/> .\n"
        "aat:c xl:altLabel aat:l1 , aat:l2 .\n"
        "aat:l1 xl:literalForm \"slave owner\"@en .\n"
        "aat:l2 xl:literalForm \"slave master\"@en .\n");
    auto literals = extract_aat_literals(g, Language::en);
    ASSERT_EQ(literals.size(), 2u);
    for (const auto& l : literals) {
        EXPECT_EQ(l.property_path.path_id, PathId::aat_alt_literal_form);
        EXPECT_EQ(l.resource.resource_id, "http://vocab.getty.edu/aat/c");
    }
}

TEST(Pwn, DefinitionSplitsIntoDefinitionAndExamples) {
    PwnDefinition d = split_pwn_definition("relating to X; \"the X roamed\"");
    EXPECT_EQ(d.definition, "relating to X");
    ASSERT_EQ(d.examples.size(), 1u);
    EXPECT_EQ(d.examples[0], "the X roamed");

    PwnDefinition two = split_pwn_definition("gloss; \"one\"; \"two\"");
    EXPECT_EQ(two.definition, "gloss");
    EXPECT_EQ(two.examples, (std::vector<std::string>{"one", "two"}));

    PwnDefinition none = split_pwn_definition("just a definition");
    EXPECT_EQ(none.definition, "just a definition");
    EXPECT_TRUE(none.examples.empty());
}

TEST(Pwn, FixtureExtraction) {
    PwnDatabase db = PwnDatabase::parse_file(testutil::repo_path("tests/fixtures/pwn_fixture.ttl"));
    auto literals = db.extract_literals();
    std::map<PathId, int> per_path;
    for (const auto& l : literals) per_path[l.property_path.path_id]++;
    EXPECT_EQ(per_path[PathId::pwn_written_rep], 8);
    EXPECT_EQ(per_path[PathId::pwn_definition], 10);
    EXPECT_EQ(per_path[PathId::pwn_example], 3);
    bool roam_example = false;
    for (const auto& l : literals)
        if (l.property_path.path_id == PathId::pwn_example &&
            l.text == "The gypsies roamed the woods")
            roam_example = true;
    EXPECT_TRUE(roam_example);

    auto props = db.collect_properties();
    bool disparagement = false;
    for (const auto& p : props)
        for (const auto& [k, v] : p.entries)
            if (k == "usage_domain" && v == "disparagement.n.01") disparagement = true;
    EXPECT_TRUE(disparagement);
}

TEST(Odwn, FixtureExtractionCounts) {
    OdwnDatabase db =
        OdwnDatabase::parse_file(testutil::repo_path("tests/fixtures/odwn_fixture.xml"));
    // the neger-n-1 entry: 1 lemma + 2 sense definitions + 1 example = 4 literals
    auto literals = db.extract_literals();
    int neger_count = 0;
    for (const auto& l : literals)
        if (l.resource.resource_id == "neger-n-1") ++neger_count;
    EXPECT_EQ(neger_count, 4);
    // English entries are ignored entirely
    for (const auto& l : literals) EXPECT_NE(l.resource.resource_id, "ignored-en-1");
    // synset glosses are their own resources
    bool gloss = false;
    for (const auto& l : literals)
        if (l.property_path.path_id == PathId::odwn_synset_definition_gloss &&
            l.resource.resource_id == "eng-30-10154186-n")
            gloss = true;
    EXPECT_TRUE(gloss);
    // textualForm and canonicalForm example children are both emitted
    std::vector<std::string> zigeuner_examples;
    for (const auto& l : literals)
        if (l.resource.resource_id == "zigeuner-n-1" &&
            l.property_path.path_id == PathId::odwn_sense_example)
            zigeuner_examples.push_back(l.text);
    EXPECT_EQ(zigeuner_examples, (std::vector<std::string>{"er uitzien als een zigeuner",
                                                           "als een zigeuner uitzien"}));
}

TEST(Odwn, PragmaticsAndSynsetInfo) {
    OdwnDatabase db =
        OdwnDatabase::parse_file(testutil::repo_path("tests/fixtures/odwn_fixture.xml"));
    auto props = db.collect_properties();
    bool pejorative = false;
    for (const auto& p : props)
        if (p.resource.resource_id == "flikker-n-1")
            for (const auto& [k, v] : p.entries)
                if (k == "Pragmatics.connotation" && v == "pejorative") pejorative = true;
    EXPECT_TRUE(pejorative);
    // empty attribute values are not emitted
    for (const auto& p : props)
        for (const auto& [k, v] : p.entries) EXPECT_FALSE(v.empty());

    auto synsets = db.synsets_of_entry("zigeuner-n-1");
    ASSERT_EQ(synsets.size(), 1u);
    EXPECT_EQ(synsets[0].gloss, "zigeuner die tot een rondtrekkend volk behoort");
    EXPECT_EQ(synsets[0].lemma_forms, std::vector<std::string>{"zigeuner"});
}

TEST(CacheFidelity, OfflineReplayMatchesNetworkedRun) {
    testutil::LocalServer server;
    testutil::FakeWikidataApi api;
    api.search_results["gypsy"] = {"Q201", "Q202"};
    for (const auto& id : api.search_results["gypsy"]) {
        testutil::FakeEntity e;
        e.id = id;
        e.labels["en"] = "gypsy thing " + id;
        e.descriptions["en"] = "about " + id;
        api.entities[id] = e;
    }
    api.mount(server.server());
    server.start();
    testutil::TempDir dir("cache");
    std::string api_base = server.base_url() + "/w/api.php";
    std::vector<RetrievedLiteral> first;
    {
        auto fetcher = online_fetcher(dir.str());
        first = extract_wikidata_literals(search_wikidata(fetcher, api_base, "gypsy", 100));
    }
    server.stop();
    auto replay = offline_fetcher(dir.str());
    auto second = extract_wikidata_literals(search_wikidata(replay, api_base, "gypsy", 100));
    EXPECT_EQ(first, second);
}
