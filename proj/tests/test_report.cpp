#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "lodaudit/connectors/httplib_transport.hpp"
#include "lodaudit/pipeline.hpp"
#include "lodaudit/report.hpp"
#include "fixture_servers.hpp"
#include "test_util.hpp"

using namespace lodaudit;

namespace {

// A complete fixture world: wikidata API + SPARQL endpoint from the e2e
// fixture files, plus a config pointing at the shipped reference data.
struct E2eWorld {
    testutil::LocalServer server;
    testutil::FakeWikidataApi api;
    testutil::FakeSparqlEndpoint sparql;
    std::string config_path;

    void start(const std::string& workdir) {
        nlohmann::json world = nlohmann::json::parse(
            csv::read_file(testutil::repo_path("tests/fixtures/e2e/wikidata_world.json")));
        for (const auto& [id, e] : world["entities"].items()) {
            testutil::FakeEntity fe;
            fe.id = id;
            for (const auto& [lang, v] : e["labels"].items()) fe.labels[lang] = v;
            for (const auto& [lang, vs] : e["aliases"].items())
                for (const auto& v : vs) fe.aliases[lang].push_back(v);
            for (const auto& [lang, v] : e["descriptions"].items()) fe.descriptions[lang] = v;
            for (const auto& v : e["p31"]) fe.p31.push_back(v);
            for (const auto& v : e["p279"]) fe.p279.push_back(v);
            for (const auto& v : e["p2559"]) fe.p2559.push_back(v);
            api.entities[id] = fe;
        }
        for (const auto& [term, ids] : world["search_results"].items())
            for (const auto& id : ids) api.search_results[term].push_back(id);
        nlohmann::json pages = nlohmann::json::parse(
            csv::read_file(testutil::repo_path("tests/fixtures/e2e/aat_pages.json")));
        for (const auto& [tag, lines] : pages.items())
            for (const auto& line : lines) sparql.pages[tag].push_back(line);
        api.mount(server.server());
        sparql.mount(server.server());
        server.start();
        write_config(workdir);
    }

    void write_config(const std::string& workdir) {
        nlohmann::json config = {
            {"languages", {"en", "nl"}},
            {"lexicon",
             {{"kg", testutil::repo_path("data/reference/terms_kg.ttl")},
              {"inflections", testutil::repo_path("data/reference/inflections.csv")},
              {"odwn_links", testutil::repo_path("data/reference/odwn_links.csv")}}},
            {"stopwords",
             {{"en", testutil::repo_path("data/stopwords/en.txt")},
              {"nl", testutil::repo_path("data/stopwords/nl.txt")}}},
            {"lemmas",
             {{"en", testutil::repo_path("data/lemmas/en.csv")},
              {"nl", testutil::repo_path("data/lemmas/nl.csv")}}},
            {"embeddings",
             {{"en", testutil::repo_path("tests/fixtures/e2e/embeddings_en.vec")},
              {"nl", testutil::repo_path("tests/fixtures/e2e/embeddings_nl.vec")}}},
            {"cache_dir", workdir + "/cache"},
            {"rate_limit_per_sec", 10000.0},
            {"wikidata",
             {{"api_base", server.base_url() + "/w/api.php"},
              {"cap", 1000},
              {"excluded_categories_file",
               testutil::repo_path("data/catalogs/wikidata_excluded.json")}}},
            {"aat",
             {{"endpoint", server.base_url() + "/sparql"},
              {"subgraph_en", workdir + "/aat_en.nt"},
              {"subgraph_nl", workdir + "/aat_nl.nt"},
              {"page_size", 500}}},
            {"pwn", {{"rdf", testutil::repo_path("tests/fixtures/pwn_fixture.ttl")}}},
            {"odwn", {{"xml", testutil::repo_path("tests/fixtures/odwn_fixture.xml")}}},
            {"markers",
             {{"lexemes", testutil::repo_path("data/catalogs/marker_lexemes.csv")},
              {"rules", testutil::repo_path("data/catalogs/marker_rules.csv")}}},
            {"out_dir", workdir + "/out"}};
        config_path = workdir + "/config.json";
        csv::write_file(config_path, config.dump(2) + "\n");
    }
};

HitAggregate agg(std::string canonical, Dataset d, Language l, PathId p, std::uint64_t n) {
    return HitAggregate{std::move(canonical), d, l, p, n};
}

}  // namespace

TEST(HitMatrix, ReferenceRowShapeAndNaCells) {
    HitMatrix m = build_hit_matrix({}, {}, {});
    ASSERT_EQ(m.rows.size(), 15u);
    int wikidata_rows = 0, aat_rows = 0, pwn_rows = 0, odwn_rows = 0;
    for (const auto& row : m.rows) {
        switch (row.dataset) {
            case Dataset::wikidata: ++wikidata_rows; break;
            case Dataset::aat: ++aat_rows; break;
            case Dataset::pwn: ++pwn_rows; break;
            case Dataset::odwn: ++odwn_rows; break;
        }
        for (std::size_t i = 0; i < 6; ++i) {
            bool nl_column = i % 2 == 1;
            if (row.dataset == Dataset::pwn && nl_column) EXPECT_FALSE(row.cells[i].applicable);
            if (row.dataset == Dataset::odwn && !nl_column) EXPECT_FALSE(row.cells[i].applicable);
            if (row.cells[i].applicable) EXPECT_EQ(row.cells[i].count, 0u);
        }
    }
    EXPECT_EQ(wikidata_rows, 3);
    EXPECT_EQ(aat_rows, 5);
    EXPECT_EQ(pwn_rows, 3);
    EXPECT_EQ(odwn_rows, 4);
}

TEST(HitMatrix, CellsEqualHandSummedAggregates) {
    std::vector<HitAggregate> set2 = {
        agg("slave", Dataset::aat, Language::en, PathId::aat_alt_literal_form, 17),
        agg("gypsy", Dataset::aat, Language::en, PathId::aat_alt_literal_form, 4),
        agg("slave", Dataset::aat, Language::en, PathId::aat_pref_literal_form, 2),
        agg("zwart", Dataset::odwn, Language::nl, PathId::odwn_sense_example, 3),
    };
    std::vector<HitAggregate> set1 = {
        agg("slave", Dataset::aat, Language::en, PathId::aat_alt_literal_form, 5)};
    HitMatrix m = build_hit_matrix(set1, set2, {});
    for (const auto& row : m.rows) {
        if (row.dataset == Dataset::aat && row.path_id == PathId::aat_alt_literal_form) {
            EXPECT_EQ(row.cells[0].count, 21u);  // set2 en: 17 + 4
            EXPECT_EQ(row.cells[4].count, 5u);   // set1 en
        }
        if (row.dataset == Dataset::odwn && row.path_id == PathId::odwn_sense_example)
            EXPECT_EQ(row.cells[1].count, 3u);
    }
    std::string body = hit_matrix_to_csv(m);
    EXPECT_NE(body.find("aat,altLabel/literalForm,21,0,0,0,5,0"), std::string::npos);
    EXPECT_NE(body.find("pwn,writtenRep,0,NA,0,NA,0,NA"), std::string::npos);
}

TEST(TopTerms, SlaveBreakdownAndOrdering) {
    std::vector<HitAggregate> aggs = {
        agg("slave", Dataset::aat, Language::en, PathId::aat_pref_literal_form, 2),
        agg("slave", Dataset::aat, Language::en, PathId::aat_alt_literal_form, 36),
        agg("slave", Dataset::aat, Language::en, PathId::aat_scope_note, 2),
        agg("gypsy", Dataset::aat, Language::en, PathId::aat_alt_literal_form, 12),
        agg("white", Dataset::aat, Language::en, PathId::aat_scope_note, 12),
        agg("noise", Dataset::wikidata, Language::en, PathId::wd_pref_label, 99),
    };
    auto top = top_terms(aggs, Dataset::aat, Language::en, 10);
    ASSERT_EQ(top.size(), 3u);
    EXPECT_EQ(top[0].canonical, "slave");
    EXPECT_EQ(top[0].total, 40u);
    EXPECT_EQ(top[0].by_property.at("prefLabel/literalForm"), 2u);
    EXPECT_EQ(top[0].by_property.at("altLabel/literalForm"), 36u);
    EXPECT_EQ(top[0].by_property.at("scopeNote/value"), 2u);
    // tie on 12: canonical ascending
    EXPECT_EQ(top[1].canonical, "gypsy");
    EXPECT_EQ(top[2].canonical, "white");
    // k larger than distinct terms returns all
    EXPECT_EQ(top_terms(aggs, Dataset::aat, Language::en, 99).size(), 3u);
}

TEST(Pipeline, EndToEndFixtureRun) {
    testutil::TempDir dir("e2e");
    E2eWorld world;
    world.start(dir.str());
    Config config = load_config(world.config_path);
    Pipeline pipeline(config, std::make_shared<net::HttplibTransport>(), 42);
    pipeline.run();
    world.server.stop();

    // manifest lists every export with its hash
    std::string out = dir.str() + "/out";
    nlohmann::json manifest = nlohmann::json::parse(csv::read_file(out + "/manifest.json"));
    for (const char* name :
         {"literals_wikidata.jsonl", "literals_aat.jsonl", "literals_pwn.jsonl",
          "literals_odwn.jsonl", "set2_hits.jsonl", "set2_aggregates.csv", "set1_hits.jsonl",
          "set1_uncovered.csv", "set3_scores.csv", "set3_aggregates.csv", "markers.csv",
          "suggestions.csv", "label_coverage.csv", "sample.csv", "hit_matrix.csv",
          "top_terms_wikidata_en.json"}) {
        EXPECT_TRUE(manifest["outputs"].contains(name)) << name;
        EXPECT_TRUE(std::filesystem::exists(out + "/" + name)) << name;
        EXPECT_EQ(manifest["outputs"][name].get<std::string>(),
                  Sha256::hash(csv::read_file(out + "/" + name)))
            << name;
    }

    // Set-1 hits exist: curated resources are harvested and matched
    auto set1_aggs = csv::read_with_header(
        out + "/set1_aggregates.csv", {"canonical", "dataset", "language", "property_path", "count"});
    EXPECT_FALSE(set1_aggs.empty());
    bool berber_set1 = false, pygmee_set1 = false;
    for (const auto& row : set1_aggs) {
        if (row.fields[0] == "berber" && row.fields[1] == "wikidata") berber_set1 = true;
        if (row.fields[0] == "pygmee" && row.fields[1] == "aat") pygmee_set1 = true;
    }
    EXPECT_TRUE(berber_set1);
    EXPECT_TRUE(pygmee_set1);

    // uncovered report reproduces the reference shape (6 EN / 5 NL)
    auto uncovered = csv::read_with_header(out + "/set1_uncovered.csv",
                                           {"dataset", "language", "canonical"});
    int all_en = 0, all_nl = 0;
    for (const auto& row : uncovered) {
        if (row.fields[0] == "all" && row.fields[1] == "en") ++all_en;
        if (row.fields[0] == "all" && row.fields[1] == "nl") ++all_nl;
    }
    EXPECT_EQ(all_en, 6);
    EXPECT_EQ(all_nl, 5);

    // traceability: the hit matrix equals an independent re-summation of the
    // aggregate exports
    auto resum = [&](const std::string& file, Dataset d, PathId p, Language lang) {
        std::uint64_t total = 0;
        for (const auto& row : csv::read_with_header(
                 out + "/" + file, {"canonical", "dataset", "language", "property_path", "count"}))
            if (row.fields[1] == to_string(d) && row.fields[2] == to_string(lang) &&
                row.fields[3] == to_string(p))
                total += std::stoull(row.fields[4]);
        return total;
    };
    auto matrix_rows = csv::read_with_header(
        out + "/hit_matrix.csv", {"dataset", "property_path", "set2_en", "set2_nl", "set3_en",
                                  "set3_nl", "set1_en", "set1_nl"});
    for (const auto& row : matrix_rows) {
        Dataset d = dataset_from_string(row.fields[0]);
        PathId p = path_from_string(d, row.fields[1]);
        if (row.fields[2] != "NA")
            EXPECT_EQ(std::stoull(row.fields[2]), resum("set2_aggregates.csv", d, p, Language::en))
                << row.fields[0] << "/" << row.fields[1];
        if (row.fields[7] != "NA")
            EXPECT_EQ(std::stoull(row.fields[7]), resum("set1_aggregates.csv", d, p, Language::nl));
    }

    // markers: the fixture world carries at least the attested explicit rules
    std::string markers_body = csv::read_file(out + "/markers.csv");
    EXPECT_NE(markers_body.find("Q1135775,wikidata,en,explicit,1,P31,Q545779"),
              std::string::npos);
    EXPECT_NE(markers_body.find("Q191923,wikidata,en,explicit,2,P31,Q2042898"),
              std::string::npos);
    EXPECT_NE(markers_body.find("flikker-n-1,odwn,nl,explicit,1,Pragmatics.connotation,pejorative"),
              std::string::npos);

    // suggestions: Q45315 alternative labels carry the curated alternatives
    std::string sugg_body = csv::read_file(out + "/suggestions.csv");
    EXPECT_NE(sugg_body.find("Amazigh"), std::string::npos);
    EXPECT_NE(sugg_body.find("Imazighen"), std::string::npos);
}

TEST(Pipeline, StagedFailureKeepsEarlierExports) {
    testutil::TempDir dir("fail");
    E2eWorld world;
    world.start(dir.str());
    Config config = load_config(world.config_path);
    config.embeddings_en = dir.str() + "/missing.vec";  // breaks the wsd stage
    Pipeline pipeline(config, std::make_shared<net::HttplibTransport>(), 42);
    try {
        pipeline.run();
        FAIL() << "expected stage failure";
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "disambiguate");
    }
    world.server.stop();
    std::string out = dir.str() + "/out";
    EXPECT_TRUE(std::filesystem::exists(out + "/set2_aggregates.csv"));
    EXPECT_FALSE(std::filesystem::exists(out + "/set3_scores.csv"));
    // checkpoint records the completed stages for resume
    nlohmann::json checkpoint = nlohmann::json::parse(csv::read_file(out + "/checkpoint.json"));
    std::set<std::string> done(checkpoint["completed"].begin(), checkpoint["completed"].end());
    EXPECT_TRUE(done.count("harvest"));
    EXPECT_TRUE(done.count("match"));
    EXPECT_FALSE(done.count("disambiguate"));

    // resume with the embedding restored: offline replay over the warm cache
    Config fixed = load_config(world.config_path);
    Pipeline resumed(fixed, nullptr, 42);
    resumed.run(/*resume=*/true);
    EXPECT_TRUE(std::filesystem::exists(out + "/set3_scores.csv"));
    EXPECT_TRUE(std::filesystem::exists(out + "/manifest.json"));
}

TEST(Cli, RunEndToEnd) {
    testutil::TempDir dir("cli_run");
    E2eWorld world;
    world.start(dir.str());
    std::string cli = LODAUDIT_CLI_PATH;
    int rc = std::system(
        (cli + " --config " + world.config_path + " --seed 42 run >/dev/null 2>&1").c_str());
    world.server.stop();
    EXPECT_EQ(WEXITSTATUS(rc), 0);
    std::string out = dir.str() + "/out";
    EXPECT_TRUE(std::filesystem::exists(out + "/manifest.json"));
    EXPECT_TRUE(std::filesystem::exists(out + "/hit_matrix.csv"));
    EXPECT_TRUE(std::filesystem::exists(out + "/lexicon_snapshot.json"));
    // a fresh offline run over the populated cache succeeds as well
    int rc2 = std::system((cli + " --config " + world.config_path + " --seed 42 --offline --out " +
                           dir.str() + "/out2 run >/dev/null 2>&1")
                              .c_str());
    EXPECT_EQ(WEXITSTATUS(rc2), 0);
    EXPECT_EQ(csv::read_file(out + "/hit_matrix.csv"),
              csv::read_file(dir.str() + "/out2/hit_matrix.csv"));
}

TEST(Cli, ExitCodes) {
    std::string cli = LODAUDIT_CLI_PATH;
    testutil::TempDir dir("cli");
    // config error -> 2
    testutil::write_file(dir.file("bad.json"), "{\"languages\": []}\n");
    int rc = std::system((cli + " --config " + dir.file("bad.json") + " match 2>/dev/null").c_str());
    EXPECT_EQ(WEXITSTATUS(rc), 2);
    // stage failure (missing inputs) -> 3
    nlohmann::json config = {
        {"languages", {"en", "nl"}},
        {"lexicon", {{"kg", dir.file("absent.ttl")}, {"inflections", dir.file("absent.csv")}}},
        {"stopwords",
         {{"en", testutil::repo_path("data/stopwords/en.txt")},
          {"nl", testutil::repo_path("data/stopwords/nl.txt")}}},
        {"lemmas",
         {{"en", testutil::repo_path("data/lemmas/en.csv")},
          {"nl", testutil::repo_path("data/lemmas/nl.csv")}}},
        {"embeddings",
         {{"en", testutil::repo_path("tests/fixtures/embeddings_toy10.vec")},
          {"nl", testutil::repo_path("tests/fixtures/embeddings_toy10.vec")}}},
        {"markers",
         {{"lexemes", testutil::repo_path("data/catalogs/marker_lexemes.csv")},
          {"rules", testutil::repo_path("data/catalogs/marker_rules.csv")}}},
        {"out_dir", dir.str() + "/out"},
        {"cache_dir", dir.str() + "/cache"}};
    testutil::write_file(dir.file("config.json"), config.dump(2));
    rc = std::system(
        (cli + " --config " + dir.file("config.json") + " --offline match 2>/dev/null").c_str());
    EXPECT_EQ(WEXITSTATUS(rc), 3);
    // alpha over fixture annotations -> 0
    std::string header =
        "sample_id,dataset,language,resource_id,canonical,quartile,annotator_id,judgment\n";
    testutil::write_file(dir.file("a1.csv"), header + "s,wikidata,en,Q1,t,1,a1,relevant\n");
    testutil::write_file(dir.file("a2.csv"), header + "s,wikidata,en,Q1,t,1,a2,relevant\n");
    rc = std::system(
        (cli + " alpha " + dir.file("a1.csv") + " " + dir.file("a2.csv") + " >/dev/null").c_str());
    EXPECT_EQ(WEXITSTATUS(rc), 0);
}
