// Command-line front end for the audit pipeline. Every subcommand reads the
// run configuration, executes one stage (or all of them), and writes its
// outputs under the configured out directory.
//
// Exit codes: 0 success, 2 configuration error, 3 stage failure.

#include <CLI11.hpp>

#include <cstdio>
#include <memory>

#include "lodaudit/config.hpp"
#include "lodaudit/connectors/httplib_transport.hpp"
#include "lodaudit/evaluation.hpp"
#include "lodaudit/pipeline.hpp"

namespace {

struct GlobalOptions {
    std::string config_path;
    std::string out_dir;  // overrides the config when set
    bool offline = false;
    std::uint64_t seed = 0;
};

lodaudit::Pipeline make_pipeline(const GlobalOptions& opts) {
    lodaudit::Config config = lodaudit::load_config(opts.config_path);
    if (!opts.out_dir.empty()) config.out_dir = opts.out_dir;
    std::shared_ptr<lodaudit::net::Transport> transport;
    if (!opts.offline) transport = std::make_shared<lodaudit::net::HttplibTransport>();
    return lodaudit::Pipeline(std::move(config), std::move(transport), opts.seed);
}

int run_alpha(const GlobalOptions& opts, const std::vector<std::string>& annotation_files) {
    std::vector<lodaudit::AnnotationRecord> records;
    for (const auto& path : annotation_files) {
        auto part = lodaudit::import_annotations(path);
        records.insert(records.end(), part.begin(), part.end());
    }
    lodaudit::AgreementReport rep = lodaudit::krippendorff_alpha(records);
    nlohmann::json out = {{"alpha", rep.alpha},
                          {"n_items", rep.n_items},
                          {"n_raters", rep.n_raters},
                          {"relevant_fraction", rep.relevant_fraction},
                          {"relevant_fraction_agreement", rep.relevant_fraction_agreement},
                          {"relevant_fraction_majority", rep.relevant_fraction_majority}};
    std::printf("%s\n", out.dump(2).c_str());
    if (!opts.config_path.empty()) {
        lodaudit::Config config = lodaudit::load_config(opts.config_path);
        if (!opts.out_dir.empty()) config.out_dir = opts.out_dir;
        std::filesystem::create_directories(config.out_dir);
        lodaudit::csv::write_file(
            (std::filesystem::path(config.out_dir) / "agreement.json").string(),
            out.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Audit contentious-term usage in linked-open-data literals"};
    app.require_subcommand(1);

    GlobalOptions opts;
    app.add_option("--config", opts.config_path, "Run configuration (JSON)");
    app.add_option("--out", opts.out_dir, "Output directory (overrides config)");
    app.add_flag("--offline", opts.offline, "Replay the response cache; fail on cache misses");
    app.add_option("--seed", opts.seed, "Seed for sampling")->default_val(0);

    auto* harvest = app.add_subcommand("harvest", "Collect literals from the four datasets");
    auto* match = app.add_subcommand("match", "Count term occurrences (Set 2)");
    auto* set1 = app.add_subcommand("set1", "Hits inside curated related resources (Set 1)");
    auto* disambiguate =
        app.add_subcommand("disambiguate", "Score Set-2 resources by cosine similarity (Set 3)");
    auto* markers = app.add_subcommand("markers", "Scan for contentiousness markers");
    auto* sample = app.add_subcommand("sample", "Draw the stratified annotation sample");
    auto* alpha = app.add_subcommand("alpha", "Inter-rater agreement over annotation files");
    std::vector<std::string> annotation_files;
    alpha->add_option("files", annotation_files, "Annotation CSV files (one per annotator)")
        ->required();
    auto* report = app.add_subcommand("report", "Emit tables, plot data, and the run manifest");
    auto* run = app.add_subcommand("run", "Execute every stage in order");
    bool resume = false;
    run->add_flag("--resume", resume, "Skip stages recorded in the checkpoint");

    CLI11_PARSE(app, argc, argv);

    try {
        if (alpha->parsed()) return run_alpha(opts, annotation_files);
        if (opts.config_path.empty()) {
            std::fprintf(stderr, "error: --config is required\n");
            return 2;
        }
        lodaudit::Pipeline pipeline = make_pipeline(opts);
        if (harvest->parsed()) pipeline.harvest();
        else if (match->parsed()) pipeline.match();
        else if (set1->parsed()) pipeline.set1();
        else if (disambiguate->parsed()) pipeline.disambiguate();
        else if (markers->parsed()) pipeline.markers();
        else if (sample->parsed()) pipeline.sample();
        else if (report->parsed()) pipeline.report();
        else if (run->parsed()) pipeline.run(resume);
        return 0;
    } catch (const lodaudit::StageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const lodaudit::AuditError& e) {
        if (e.code() == "config-error") {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 2;
        }
        std::fprintf(stderr, "error [%s]: %s\n", e.code().c_str(), e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
