#include <cctype>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "coval/coverage.hpp"
#include "coval/csv.hpp"
#include "coval/datagen.hpp"
#include "coval/dataset.hpp"
#include "coval/harness.hpp"

namespace {

std::vector<std::string> split_list(const std::string& text, const std::string& what) {
    std::vector<std::string> out;
    std::string current;
    for (char ch : text) {
        if (ch == ',') {
            out.push_back(current);
            current.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            current += ch;
        }
    }
    out.push_back(current);
    for (const std::string& tok : out) {
        if (tok.empty()) throw std::runtime_error("empty entry in " + what + " list");
    }
    return out;
}

void run_command(const std::string& config_path, const std::vector<std::string>& dataset_args,
                 const std::string& test_path, const std::string& strategies_arg,
                 const std::string& models_arg, int batch_size, int batches, int reps,
                 bool seed_given, uint64_t seed, int max_level, const std::string& out_dir,
                 bool no_header) {
    coval::ExperimentConfig config =
        config_path.empty() ? coval::default_config() : coval::load_config_file(config_path);

    if (!dataset_args.empty()) {
        config.datasets.clear();
        for (const std::string& path : dataset_args) {
            coval::DatasetSource src;
            src.path = path;
            src.has_header = !no_header;
            config.datasets.push_back(std::move(src));
        }
    }
    if (!test_path.empty()) {
        if (config.datasets.size() != 1) {
            throw std::runtime_error("--test needs exactly one --dataset");
        }
        config.datasets.front().test_path = test_path;
    }
    if (!strategies_arg.empty()) {
        config.strategies.clear();
        for (const std::string& tok : split_list(strategies_arg, "--strategies")) {
            config.strategies.push_back(coval::parse_strategy(tok));
        }
    }
    if (!models_arg.empty()) {
        const std::vector<std::string> tokens = split_list(models_arg, "--models");
        config.sampling_model = coval::parse_model_token(tokens.front());
        config.transfer_models.clear();
        for (size_t i = 1; i < tokens.size(); ++i) {
            config.transfer_models.push_back(coval::parse_model_token(tokens[i]));
        }
    }
    if (batch_size > 0) config.batch_size = batch_size;
    if (batches > 0) config.batch_count = batches;
    if (reps > 0) config.repetitions = reps;
    if (seed_given) config.base_seed = seed;
    if (max_level > 0) config.max_level = max_level;
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (config.datasets.empty()) {
        throw std::runtime_error("no dataset given (use --dataset or --config)");
    }

    const coval::ExperimentResult result = coval::run_experiment(config);
    const coval::Summary summary = coval::summarize(result.curves, result.biases,
                                                    coval::model_token(config.sampling_model));
    coval::emit_outputs(config, result, summary);

    for (const coval::DatasetRunInfo& info : result.runs) {
        std::printf("%s: %d rows, %d test, %d initially labeled, %d batches of %d\n",
                    info.name.c_str(), info.rows, info.test_rows, info.initial_labeled,
                    info.batch_count, info.batch_size);
    }
    std::printf("\n%-14s %-8s %-13s %12s %10s\n", "dataset", "model", "strategy", "auc", "final_f1");
    for (const auto& cell : summary.auc) {
        std::printf("%-14s %-8s %-13s %12.4f %10.4f\n", cell.dataset.c_str(), cell.model.c_str(),
                    cell.strategy.c_str(), cell.auc_mean_curve, cell.final_f1_mean);
    }
    std::printf("\noutputs written to %s\n", config.out_dir.c_str());
}

void coverage_command(const std::string& labeled_path, const std::string& unlabeled_path,
                      int max_level, bool no_header, int class_column,
                      const std::string& out_path) {
    coval::IngestOptions ingest;
    ingest.has_header = !no_header;
    ingest.class_column = class_column;

    const coval::csv::Table labeled = coval::csv::read_file(labeled_path, ingest.has_header);
    const coval::csv::Table unlabeled = coval::csv::read_file(unlabeled_path, ingest.has_header);
    if (!labeled.rows.empty() && !unlabeled.rows.empty() &&
        labeled.rows.front().size() != unlabeled.rows.front().size()) {
        throw std::runtime_error(labeled_path + " and " + unlabeled_path +
                                 " disagree on column count");
    }
    std::vector<std::vector<std::string>> rows = labeled.rows;
    rows.insert(rows.end(), unlabeled.rows.begin(), unlabeled.rows.end());
    const coval::Dataset dataset =
        coval::Dataset::from_tokens(rows, ingest, labeled.header, labeled_path);

    std::vector<int> labeled_idx(labeled.rows.size());
    for (size_t i = 0; i < labeled_idx.size(); ++i) labeled_idx[i] = static_cast<int>(i);
    std::vector<int> unlabeled_idx(unlabeled.rows.size());
    for (size_t i = 0; i < unlabeled_idx.size(); ++i) {
        unlabeled_idx[i] = static_cast<int>(labeled.rows.size() + i);
    }

    coval::CoverageTracker tracker(dataset, max_level);
    tracker.add_rows(labeled_idx);
    const std::vector<double> sdcc_levels = tracker.sdcc_by_level(unlabeled_idx);
    const coval::DensityVector density = tracker.density(unlabeled_idx);

    nlohmann::ordered_json report;
    report["labeled_rows"] = labeled_idx.size();
    report["unlabeled_rows"] = unlabeled_idx.size();
    report["features"] = dataset.feature_count();
    report["max_level"] = tracker.max_level();
    report["per_level"] = nlohmann::ordered_json::array();
    for (int t = 1; t <= tracker.max_level(); ++t) {
        report["per_level"].push_back(
            {{"t", t},
             {"combinatorial_coverage", coval::combinatorial_coverage(dataset, labeled_idx, t)},
             {"sdcc", sdcc_levels[static_cast<size_t>(t - 1)]}});
    }
    report["density"] = density.values;

    const std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << text;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"combinatorial-coverage active learning benchmark"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run batch active-learning experiments");
    std::string config_path, test_path, strategies_arg, models_arg, out_dir;
    std::vector<std::string> dataset_args;
    int batch_size = -1, batches = -1, reps = -1, max_level = -1;
    uint64_t seed = 0;
    bool no_header = false;
    run->add_option("--config", config_path, "JSON config file");
    run->add_option("--dataset", dataset_args,
                    "dataset CSV path or builtin name (repeatable); builtins: tic-tac-toe, "
                    "balance-scale, car, chess, nursery, monk");
    run->add_option("--test", test_path, "separate test CSV (pre-split pair)");
    run->add_option("--strategies", strategies_arg,
                    "comma list: random,uncertainty,qbc,info_density,cds,icds,uswcd");
    run->add_option("--batch-size", batch_size, "query batch size");
    run->add_option("--batches", batches, "number of query batches");
    run->add_option("--reps", reps, "repetitions (default 3)");
    auto* seed_opt = run->add_option("--seed", seed, "base seed (repetition r uses seed+r)");
    run->add_option("--models", models_arg,
                    "comma list, first samples and the rest transfer (default rf5,dt,svm)");
    run->add_option("--T", max_level, "max interaction level (default 6)");
    run->add_option("--out", out_dir, "output directory (default results)");
    run->add_flag("--no-header", no_header, "dataset CSVs have no header row");
    run->callback([&] {
        run_command(config_path, dataset_args, test_path, strategies_arg, models_arg, batch_size,
                    batches, reps, seed_opt->count() > 0, seed, max_level, out_dir, no_header);
    });

    auto* coverage = app.add_subcommand("coverage", "coverage report for a labeled/unlabeled pair");
    std::string labeled_path, unlabeled_path, coverage_out;
    int coverage_level = 6;
    int class_column = -1;
    bool coverage_no_header = false;
    coverage->add_option("--labeled", labeled_path, "labeled rows CSV")->required();
    coverage->add_option("--unlabeled", unlabeled_path, "unlabeled rows CSV")->required();
    coverage->add_option("-t,-T,--max-level", coverage_level,
                         "max interaction level (default 6, clamped to the feature count)");
    coverage->add_option("--class-column", class_column,
                         "label column index, -1 for last (labels are ignored by the metrics)");
    coverage->add_flag("--no-header", coverage_no_header, "CSVs have no header row");
    coverage->add_option("--out", coverage_out, "write the JSON report here instead of stdout");
    coverage->callback([&] {
        coverage_command(labeled_path, unlabeled_path, coverage_level, coverage_no_header,
                         class_column, coverage_out);
    });

    auto* report = app.add_subcommand("report", "rebuild summary.json from an output directory");
    std::string report_dir;
    report->add_option("--in", report_dir, "directory with learning_curves.csv etc.")->required();
    report->callback([&] {
        coval::regenerate_summary(report_dir);
        std::printf("%s/summary.json regenerated\n", report_dir.c_str());
    });

    auto* datagen = app.add_subcommand("datagen", "write builtin benchmark datasets as CSV");
    std::string datagen_name, datagen_out = ".";
    bool datagen_all = false;
    datagen->add_option("--name", datagen_name, "one builtin dataset name");
    datagen->add_flag("--all", datagen_all, "write every builtin dataset");
    datagen->add_option("--out", datagen_out, "target directory (default .)");
    datagen->callback([&] {
        std::vector<std::string> names;
        if (datagen_all) {
            names = coval::datagen::builtin_names();
        } else if (!datagen_name.empty()) {
            names.push_back(datagen_name);
        } else {
            throw std::runtime_error("datagen needs --name or --all");
        }
        for (const std::string& name : names) {
            std::printf("wrote %s\n", coval::datagen::write_builtin_csv(name, datagen_out).c_str());
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
