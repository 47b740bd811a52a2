#include "coval/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <stdexcept>

#include "coval/coverage.hpp"
#include "coval/datagen.hpp"
#include "coval/metrics.hpp"
#include "coval/rng.hpp"

namespace coval {

ExperimentConfig default_config() {
    ExperimentConfig config;
    for (const std::string& name : datagen::builtin_names()) {
        DatasetSource src;
        src.path = name;
        config.datasets.push_back(std::move(src));
    }
    config.strategies = all_strategies();
    config.sampling_model = parse_model_token("rf5");
    config.transfer_models = {parse_model_token("dt"), parse_model_token("svm")};
    return config;
}

namespace {

struct ResolvedDataset {
    Dataset dataset;
    std::string display_name;
    int batch_size = 0;
    int batch_count = 0;
    bool use_presplit = false;
    int initial_labeled = 0;
    int test_rows = 0;
    int pool_rows = 0;
};

int computed_floor(double fraction, int count) {
    return static_cast<int>(std::floor(fraction * static_cast<double>(count)));
}

ResolvedDataset resolve_source(const DatasetSource& src, const ExperimentConfig& config) {
    ResolvedDataset out;
    int preset_batch_size = -1;
    int preset_batches = -1;
    if (datagen::is_builtin(src.path) && !std::filesystem::exists(src.path)) {
        datagen::Builtin builtin = datagen::load_builtin(src.path);
        out.dataset = std::move(builtin.dataset);
        out.display_name = src.path;
        preset_batch_size = builtin.batch_size;
        preset_batches = builtin.batches;
    } else {
        IngestOptions ingest;
        ingest.has_header = src.has_header;
        out.dataset = src.test_path.empty()
                          ? Dataset::from_csv(src.path, ingest)
                          : Dataset::from_csv_pair(src.path, src.test_path, ingest);
        out.display_name = std::filesystem::path(src.path).stem().string();
    }
    if (out.dataset.class_count() < 2) {
        throw std::runtime_error(out.display_name + ": experiments need at least two classes");
    }

    out.use_presplit = out.dataset.presplit_test_begin().has_value();
    const int n = out.dataset.row_count();
    int train_rows = n;
    if (out.use_presplit) {
        train_rows = *out.dataset.presplit_test_begin();
        out.test_rows = n - train_rows;
    } else {
        out.test_rows = computed_floor(config.test_fraction, n);
        train_rows = n - out.test_rows;
    }
    if (out.test_rows < 1) {
        throw std::runtime_error(out.display_name +
                                 ": test pool is empty; raise test_fraction or pass a test file");
    }
    out.initial_labeled = computed_floor(config.initial_fraction, train_rows);
    out.pool_rows = train_rows - out.initial_labeled;
    if (out.initial_labeled < 1 || out.pool_rows < 1) {
        throw std::runtime_error(out.display_name + ": split leaves an empty pool");
    }

    out.batch_size = src.batch_size > 0 ? src.batch_size
                     : config.batch_size > 0 ? config.batch_size
                     : preset_batch_size > 0 ? preset_batch_size
                                             : 100;
    out.batch_count = src.batch_count > 0 ? src.batch_count
                      : config.batch_count > 0 ? config.batch_count
                      : preset_batches > 0 ? preset_batches
                                           : out.pool_rows / out.batch_size;
    if (out.batch_count < 1) {
        throw std::runtime_error(out.display_name + ": query pool smaller than one batch");
    }
    if (static_cast<long>(out.batch_size) * out.batch_count > out.pool_rows) {
        throw std::runtime_error(out.display_name + ": batch plan (" +
                                 std::to_string(out.batch_size) + " x " +
                                 std::to_string(out.batch_count) +
                                 ") exceeds the query pool of " + std::to_string(out.pool_rows));
    }
    return out;
}

double eval_macro_f1(const FittedModel& model, const Dataset& dataset,
                     std::span<const int> test) {
    const std::vector<int> preds = model.predict_rows(dataset, test);
    std::vector<int> truths;
    truths.reserve(test.size());
    for (int i : test) truths.push_back(dataset.label(i));
    return macro_f1(preds, truths);
}

void validate_config(const ExperimentConfig& config) {
    if (config.datasets.empty()) throw std::runtime_error("no datasets configured");
    if (config.strategies.empty()) throw std::runtime_error("no strategies configured");
    if (config.repetitions < 1) throw std::runtime_error("repetitions must be at least 1");
    if (config.max_level < 1) throw std::runtime_error("T must be at least 1");
    validate_spec(config.sampling_model);
    for (const ModelSpec& spec : config.transfer_models) validate_spec(spec);
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    validate_config(config);

    ExperimentResult result;
    for (const DatasetSource& source : config.datasets) {
        ResolvedDataset r = resolve_source(source, config);
        const Dataset& ds = r.dataset;
        result.runs.push_back({r.display_name, ds.row_count(), r.test_rows, r.initial_labeled,
                               r.batch_size, r.batch_count});

        std::vector<std::string> model_tokens;
        model_tokens.push_back(model_token(config.sampling_model));
        for (const ModelSpec& spec : config.transfer_models) {
            model_tokens.push_back(model_token(spec));
        }

        for (Strategy strategy : config.strategies) {
            const std::string strategy_name = strategy_token(strategy);
            for (int rep = 0; rep < config.repetitions; ++rep) {
                Rng master(config.base_seed + static_cast<uint64_t>(rep));

                SplitSpec split;
                split.test_fraction = config.test_fraction;
                split.initial_fraction = config.initial_fraction;
                split.seed = master.next_u64();
                split.use_presplit_test = r.use_presplit;
                PoolState pools = split_pools(ds, split);

                std::optional<CoverageTracker> tracker;
                // Coverage is reported against the query pool as it stood at
                // batch 0; with a fixed reference set and a growing labeled
                // inventory every level is non-increasing across batches.
                std::vector<int> initial_query_pool;
                if (strategy_uses_density(strategy)) {
                    tracker.emplace(ds, config.max_level);
                    tracker->add_rows(pools.labeled);
                    initial_query_pool = pools.unlabeled;
                }

                auto train_seeded = [&](ModelSpec spec) {
                    spec.seed = master.next_u64();
                    return train(spec, ds, pools.labeled);
                };

                std::vector<std::unique_ptr<FittedModel>> models;
                auto retrain_all = [&] {
                    models.clear();
                    models.push_back(train_seeded(config.sampling_model));
                    for (const ModelSpec& spec : config.transfer_models) {
                        models.push_back(train_seeded(spec));
                    }
                };
                auto record_batch = [&](int batch) {
                    for (size_t m = 0; m < models.size(); ++m) {
                        result.curves.push_back({r.display_name, strategy_name, model_tokens[m],
                                                 rep, batch,
                                                 static_cast<int>(pools.labeled.size()),
                                                 eval_macro_f1(*models[m], ds, pools.test)});
                    }
                    result.biases.push_back(
                        {r.display_name, strategy_name, rep, batch,
                         [&] {
                             std::vector<int> labels;
                             labels.reserve(pools.labeled.size());
                             for (int i : pools.labeled) labels.push_back(ds.label(i));
                             return sampling_bias(labels, ds.class_count());
                         }()});
                    if (tracker) {
                        result.sdcc_traces.push_back({r.display_name, strategy_name, rep, batch,
                                                      tracker->sdcc_by_level(initial_query_pool)});
                    }
                };

                retrain_all();
                record_batch(0);

                for (int batch = 1; batch <= r.batch_count; ++batch) {
                    if (pools.unlabeled.empty()) {
                        std::fprintf(stderr,
                                     "warning: %s/%s rep %d: query pool exhausted after %d of %d "
                                     "batches; curve truncated\n",
                                     r.display_name.c_str(), strategy_name.c_str(), rep,
                                     batch - 1, r.batch_count);
                        break;
                    }

                    std::vector<std::unique_ptr<FittedModel>> committee_owned;
                    QueryContext ctx;
                    ctx.dataset = &ds;
                    ctx.pools = &pools;
                    ctx.budget = r.batch_size;
                    ctx.rng = &master;
                    ctx.sampling_model = models.front().get();
                    if (strategy_uses_committee(strategy)) {
                        for (const char* token : {"rf5", "knn", "logreg"}) {
                            committee_owned.push_back(train_seeded(parse_model_token(token)));
                            ctx.committee.push_back(committee_owned.back().get());
                        }
                    }
                    std::optional<DensityVector> density;
                    if (tracker) {
                        density = tracker->density(pools.unlabeled);
                        ctx.density = &*density;
                    }
                    std::optional<SimilarityIndex> similarity;
                    if (strategy_uses_similarity(strategy)) {
                        similarity.emplace(ds, pools.labeled, pools.unlabeled);
                        ctx.similarity = &*similarity;
                    }

                    const std::vector<int> picked = choose_batch(strategy, ctx);

                    std::vector<int> moved;
                    moved.reserve(picked.size());
                    for (int pos : picked) {
                        moved.push_back(pools.unlabeled[static_cast<size_t>(pos)]);
                    }
                    {
                        std::vector<char> take(pools.unlabeled.size(), 0);
                        for (int pos : picked) take[static_cast<size_t>(pos)] = 1;
                        std::vector<int> remaining;
                        remaining.reserve(pools.unlabeled.size() - picked.size());
                        for (size_t i = 0; i < pools.unlabeled.size(); ++i) {
                            if (!take[i]) remaining.push_back(pools.unlabeled[i]);
                        }
                        pools.unlabeled = std::move(remaining);
                    }
                    pools.labeled.insert(pools.labeled.end(), moved.begin(), moved.end());
                    std::sort(pools.labeled.begin(), pools.labeled.end());
                    if (tracker) tracker->add_rows(moved);

                    retrain_all();
                    record_batch(batch);
                }
            }
        }
    }
    return result;
}

} // namespace coval
