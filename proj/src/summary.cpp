#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "coval/csv.hpp"
#include "coval/harness.hpp"
#include "coval/metrics.hpp"

#include "json.hpp"

namespace coval {

namespace {

using ordered_json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to the same double, so repeated
/// runs and CSV round trips are byte-identical.
std::string fmt(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const std::string& what) {
    double value = 0.0;
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(text.data(), last, value);
    if (res.ec != std::errc() || res.ptr != last) {
        throw std::runtime_error("bad " + what + " value: '" + text + "'");
    }
    return value;
}

int parse_int(const std::string& text, const std::string& what) {
    int value = 0;
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(text.data(), last, value);
    if (res.ec != std::errc() || res.ptr != last) {
        throw std::runtime_error("bad " + what + " value: '" + text + "'");
    }
    return value;
}

void push_unique(std::vector<std::string>& values, const std::string& v) {
    if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
}

struct Cell {
    double auc_mean_curve = 0.0;
    double mean_rep_auc = 0.0;
    double final_f1_mean = 0.0;
};

using CellKey = std::tuple<std::string, std::string, std::string>; // dataset, model, strategy

struct CurvePos {
    int batch = 0;
    int n_labeled = 0;
    double f1 = 0.0;
};

} // namespace

Summary summarize(const std::vector<CurveRecord>& curves, const std::vector<BiasRecord>& biases,
                  const std::string& original_model) {
    Summary summary;
    summary.original_model = original_model;

    std::vector<std::string> datasets, models, strategies;
    for (const CurveRecord& c : curves) {
        push_unique(datasets, c.dataset);
        push_unique(models, c.model);
        push_unique(strategies, c.strategy);
    }

    std::map<CellKey, std::map<int, std::vector<CurvePos>>> grouped;
    for (const CurveRecord& c : curves) {
        grouped[{c.dataset, c.model, c.strategy}][c.repetition].push_back(
            {c.batch, c.n_labeled, c.f1});
    }

    std::map<CellKey, Cell> cells;
    for (auto& [key, reps] : grouped) {
        std::vector<std::vector<CurvePos>> rep_curves;
        rep_curves.reserve(reps.size());
        for (auto& [rep, points] : reps) {
            std::sort(points.begin(), points.end(),
                      [](const CurvePos& a, const CurvePos& b) { return a.batch < b.batch; });
            rep_curves.push_back(points);
        }
        size_t common = rep_curves.front().size();
        for (const auto& rc : rep_curves) common = std::min(common, rc.size());
        if (common == 0) continue;

        Cell cell;
        for (const auto& rc : rep_curves) cell.final_f1_mean += rc[common - 1].f1;
        cell.final_f1_mean /= static_cast<double>(rep_curves.size());

        if (common >= 2) {
            // x-axis: queried points added, so every curve starts at x = 0.
            std::vector<CurvePoint> mean_curve(common);
            for (size_t i = 0; i < common; ++i) {
                mean_curve[i].x = rep_curves.front()[i].n_labeled - rep_curves.front()[0].n_labeled;
            }
            double rep_auc_sum = 0.0;
            for (const auto& rc : rep_curves) {
                std::vector<CurvePoint> one(common);
                for (size_t i = 0; i < common; ++i) {
                    one[i] = {static_cast<double>(rc[i].n_labeled - rc[0].n_labeled), rc[i].f1};
                    mean_curve[i].y += rc[i].f1;
                }
                rep_auc_sum += trapezoid_auc(one);
            }
            for (CurvePoint& p : mean_curve) p.y /= static_cast<double>(rep_curves.size());
            cell.auc_mean_curve = trapezoid_auc(mean_curve);
            cell.mean_rep_auc = rep_auc_sum / static_cast<double>(rep_curves.size());
        }
        cells[key] = cell;
    }

    auto find_cell = [&](const std::string& d, const std::string& m,
                         const std::string& s) -> const Cell* {
        auto it = cells.find(CellKey{d, m, s});
        return it == cells.end() ? nullptr : &it->second;
    };

    for (const std::string& d : datasets) {
        for (const std::string& m : models) {
            for (const std::string& s : strategies) {
                if (const Cell* cell = find_cell(d, m, s)) {
                    summary.auc.push_back(
                        {d, m, s, cell->auc_mean_curve, cell->mean_rep_auc, cell->final_f1_mean});
                }
            }
        }
    }

    for (const std::string& d : datasets) {
        double best = 0.0;
        bool any = false;
        for (const std::string& s : strategies) {
            if (const Cell* cell = find_cell(d, original_model, s)) {
                best = any ? std::max(best, cell->auc_mean_curve) : cell->auc_mean_curve;
                any = true;
            }
        }
        if (!any) continue;
        for (const std::string& s : strategies) {
            if (const Cell* cell = find_cell(d, original_model, s)) {
                const double pct =
                    best > 0.0 ? (cell->auc_mean_curve - best) / best * 100.0 : 0.0;
                summary.percent_from_best.push_back({d, s, pct});
            }
        }
    }

    const bool has_random =
        std::find(strategies.begin(), strategies.end(), "random") != strategies.end();
    if (has_random) {
        for (const std::string& d : datasets) {
            const Cell* base = find_cell(d, original_model, "random");
            if (!base) continue;
            for (const std::string& m : models) {
                if (m == original_model) continue;
                const Cell* moved = find_cell(d, m, "random");
                if (!moved) continue;
                Summary::TransferGain gain;
                gain.dataset = d;
                gain.model = m;
                gain.random_original_final = base->final_f1_mean;
                gain.random_transfer_final = moved->final_f1_mean;
                gain.gate_passed = base->final_f1_mean > 0.0 &&
                                   moved->final_f1_mean >= 1.05 * base->final_f1_mean;
                if (gain.gate_passed && moved->auc_mean_curve > 0.0) {
                    for (const std::string& s : strategies) {
                        const Cell* cell = find_cell(d, m, s);
                        if (!cell) continue;
                        const double pct =
                            s == "random"
                                ? 0.0
                                : (cell->auc_mean_curve - moved->auc_mean_curve) /
                                      moved->auc_mean_curve * 100.0;
                        gain.percent_from_random.emplace_back(s, pct);
                    }
                }
                summary.transfer_gains.push_back(std::move(gain));
            }
        }
    }

    if (strategies.size() >= 2) {
        for (const std::string& m : models) {
            std::map<std::string, std::vector<double>> normalized_by_strategy;
            for (const std::string& d : datasets) {
                std::vector<double> aucs;
                bool complete = true;
                for (const std::string& s : strategies) {
                    const Cell* cell = find_cell(d, m, s);
                    if (!cell) {
                        complete = false;
                        break;
                    }
                    aucs.push_back(cell->auc_mean_curve);
                }
                if (!complete) continue;
                const std::vector<double> norm = min_max_normalize(aucs);
                for (size_t i = 0; i < strategies.size(); ++i) {
                    normalized_by_strategy[strategies[i]].push_back(norm[i]);
                }
            }
            for (const std::string& s : strategies) {
                auto it = normalized_by_strategy.find(s);
                if (it == normalized_by_strategy.end() || it->second.empty()) continue;
                summary.median_normalized.push_back({m, s, median(it->second)});
            }
        }
    }

    for (const std::string& s : strategies) {
        Summary::StrategyBias row;
        row.strategy = s;
        for (const std::string& d : datasets) {
            std::map<int, std::pair<int, double>> last_by_rep; // rep -> (batch, bias)
            for (const BiasRecord& b : biases) {
                if (b.dataset != d || b.strategy != s) continue;
                auto it = last_by_rep.find(b.repetition);
                if (it == last_by_rep.end() || b.batch > it->second.first) {
                    last_by_rep[b.repetition] = {b.batch, b.bias};
                }
            }
            for (const auto& [rep, entry] : last_by_rep) row.final_values.push_back(entry.second);
        }
        if (row.final_values.empty()) continue;
        row.median = median(row.final_values);
        summary.bias.push_back(std::move(row));
    }

    return summary;
}

namespace {

ordered_json summary_to_json(const Summary& summary) {
    ordered_json j;
    j["original_model"] = summary.original_model;
    j["auc"] = ordered_json::array();
    for (const auto& cell : summary.auc) {
        j["auc"].push_back({{"dataset", cell.dataset},
                            {"model", cell.model},
                            {"strategy", cell.strategy},
                            {"auc_mean_curve", cell.auc_mean_curve},
                            {"mean_rep_auc", cell.mean_rep_auc},
                            {"final_f1_mean", cell.final_f1_mean}});
    }
    j["percent_from_best"] = ordered_json::array();
    for (const auto& row : summary.percent_from_best) {
        j["percent_from_best"].push_back(
            {{"dataset", row.dataset}, {"strategy", row.strategy}, {"percent", row.percent}});
    }
    j["transfer_gains"] = ordered_json::array();
    for (const auto& gain : summary.transfer_gains) {
        ordered_json deltas = ordered_json::array();
        for (const auto& [strategy, pct] : gain.percent_from_random) {
            deltas.push_back({{"strategy", strategy}, {"percent", pct}});
        }
        j["transfer_gains"].push_back({{"dataset", gain.dataset},
                                       {"model", gain.model},
                                       {"gate_passed", gain.gate_passed},
                                       {"random_original_final", gain.random_original_final},
                                       {"random_transfer_final", gain.random_transfer_final},
                                       {"percent_from_random", std::move(deltas)}});
    }
    j["median_normalized_auc"] = ordered_json::array();
    for (const auto& row : summary.median_normalized) {
        j["median_normalized_auc"].push_back(
            {{"model", row.model}, {"strategy", row.strategy}, {"value", row.value}});
    }
    j["sampling_bias"] = ordered_json::array();
    for (const auto& row : summary.bias) {
        j["sampling_bias"].push_back({{"strategy", row.strategy},
                                      {"final_values", row.final_values},
                                      {"median", row.median}});
    }
    return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("failed while writing " + path.string());
}

ordered_json config_to_json(const ExperimentConfig& config) {
    ordered_json j;
    j["datasets"] = ordered_json::array();
    for (const DatasetSource& src : config.datasets) {
        j["datasets"].push_back({{"path", src.path},
                                 {"test", src.test_path},
                                 {"batch_size", src.batch_size},
                                 {"batches", src.batch_count},
                                 {"header", src.has_header}});
    }
    j["test_fraction"] = config.test_fraction;
    j["initial_fraction"] = config.initial_fraction;
    ordered_json strategy_tokens = ordered_json::array();
    for (Strategy s : config.strategies) strategy_tokens.push_back(strategy_token(s));
    j["strategies"] = std::move(strategy_tokens);
    j["batch_size"] = config.batch_size;
    j["batches"] = config.batch_count;
    j["repetitions"] = config.repetitions;
    j["sampling_model"] = model_token(config.sampling_model);
    ordered_json transfer_tokens = ordered_json::array();
    for (const ModelSpec& spec : config.transfer_models) {
        transfer_tokens.push_back(model_token(spec));
    }
    j["transfer_models"] = std::move(transfer_tokens);
    j["max_level"] = config.max_level;
    j["seed"] = config.base_seed;
    j["out"] = config.out_dir;
    return j;
}

} // namespace

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    if (!j.is_object()) throw std::runtime_error(path + ": config root must be an object");

    ExperimentConfig config = default_config();
    for (const auto& [key, value] : j.items()) {
        if (key == "datasets") {
            config.datasets.clear();
            for (const auto& entry : value) {
                DatasetSource src;
                if (entry.is_string()) {
                    src.path = entry.get<std::string>();
                } else if (entry.is_object()) {
                    for (const auto& [dk, dv] : entry.items()) {
                        if (dk == "path") src.path = dv.get<std::string>();
                        else if (dk == "test") src.test_path = dv.get<std::string>();
                        else if (dk == "batch_size") src.batch_size = dv.get<int>();
                        else if (dk == "batches") src.batch_count = dv.get<int>();
                        else if (dk == "header") src.has_header = dv.get<bool>();
                        else throw std::runtime_error(path + ": unknown dataset key '" + dk + "'");
                    }
                } else {
                    throw std::runtime_error(path + ": dataset entries must be paths or objects");
                }
                if (src.path.empty()) {
                    throw std::runtime_error(path + ": dataset entry is missing a path");
                }
                config.datasets.push_back(std::move(src));
            }
        } else if (key == "test_fraction") {
            config.test_fraction = value.get<double>();
        } else if (key == "initial_fraction") {
            config.initial_fraction = value.get<double>();
        } else if (key == "strategies") {
            config.strategies.clear();
            for (const auto& tok : value) {
                config.strategies.push_back(parse_strategy(tok.get<std::string>()));
            }
        } else if (key == "batch_size") {
            config.batch_size = value.get<int>();
        } else if (key == "batches") {
            config.batch_count = value.get<int>();
        } else if (key == "repetitions") {
            config.repetitions = value.get<int>();
        } else if (key == "sampling_model") {
            config.sampling_model = parse_model_token(value.get<std::string>());
        } else if (key == "transfer_models") {
            config.transfer_models.clear();
            for (const auto& tok : value) {
                config.transfer_models.push_back(parse_model_token(tok.get<std::string>()));
            }
        } else if (key == "max_level") {
            config.max_level = value.get<int>();
        } else if (key == "seed") {
            config.base_seed = value.get<uint64_t>();
        } else if (key == "out") {
            config.out_dir = value.get<std::string>();
        } else {
            throw std::runtime_error(path + ": unknown config key '" + key + "'");
        }
    }
    return config;
}

void emit_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                  const Summary& summary) {
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);

    {
        std::vector<std::vector<std::string>> rows;
        rows.reserve(result.curves.size());
        for (const CurveRecord& c : result.curves) {
            rows.push_back({c.dataset, c.strategy, c.model, std::to_string(c.repetition),
                            std::to_string(c.batch), std::to_string(c.n_labeled), fmt(c.f1)});
        }
        csv::write_file((dir / "learning_curves.csv").string(),
                        {"dataset", "strategy", "model", "repetition", "batch", "n_labeled", "f1"},
                        rows);
    }
    {
        std::vector<std::vector<std::string>> rows;
        rows.reserve(result.biases.size());
        for (const BiasRecord& b : result.biases) {
            rows.push_back({b.dataset, b.strategy, std::to_string(b.repetition),
                            std::to_string(b.batch), fmt(b.bias)});
        }
        csv::write_file((dir / "sampling_bias.csv").string(),
                        {"dataset", "strategy", "repetition", "batch", "bias"}, rows);
    }
    if (!result.sdcc_traces.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const SdccTraceRecord& t : result.sdcc_traces) {
            for (size_t level = 0; level < t.by_level.size(); ++level) {
                rows.push_back({t.dataset, t.strategy, std::to_string(t.repetition),
                                std::to_string(t.batch), std::to_string(level + 1),
                                fmt(t.by_level[level])});
            }
        }
        csv::write_file((dir / "sdcc_trace.csv").string(),
                        {"dataset", "strategy", "repetition", "batch", "level", "sdcc"}, rows);
    }
    write_text(dir / "config.json", config_to_json(config).dump(2) + "\n");
    write_text(dir / "summary.json", summary_to_json(summary).dump(2) + "\n");
}

void regenerate_summary(const std::string& dir) {
    const std::filesystem::path base(dir);
    const ExperimentConfig config = load_config_file((base / "config.json").string());

    std::vector<CurveRecord> curves;
    {
        const csv::Table t = csv::read_file((base / "learning_curves.csv").string(), true);
        const std::vector<std::string> expect = {"dataset", "strategy",  "model", "repetition",
                                                 "batch",   "n_labeled", "f1"};
        if (t.header != expect) {
            throw std::runtime_error(dir + "/learning_curves.csv: unexpected columns");
        }
        for (const auto& row : t.rows) {
            curves.push_back({row[0], row[1], row[2], parse_int(row[3], "repetition"),
                              parse_int(row[4], "batch"), parse_int(row[5], "n_labeled"),
                              parse_double(row[6], "f1")});
        }
    }
    std::vector<BiasRecord> biases;
    {
        const csv::Table t = csv::read_file((base / "sampling_bias.csv").string(), true);
        const std::vector<std::string> expect = {"dataset", "strategy", "repetition", "batch",
                                                 "bias"};
        if (t.header != expect) {
            throw std::runtime_error(dir + "/sampling_bias.csv: unexpected columns");
        }
        for (const auto& row : t.rows) {
            biases.push_back({row[0], row[1], parse_int(row[2], "repetition"),
                              parse_int(row[3], "batch"), parse_double(row[4], "bias")});
        }
    }

    const Summary summary = summarize(curves, biases, model_token(config.sampling_model));
    write_text(base / "summary.json", summary_to_json(summary).dump(2) + "\n");
}

} // namespace coval
