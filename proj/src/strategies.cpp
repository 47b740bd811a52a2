#include "coval/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace coval {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

std::vector<double> entropy_scores(const FittedModel& model, const Dataset& dataset,
                                   std::span<const int> unlabeled) {
    std::vector<double> out(unlabeled.size(), 0.0);
    const long n = static_cast<long>(unlabeled.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        out[static_cast<size_t>(i)] =
            entropy(model.predict_proba(dataset.row(unlabeled[static_cast<size_t>(i)])));
    }
    return out;
}

std::vector<double> similarity_factors(const QueryContext& ctx) {
    const std::vector<int>& unlabeled = ctx.pools->unlabeled;
    std::vector<double> out(unlabeled.size(), 0.0);
    const double inv_u = 1.0 / static_cast<double>(unlabeled.size());
    const long n = static_cast<long>(unlabeled.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        out[static_cast<size_t>(i)] =
            inv_u *
            ctx.similarity->similarity_sum(ctx.dataset->row(unlabeled[static_cast<size_t>(i)]));
    }
    return out;
}

std::vector<double> random_scores(Rng& rng, size_t n) {
    std::vector<double> out(n);
    for (double& s : out) s = rng.uniform();
    return out;
}

} // namespace

Strategy parse_strategy(std::string_view token) {
    if (token == "random") return Strategy::kRandom;
    if (token == "uncertainty") return Strategy::kUncertainty;
    if (token == "qbc") return Strategy::kQbc;
    if (token == "info_density") return Strategy::kInfoDensity;
    if (token == "cds") return Strategy::kCds;
    if (token == "icds") return Strategy::kIcds;
    if (token == "uswcd") return Strategy::kUswcd;
    throw std::invalid_argument("unknown strategy token '" + std::string(token) + "'");
}

std::string strategy_token(Strategy strategy) {
    switch (strategy) {
    case Strategy::kRandom: return "random";
    case Strategy::kUncertainty: return "uncertainty";
    case Strategy::kQbc: return "qbc";
    case Strategy::kInfoDensity: return "info_density";
    case Strategy::kCds: return "cds";
    case Strategy::kIcds: return "icds";
    case Strategy::kUswcd: return "uswcd";
    }
    throw std::logic_error("unreachable strategy");
}

std::vector<Strategy> all_strategies() {
    return {Strategy::kRandom,      Strategy::kUncertainty, Strategy::kQbc,
            Strategy::kInfoDensity, Strategy::kCds,         Strategy::kIcds,
            Strategy::kUswcd};
}

bool strategy_uses_density(Strategy strategy) {
    return strategy == Strategy::kCds || strategy == Strategy::kIcds ||
           strategy == Strategy::kUswcd;
}

bool strategy_uses_model(Strategy strategy) {
    return strategy == Strategy::kUncertainty || strategy == Strategy::kInfoDensity ||
           strategy == Strategy::kUswcd;
}

bool strategy_uses_committee(Strategy strategy) { return strategy == Strategy::kQbc; }

bool strategy_uses_similarity(Strategy strategy) {
    return strategy == Strategy::kInfoDensity || strategy == Strategy::kIcds;
}

double entropy(std::span<const double> dist) {
    double h = 0.0;
    for (double p : dist) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("vectors differ in dimension");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) {
        throw std::invalid_argument("cosine similarity of a zero vector is undefined");
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

SimilarityIndex::SimilarityIndex(const Dataset& dataset, std::span<const int> labeled,
                                 std::span<const int> unlabeled) {
    const int k = dataset.feature_count();
    histograms_.resize(static_cast<size_t>(k));
    for (int f = 0; f < k; ++f) {
        histograms_[static_cast<size_t>(f)].assign(
            static_cast<size_t>(dataset.cardinality(f)) + 1, 0);
    }
    auto count = [&](std::span<const int> rows) {
        for (int i : rows) {
            std::span<const int32_t> row = dataset.row(i);
            for (int f = 0; f < k; ++f) {
                ++histograms_[static_cast<size_t>(f)][static_cast<size_t>(row[f])];
            }
        }
    };
    count(labeled);
    count(unlabeled);
    reference_count_ = static_cast<long>(labeled.size() + unlabeled.size());
}

double SimilarityIndex::similarity_sum(std::span<const int32_t> row) const {
    const size_t k = histograms_.size();
    if (row.size() != k) throw std::invalid_argument("row width does not match the index");
    long shared = 0;
    for (size_t f = 0; f < k; ++f) shared += histograms_[f][static_cast<size_t>(row[f])];
    return static_cast<double>(shared) / static_cast<double>(k);
}

std::vector<double> score_candidates(Strategy strategy, const QueryContext& ctx) {
    require(ctx.dataset != nullptr && ctx.pools != nullptr,
            "scoring requires the dataset and pools");
    const std::vector<int>& unlabeled = ctx.pools->unlabeled;
    if (strategy_uses_density(strategy)) {
        require(ctx.density != nullptr,
                "this strategy requires coverage densities for the unlabeled pool");
        require(ctx.density->values.size() == unlabeled.size(),
                "density vector is not aligned with the unlabeled pool");
    }
    if (strategy_uses_model(strategy)) {
        require(ctx.sampling_model != nullptr, "this strategy requires the sampling model");
    }
    if (strategy_uses_similarity(strategy)) {
        require(ctx.similarity != nullptr, "this strategy requires a similarity index");
    }

    switch (strategy) {
    case Strategy::kRandom: {
        require(ctx.rng != nullptr, "random sampling requires a seeded rng");
        return random_scores(*ctx.rng, unlabeled.size());
    }
    case Strategy::kUncertainty:
        return entropy_scores(*ctx.sampling_model, *ctx.dataset, unlabeled);
    case Strategy::kQbc: {
        require(!ctx.committee.empty(), "query-by-committee requires a non-empty committee");
        std::vector<double> mean(unlabeled.size(), 0.0);
        for (const FittedModel* member : ctx.committee) {
            require(member != nullptr, "query-by-committee requires a non-empty committee");
            std::vector<double> h = entropy_scores(*member, *ctx.dataset, unlabeled);
            for (size_t i = 0; i < mean.size(); ++i) mean[i] += h[i];
        }
        const double inv = 1.0 / static_cast<double>(ctx.committee.size());
        for (double& s : mean) s *= inv;
        return mean;
    }
    case Strategy::kInfoDensity: {
        std::vector<double> scores = entropy_scores(*ctx.sampling_model, *ctx.dataset, unlabeled);
        std::vector<double> factors = similarity_factors(ctx);
        for (size_t i = 0; i < scores.size(); ++i) scores[i] *= factors[i];
        return scores;
    }
    case Strategy::kCds:
        return ctx.density->values;
    case Strategy::kIcds: {
        std::vector<double> scores = similarity_factors(ctx);
        for (size_t i = 0; i < scores.size(); ++i) scores[i] *= ctx.density->values[i];
        return scores;
    }
    case Strategy::kUswcd: {
        std::vector<double> scores = entropy_scores(*ctx.sampling_model, *ctx.dataset, unlabeled);
        for (size_t i = 0; i < scores.size(); ++i) scores[i] *= ctx.density->values[i];
        return scores;
    }
    }
    throw std::logic_error("unreachable strategy");
}

std::vector<int> select_batch(std::span<const double> scores, int budget) {
    if (budget < 1) throw std::invalid_argument("batch budget must be at least 1");
    if (scores.empty()) return {};
    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double sa = scores[static_cast<size_t>(a)];
        const double sb = scores[static_cast<size_t>(b)];
        if (sa != sb) return sa > sb;
        return a < b;
    });
    const size_t take = std::min(static_cast<size_t>(budget), scores.size());
    order.resize(take);
    return order;
}

std::vector<int> choose_batch(Strategy strategy, const QueryContext& ctx) {
    std::vector<double> scores = score_candidates(strategy, ctx);
    if (scores.empty()) return {};
    const double max_score = *std::max_element(scores.begin(), scores.end());
    if (max_score == 0.0) {
        if (strategy == Strategy::kUswcd) {
            scores = ctx.density->values;
        } else if (strategy == Strategy::kUncertainty || strategy == Strategy::kQbc ||
                   strategy == Strategy::kInfoDensity) {
            require(ctx.rng != nullptr, "degenerate-score fallback requires a seeded rng");
            scores = random_scores(*ctx.rng, scores.size());
        }
    }
    return select_batch(scores, ctx.budget);
}

} // namespace coval
