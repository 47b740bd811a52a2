#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coval/coverage.hpp"
#include "coval/dataset.hpp"
#include "coval/models.hpp"
#include "coval/rng.hpp"

namespace coval {

enum class Strategy {
    kRandom,
    kUncertainty,
    kQbc,
    kInfoDensity,
    kCds,
    kIcds,
    kUswcd,
};

/// Tokens: random, uncertainty, qbc, info_density, cds, icds, uswcd.
Strategy parse_strategy(std::string_view token);
std::string strategy_token(Strategy strategy);
std::vector<Strategy> all_strategies();

bool strategy_uses_density(Strategy strategy);    // cds, icds, uswcd
bool strategy_uses_model(Strategy strategy);      // uncertainty, info_density, uswcd
bool strategy_uses_committee(Strategy strategy);  // qbc
bool strategy_uses_similarity(Strategy strategy); // info_density, icds

/// Natural-log entropy of a distribution; 0 * log 0 contributes nothing.
double entropy(std::span<const double> dist);

/// dot(a,b) / (|a||b|); throws on a zero vector. One-hot rows of k blocks
/// yield (shared feature values)/k.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Similarity sums against the labeled ∪ unlabeled reference set. Because
/// cosine similarity of one-hot rows is (shared values)/k, the sum over the
/// whole reference set collapses to per-feature value histograms:
/// sum_x sim(x, x_i) = (1/k) * sum_f hist_f[x_i[f]].
class SimilarityIndex {
public:
    SimilarityIndex(const Dataset& dataset, std::span<const int> labeled,
                    std::span<const int> unlabeled);

    double similarity_sum(std::span<const int32_t> row) const;
    long reference_count() const { return reference_count_; }

private:
    std::vector<std::vector<long>> histograms_; // per feature, cardinality+1 bins
    long reference_count_ = 0;
};

/// Everything a strategy may need for one batch. Only the fields the chosen
/// strategy uses must be populated; a missing requirement raises an error that
/// names it.
struct QueryContext {
    const Dataset* dataset = nullptr;
    const PoolState* pools = nullptr;
    const DensityVector* density = nullptr;      // coverage strategies
    const FittedModel* sampling_model = nullptr; // entropy strategies
    std::vector<const FittedModel*> committee;   // qbc
    const SimilarityIndex* similarity = nullptr; // density-weighted strategies
    int budget = 1;
    Rng* rng = nullptr; // random scores and degenerate fallbacks
};

/// Informativeness per unlabeled candidate, aligned with pools->unlabeled:
///   random        seeded uniform draw
///   uncertainty   H(x_i) under the sampling model
///   qbc           mean committee entropy
///   info_density  H(x_i) * (1/U) * sum_x sim(x, x_i)
///   cds           c_i
///   icds          c_i * (1/U) * sum_x sim(x, x_i)
///   uswcd         H(x_i) * c_i
/// U is the current unlabeled-pool size.
std::vector<double> score_candidates(Strategy strategy, const QueryContext& ctx);

/// Positions (into the scored pool) of the min(b, pool) highest scores, best
/// first; ties take the earlier position.
std::vector<int> select_batch(std::span<const double> scores, int budget);

/// score_candidates + select_batch with the degenerate all-zero guard: uswcd
/// falls back to density ordering, the model-entropy strategies to seeded
/// random ordering, so a saturated model cannot collapse into index-order
/// selection. cds/icds keep their zeros (coverage is simply complete).
std::vector<int> choose_batch(Strategy strategy, const QueryContext& ctx);

} // namespace coval
