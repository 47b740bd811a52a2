#include "coval/coverage.hpp"

#include <algorithm>
#include <stdexcept>

#include "coval/interactions.hpp"

namespace coval {

namespace {

// Bitset storage up to 2^23 slots (1 MiB) per subset; larger spaces fall back
// to a hash set so sparse inventories on wide-cardinality data stay bounded.
constexpr uint64_t kBitsetSpaceLimit = uint64_t{1} << 23;

uint64_t checked_space(const Dataset& dataset, std::span<const int> features, bool pseudo_slot) {
    unsigned __int128 space = 1;
    for (int f : features) {
        uint64_t radix = static_cast<uint64_t>(dataset.cardinality(f)) + (pseudo_slot ? 1 : 0);
        space *= radix;
        if (space > static_cast<unsigned __int128>(UINT64_MAX)) {
            throw std::runtime_error("interaction index space exceeds 64 bits; "
                                     "reduce the interaction level");
        }
    }
    return static_cast<uint64_t>(space);
}

} // namespace

std::vector<SubsetSpace> make_subset_spaces(const Dataset& dataset, int t) {
    const int k = dataset.feature_count();
    std::vector<int> flat = feature_subsets(k, t);
    const size_t n_subsets = flat.size() / static_cast<size_t>(t);
    std::vector<SubsetSpace> spaces;
    spaces.reserve(n_subsets);
    for (size_t s = 0; s < n_subsets; ++s) {
        SubsetSpace sp;
        sp.features.assign(flat.begin() + static_cast<long>(s) * t,
                           flat.begin() + static_cast<long>(s + 1) * t);
        sp.space = checked_space(dataset, sp.features, true);
        sp.true_space = checked_space(dataset, sp.features, false);
        sp.strides.assign(sp.features.size(), 1);
        for (int j = t - 2; j >= 0; --j) {
            uint64_t radix = static_cast<uint64_t>(dataset.cardinality(sp.features[j + 1])) + 1;
            sp.strides[j] = sp.strides[j + 1] * radix;
        }
        spaces.push_back(std::move(sp));
    }
    return spaces;
}

RankSet::RankSet(uint64_t space) : use_bits_(space <= kBitsetSpaceLimit) {
    if (use_bits_) bits_.assign((space + 63) / 64, 0);
}

bool RankSet::insert(uint64_t rank) {
    if (use_bits_) {
        uint64_t& word = bits_[rank >> 6];
        const uint64_t mask = uint64_t{1} << (rank & 63);
        if (word & mask) return false;
        word |= mask;
        ++count_;
        return true;
    }
    bool fresh = sparse_.insert(rank).second;
    if (fresh) ++count_;
    return fresh;
}

CoverageTracker::CoverageTracker(const Dataset& dataset, int max_level) : dataset_(&dataset) {
    if (max_level < 1) throw std::invalid_argument("interaction level must be at least 1");
    const int levels = std::min(max_level, dataset.feature_count());
    levels_.reserve(static_cast<size_t>(levels));
    for (int t = 1; t <= levels; ++t) {
        Level level;
        level.spaces = make_subset_spaces(dataset, t);
        level.sets.reserve(level.spaces.size());
        for (const SubsetSpace& sp : level.spaces) level.sets.emplace_back(sp.space);
        levels_.push_back(std::move(level));
    }
}

void CoverageTracker::add_row(std::span<const int32_t> row) {
    if (row.size() != static_cast<size_t>(dataset_->feature_count())) {
        throw std::invalid_argument("row width does not match the dataset");
    }
    for (Level& level : levels_) {
        for (size_t s = 0; s < level.spaces.size(); ++s) {
            level.sets[s].insert(level.spaces[s].rank(row));
        }
    }
    ++labeled_rows_;
}

void CoverageTracker::add_rows(std::span<const int> indices) {
    for (int i : indices) add_row(dataset_->row(i));
}

DensityVector CoverageTracker::density(std::span<const int> unlabeled) const {
    if (unlabeled.empty()) throw std::invalid_argument("density requires a non-empty pool");
    DensityVector out;
    out.levels_used = max_level();
    out.values.assign(unlabeled.size(), 0.0);
    const long n = static_cast<long>(unlabeled.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        out.values[static_cast<size_t>(i)] =
            density_of_row(dataset_->row(unlabeled[static_cast<size_t>(i)]));
    }
    return out;
}

double CoverageTracker::density_of_row(std::span<const int32_t> row) const {
    if (row.size() != static_cast<size_t>(dataset_->feature_count())) {
        throw std::invalid_argument("row width does not match the dataset");
    }
    double c = 0.0;
    int t = 1;
    for (const Level& level : levels_) {
        long misses = 0;
        for (size_t s = 0; s < level.spaces.size(); ++s) {
            if (!level.sets[s].test(level.spaces[s].rank(row))) ++misses;
        }
        c += static_cast<double>(misses) * (1.0 / static_cast<double>(t));
        ++t;
    }
    return c;
}

std::vector<double> CoverageTracker::sdcc_by_level(std::span<const int> unlabeled) const {
    if (unlabeled.empty()) throw std::invalid_argument("sdcc requires a non-empty pool");
    std::vector<double> out(levels_.size(), 0.0);
    const long n_levels = static_cast<long>(levels_.size());
#pragma omp parallel for schedule(dynamic)
    for (long li = 0; li < n_levels; ++li) {
        const Level& level = levels_[static_cast<size_t>(li)];
        uint64_t total = 0;
        uint64_t missing = 0;
        for (size_t s = 0; s < level.spaces.size(); ++s) {
            RankSet seen(level.spaces[s].space);
            for (int i : unlabeled) {
                const uint64_t rank = level.spaces[s].rank(dataset_->row(i));
                if (seen.insert(rank)) {
                    ++total;
                    if (!level.sets[s].test(rank)) ++missing;
                }
            }
        }
        out[static_cast<size_t>(li)] =
            static_cast<double>(missing) / static_cast<double>(total);
    }
    return out;
}

double combinatorial_coverage(const Dataset& dataset, std::span<const int> rows, int t) {
    if (t < 1 || t > dataset.feature_count()) {
        throw std::invalid_argument("interaction level out of range for the dataset");
    }
    std::vector<SubsetSpace> spaces = make_subset_spaces(dataset, t);
    unsigned __int128 denom = 0;
    uint64_t distinct = 0;
    for (const SubsetSpace& sp : spaces) {
        denom += sp.true_space;
        RankSet seen(sp.space);
        for (int i : rows) {
            if (seen.insert(sp.rank(dataset.row(i)))) ++distinct;
        }
    }
    if (denom == 0) throw std::logic_error("empty interaction universe");
    return static_cast<double>(distinct) / static_cast<double>(denom);
}

double sdcc(const Dataset& dataset, std::span<const int> u_rows, std::span<const int> l_rows,
            int t) {
    if (t < 1 || t > dataset.feature_count()) {
        throw std::invalid_argument("interaction level out of range for the dataset");
    }
    if (u_rows.empty()) throw std::invalid_argument("sdcc requires a non-empty pool");
    std::vector<SubsetSpace> spaces = make_subset_spaces(dataset, t);
    uint64_t total = 0;
    uint64_t missing = 0;
    for (const SubsetSpace& sp : spaces) {
        RankSet labeled(sp.space);
        for (int i : l_rows) labeled.insert(sp.rank(dataset.row(i)));
        RankSet seen(sp.space);
        for (int i : u_rows) {
            const uint64_t rank = sp.rank(dataset.row(i));
            if (seen.insert(rank)) {
                ++total;
                if (!labeled.test(rank)) ++missing;
            }
        }
    }
    return static_cast<double>(missing) / static_cast<double>(total);
}

DensityVector coverage_density(const Dataset& dataset, std::span<const int> l_rows,
                               std::span<const int> u_rows, int max_level) {
    CoverageTracker tracker(dataset, max_level);
    tracker.add_rows(l_rows);
    return tracker.density(u_rows);
}

} // namespace coval
