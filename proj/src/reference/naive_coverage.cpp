#include "coval/reference.hpp"

#include <set>
#include <stdexcept>

#include "coval/interactions.hpp"

namespace coval::reference {

namespace {

std::set<Interaction> interaction_set(const Dataset& dataset, std::span<const int> rows, int t) {
    std::set<Interaction> out;
    for (int i : rows) {
        for (Interaction& inter : enumerate_interactions(dataset.row(i), t)) {
            out.insert(std::move(inter));
        }
    }
    return out;
}

} // namespace

double combinatorial_coverage(const Dataset& dataset, std::span<const int> rows, int t) {
    if (t < 1 || t > dataset.feature_count()) {
        throw std::invalid_argument("interaction level out of range for the dataset");
    }
    std::set<Interaction> present = interaction_set(dataset, rows, t);
    const int k = dataset.feature_count();
    std::vector<int> flat = feature_subsets(k, t);
    long double universe = 0.0L;
    for (size_t s = 0; s < flat.size(); s += static_cast<size_t>(t)) {
        long double block = 1.0L;
        for (int j = 0; j < t; ++j) block *= dataset.cardinality(flat[s + static_cast<size_t>(j)]);
        universe += block;
    }
    return static_cast<double>(static_cast<long double>(present.size()) / universe);
}

double sdcc(const Dataset& dataset, std::span<const int> u_rows, std::span<const int> l_rows,
            int t) {
    if (t < 1 || t > dataset.feature_count()) {
        throw std::invalid_argument("interaction level out of range for the dataset");
    }
    if (u_rows.empty()) throw std::invalid_argument("sdcc requires a non-empty pool");
    std::set<Interaction> pool = interaction_set(dataset, u_rows, t);
    std::set<Interaction> labeled = interaction_set(dataset, l_rows, t);
    size_t missing = 0;
    for (const Interaction& inter : pool) {
        if (!labeled.count(inter)) ++missing;
    }
    return static_cast<double>(missing) / static_cast<double>(pool.size());
}

std::vector<double> coverage_density(const Dataset& dataset, std::span<const int> l_rows,
                                     std::span<const int> u_rows, int max_level) {
    if (max_level < 1) throw std::invalid_argument("interaction level must be at least 1");
    if (u_rows.empty()) throw std::invalid_argument("density requires a non-empty pool");
    const int levels = std::min(max_level, dataset.feature_count());
    std::vector<std::set<Interaction>> labeled;
    labeled.reserve(static_cast<size_t>(levels));
    for (int t = 1; t <= levels; ++t) labeled.push_back(interaction_set(dataset, l_rows, t));

    std::vector<double> out;
    out.reserve(u_rows.size());
    for (int i : u_rows) {
        double c = 0.0;
        for (int t = 1; t <= levels; ++t) {
            for (const Interaction& inter : enumerate_interactions(dataset.row(i), t)) {
                if (!labeled[static_cast<size_t>(t - 1)].count(inter)) {
                    c += 1.0 / static_cast<double>(t);
                }
            }
        }
        out.push_back(c);
    }
    return out;
}

} // namespace coval::reference
