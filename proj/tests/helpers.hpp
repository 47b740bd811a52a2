#pragma once

#include <string>
#include <vector>

#include "coval/dataset.hpp"
#include "coval/rng.hpp"

namespace testutil {

/// Dataset from integer cells; the last column is the class. Tokens are built
/// so value index == the integer written, provided each column introduces its
/// values in increasing order starting at 0 (true for the fixtures here).
inline coval::Dataset from_ints(const std::vector<std::vector<int>>& rows,
                                const std::string& name = "fixture") {
    std::vector<std::vector<std::string>> tokens;
    tokens.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<std::string> line;
        line.reserve(row.size());
        for (int v : row) line.push_back("v" + std::to_string(v));
        tokens.push_back(std::move(line));
    }
    return coval::Dataset::from_tokens(tokens, {}, {}, name);
}

/// Ensures every value 0..card-1 (and class 0..classes-1) appears before any
/// random rows, so cardinalities and index order are exactly as requested.
inline coval::Dataset random_dataset(coval::Rng& rng, int rows, int features, int card,
                                     int classes) {
    std::vector<std::vector<int>> cells;
    const int preamble = std::max(card, classes);
    for (int i = 0; i < preamble; ++i) {
        std::vector<int> row(features + 1);
        for (int f = 0; f < features; ++f) row[f] = i % card;
        row[features] = i % classes;
        cells.push_back(std::move(row));
    }
    for (int i = preamble; i < rows; ++i) {
        std::vector<int> row(features + 1);
        for (int f = 0; f < features; ++f) {
            row[f] = static_cast<int>(rng.below(static_cast<uint64_t>(card)));
        }
        row[features] = static_cast<int>(rng.below(static_cast<uint64_t>(classes)));
        cells.push_back(std::move(row));
    }
    return from_ints(cells, "random-fixture");
}

} // namespace testutil
