#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "coval/dataset.hpp"

namespace coval::datagen {

/// Deterministic regenerations of the six benchmark datasets, used when the
/// original CSV files are not on disk. Tic-tac-toe enumerates every legal
/// finished board and balance-scale applies the exact torque rule over the
/// full 5^4 grid, so both reconstruct the canonical data; car, nursery,
/// chess, and monk are factorial grids labeled by fixed rules chosen to match
/// the published row counts, feature counts, and cardinalities. Identical
/// calls always produce identical rows.
struct Builtin {
    Dataset dataset;
    int batch_size = 100;
    int batches = -1; ///< -1: computed from pool size and batch size
};

/// tic-tac-toe, balance-scale, car, chess, nursery, monk.
const std::vector<std::string>& builtin_names();
bool is_builtin(std::string_view name);

Builtin load_builtin(std::string_view name);

/// Writes <directory>/<name>.csv with a header row (plus <name>_test.csv for
/// the pre-split monk pair). Returns the primary CSV path.
std::string write_builtin_csv(std::string_view name, const std::string& directory);

} // namespace coval::datagen
