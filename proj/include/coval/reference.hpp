#pragma once

#include <span>
#include <vector>

#include "coval/dataset.hpp"

namespace coval::reference {

/// Serial reference implementations of the coverage computations, written as
/// direct set manipulations over materialized interaction tuples. They share
/// no code with the optimized kernels in coval/coverage.hpp and exist so tests
/// and the benchmark can compare the two paths.

double combinatorial_coverage(const Dataset& dataset, std::span<const int> rows, int t);

double sdcc(const Dataset& dataset, std::span<const int> u_rows, std::span<const int> l_rows,
            int t);

/// Density of each unlabeled row: walk its t-way interactions for t = 1..T and
/// add 1/t for every one absent from the labeled rows' inventory.
std::vector<double> coverage_density(const Dataset& dataset, std::span<const int> l_rows,
                                     std::span<const int> u_rows, int max_level);

} // namespace coval::reference
