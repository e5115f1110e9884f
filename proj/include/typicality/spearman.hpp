#pragma once

#include <optional>
#include <span>
#include <vector>

namespace typicality::eval {

// Ranks starting at 1; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of average ranks. Returns std::nullopt when fewer than
// three points are given or either rank vector has zero variance. Throws
// std::invalid_argument on length mismatch.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

}  // namespace typicality::eval
