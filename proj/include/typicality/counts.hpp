#pragma once

#include <functional>
#include <map>
#include <string>

namespace typicality {

// Word -> corpus count. Ordered so that every aggregation over it has a
// fixed summation order.
using WordCounts = std::map<std::string, double, std::less<>>;

}  // namespace typicality
