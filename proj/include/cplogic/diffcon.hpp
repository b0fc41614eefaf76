#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace cplogic {

// Feasibility of { lo[v] <= x_v <= hi[v] } plus { x_a <= x_b } for each edge
// (a, b), restricted to the variables marked in `used`.  Solved as a
// shortest-path problem with Bellman-Ford; returns an integral witness, or
// nullopt when the constraint graph has a negative cycle or an empty interval.
std::optional<std::vector<long>> difference_feasible(const std::vector<long>& lo,
                                                     const std::vector<long>& hi,
                                                     const std::vector<std::pair<int, int>>& edges,
                                                     const std::vector<char>& used);

}  // namespace cplogic
