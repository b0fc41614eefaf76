#include "cplogic/diffcon.hpp"

namespace cplogic {

std::optional<std::vector<long>> difference_feasible(const std::vector<long>& lo,
                                                     const std::vector<long>& hi,
                                                     const std::vector<std::pair<int, int>>& edges,
                                                     const std::vector<char>& used) {
  const std::size_t n = lo.size();
  for (std::size_t v = 0; v < n; ++v)
    if (used[v] && lo[v] > hi[v]) return std::nullopt;

  // Graph edges (u -> v, w) encode x_v - x_u <= w; vertex n is the source z.
  struct E {
    int u, v;
    long w;
  };
  std::vector<E> g;
  for (std::size_t v = 0; v < n; ++v) {
    if (!used[v]) continue;
    g.push_back({static_cast<int>(n), static_cast<int>(v), hi[v]});   // x_v <= hi
    g.push_back({static_cast<int>(v), static_cast<int>(n), -lo[v]});  // x_v >= lo
  }
  for (auto [a, b] : edges) {
    if (!used[static_cast<std::size_t>(a)] || !used[static_cast<std::size_t>(b)]) continue;
    g.push_back({b, a, 0});  // x_a <= x_b
  }

  const long inf = static_cast<long>(1) << 60;
  std::vector<long> dist(n + 1, inf);
  dist[n] = 0;
  for (std::size_t round = 0; round <= n + 1; ++round) {
    bool relaxed = false;
    for (const E& e : g) {
      if (dist[static_cast<std::size_t>(e.u)] == inf) continue;
      long cand = dist[static_cast<std::size_t>(e.u)] + e.w;
      if (cand < dist[static_cast<std::size_t>(e.v)]) {
        dist[static_cast<std::size_t>(e.v)] = cand;
        relaxed = true;
      }
    }
    if (!relaxed) {
      std::vector<long> out(n, 0);
      for (std::size_t v = 0; v < n; ++v)
        if (used[v]) out[v] = dist[v];
      return out;
    }
  }
  return std::nullopt;  // still relaxing after n+1 rounds: negative cycle
}

}  // namespace cplogic
