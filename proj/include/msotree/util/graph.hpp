#pragma once

#include <cstdint>
#include <vector>

namespace msotree
{

  using Successors = std::vector<std::vector<std::uint32_t>>;

  /// Strongly connected components of the subgraph induced by the vertices
  /// with in[v] set.  comp[v] is -1 outside the subgraph; cyclic[c] tells
  /// whether component c contains a cycle (more than one vertex, or a
  /// self-loop).
  struct Components
  {
    std::vector<std::int64_t> comp;
    std::vector<char> cyclic;
  };

  Components strongly_connected(const Successors& succ, const std::vector<char>& in);

  /// Vertices reachable from \a roots.
  std::vector<char> reachable(const Successors& succ, const std::vector<std::uint32_t>& roots);

  /// True iff some cycle inside the vertices colored >= c passes through a
  /// vertex colored exactly c.  Only vertices with in[v] set count.
  bool cycle_with_least_color(const Successors& succ, const std::vector<char>& in,
                              const std::vector<unsigned>& color, unsigned c);

}
