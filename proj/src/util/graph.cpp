#include <msotree/util/graph.hpp>

#include <algorithm>

namespace msotree
{

  Components strongly_connected(const Successors& succ, const std::vector<char>& in)
  {
    std::size_t n = succ.size();
    Components out;
    out.comp.assign(n, -1);
    std::vector<std::int64_t> index(n, -1), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<std::uint32_t> stack;
    std::int64_t counter = 0;
    struct Frame
    {
      std::uint32_t v;
      std::size_t next;
    };
    std::vector<Frame> call;
    for (std::uint32_t root = 0; root < n; ++root)
      {
        if (!in[root] || index[root] >= 0)
          continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty())
          {
            std::uint32_t v = call.back().v;
            if (call.back().next < succ[v].size())
              {
                std::uint32_t w = succ[v][call.back().next++];
                if (!in[w])
                  continue;
                if (index[w] < 0)
                  {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                  }
                else if (on_stack[w])
                  low[v] = std::min(low[v], index[w]);
                continue;
              }
            call.pop_back();
            if (!call.empty())
              low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] != index[v])
              continue;
            auto id = static_cast<std::int64_t>(out.cyclic.size());
            std::size_t size = 0;
            std::uint32_t w;
            do
              {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                out.comp[w] = id;
                ++size;
              }
            while (w != v);
            bool cyclic = size > 1 || std::find(succ[v].begin(), succ[v].end(), v) != succ[v].end();
            out.cyclic.push_back(cyclic ? 1 : 0);
          }
      }
    return out;
  }

  std::vector<char> reachable(const Successors& succ, const std::vector<std::uint32_t>& roots)
  {
    std::vector<char> seen(succ.size(), 0);
    std::vector<std::uint32_t> stack;
    for (auto r : roots)
      if (!seen[r])
        {
          seen[r] = 1;
          stack.push_back(r);
        }
    while (!stack.empty())
      {
        auto v = stack.back();
        stack.pop_back();
        for (auto w : succ[v])
          if (!seen[w])
            {
              seen[w] = 1;
              stack.push_back(w);
            }
      }
    return seen;
  }

  bool cycle_with_least_color(const Successors& succ, const std::vector<char>& in,
                              const std::vector<unsigned>& color, unsigned c)
  {
    std::vector<char> sub(succ.size(), 0);
    for (std::size_t v = 0; v < succ.size(); ++v)
      sub[v] = in[v] && color[v] >= c;
    Components k = strongly_connected(succ, sub);
    for (std::size_t v = 0; v < succ.size(); ++v)
      if (sub[v] && color[v] == c && k.cyclic[k.comp[v]])
        return true;
    return false;
  }

}
