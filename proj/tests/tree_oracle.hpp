#pragma once

// Acceptance of regular (finitely presented) trees, decided by solving the
// membership game directly.  Independent of the emptiness pipeline.

#include <msotree/automata/apt.hpp>
#include <msotree/games/parity_game.hpp>

#include <random>

namespace msotree::testing
{

  /// Node 0 is the root; child[v][d] is the node below v in direction d.
  struct RegularTree
  {
    std::vector<LetterId> label;
    std::vector<std::vector<std::uint32_t>> child;
  };

  inline RegularTree random_tree(std::mt19937& rng, std::size_t nodes, unsigned arity,
                                 std::size_t letters)
  {
    RegularTree t;
    std::uniform_int_distribution<LetterId> lab(0, static_cast<LetterId>(letters - 1));
    std::uniform_int_distribution<std::uint32_t> node(0, static_cast<std::uint32_t>(nodes - 1));
    for (std::size_t v = 0; v < nodes; ++v)
      {
        t.label.push_back(lab(rng));
        t.child.emplace_back();
        for (unsigned d = 0; d < arity; ++d)
          t.child.back().push_back(node(rng));
      }
    return t;
  }

  /// Prop owns (state, node) and picks a conjunction; Opp picks a move.
  inline bool accepts(const Apt& a, const RegularTree& t)
  {
    std::size_t n = a.num_states(), m = t.label.size();
    Arena g;
    auto add = [&](Player p, unsigned c) {
      g.owner.push_back(p);
      g.color.push_back(c);
      g.succ.emplace_back();
      return static_cast<std::uint32_t>(g.owner.size() - 1);
    };
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t v = 0; v < m; ++v)
        add(Player::Prop, a.color[q]);
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t v = 0; v < m; ++v)
        for (const Conj& c : a.at(static_cast<StateId>(q), t.label[v]))
          {
            std::uint32_t o = add(Player::Opp, a.max_color);
            g.succ[q * m + v].push_back(o);
            for (const Move& mv : c)
              g.succ[o].push_back(static_cast<std::uint32_t>(mv.state * m + t.child[v][mv.dir]));
          }
    return solve_arena(g).winner[a.initial * m] == Player::Prop;
  }

}
