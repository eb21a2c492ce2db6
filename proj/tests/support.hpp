#pragma once

#include <msotree/automata/apt.hpp>

#include <random>

namespace msotree::testing
{

  /// Random valid automaton; every transition has 1..3 conjunctions of
  /// 1..3 moves.
  inline Apt random_apt(std::mt19937& rng, std::size_t nstates, unsigned arity, unsigned max_color,
                        HfSet alphabet = hf::ordinal(1))
  {
    std::vector<HfSet> names;
    for (std::size_t i = 0; i < nstates; ++i)
      names.push_back(hf::ordinal(i));
    Apt a = Apt::shell(arity, alphabet, names, 0, max_color);
    std::uniform_int_distribution<unsigned> col(0, max_color);
    std::uniform_int_distribution<std::size_t> nconj(1, 3), csize(1, 3);
    std::uniform_int_distribution<std::uint32_t> dir(0, arity - 1);
    std::uniform_int_distribution<StateId> st(0, static_cast<StateId>(nstates - 1));
    for (StateId q = 0; q < nstates; ++q)
      {
        a.color[q] = col(rng);
        for (LetterId l = 0; l < a.num_letters(); ++l)
          {
            Dnf d;
            for (std::size_t i = nconj(rng); i > 0; --i)
              {
                Conj c;
                for (std::size_t j = csize(rng); j > 0; --j)
                  c.push_back(Move{dir(rng), st(rng)});
                normalize(c);
                d.push_back(c);
              }
            normalize(d);
            a.at(q, l) = d;
          }
      }
    return a;
  }

}
