#pragma once

#include <msotree/automata/apt.hpp>
#include <msotree/hf/hfset.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace msotree
{

  enum class Player : std::uint8_t
  {
    Prop = 0, // wins when the least color seen infinitely often is even
    Opp = 1,
  };

  constexpr Player other(Player p) { return p == Player::Prop ? Player::Opp : Player::Prop; }
  std::string_view to_string(Player p);

  // ------------------------------------------------------------ plain arena

  /// Min-parity game on an explicit graph; every vertex needs a successor.
  struct Arena
  {
    std::vector<Player> owner;
    std::vector<std::vector<std::uint32_t>> succ;
    std::vector<unsigned> color;

    std::size_t size() const { return owner.size(); }
  };

  inline constexpr std::uint32_t kNoChoice = 0xffffffffu;

  /// Winner per vertex and, for each vertex, the edge index its owner plays
  /// when the owner wins there (kNoChoice otherwise).
  struct ArenaSolution
  {
    std::vector<Player> winner;
    std::vector<std::uint32_t> choice;
  };

  /// Zielonka's recursion on the least color.
  ArenaSolution solve_arena(const Arena& g);

  /// Enumerates every pair of positional strategies.  Throws TooLarge when
  /// the product of out-degrees exceeds \a cap.
  Player brute_force_winner(const Arena& g, std::uint32_t start, std::size_t cap = 1000000);

  /// True iff every cycle reachable from \a start, once \a winner is fixed
  /// to \a choice, has a least color of the winner's parity.  Throws
  /// IncompleteStrategy, IllegalMove.
  bool check_arena_certificate(const Arena& g, Player winner, const std::vector<std::uint32_t>& choice,
                               std::uint32_t start);

  // ------------------------------------------------------------ reduced games

  struct OppEdge
  {
    std::uint32_t dir;
    std::uint32_t target; // prop vertex index

    friend auto operator<=>(const OppEdge&, const OppEdge&) = default;
  };

  /// Bipartite game: Prop moves from a prop vertex to an opp vertex, Opp
  /// answers with a direction and a prop vertex.  Vertices are named by
  /// HfSets; edge lists are kept sorted by the canonical order of the
  /// target's name (for opp edges, of the pair (d, target)).
  struct ParityGame
  {
    std::vector<HfSet> prop;
    std::vector<HfSet> opp;
    std::vector<std::vector<std::uint32_t>> e_prop; // prop -> opp indices
    std::vector<std::vector<OppEdge>> e_opp;
    std::vector<unsigned> color_prop;
    std::vector<unsigned> color_opp;
    unsigned max_color = 0;

    friend bool operator==(const ParityGame&, const ParityGame&) = default;
  };

  struct Vertex
  {
    Player side;
    std::uint32_t index;

    friend bool operator==(const Vertex&, const Vertex&) = default;
  };

  /// Positional strategy of one player; only the owner's table is used.
  struct Strategy
  {
    Player owner = Player::Prop;
    std::vector<std::optional<std::uint32_t>> at_prop; // chosen opp vertex
    std::vector<std::optional<OppEdge>> at_opp;
  };

  struct SolveResult
  {
    std::vector<Player> prop_winner;
    std::vector<Player> opp_winner;
    Strategy prop_strategy; // on Prop's winning prop vertices
    Strategy opp_strategy;  // on Opp's winning opp vertices
  };

  struct Decision
  {
    Player winner;
    Strategy strategy;
  };

  std::vector<std::string> validate(const ParityGame& g);
  void require_valid(const ParityGame& g);
  /// Sorts edge lists into canonical order and drops duplicates.
  void normalize(ParityGame& g);

  /// Prop vertices come first, opp vertex i is arena vertex |prop| + i.
  Arena to_arena(const ParityGame& g);

  SolveResult solve(const ParityGame& g);
  Decision solve(const ParityGame& g, Vertex start);
  Player brute_force_solve(const ParityGame& g, Vertex start, std::size_t cap = 1000000);
  bool check_certificate(const ParityGame& g, Player winner, const Strategy& s, Vertex start);

  /// Acceptance game of an automaton over a one-letter alphabet: prop
  /// vertices are the states reachable in the game, breadth first from the
  /// initial state (which is prop vertex 0); opp vertices are the pairs
  /// (q, C) for C in delta(q, the letter), colored max_color.  Throws
  /// AlphabetNotSingleton.
  ParityGame acceptance_game_alpha1(const Apt& a);

  std::string serialize(const ParityGame& g);
  ParityGame parse_game(std::string_view text);
  std::string serialize(const ParityGame& g, const Strategy& s);
  Strategy parse_strategy(std::string_view text, const ParityGame& g);

  /// Looks up a vertex by its rendered name.  Throws UnknownVertex.
  Vertex find_vertex(const ParityGame& g, const HfSet& name);

}
