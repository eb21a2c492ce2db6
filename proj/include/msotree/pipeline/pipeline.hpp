#pragma once

#include <msotree/automata/apt.hpp>
#include <msotree/games/parity_game.hpp>
#include <msotree/logic/formula.hpp>
#include <msotree/logic/individual_free.hpp>
#include <msotree/omega/omega.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace msotree
{

  struct PipelineOptions
  {
    unsigned arity = 2;
    /// Bound on every intermediate automaton and on the simulation's
    /// subset and Safra constructions.
    std::size_t max_states = kDefaultStateCap;
    /// Complement through minimal hitting sets (default) or the exact dual.
    Dualization dualization = Dualization::Minimal;
    /// Apply reduce() after every construction; reachable_trim otherwise.
    bool reduce = true;
    /// Reuse compiled subformulas equal up to variable renaming.
    bool memoize = true;
    /// Compile the singleton and emptiness guards of the individual-free
    /// translation to fixed small automata instead of by recursion.
    bool patterns = true;
  };

  /// One entry per IfFormula node, in post order.  For memoized nodes the
  /// construction is reported as "cached".
  struct TraceRecord
  {
    std::string node;
    std::string construction;
    std::size_t states_before = 0;
    std::size_t states_after = 0;
    double seconds = 0;
  };

  struct CompilationTrace
  {
    std::vector<TraceRecord> records;
    std::size_t peak_states() const;
  };

  /// {0,1}^p as left-nested pairs: 2^0 = {0}, 2^(k+1) = 2^k x 2.  Letter
  /// coordinate i (the i-th free variable) is the i-th pair from the inside.
  HfSet bit_alphabet(std::size_t p);
  /// The letter of bit_alphabet(bits.size()) with those coordinates.
  HfSet bit_letter(const std::vector<bool>& bits);
  /// Inverse of bit_letter; throws NotPair on foreign sets.
  std::vector<bool> letter_bits(const HfSet& letter, std::size_t p);

  /// Automaton over 2^p accepting the trees whose labels, read as the
  /// characteristic vectors of X_0..X_{p-1}, satisfy \a core.  \a core must
  /// be in core form with free variables among 0..p-1.
  Apt compile(const IfFormula& core, std::size_t p, const PipelineOptions& options = {},
              CompilationTrace* trace = nullptr);

  struct Verdict
  {
    bool truth = false;
    ParityGame game;
    Player winner = Player::Opp;
    /// The winner's positional strategy, winning from prop vertex 0.
    Strategy certificate;
    CompilationTrace trace;
    Apt automaton;
    double seconds = 0;
    std::size_t peak_states = 0;
  };

  /// Nonemptiness of an automaton over a one-letter alphabet.  Throws
  /// AlphabetNotSingleton.
  Verdict decide_automaton(const Apt& a);

  /// Truth of a closed sentence on the full tree of the options' arity.
  /// Every error carries the stage it was raised in.
  Verdict decide(const Formula& sentence, const PipelineOptions& options = {});
  Verdict decide(std::string_view sentence, const PipelineOptions& options = {});

  /// The closed automaton decide() would build.
  Apt compile_sentence(const Formula& sentence, const PipelineOptions& options = {},
                       CompilationTrace* trace = nullptr);

}
