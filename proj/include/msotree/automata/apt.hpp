#pragma once

#include <msotree/hf/hfset.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace msotree
{

  using StateId = std::uint32_t;
  using LetterId = std::uint32_t;

  /// One atom (d,q) of a transition conjunction.
  struct Move
  {
    std::uint32_t dir;
    StateId state;

    friend auto operator<=>(const Move&, const Move&) = default;
  };

  /// Conjunction: nonempty, sorted, duplicate-free set of moves.
  using Conj = std::vector<Move>;
  /// Disjunction of conjunctions: sorted, duplicate-free.  An element of
  /// P+(P+(Dir x Q)).
  using Dnf = std::vector<Conj>;

  /// Sorts and deduplicates in place.
  void normalize(Conj& c);
  void normalize(Dnf& d);

  /// Alternating parity tree automaton over an HF alphabet.
  ///
  /// States are HfSet names held in a vector (distinct, any order); the
  /// alphabet is a canonical HfSet whose element positions are the letter
  /// ids.  delta is dense, indexed by state * |alphabet| + letter.  An empty
  /// Dnf marks a missing transition, which validate() reports.  Acceptance
  /// is min-parity: a play wins when the least color seen infinitely often
  /// is even.
  struct Apt
  {
    unsigned arity = 2;
    HfSet alphabet;
    std::vector<HfSet> states;
    StateId initial = 0;
    std::vector<Dnf> delta;
    std::vector<unsigned> color;
    unsigned max_color = 0;

    std::size_t num_states() const { return states.size(); }
    std::size_t num_letters() const { return alphabet.size(); }

    const Dnf& at(StateId q, LetterId a) const { return delta[q * num_letters() + a]; }
    Dnf& at(StateId q, LetterId a) { return delta[q * num_letters() + a]; }

    /// Empty automaton shell with every transition missing.
    static Apt shell(unsigned arity, HfSet alphabet, std::vector<HfSet> states, StateId initial,
                     unsigned max_color);

    /// Letter id of an alphabet element; throws UnknownLetter.
    LetterId letter(const HfSet& a) const;
    /// State id of a state name; throws InvalidAutomaton.
    StateId state(const HfSet& q) const;

    /// Total number of conjunctions, a size measure.
    std::size_t num_conjunctions() const;

    friend bool operator==(const Apt&, const Apt&) = default;
  };

  /// Lists every violated invariant; empty means valid.
  std::vector<std::string> validate(const Apt& a);
  /// Throws InvalidAutomaton listing the violations.
  void require_valid(const Apt& a);

  /// delta'(q,b) = delta(q, f(b)) for f : Gamma -> Sigma given as an HF
  /// functional set.  Throws NotAFunction, EmptyAlphabet.
  Apt substitute(const Apt& a, const HfSet& f);
  /// Same, with f given by letter ids: letter b of \a gamma maps to
  /// letter map[b] of a.alphabet.
  Apt substitute(const Apt& a, const HfSet& gamma, const std::vector<LetterId>& map);

  /// Disjunction: states (0,q0), (1,q1) and a fresh initial
  /// (2, |Q0|+|Q1|) whose transitions are the union of both initials'.
  Apt disjoin(const Apt& a0, const Apt& a1);

  /// Exact dual: delta'(q,a) holds every nonempty subset of Dir x Q meeting
  /// all conjunctions of delta(q,a); colors +1.  Throws TooLarge when the
  /// number of candidate subsets 2^|Dir x Q| exceeds \a cap.
  Apt complement(const Apt& a, std::size_t cap = kDefaultSizeCap);
  /// Dual using only the minimal hitting sets.  Equivalent to complement()
  /// up to subsumed conjunctions.
  Apt complement_minimized(const Apt& a);
  /// Minimal hitting sets of a family of conjunctions.
  Dnf minimal_hitting_sets(const Dnf& d);

  /// delta'(q,a) = union over b in Gamma of delta(q,(a,b)).  Throws
  /// AlphabetNotProduct.
  Apt project(const Apt& a, const HfSet& gamma);

  /// Projection of a singleton coordinate: over Sigma x 2, the automaton
  /// for (exists X)(Sing(X) & a).  A guessed path leads to the node of X
  /// carrying the set of copies of \a a still on it, so no simulation is
  /// needed and the result stays alternating.  Throws AlphabetNotProduct,
  /// and TooLarge past \a cap states or conjunctions per transition.
  Apt project_point(const Apt& a, std::size_t cap = kDefaultSizeCap);

  bool is_nondeterministic(const Apt& a);

  /// Subset automaton over 2 x 2, states t = 1 (initial, color 0) and
  /// f = 0 (color 1).
  Apt atomic_subset(unsigned arity = 2);
  /// Successor automaton over 2 x 2, states f = (0,0) initial, t = (0,1),
  /// w = (1,0) with colors f:1, t:0, w:0.
  Apt atomic_succ(unsigned d, unsigned arity = 2);

  enum class Dualization
  {
    Exact,
    Minimal,
  };

  /// complement(disjoin(complement(a0), complement(a1))).
  Apt conjoin(const Apt& a0, const Apt& a1, Dualization dual = Dualization::Exact);

  /// Restricts to states reachable from the initial state.
  Apt reachable_trim(const Apt& a);

  /// Drops conjunctions that strictly contain another conjunction of the
  /// same transition.
  Apt remove_subsumed(const Apt& a);
  /// Quotient by the coarsest bisimulation respecting colors.
  Apt bisimulation_quotient(const Apt& a);
  /// Renumbers colors monotonically, keeping parities, to close gaps.
  Apt compress_colors(const Apt& a);
  /// Renames states to ordinals in breadth-first order from the initial.
  Apt relabel(const Apt& a);
  /// All of the above, in order.  Preserves the accepted language.
  Apt reduce(const Apt& a);

  /// States lying on a cycle of the move graph (over all letters).
  std::vector<char> cyclic_states(const Apt& a);
  /// Recolors with as few colors as the cycle structure allows, keeping the
  /// parity of the least color on every cycle; states on no cycle take the
  /// least color in use.  Preserves the accepted language.
  Apt normalize_colors(const Apt& a);

  /// Direct simulation: sim[p * n + q] implies every tree accepted from p is
  /// accepted from q.  q's color must be at least as good as p's in the
  /// parity order.
  std::vector<char> simulation_preorder(const Apt& a);
  /// Merges simulation-equivalent states, then drops each move implied by
  /// another move of its conjunction and each conjunction harder than
  /// another of its transition.  Preserves the accepted language.
  Apt simulation_reduce(const Apt& a);

  /// Canonical text form; deterministic and round-trips exactly.
  std::string serialize(const Apt& a);
  Apt parse_apt(std::string_view text);

  /// Human-readable letter/state rendering used in messages.
  std::string describe(const Apt& a);

}
