#pragma once

#include <msotree/automata/apt.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace msotree
{

  /// A set of (q, q') pairs of source-automaton state ids, sorted.
  using PairSet = std::vector<std::pair<StateId, StateId>>;

  /// The subset construction !A, reachable part only.  automaton carries
  /// the transition structure over A's alphabet; its states are named by
  /// HfSets of pairs of A's state names and carry no meaningful coloring.
  /// pairs[s] is the content of state s in terms of A's state ids.
  struct BangAutomaton
  {
    Apt automaton;
    std::vector<PairSet> pairs;
    std::vector<unsigned> source_color;
    StateId source_initial = 0;
  };

  inline constexpr std::size_t kDefaultStateCap = 50000;

  enum class BangChoices
  {
    /// One conjunction per choice function.
    All,
    /// Only the choices whose per-direction pair sets are minimal; the
    /// acceptance condition of !A is monotone in those sets, so the
    /// accepted language is unchanged.
    Minimal,
  };

  /// Throws TooLarge past \a cap reachable states.
  BangAutomaton bang(const Apt& a, std::size_t cap = kDefaultStateCap,
                     BangChoices choices = BangChoices::All);

  /// Nondeterministic Buchi word automaton; letters are ids into \a letters.
  struct Nbw
  {
    std::vector<HfSet> letters;
    std::vector<HfSet> states;
    std::vector<std::uint32_t> initial;
    /// succ[q * |letters| + a], sorted; empty is a dead end.
    std::vector<std::vector<std::uint32_t>> succ;
    std::vector<char> accepting;

    std::size_t num_states() const { return states.size(); }
    std::size_t num_letters() const { return letters.size(); }
    const std::vector<std::uint32_t>& at(std::uint32_t q, std::uint32_t a) const
    {
      return succ[q * num_letters() + a];
    }
  };

  /// Deterministic parity word automaton with a total transition function
  /// and min-parity acceptance on state colors.
  struct Dpw
  {
    std::vector<HfSet> letters;
    std::vector<HfSet> states;
    std::uint32_t initial = 0;
    std::vector<std::uint32_t> delta; // delta[q * |letters| + a]
    std::vector<unsigned> color;
    unsigned max_color = 0;

    std::size_t num_states() const { return states.size(); }
    std::size_t num_letters() const { return letters.size(); }
    std::uint32_t at(std::uint32_t q, std::uint32_t a) const { return delta[q * num_letters() + a]; }
  };

  /// Accepts S0 S1 ... over \a letters iff some trace q0 q1 ... with
  /// q0 = initial in pi2(S0) and (q_i, q_{i+1}) in S_{i+1} has an odd least
  /// color seen infinitely often under \a color.
  Nbw nbw_bad_trace(const std::vector<unsigned>& color, StateId initial,
                    const std::vector<PairSet>& letters, const std::vector<HfSet>& letter_names);
  Nbw nbw_bad_trace(const BangAutomaton& b);

  /// Safra trees with nodes ranked by age; throws TooLarge past \a cap states.
  Dpw determinize(const Nbw& n, std::size_t cap = kDefaultStateCap);

  /// Same structure, colors +1.
  Dpw complement_dpw(const Dpw& d);

  /// Letter ids; \a v nonempty.  Throws UnknownLetter.
  bool lasso_accepts(const Dpw& d, const std::vector<std::uint32_t>& u,
                     const std::vector<std::uint32_t>& v);
  /// Membership of u v^omega by cycle search in the product with the word.
  bool nbw_lasso_accepts(const Nbw& n, const std::vector<std::uint32_t>& u,
                         const std::vector<std::uint32_t>& v);

  /// Oracle: true iff every trace of u v^omega from \a initial has an even
  /// least color seen infinitely often.
  bool all_traces_accepting_lasso(const std::vector<unsigned>& color, StateId initial,
                                  const std::vector<PairSet>& u, const std::vector<PairSet>& v);

  /// Product of !A with the complemented determinization of its bad-trace
  /// automaton: a nondeterministic parity automaton equivalent to A.
  Apt nd(const Apt& a, std::size_t cap = kDefaultStateCap);

  std::string serialize(const Dpw& d);
  Dpw parse_dpw(std::string_view text);
  std::string serialize(const Nbw& n);
  Nbw parse_nbw(std::string_view text);

}
