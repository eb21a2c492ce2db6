#include <doctest.h>

#include <msotree/error.hpp>
#include <msotree/games/parity_game.hpp>
#include <msotree/omega/omega.hpp>

#include "support.hpp"

#include <cmath>
#include <functional>
#include <random>

using namespace msotree;
using msotree::testing::random_apt;

namespace
{
  using Word = std::vector<std::uint32_t>;

  HfSet O(std::size_t n) { return hf::ordinal(n); }

  /// Calls fn on every word over k letters with length in [lo, hi].
  void for_words(std::uint32_t k, std::size_t lo, std::size_t hi, const std::function<void(const Word&)>& fn)
  {
    Word w;
    std::function<void()> rec = [&]() {
      if (w.size() >= lo)
        fn(w);
      if (w.size() == hi)
        return;
      for (std::uint32_t a = 0; a < k; ++a)
        {
          w.push_back(a);
          rec();
          w.pop_back();
        }
    };
    rec();
  }

  Nbw random_nbw(std::mt19937& rng, std::size_t nq, std::size_t nl)
  {
    Nbw n;
    for (std::size_t i = 0; i < nl; ++i)
      n.letters.push_back(O(i));
    for (std::size_t i = 0; i < nq; ++i)
      n.states.push_back(O(i));
    std::uniform_int_distribution<int> coin(0, 2);
    n.initial = {0};
    if (nq > 1 && coin(rng) == 0)
      n.initial.push_back(1);
    for (std::size_t q = 0; q < nq; ++q)
      n.accepting.push_back(coin(rng) == 0 ? 1 : 0);
    n.succ.assign(nq * nl, {});
    for (std::size_t q = 0; q < nq; ++q)
      for (std::size_t a = 0; a < nl; ++a)
        for (std::uint32_t t = 0; t < nq; ++t)
          if (coin(rng) == 0)
            n.succ[q * nl + a].push_back(t);
    return n;
  }

  bool decide_alpha1(const Apt& a)
  {
    return solve(acceptance_game_alpha1(a), Vertex{Player::Prop, 0}).winner == Player::Prop;
  }

  Apt one_state(unsigned color, unsigned arity = 2)
  {
    Apt a = Apt::shell(arity, O(1), {O(0)}, 0, color);
    Conj all;
    for (unsigned d = 0; d < arity; ++d)
      all.push_back(Move{d, 0});
    a.at(0, 0) = {all};
    a.color[0] = color;
    return a;
  }
}

TEST_CASE("bang construction")
{
  SUBCASE("one state gives one state")
  {
    BangAutomaton b = bang(one_state(0));
    CHECK(b.automaton.num_states() == 1);
    CHECK(b.pairs[0] == PairSet{{0, 0}});
    CHECK(b.automaton.at(0, 0) == Dnf{Conj{Move{0, 0}, Move{1, 0}}});
  }
  SUBCASE("atomic automata give nondeterministic results")
  {
    for (const Apt& a : {atomic_subset(), atomic_succ(0), atomic_succ(1)})
      {
        BangAutomaton b = bang(a);
        CHECK(is_nondeterministic(b.automaton));
        CHECK(validate(b.automaton).empty());
        CHECK(b.pairs[0] == PairSet{{a.initial, a.initial}});
      }
  }
  SUBCASE("single choice function")
  {
    Apt a = Apt::shell(2, O(1), {O(0), O(1)}, 0, 0);
    a.at(0, 0) = {Conj{Move{0, 0}, Move{0, 1}, Move{1, 1}}};
    a.at(1, 0) = {Conj{Move{0, 1}}, Conj{Move{1, 0}}};
    BangAutomaton b = bang(a);
    REQUIRE(b.automaton.at(0, 0).size() == 1);
    const Conj& c = b.automaton.at(0, 0)[0];
    REQUIRE(c.size() == 2);
    CHECK(b.pairs[c[0].state] == PairSet{{0, 0}, {0, 1}});
    CHECK(b.pairs[c[1].state] == PairSet{{0, 1}});
  }
  SUBCASE("state bound and shape on random automata")
  {
    std::mt19937 rng(31);
    for (int i = 0; i < 100; ++i)
      {
        std::size_t nq = 1 + i % 3;
        Apt a = random_apt(rng, nq, 2, 2);
        BangAutomaton b = bang(a);
        CHECK(b.automaton.num_states() <= (std::size_t{1} << (nq * nq)) - 1);
        CHECK(is_nondeterministic(b.automaton));
        CHECK(validate(b.automaton).empty());
        for (const auto& d : b.automaton.delta)
          for (const auto& c : d)
            for (const auto& m : c)
              CHECK_FALSE(b.pairs[m.state].empty());
      }
  }
  SUBCASE("cap")
  {
    std::mt19937 rng(1);
    Apt a = random_apt(rng, 3, 2, 2);
    try
      {
        bang(a, 1);
        // a single reachable state is possible; then no error is expected
        CHECK(bang(a).automaton.num_states() == 1);
      }
    catch (const Error& e)
      {
        CHECK(e.kind() == ErrorKind::TooLarge);
      }
  }
}

TEST_CASE("lasso acceptance of a parity automaton")
{
  Dpw d;
  d.letters = {O(0)};
  d.states = {O(0), O(1)};
  d.delta = {1, 0};
  SUBCASE("constant color 0")
  {
    d.color = {0, 0};
    CHECK(lasso_accepts(d, {}, {0}));
    CHECK(lasso_accepts(d, {0, 0, 0}, {0, 0}));
  }
  SUBCASE("loop colors {1,2}")
  {
    d.color = {1, 2};
    d.max_color = 2;
    CHECK_FALSE(lasso_accepts(d, {}, {0}));
  }
  SUBCASE("loop colors {2,3}")
  {
    d.color = {2, 3};
    d.max_color = 3;
    CHECK(lasso_accepts(d, {0}, {0}));
    CHECK_FALSE(lasso_accepts(complement_dpw(d), {0}, {0}));
  }
  SUBCASE("unknown letter")
  {
    d.color = {0, 0};
    try
      {
        lasso_accepts(d, {1}, {0});
        FAIL("expected UnknownLetter");
      }
    catch (const Error& e)
      {
        CHECK(e.kind() == ErrorKind::UnknownLetter);
      }
  }
}

TEST_CASE("trace oracle examples")
{
  std::vector<unsigned> col{0, 1, 2};
  // no trace continues past the first letter
  CHECK(all_traces_accepting_lasso(col, 1, {PairSet{{1, 1}}}, {PairSet{{0, 0}}}));
  // initial not in pi2 of the first letter: vacuous
  CHECK(all_traces_accepting_lasso(col, 1, {}, {PairSet{{0, 0}}}));
  CHECK(all_traces_accepting_lasso(col, 0, {}, {PairSet{{0, 0}}}));
  CHECK_FALSE(all_traces_accepting_lasso(col, 1, {}, {PairSet{{1, 1}}}));
  // loop alternating 1 and 2 has least color 1
  CHECK_FALSE(all_traces_accepting_lasso(col, 1, {}, {PairSet{{1, 2}, {2, 1}}}));
  // one of two traces is bad
  CHECK_FALSE(all_traces_accepting_lasso(col, 0, {}, {PairSet{{0, 0}, {0, 1}, {1, 1}}}));
  CHECK(all_traces_accepting_lasso(col, 0, {}, {PairSet{{0, 0}, {0, 2}, {2, 2}}}));
}

TEST_CASE("bad-trace automaton")
{
  std::vector<unsigned> col{1, 0, 2};
  std::vector<PairSet> letters{PairSet{{0, 0}}, PairSet{{1, 1}}, PairSet{{2, 2}}, PairSet{{2, 1}, {1, 2}}};
  std::vector<HfSet> names{O(0), O(1), O(2), O(3)};
  SUBCASE("constant odd color is accepted")
  {
    Nbw n = nbw_bad_trace(col, 0, letters, names);
    CHECK(nbw_lasso_accepts(n, {}, {0}));
  }
  SUBCASE("constant color 0 is rejected")
  {
    Nbw n = nbw_bad_trace(col, 1, letters, names);
    CHECK_FALSE(nbw_lasso_accepts(n, {}, {1}));
  }
  SUBCASE("loop with least color 2 is rejected")
  {
    std::vector<unsigned> c2{1, 2, 3};
    Nbw n = nbw_bad_trace(c2, 1, letters, names);
    CHECK_FALSE(nbw_lasso_accepts(n, {}, {3}));
    CHECK(nbw_lasso_accepts(nbw_bad_trace(c2, 2, letters, names), {}, {2}));
  }
  SUBCASE("matches the negated trace oracle")
  {
    std::mt19937 rng(4);
    std::uniform_int_distribution<unsigned> c(0, 3);
    for (int round = 0; round < 30; ++round)
      {
        std::vector<unsigned> cc{c(rng), c(rng), c(rng)};
        Nbw n = nbw_bad_trace(cc, 0, letters, names);
        std::size_t checked = 0;
        for_words(4, 0, 2, [&](const Word& u) {
          for_words(4, 1, 2, [&](const Word& v) {
            std::vector<PairSet> pu, pv;
            for (auto a : u)
              pu.push_back(letters[a]);
            for (auto a : v)
              pv.push_back(letters[a]);
            CHECK(nbw_lasso_accepts(n, u, v) == !all_traces_accepting_lasso(cc, 0, pu, pv));
            ++checked;
          });
        });
        CHECK(checked == 21 * 20);
      }
  }
}

TEST_CASE("determinization")
{
  SUBCASE("accept everything")
  {
    Nbw n;
    n.letters = {O(0), O(1)};
    n.states = {O(0)};
    n.initial = {0};
    n.accepting = {1};
    n.succ = {{0}, {0}};
    Dpw d = determinize(n);
    for_words(2, 0, 3, [&](const Word& u) {
      for_words(2, 1, 3, [&](const Word& v) { CHECK(lasso_accepts(d, u, v)); });
    });
    Dpw c = complement_dpw(d);
    for (std::size_t q = 0; q < d.num_states(); ++q)
      CHECK(c.color[q] == d.color[q] + 1);
    for_words(2, 1, 2, [&](const Word& v) { CHECK_FALSE(lasso_accepts(c, {}, v)); });
  }
  SUBCASE("accept nothing")
  {
    Nbw n;
    n.letters = {O(0), O(1)};
    n.states = {O(0)};
    n.initial = {0};
    n.accepting = {0};
    n.succ = {{0}, {0}};
    Dpw d = determinize(n);
    for_words(2, 0, 3, [&](const Word& u) {
      for_words(2, 1, 3, [&](const Word& v) { CHECK_FALSE(lasso_accepts(d, u, v)); });
    });
  }
  SUBCASE("infinitely many a's")
  {
    Nbw n;
    n.letters = {O(0), O(1)};
    n.states = {O(0), O(1)};
    n.initial = {0};
    n.accepting = {0, 1};
    // state 1 is accepting and entered on letter 1 only
    n.succ = {{0}, {1}, {0}, {1}};
    Dpw d = determinize(n);
    CHECK(lasso_accepts(d, {}, {1}));
    CHECK(lasso_accepts(d, {0, 0}, {0, 1}));
    CHECK_FALSE(lasso_accepts(d, {1, 1}, {0}));
  }
  SUBCASE("random automata agree with the Buchi lasso check")
  {
    std::mt19937 rng(77);
    std::size_t lassos = 0;
    for (int round = 0; round < 120; ++round)
      {
        std::size_t nq = 1 + round % 4, nl = 1 + (round / 4) % 3;
        Nbw n = random_nbw(rng, nq, nl);
        Dpw d = determinize(n);
        Dpw c = complement_dpw(d), cc = complement_dpw(c);
        std::size_t wrong = 0;
        for_words(static_cast<std::uint32_t>(nl), 0, 3, [&](const Word& u) {
          for_words(static_cast<std::uint32_t>(nl), 1, 3, [&](const Word& v) {
            bool expected = nbw_lasso_accepts(n, u, v);
            wrong += lasso_accepts(d, u, v) != expected;
            wrong += lasso_accepts(c, u, v) == expected;
            wrong += lasso_accepts(cc, u, v) != expected;
            ++lassos;
          });
        });
        CHECK_MESSAGE(wrong == 0, serialize(n));
      }
    CHECK(lassos > 10000);
  }
}

TEST_CASE("end-to-end: complemented determinization matches the trace oracle")
{
  std::mt19937 rng(123);
  int automata = 0;
  for (int round = 0; round < 60; ++round)
    {
      std::size_t nq = 1 + round % 2;
      Apt a = random_apt(rng, nq, 2, 2);
      BangAutomaton b = bang(a);
      Dpw d = complement_dpw(determinize(nbw_bad_trace(b)));
      auto k = static_cast<std::uint32_t>(b.pairs.size());
      std::size_t wrong = 0;
      for_words(k, 0, 3, [&](const Word& u) {
        for_words(k, 1, 3, [&](const Word& v) {
          std::vector<PairSet> pu, pv;
          for (auto x : u)
            pu.push_back(b.pairs[x]);
          for (auto x : v)
            pv.push_back(b.pairs[x]);
          wrong += lasso_accepts(d, u, v) != all_traces_accepting_lasso(a.color, a.initial, pu, pv);
        });
      });
      CHECK_MESSAGE(wrong == 0, serialize(a));
      ++automata;
    }
  CHECK(automata >= 50);
}

TEST_CASE("nd realizes the simulation")
{
  SUBCASE("trivially accepting automaton")
  {
    Apt s = nd(one_state(0));
    CHECK(decide_alpha1(s));
    CHECK(is_nondeterministic(s));
    CHECK_FALSE(decide_alpha1(nd(one_state(1))));
  }
  SUBCASE("atomic automata")
  {
    for (const Apt& a : {atomic_subset(), atomic_succ(0), atomic_succ(1)})
      {
        Apt s = nd(a);
        CHECK(validate(s).empty());
        CHECK(is_nondeterministic(s));
        CHECK(s.alphabet == a.alphabet);
      }
  }
  SUBCASE("alphabet-1 corpus")
  {
    std::mt19937 rng(5);
    int agree = 0;
    for (int round = 0; round < 150; ++round)
      {
        Apt a = random_apt(rng, 1 + round % 2, 2, 1);
        Apt s = nd(a);
        CHECK(validate(s).empty());
        CHECK(is_nondeterministic(s));
        bool x = decide_alpha1(a), y = decide_alpha1(s);
        CHECK(x == y);
        agree += x == y;
        CHECK(decide_alpha1(reduce(s)) == y);
      }
    CHECK(agree == 150);
  }
  SUBCASE("three states, colors up to 2")
  {
    std::mt19937 rng(6);
    for (int round = 0; round < 40; ++round)
      {
        Apt a = random_apt(rng, 3, 2, 2);
        CHECK(decide_alpha1(a) == decide_alpha1(nd(a)));
      }
  }
}

TEST_CASE("word automaton text forms round-trip")
{
  std::mt19937 rng(8);
  for (int round = 0; round < 20; ++round)
    {
      Nbw n = random_nbw(rng, 3, 2);
      std::string t = serialize(n);
      CHECK(serialize(parse_nbw(t)) == t);
      Dpw d = determinize(n);
      std::string s = serialize(d);
      Dpw e = parse_dpw(s);
      CHECK(serialize(e) == s);
    }
  CHECK_THROWS_AS(parse_dpw("dpw 1\nmax_color 0\nletters {0}\nstates {0}\ninitial 0\n"), Error);
  CHECK_THROWS_AS(parse_nbw("nbw 2\n"), Error);
}
