#include <doctest.h>

#include <msotree/automata/apt.hpp>
#include <msotree/error.hpp>

#include "support.hpp"

#include <random>

using namespace msotree;
using msotree::testing::random_apt;

namespace
{
  HfSet O(std::size_t n) { return hf::ordinal(n); }
  HfSet P(const HfSet& a, const HfSet& b) { return hf::pair(a, b); }

  /// Brute-force dual of one transition: every nonempty subset of Dir x Q
  /// meeting all conjunctions.
  Dnf brute_dual(const Dnf& d, unsigned arity, std::size_t nstates)
  {
    std::vector<Move> universe;
    for (unsigned e = 0; e < arity; ++e)
      for (StateId q = 0; q < nstates; ++q)
        universe.push_back(Move{e, q});
    Dnf out;
    for (std::size_t s = 1; s < (std::size_t{1} << universe.size()); ++s)
      {
        Conj c;
        for (std::size_t i = 0; i < universe.size(); ++i)
          if (s >> i & 1)
            c.push_back(universe[i]);
        bool ok = true;
        for (const Conj& x : d)
          {
            bool meet = false;
            for (const Move& m : x)
              meet = meet || std::find(c.begin(), c.end(), m) != c.end();
            ok = ok && meet;
          }
        if (ok)
          out.push_back(c);
      }
    normalize(out);
    return out;
  }

  bool subsumes_equivalent(const Dnf& minimal, const Dnf& full)
  {
    // every set in full contains some set of minimal, and minimal ⊆ full
    for (const Conj& c : minimal)
      if (std::find(full.begin(), full.end(), c) == full.end())
        return false;
    for (const Conj& c : full)
      {
        bool covered = false;
        for (const Conj& m : minimal)
          covered = covered || std::includes(c.begin(), c.end(), m.begin(), m.end());
        if (!covered)
          return false;
      }
    return true;
  }
}

TEST_CASE("validate reports each violation")
{
  CHECK(validate(atomic_subset()).empty());
  CHECK(validate(atomic_succ(0)).empty());
  CHECK(validate(atomic_succ(1)).empty());

  Apt a = atomic_subset();
  a.at(0, 2).clear();
  auto v = validate(a);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("empty transition set") != std::string::npos);
  CHECK_THROWS_AS(require_valid(a), Error);

  Apt b = atomic_subset();
  b.initial = 7;
  CHECK_FALSE(validate(b).empty());

  Apt c = atomic_subset();
  c.color[0] = 5;
  CHECK_FALSE(validate(c).empty());

  Apt d = atomic_subset();
  d.at(0, 0) = {Conj{}};
  CHECK_FALSE(validate(d).empty());

  Apt e = atomic_subset();
  e.at(0, 0) = {Conj{Move{2, 0}}};
  CHECK_FALSE(validate(e).empty());
}

TEST_CASE("atomic subset automaton table")
{
  Apt a = atomic_subset();
  CHECK(a.alphabet == hf::product(O(2), O(2)));
  StateId t = a.state(O(1)), f = a.state(O(0));
  CHECK(a.initial == t);
  Conj all_f{Move{0, f}, Move{1, f}}, all_t{Move{0, t}, Move{1, t}};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      {
        LetterId l = a.letter(P(O(i), O(j)));
        CHECK(a.at(f, l) == Dnf{all_f});
        CHECK(a.at(t, l) == Dnf{i == 1 && j == 0 ? all_f : all_t});
      }
  CHECK(a.color[t] == 0);
  CHECK(a.color[f] == 1);
  CHECK(a.max_color == 1);
  CHECK(is_nondeterministic(a));
}

TEST_CASE("atomic successor automaton table")
{
  for (unsigned d = 0; d < 2; ++d)
    {
      Apt a = atomic_succ(d);
      StateId f = a.state(P(O(0), O(0))), t = a.state(P(O(0), O(1))), w = a.state(P(O(1), O(0)));
      CHECK(a.initial == f);
      Dnf some_f{Conj{Move{0, f}}, Conj{Move{1, f}}};
      Dnf all_t{Conj{Move{0, t}, Move{1, t}}};
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
          {
            LetterId l = a.letter(P(O(i), O(j)));
            CHECK(a.at(f, l) == (i == 0 ? some_f : Dnf{Conj{Move{d, w}}}));
            CHECK(a.at(w, l) == (j == 1 ? all_t : some_f));
            CHECK(a.at(t, l) == all_t);
          }
      CHECK(a.color[t] == 0);
      CHECK(a.color[f] == 1);
      CHECK(a.color[w] == 0);
      CHECK(is_nondeterministic(a));
    }
  CHECK_THROWS_AS(atomic_succ(2), Error);
  CHECK(atomic_succ(2, 3).arity == 3);
}

TEST_CASE("regression: successor automaton with color(w) = 0 does not check singletons")
{
  // Along the direction-0 spine, reading X=1,Y=0 forever cycles f -> w -> f.
  // Both colors occur infinitely often; the least is col(w) = 0, so the run
  // wins although no X-node has its successor in Y.  The Sing guards of the
  // translation keep this from mattering there.
  Apt a = atomic_succ(0);
  StateId f = a.state(P(O(0), O(0))), w = a.state(P(O(1), O(0)));
  LetterId x_only = a.letter(P(O(1), O(0)));
  CHECK(a.at(f, x_only) == Dnf{Conj{Move{0, w}}});
  CHECK(std::find(a.at(w, x_only).begin(), a.at(w, x_only).end(), Conj{Move{0, f}})
        != a.at(w, x_only).end());
  CHECK(std::min(a.color[f], a.color[w]) % 2 == 0);
}

TEST_CASE("substitute")
{
  Apt a = atomic_subset();
  SUBCASE("identity")
  {
    HfSet id = hf::tabulate(a.alphabet, [](const HfSet& x) { return x; });
    CHECK(substitute(a, id) == a);
  }
  SUBCASE("first projection")
  {
    HfSet gamma = hf::product(a.alphabet, a.alphabet);
    HfSet pi1 = hf::tabulate(gamma, [](const HfSet& p) { return hf::unpair(p).first; });
    Apt s = substitute(a, pi1);
    CHECK(s.alphabet == gamma);
    CHECK(s.states == a.states);
    CHECK(s.color == a.color);
    for (const HfSet& p : gamma.elements())
      for (StateId q = 0; q < a.num_states(); ++q)
        CHECK(s.at(q, s.letter(p)) == a.at(q, a.letter(hf::unpair(p).first)));
  }
  SUBCASE("constant")
  {
    HfSet a0 = P(O(1), O(0));
    HfSet k = hf::tabulate(O(3), [&](const HfSet&) { return a0; });
    Apt s = substitute(a, k);
    for (LetterId l = 0; l < 3; ++l)
      for (StateId q = 0; q < a.num_states(); ++q)
        CHECK(s.at(q, l) == a.at(q, a.letter(a0)));
  }
  SUBCASE("errors")
  {
    CHECK_THROWS_AS(substitute(a, hf::empty_set()), Error);
    try
      {
        substitute(a, hf::empty_set());
      }
    catch (const Error& e)
      {
        CHECK(e.kind() == ErrorKind::EmptyAlphabet);
      }
    HfSet bad = HfSet::of({P(O(0), O(7))});
    try
      {
        substitute(a, bad);
        FAIL("expected NotAFunction");
      }
    catch (const Error& e)
      {
        CHECK(e.kind() == ErrorKind::NotAFunction);
      }
    HfSet not_pairs = HfSet::of({O(2)});
    try
      {
        substitute(a, not_pairs);
        FAIL("expected NotAFunction");
      }
    catch (const Error& e)
      {
        CHECK(e.kind() == ErrorKind::NotAFunction);
      }
  }
}

TEST_CASE("substitute is functorial")
{
  std::mt19937 rng(11);
  HfSet sigma = O(3), gamma = O(4), delta = O(2);
  for (int round = 0; round < 30; ++round)
    {
      Apt a = random_apt(rng, 3, 2, 2, sigma);
      std::uniform_int_distribution<std::size_t> s3(0, 2), s4(0, 3);
      std::vector<std::size_t> fv(4), gv(2);
      for (auto& x : fv)
        x = s3(rng);
      for (auto& x : gv)
        x = s4(rng);
      HfSet f = hf::tabulate(gamma, [&](const HfSet& b) { return O(fv[hf::as_ordinal(b)]); });
      HfSet g = hf::tabulate(delta, [&](const HfSet& c) { return O(gv[hf::as_ordinal(c)]); });
      HfSet fg = hf::tabulate(delta, [&](const HfSet& c) { return hf::apply(f, hf::apply(g, c)); });
      CHECK(serialize(substitute(substitute(a, f), g)) == serialize(substitute(a, fg)));
    }
}

TEST_CASE("disjoin")
{
  Apt a = atomic_subset(), b = atomic_subset();
  Apt d = disjoin(a, b);
  CHECK(d.num_states() == 5);
  CHECK(validate(d).empty());
  CHECK(d.states[d.initial] == P(O(2), O(4)));
  CHECK(d.color[d.initial] == 1);
  CHECK(d.max_color == 1);
  CHECK(d.states[0] == P(O(0), a.states[0]));
  CHECK(d.states[2] == P(O(1), b.states[0]));
  // initial transitions: union of both initials, injected
  LetterId l = d.letter(P(O(1), O(0)));
  CHECK(d.at(d.initial, l) == Dnf{Conj{Move{0, 0}, Move{1, 0}}, Conj{Move{0, 2}, Move{1, 2}}});
  CHECK_FALSE(d == a);

  Apt s = atomic_succ(0);
  Apt ds = disjoin(a, s);
  CHECK(ds.num_states() == 6);
  CHECK(validate(ds).empty());

  Apt other = substitute(a, hf::tabulate(O(1), [](const HfSet&) { return P(O(0), O(0)); }));
  try
    {
      disjoin(a, other);
      FAIL("expected AlphabetMismatch");
    }
  catch (const Error& e)
    {
      CHECK(e.kind() == ErrorKind::AlphabetMismatch);
    }
  try
    {
      disjoin(a, atomic_subset(3));
      FAIL("expected ArityMismatch");
    }
  catch (const Error& e)
    {
      CHECK(e.kind() == ErrorKind::ArityMismatch);
    }
}

TEST_CASE("complement examples")
{
  SUBCASE("single move")
  {
    Apt a = Apt::shell(1, O(1), {O(0)}, 0, 0);
    a.at(0, 0) = {Conj{Move{0, 0}}};
    Apt c = complement(a);
    CHECK(c.at(0, 0) == Dnf{Conj{Move{0, 0}}});
    CHECK(c.color[0] == 1);
    CHECK(c.max_color == 1);
  }
  SUBCASE("two singletons give the full set")
  {
    Apt a = Apt::shell(2, O(1), {O(0)}, 0, 0);
    a.at(0, 0) = {Conj{Move{0, 0}}, Conj{Move{1, 0}}};
    Apt c = complement(a);
    CHECK(c.at(0, 0) == Dnf{Conj{Move{0, 0}, Move{1, 0}}});
  }
  SUBCASE("double complement shifts colors by two")
  {
    std::mt19937 rng(5);
    for (int i = 0; i < 50; ++i)
      {
        Apt a = random_apt(rng, 3, 2, 2);
        Apt cc = complement(complement(a));
        CHECK(cc.states == a.states);
        CHECK(cc.initial == a.initial);
        CHECK(cc.max_color == a.max_color + 2);
        for (StateId q = 0; q < a.num_states(); ++q)
          CHECK(cc.color[q] == a.color[q] + 2);
        CHECK(validate(cc).empty());
      }
  }
  SUBCASE("cap")
  {
    Apt a = Apt::shell(2, O(1), {O(0), O(1), O(2)}, 0, 0);
    for (StateId q = 0; q < 3; ++q)
      a.at(q, 0) = {Conj{Move{0, q}}};
    try
      {
        complement(a, 16);
        FAIL("expected TooLarge");
      }
    catch (const Error& e)
      {
        CHECK(e.kind() == ErrorKind::TooLarge);
        CHECK(std::string(e.what()).find("6") != std::string::npos);
      }
  }
}

TEST_CASE("complement equals brute-force dualization for small Dir x Q")
{
  std::mt19937 rng(17);
  int checked = 0;
  for (unsigned arity = 1; arity <= 2; ++arity)
    for (std::size_t n = 1; n * arity <= 4; ++n)
      for (int round = 0; round < 40; ++round)
        {
          Apt a = random_apt(rng, n, arity, 3, O(2));
          Apt c = complement(a);
          for (StateId q = 0; q < n; ++q)
            for (LetterId l = 0; l < 2; ++l)
              {
                CHECK(c.at(q, l) == brute_dual(a.at(q, l), arity, n));
                ++checked;
              }
        }
  CHECK(checked > 500);
}

TEST_CASE("minimal hitting sets agree with the exact dual up to subsumption")
{
  std::mt19937 rng(23);
  for (int round = 0; round < 200; ++round)
    {
      Apt a = random_apt(rng, 3, 2, 2);
      Apt exact = complement(a), mini = complement_minimized(a);
      CHECK(mini.color == exact.color);
      for (StateId q = 0; q < a.num_states(); ++q)
        {
          CHECK(subsumes_equivalent(mini.at(q, 0), exact.at(q, 0)));
          CHECK(mini.at(q, 0) == remove_subsumed(exact).at(q, 0));
        }
    }
}

TEST_CASE("project")
{
  Apt a = atomic_subset();
  SUBCASE("over 2: union of the two fibres")
  {
    Apt p = project(a, O(2));
    CHECK(p.alphabet == O(2));
    CHECK(p.num_states() == a.num_states());
    CHECK(p.color == a.color);
    for (StateId q = 0; q < 2; ++q)
      for (std::size_t i = 0; i < 2; ++i)
        {
          Dnf u = a.at(q, a.letter(P(O(i), O(0))));
          const Dnf& v = a.at(q, a.letter(P(O(i), O(1))));
          u.insert(u.end(), v.begin(), v.end());
          normalize(u);
          CHECK(p.at(q, p.letter(O(i))) == u);
        }
  }
  SUBCASE("singleton fibre")
  {
    HfSet g = hf::tabulate(hf::product(O(2), O(1)), [](const HfSet& p) {
      return P(hf::unpair(p).first, O(1));
    });
    Apt s = substitute(a, g);
    Apt p = project(s, O(1));
    for (StateId q = 0; q < 2; ++q)
      for (std::size_t i = 0; i < 2; ++i)
        CHECK(p.at(q, p.letter(O(i))) == a.at(q, a.letter(P(O(i), O(1)))));
  }
  SUBCASE("pairing law")
  {
    std::mt19937 rng(3);
    for (int i = 0; i < 20; ++i)
      {
        Apt r = random_apt(rng, 3, 2, 2, O(3));
        HfSet gamma = O(2);
        HfSet pi1 = hf::tabulate(hf::product(r.alphabet, gamma),
                                 [](const HfSet& p) { return hf::unpair(p).first; });
        CHECK(project(substitute(r, pi1), gamma) == r);
      }
  }
  SUBCASE("not a product")
  {
    try
      {
        project(a, O(1));
        FAIL("expected AlphabetNotProduct");
      }
    catch (const Error& e)
      {
        CHECK(e.kind() == ErrorKind::AlphabetNotProduct);
      }
    Apt odd = Apt::shell(2, HfSet::of({P(O(0), O(0)), P(O(1), O(1))}), {O(0)}, 0, 0);
    for (LetterId l = 0; l < 2; ++l)
      odd.at(0, l) = {Conj{Move{0, 0}}};
    CHECK_THROWS_AS(project(odd, O(2)), Error);
  }
}

TEST_CASE("is_nondeterministic")
{
  Apt a = Apt::shell(2, O(1), {O(0), O(1)}, 0, 0);
  a.at(0, 0) = {Conj{Move{0, 0}, Move{1, 1}}};
  a.at(1, 0) = {Conj{Move{0, 1}}};
  CHECK(is_nondeterministic(a));
  a.at(1, 0) = {Conj{Move{0, 0}, Move{0, 1}}};
  CHECK_FALSE(is_nondeterministic(a));
}

TEST_CASE("conjoin")
{
  Apt a = atomic_subset(), b = atomic_succ(1);
  Apt c = conjoin(a, b);
  CHECK(c.num_states() == a.num_states() + b.num_states() + 1);
  CHECK(validate(c).empty());
  Apt m = conjoin(a, b, Dualization::Minimal);
  CHECK(m.num_states() == c.num_states());
  CHECK(validate(m).empty());
}

TEST_CASE("reachable_trim")
{
  Apt a = atomic_subset();
  CHECK(reachable_trim(a) == a);
  Apt b = Apt::shell(2, O(1), {O(0), O(1), O(2)}, 1, 1);
  b.at(0, 0) = {Conj{Move{0, 0}}};
  b.at(1, 0) = {Conj{Move{0, 2}, Move{1, 1}}};
  b.at(2, 0) = {Conj{Move{1, 2}}};
  b.color = {1, 0, 1};
  Apt t = reachable_trim(b);
  CHECK(t.num_states() == 2);
  CHECK(t.states == std::vector<HfSet>{O(1), O(2)});
  CHECK(t.states[t.initial] == O(1));
  CHECK(t.at(t.initial, 0) == Dnf{Conj{Move{0, 1}, Move{1, 0}}});
  CHECK(t.color == std::vector<unsigned>{0, 1});
  CHECK(validate(t).empty());
}

TEST_CASE("reduction steps")
{
  SUBCASE("subsumed conjunctions are dropped")
  {
    Apt a = Apt::shell(2, O(1), {O(0)}, 0, 0);
    a.at(0, 0) = {Conj{Move{0, 0}}, Conj{Move{0, 0}, Move{1, 0}}};
    CHECK(remove_subsumed(a).at(0, 0) == Dnf{Conj{Move{0, 0}}});
  }
  SUBCASE("bisimilar states merge")
  {
    Apt a = Apt::shell(2, O(1), {O(0), O(1), O(2)}, 0, 0);
    a.at(0, 0) = {Conj{Move{0, 1}, Move{1, 2}}};
    a.at(1, 0) = {Conj{Move{0, 1}, Move{1, 2}}};
    a.at(2, 0) = {Conj{Move{0, 2}, Move{1, 1}}};
    Apt q = bisimulation_quotient(a);
    CHECK(q.num_states() == 1);
    CHECK(q.at(0, 0) == Dnf{Conj{Move{0, 0}, Move{1, 0}}});
    a.color[2] = 1;
    a.max_color = 1;
    CHECK(bisimulation_quotient(a).num_states() == 2);
  }
  SUBCASE("colors compress monotonically keeping parity")
  {
    Apt a = Apt::shell(1, O(1), {O(0), O(1), O(2), O(3)}, 0, 7);
    for (StateId q = 0; q < 4; ++q)
      a.at(q, 0) = {Conj{Move{0, (q + 1) % 4}}};
    a.color = {2, 4, 5, 7};
    Apt c = compress_colors(a);
    CHECK(c.color == std::vector<unsigned>{0, 0, 1, 1});
    CHECK(c.max_color == 1);
    a.color = {1, 3, 6, 6};
    CHECK(compress_colors(a).color == std::vector<unsigned>{1, 1, 2, 2});
  }
  SUBCASE("relabel numbers states breadth first")
  {
    Apt a = Apt::shell(1, O(1), {O(5), O(6), O(7)}, 2, 0);
    a.at(0, 0) = {Conj{Move{0, 0}}};
    a.at(1, 0) = {Conj{Move{0, 0}}};
    a.at(2, 0) = {Conj{Move{0, 1}}};
    Apt r = relabel(a);
    CHECK(r.initial == 0);
    CHECK(r.states == std::vector<HfSet>{O(0), O(1), O(2)});
    CHECK(r.at(0, 0) == Dnf{Conj{Move{0, 1}}});
    CHECK(r.at(1, 0) == Dnf{Conj{Move{0, 2}}});
  }
  SUBCASE("reduce stays valid")
  {
    std::mt19937 rng(41);
    for (int i = 0; i < 100; ++i)
      CHECK(validate(reduce(random_apt(rng, 4, 2, 3, O(2)))).empty());
  }
}

TEST_CASE("text form round-trips")
{
  std::vector<Apt> corpus{atomic_subset(), atomic_succ(0), atomic_succ(1),
                          disjoin(atomic_subset(), atomic_succ(0)), complement(atomic_succ(1))};
  std::mt19937 rng(99);
  for (int i = 0; i < 30; ++i)
    corpus.push_back(random_apt(rng, 4, 2, 3, O(3)));
  for (const Apt& a : corpus)
    {
      std::string text = serialize(a);
      Apt b = parse_apt(text);
      CHECK(serialize(b) == text);
      CHECK(validate(b).empty());
      CHECK(b.states[b.initial] == a.states[a.initial]);
    }
  std::string s = serialize(atomic_subset());
  CHECK(s.rfind("apt 1\narity 2\nmax_color 1\n", 0) == 0);
  CHECK(s.find("(1,(1,0)) -> [{(0,0),(1,0)}]") != std::string::npos);

  for (std::string bad : {"", "apt 1\narity x\n", "apt 1\narity 2\nmax_color 1\nalphabet {0}\nstates {0}\ninitial 1\n",
                          "apt 1\narity 2\nmax_color 1\nalphabet {0}\nstates {0}\ninitial 0\n(0,0) -> [{(0,0)}]\n",
                          "apt 1\narity 2\nmax_color 1\nalphabet {0}\nstates {0}\ninitial 0\n(0,0) {(0,0)}\ncolor 0 0\n"})
    {
      try
        {
          parse_apt(bad);
          FAIL("expected Format for: " << bad);
        }
      catch (const Error& e)
        {
          CHECK(e.kind() == ErrorKind::Format);
        }
    }
}
