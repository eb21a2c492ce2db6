#include <msotree/automata/apt.hpp>
#include <msotree/util/graph.hpp>
#include <msotree/error.hpp>

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

namespace msotree
{

  void normalize(Conj& c)
  {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }

  void normalize(Dnf& d)
  {
    for (auto& c : d)
      normalize(c);
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
  }

  Apt Apt::shell(unsigned arity, HfSet alphabet, std::vector<HfSet> states, StateId initial,
                 unsigned max_color)
  {
    Apt a;
    a.arity = arity;
    a.alphabet = alphabet;
    a.states = std::move(states);
    a.initial = initial;
    a.max_color = max_color;
    a.delta.assign(a.states.size() * alphabet.size(), Dnf{});
    a.color.assign(a.states.size(), 0);
    return a;
  }

  LetterId Apt::letter(const HfSet& a) const
  {
    if (auto i = alphabet.index_of(a))
      return static_cast<LetterId>(*i);
    fail(ErrorKind::UnknownLetter, render(a, RenderStyle::pretty()) + " is not in the alphabet");
  }

  StateId Apt::state(const HfSet& q) const
  {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i] == q)
        return static_cast<StateId>(i);
    fail(ErrorKind::InvalidAutomaton, render(q, RenderStyle::pretty()) + " is not a state");
  }

  std::size_t Apt::num_conjunctions() const
  {
    std::size_t n = 0;
    for (const auto& d : delta)
      n += d.size();
    return n;
  }

  std::vector<std::string> validate(const Apt& a)
  {
    std::vector<std::string> v;
    auto pretty = [](const HfSet& s) { return render(s, RenderStyle::pretty()); };
    if (a.arity == 0)
      v.push_back("arity is zero");
    if (a.alphabet.empty())
      v.push_back("empty alphabet");
    if (a.states.empty())
      v.push_back("no states");
    if (HfSet::of(a.states).size() != a.states.size())
      v.push_back("duplicate state names");
    if (a.initial >= a.states.size())
      v.push_back("initial state not in Q");
    if (a.color.size() != a.states.size())
      v.push_back("coloring is not total on Q");
    if (a.delta.size() != a.states.size() * a.alphabet.size())
      {
        v.push_back("transition table has wrong size");
        return v;
      }
    for (StateId q = 0; q < a.color.size(); ++q)
      if (a.color[q] > a.max_color)
        v.push_back("color of " + pretty(a.states[q]) + " exceeds max_color");
    for (StateId q = 0; q < a.states.size(); ++q)
      for (LetterId l = 0; l < a.alphabet.size(); ++l)
        {
          const Dnf& d = a.at(q, l);
          std::string where = "(" + pretty(a.states[q]) + "," + pretty(a.alphabet.elements()[l]) + ")";
          if (d.empty())
            {
              v.push_back("empty transition set at " + where);
              continue;
            }
          Dnf n = d;
          normalize(n);
          if (n != d)
            v.push_back("transition set at " + where + " is not in canonical form");
          for (const Conj& c : d)
            {
              if (c.empty())
                v.push_back("empty conjunction at " + where);
              for (const Move& m : c)
                if (m.dir >= a.arity || m.state >= a.states.size())
                  v.push_back("move out of range at " + where);
            }
        }
    return v;
  }

  void require_valid(const Apt& a)
  {
    auto v = validate(a);
    if (v.empty())
      return;
    std::string msg;
    for (const auto& s : v)
      msg += (msg.empty() ? "" : "; ") + s;
    fail(ErrorKind::InvalidAutomaton, msg);
  }

  Apt substitute(const Apt& a, const HfSet& gamma, const std::vector<LetterId>& map)
  {
    if (gamma.empty())
      fail(ErrorKind::EmptyAlphabet, "substitution domain is empty");
    if (map.size() != gamma.size())
      fail(ErrorKind::NotAFunction, "letter map does not cover the domain");
    Apt r = Apt::shell(a.arity, gamma, a.states, a.initial, a.max_color);
    r.color = a.color;
    for (StateId q = 0; q < a.num_states(); ++q)
      for (LetterId b = 0; b < gamma.size(); ++b)
        {
          if (map[b] >= a.num_letters())
            fail(ErrorKind::NotAFunction, "letter map leaves the alphabet");
          r.at(q, b) = a.at(q, map[b]);
        }
    return r;
  }

  Apt substitute(const Apt& a, const HfSet& f)
  {
    std::vector<HfSet> dom;
    for (const HfSet& p : f.elements())
      {
        auto xy = hf::as_pair(p);
        if (!xy)
          fail(ErrorKind::NotAFunction, "substitution contains a non-pair");
        dom.push_back(xy->first);
      }
    HfSet gamma = HfSet::of(dom);
    if (gamma.empty())
      fail(ErrorKind::EmptyAlphabet, "substitution domain is empty");
    if (!hf::is_function(f, gamma, a.alphabet))
      fail(ErrorKind::NotAFunction, "substitution is not a function into the alphabet");
    std::vector<LetterId> map;
    for (const HfSet& b : gamma.elements())
      map.push_back(a.letter(hf::apply(f, b)));
    return substitute(a, gamma, map);
  }

  Apt disjoin(const Apt& a0, const Apt& a1)
  {
    if (a0.alphabet != a1.alphabet)
      fail(ErrorKind::AlphabetMismatch, "disjunction of automata over different alphabets");
    if (a0.arity != a1.arity)
      fail(ErrorKind::ArityMismatch, "disjunction of automata with different arities");
    std::size_t n0 = a0.num_states(), n1 = a1.num_states();
    std::vector<HfSet> states;
    states.reserve(n0 + n1 + 1);
    for (const HfSet& q : a0.states)
      states.push_back(hf::pair(hf::ordinal(0), q));
    for (const HfSet& q : a1.states)
      states.push_back(hf::pair(hf::ordinal(1), q));
    states.push_back(hf::pair(hf::ordinal(2), hf::ordinal(n0 + n1)));
    unsigned n = std::max(a0.max_color, a1.max_color);
    auto init = static_cast<StateId>(n0 + n1);
    Apt r = Apt::shell(a0.arity, a0.alphabet, std::move(states), init, n);
    auto shifted = [](const Dnf& d, StateId off) {
      Dnf out = d;
      for (auto& c : out)
        for (auto& m : c)
          m.state += off;
      return out;
    };
    for (LetterId l = 0; l < a0.num_letters(); ++l)
      {
        for (StateId q = 0; q < n0; ++q)
          r.at(q, l) = a0.at(q, l);
        for (StateId q = 0; q < n1; ++q)
          r.at(static_cast<StateId>(n0 + q), l) = shifted(a1.at(q, l), static_cast<StateId>(n0));
        Dnf both = a0.at(a0.initial, l);
        Dnf right = shifted(a1.at(a1.initial, l), static_cast<StateId>(n0));
        both.insert(both.end(), right.begin(), right.end());
        normalize(both);
        r.at(init, l) = std::move(both);
      }
    for (StateId q = 0; q < n0; ++q)
      r.color[q] = a0.color[q];
    for (StateId q = 0; q < n1; ++q)
      r.color[n0 + q] = a1.color[q];
    r.color[init] = n;
    return r;
  }

  Apt complement(const Apt& a, std::size_t cap)
  {
    std::size_t k = a.arity * a.num_states();
    if (k >= 63 || (std::size_t{1} << k) > cap)
      fail(ErrorKind::TooLarge, "dualization would enumerate P+(Dir x Q) with |Dir x Q| = "
                                    + std::to_string(k));
    auto bit = [&](const Move& m) { return std::uint64_t{1} << (m.dir * a.num_states() + m.state); };
    Apt r = a;
    for (auto& c : r.color)
      c += 1;
    r.max_color = a.max_color + 1;
    std::uint64_t total = std::uint64_t{1} << k;
    for (std::size_t i = 0; i < a.delta.size(); ++i)
      {
        std::vector<std::uint64_t> masks;
        for (const Conj& c : a.delta[i])
          {
            std::uint64_t m = 0;
            for (const Move& mv : c)
              m |= bit(mv);
            masks.push_back(m);
          }
        Dnf out;
        for (std::uint64_t s = 1; s < total; ++s)
          {
            bool hits = std::all_of(masks.begin(), masks.end(),
                                    [&](std::uint64_t m) { return (m & s) != 0; });
            if (!hits)
              continue;
            Conj c;
            for (std::size_t b = 0; b < k; ++b)
              if (s >> b & 1)
                c.push_back(Move{static_cast<std::uint32_t>(b / a.num_states()),
                                 static_cast<StateId>(b % a.num_states())});
            out.push_back(std::move(c));
          }
        normalize(out);
        r.delta[i] = std::move(out);
      }
    return r;
  }

  Dnf minimal_hitting_sets(const Dnf& d)
  {
    Dnf family = d;
    std::sort(family.begin(), family.end(),
              [](const Conj& x, const Conj& y) { return x.size() < y.size(); });
    Dnf cur{Conj{}};
    for (const Conj& c : family)
      {
        Dnf next;
        for (const Conj& h : cur)
          {
            bool meets = false;
            for (const Move& m : c)
              if (std::binary_search(h.begin(), h.end(), m))
                {
                  meets = true;
                  break;
                }
            if (meets)
              {
                next.push_back(h);
                continue;
              }
            for (const Move& m : c)
              {
                Conj e = h;
                e.insert(std::upper_bound(e.begin(), e.end(), m), m);
                next.push_back(std::move(e));
              }
          }
        normalize(next);
        std::sort(next.begin(), next.end(), [](const Conj& x, const Conj& y) {
          return x.size() != y.size() ? x.size() < y.size() : x < y;
        });
        Dnf minimal;
        for (const Conj& h : next)
          {
            bool dominated = false;
            for (const Conj& g : minimal)
              if (g.size() < h.size() && std::includes(h.begin(), h.end(), g.begin(), g.end()))
                {
                  dominated = true;
                  break;
                }
            if (!dominated)
              minimal.push_back(h);
          }
        cur = std::move(minimal);
      }
    normalize(cur);
    return cur;
  }

  Apt complement_minimized(const Apt& a)
  {
    Apt r = a;
    for (auto& c : r.color)
      c += 1;
    r.max_color = a.max_color + 1;
    for (auto& d : r.delta)
      d = minimal_hitting_sets(d);
    return r;
  }

  Apt project(const Apt& a, const HfSet& gamma)
  {
    if (gamma.empty())
      fail(ErrorKind::AlphabetNotProduct, "projection over an empty set");
    std::vector<HfSet> firsts;
    for (const HfSet& l : a.alphabet.elements())
      {
        auto ab = hf::as_pair(l);
        if (!ab || !gamma.contains(ab->second))
          fail(ErrorKind::AlphabetNotProduct,
               render(l, RenderStyle::pretty()) + " is not a pair with second component in "
                   + render(gamma, RenderStyle::pretty()));
        firsts.push_back(ab->first);
      }
    HfSet sigma = HfSet::of(firsts);
    if (sigma.size() * gamma.size() != a.num_letters())
      fail(ErrorKind::AlphabetNotProduct, "alphabet is not a full product");
    Apt r = Apt::shell(a.arity, sigma, a.states, a.initial, a.max_color);
    r.color = a.color;
    std::vector<std::vector<LetterId>> fibre(sigma.size());
    for (LetterId i = 0; i < sigma.size(); ++i)
      for (const HfSet& b : gamma.elements())
        fibre[i].push_back(a.letter(hf::pair(sigma.elements()[i], b)));
    for (StateId q = 0; q < a.num_states(); ++q)
      for (LetterId i = 0; i < sigma.size(); ++i)
        {
          Dnf u;
          for (LetterId l : fibre[i])
            u.insert(u.end(), a.at(q, l).begin(), a.at(q, l).end());
          normalize(u);
          r.at(q, i) = std::move(u);
        }
    return r;
  }

  Apt project_point(const Apt& a, std::size_t cap)
  {
    const HfSet two = hf::ordinal(2);
    std::vector<HfSet> firsts;
    for (const HfSet& l : a.alphabet.elements())
      {
        auto ab = hf::as_pair(l);
        if (!ab || !two.contains(ab->second))
          fail(ErrorKind::AlphabetNotProduct,
               render(l, RenderStyle::pretty()) + " is not a pair with a bit second");
        firsts.push_back(ab->first);
      }
    HfSet sigma = HfSet::of(firsts);
    if (sigma.size() * 2 != a.num_letters())
      fail(ErrorKind::AlphabetNotProduct, "alphabet is not a full product with 2");
    std::vector<std::array<LetterId, 2>> fibre(sigma.size());
    for (LetterId i = 0; i < sigma.size(); ++i)
      for (unsigned b = 0; b < 2; ++b)
        fibre[i][b] = a.letter(hf::pair(sigma.elements()[i], hf::ordinal(b)));

    // plain copies keep their ids; path states follow, the empty path
    // state first (it accepts everything)
    const auto n = static_cast<StateId>(a.num_states());
    std::map<std::vector<StateId>, StateId> ids;
    std::vector<std::vector<StateId>> paths;
    auto path = [&](std::vector<StateId> p) {
      auto [it, fresh] = ids.emplace(p, n + static_cast<StateId>(paths.size()));
      if (fresh)
        {
          if (paths.size() + n > cap)
            fail(ErrorKind::TooLarge, "point projection: more than " + std::to_string(cap)
                                          + " states");
          paths.push_back(std::move(p));
        }
      return it->second;
    };
    const StateId top = path({});
    const StateId start = path({a.initial});

    // the conjunction choices of every copy on the path, unioned
    auto choices = [&](const std::vector<StateId>& p, LetterId l) {
      Dnf acc{Conj{}};
      for (StateId q : p)
        {
          Dnf next;
          for (const Conj& c : acc)
            for (const Conj& d : a.at(q, l))
              {
                Conj u = c;
                u.insert(u.end(), d.begin(), d.end());
                normalize(u);
                next.push_back(std::move(u));
              }
          normalize(next);
          if (next.size() > cap)
            fail(ErrorKind::TooLarge, "point projection: more than " + std::to_string(cap)
                                          + " conjunctions");
          acc = std::move(next);
        }
      return acc;
    };

    std::vector<std::vector<Dnf>> out; // per path state, per letter
    for (std::size_t k = 0; k < paths.size(); ++k)
      {
        std::vector<Dnf> row(sigma.size());
        const std::vector<StateId> p = paths[k];
        for (LetterId i = 0; i < sigma.size(); ++i)
          {
            Dnf& dnf = row[i];
            if (p.empty())
              {
                dnf.push_back(Conj{Move{0, top}});
                continue;
              }
            for (Conj c : choices(p, fibre[i][1])) // the node of X is here
              dnf.push_back(std::move(c));
            for (const Conj& c : choices(p, fibre[i][0]))
              for (std::uint32_t d = 0; d < a.arity; ++d)
                {
                  Conj moves;
                  std::vector<StateId> below;
                  for (const Move& m : c)
                    if (m.dir == d)
                      below.push_back(m.state);
                    else
                      moves.push_back(m);
                  std::sort(below.begin(), below.end());
                  below.erase(std::unique(below.begin(), below.end()), below.end());
                  if (!below.empty() || moves.empty())
                    moves.push_back(Move{d, path(std::move(below))});
                  dnf.push_back(std::move(moves));
                }
            normalize(dnf);
          }
        out.push_back(std::move(row));
      }

    unsigned odd = a.max_color % 2 == 1 ? a.max_color : a.max_color + 1;
    std::vector<HfSet> names;
    for (StateId q = 0; q < n; ++q)
      names.push_back(hf::pair(hf::ordinal(0), a.states[q]));
    for (const auto& p : paths)
      {
        std::vector<HfSet> members;
        for (StateId q : p)
          members.push_back(a.states[q]);
        names.push_back(hf::pair(hf::ordinal(1), HfSet::of(members)));
      }
    Apt r = Apt::shell(a.arity, sigma, std::move(names), start, odd);
    for (StateId q = 0; q < n; ++q)
      {
        r.color[q] = a.color[q];
        for (LetterId i = 0; i < sigma.size(); ++i)
          r.at(q, i) = a.at(q, fibre[i][0]);
      }
    for (std::size_t k = 0; k < paths.size(); ++k)
      {
        auto s = static_cast<StateId>(n + k);
        r.color[s] = k == 0 ? 0 : odd;
        for (LetterId i = 0; i < sigma.size(); ++i)
          r.at(s, i) = std::move(out[k][i]);
      }
    return reachable_trim(r);
  }

  bool is_nondeterministic(const Apt& a)
  {
    for (const Dnf& d : a.delta)
      for (const Conj& c : d)
        for (std::size_t i = 1; i < c.size(); ++i)
          if (c[i].dir == c[i - 1].dir)
            return false;
    return true;
  }

  namespace
  {
    HfSet two_by_two() { return hf::product(hf::ordinal(2), hf::ordinal(2)); }

    Conj everywhere(unsigned arity, StateId q)
    {
      Conj c;
      for (unsigned d = 0; d < arity; ++d)
        c.push_back(Move{d, q});
      return c;
    }

    Dnf somewhere(unsigned arity, StateId q)
    {
      Dnf d;
      for (unsigned e = 0; e < arity; ++e)
        d.push_back(Conj{Move{e, q}});
      return d;
    }

    std::pair<std::size_t, std::size_t> bits(const HfSet& letter)
    {
      auto [i, j] = hf::unpair(letter);
      return {hf::as_ordinal(i), hf::as_ordinal(j)};
    }
  }

  Apt atomic_subset(unsigned arity)
  {
    if (arity == 0)
      fail(ErrorKind::UnknownDirection, "arity must be positive");
    const StateId f = 0, t = 1;
    Apt a = Apt::shell(arity, two_by_two(), {hf::ordinal(0), hf::ordinal(1)}, t, 1);
    for (LetterId l = 0; l < a.num_letters(); ++l)
      {
        auto [i, j] = bits(a.alphabet.elements()[l]);
        a.at(t, l) = {everywhere(arity, i == 1 && j == 0 ? f : t)};
        a.at(f, l) = {everywhere(arity, f)};
      }
    a.color[t] = 0;
    a.color[f] = 1;
    return a;
  }

  Apt atomic_succ(unsigned d, unsigned arity)
  {
    if (d >= arity)
      fail(ErrorKind::UnknownDirection,
           "direction " + std::to_string(d) + " is not below arity " + std::to_string(arity));
    const StateId f = 0, t = 1, w = 2;
    std::vector<HfSet> names{hf::pair(hf::ordinal(0), hf::ordinal(0)),
                             hf::pair(hf::ordinal(0), hf::ordinal(1)),
                             hf::pair(hf::ordinal(1), hf::ordinal(0))};
    Apt a = Apt::shell(arity, two_by_two(), std::move(names), f, 1);
    for (LetterId l = 0; l < a.num_letters(); ++l)
      {
        auto [i, j] = bits(a.alphabet.elements()[l]);
        a.at(f, l) = i == 0 ? somewhere(arity, f) : Dnf{Conj{Move{d, w}}};
        a.at(w, l) = j == 1 ? Dnf{everywhere(arity, t)} : somewhere(arity, f);
        a.at(t, l) = {everywhere(arity, t)};
      }
    a.color[f] = 1;
    a.color[t] = 0;
    a.color[w] = 0;
    return a;
  }

  Apt conjoin(const Apt& a0, const Apt& a1, Dualization dual)
  {
    auto neg = [dual](const Apt& a) {
      return dual == Dualization::Exact ? complement(a) : complement_minimized(a);
    };
    return neg(disjoin(neg(a0), neg(a1)));
  }

  namespace
  {
    // Keeps the states with keep[q], in their original order.
    Apt restrict_states(const Apt& a, const std::vector<bool>& keep)
    {
      std::vector<StateId> renum(a.num_states(), 0);
      std::vector<HfSet> names;
      for (StateId q = 0; q < a.num_states(); ++q)
        if (keep[q])
          {
            renum[q] = static_cast<StateId>(names.size());
            names.push_back(a.states[q]);
          }
      Apt r = Apt::shell(a.arity, a.alphabet, names, renum[a.initial], a.max_color);
      for (StateId q = 0; q < a.num_states(); ++q)
        {
          if (!keep[q])
            continue;
          r.color[renum[q]] = a.color[q];
          for (LetterId l = 0; l < a.num_letters(); ++l)
            {
              Dnf d = a.at(q, l);
              for (auto& c : d)
                for (auto& m : c)
                  m.state = renum[m.state];
              r.at(renum[q], l) = std::move(d);
            }
        }
      return r;
    }

    std::vector<StateId> bfs_order(const Apt& a)
    {
      std::vector<bool> seen(a.num_states(), false);
      std::vector<StateId> order{a.initial};
      seen[a.initial] = true;
      for (std::size_t i = 0; i < order.size(); ++i)
        for (LetterId l = 0; l < a.num_letters(); ++l)
          for (const Conj& c : a.at(order[i], l))
            for (const Move& m : c)
              if (m.state < a.num_states() && !seen[m.state])
                {
                  seen[m.state] = true;
                  order.push_back(m.state);
                }
      return order;
    }

    void drop_subsumed(Dnf& d)
    {
      if (d.size() < 2)
        return;
      std::vector<std::size_t> idx(d.size());
      for (std::size_t i = 0; i < d.size(); ++i)
        idx[i] = i;
      std::stable_sort(idx.begin(), idx.end(),
                       [&](std::size_t x, std::size_t y) { return d[x].size() < d[y].size(); });
      std::vector<bool> keep(d.size(), true);
      for (std::size_t i = 0; i < idx.size(); ++i)
        {
          if (!keep[idx[i]])
            continue;
          const Conj& small = d[idx[i]];
          for (std::size_t j = i + 1; j < idx.size(); ++j)
            {
              const Conj& big = d[idx[j]];
              if (keep[idx[j]] && big.size() > small.size()
                  && std::includes(big.begin(), big.end(), small.begin(), small.end()))
                keep[idx[j]] = false;
            }
        }
      Dnf out;
      for (std::size_t i = 0; i < d.size(); ++i)
        if (keep[i])
          out.push_back(std::move(d[i]));
      d = std::move(out);
    }
  }

  Apt reachable_trim(const Apt& a)
  {
    auto order = bfs_order(a);
    if (order.size() == a.num_states())
      return a;
    std::vector<bool> keep(a.num_states(), false);
    for (StateId q : order)
      keep[q] = true;
    return restrict_states(a, keep);
  }

  Apt remove_subsumed(const Apt& a)
  {
    Apt r = a;
    for (auto& d : r.delta)
      drop_subsumed(d);
    return r;
  }

  Apt bisimulation_quotient(const Apt& a)
  {
    std::size_t n = a.num_states();
    std::vector<std::uint32_t> block(a.color.begin(), a.color.end());
    std::size_t count = 0;
    auto mapped = [&](StateId q, LetterId l) {
      Dnf d = a.at(q, l);
      for (auto& c : d)
        for (auto& m : c)
          m.state = block[m.state];
      normalize(d);
      drop_subsumed(d);
      return d;
    };
    for (;;)
      {
        std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
        std::vector<std::uint32_t> next(n);
        for (StateId q = 0; q < n; ++q)
          {
            std::vector<std::uint32_t> sig{block[q], a.color[q]};
            for (LetterId l = 0; l < a.num_letters(); ++l)
              {
                Dnf d = mapped(q, l);
                sig.push_back(static_cast<std::uint32_t>(d.size()));
                for (const Conj& c : d)
                  {
                    sig.push_back(static_cast<std::uint32_t>(c.size()));
                    for (const Move& m : c)
                      {
                        sig.push_back(m.dir);
                        sig.push_back(m.state);
                      }
                  }
              }
            auto [it, fresh] = ids.emplace(std::move(sig), static_cast<std::uint32_t>(ids.size()));
            next[q] = it->second;
          }
        block = std::move(next);
        if (ids.size() == count)
          break;
        count = ids.size();
      }
    if (count == n)
      return a;
    // representative: first state of each block
    std::vector<StateId> rep(count, static_cast<StateId>(n));
    for (StateId q = 0; q < n; ++q)
      if (rep[block[q]] == n)
        rep[block[q]] = q;
    std::vector<HfSet> names;
    for (StateId b = 0; b < count; ++b)
      names.push_back(a.states[rep[b]]);
    Apt r = Apt::shell(a.arity, a.alphabet, std::move(names), block[a.initial], a.max_color);
    for (StateId b = 0; b < count; ++b)
      {
        r.color[b] = a.color[rep[b]];
        for (LetterId l = 0; l < a.num_letters(); ++l)
          r.at(b, l) = mapped(rep[b], l);
      }
    return r;
  }

  Apt compress_colors(const Apt& a)
  {
    std::vector<unsigned> used(a.color.begin(), a.color.end());
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    std::map<unsigned, unsigned> to;
    unsigned cur = 0;
    for (std::size_t i = 0; i < used.size(); ++i)
      {
        if (i == 0)
          cur = used[0] % 2;
        else if (used[i] % 2 != used[i - 1] % 2)
          ++cur;
        to[used[i]] = cur;
      }
    Apt r = a;
    for (auto& c : r.color)
      c = to[c];
    r.max_color = used.empty() ? 0 : cur;
    return r;
  }

  Apt relabel(const Apt& a)
  {
    auto order = bfs_order(a);
    std::vector<bool> seen(a.num_states(), false);
    for (StateId q : order)
      seen[q] = true;
    for (StateId q = 0; q < a.num_states(); ++q)
      if (!seen[q])
        order.push_back(q);
    std::vector<StateId> renum(a.num_states());
    for (std::size_t i = 0; i < order.size(); ++i)
      renum[order[i]] = static_cast<StateId>(i);
    std::vector<HfSet> names;
    for (std::size_t i = 0; i < order.size(); ++i)
      names.push_back(hf::ordinal(i));
    Apt r = Apt::shell(a.arity, a.alphabet, std::move(names), 0, a.max_color);
    for (StateId q = 0; q < a.num_states(); ++q)
      {
        r.color[renum[q]] = a.color[q];
        for (LetterId l = 0; l < a.num_letters(); ++l)
          {
            Dnf d = a.at(q, l);
            for (auto& c : d)
              for (auto& m : c)
                m.state = renum[m.state];
            normalize(d);
            r.at(renum[q], l) = std::move(d);
          }
      }
    return r;
  }

  Apt reduce(const Apt& a)
  {
    return relabel(compress_colors(bisimulation_quotient(remove_subsumed(reachable_trim(a)))));
  }

  // ---------------------------------------------------------- simulation

  namespace
  {
    // c2 at least as good as c1 for min-parity: every infinite sequence
    // dominated pointwise this way keeps its winner.
    bool no_worse(unsigned c1, unsigned c2)
    {
      if (c1 % 2 == 0)
        return c2 % 2 == 0 && c2 <= c1;
      return c2 % 2 == 0 || c2 >= c1;
    }

    // Every move of \a easy is implied by some move of \a hard.
    bool implied_by(const Conj& easy, const Conj& hard, const std::vector<char>& sim,
                    std::size_t n)
    {
      for (const Move& m : easy)
        {
          bool found = false;
          for (const Move& h : hard)
            if (h.dir == m.dir && sim[h.state * n + m.state])
              {
                found = true;
                break;
              }
          if (!found)
            return false;
        }
      return true;
    }
  }

  namespace
  {
    Successors move_graph(const Apt& a)
    {
      Successors succ(a.num_states());
      for (StateId q = 0; q < a.num_states(); ++q)
        {
          for (LetterId l = 0; l < a.num_letters(); ++l)
            for (const Conj& c : a.at(q, l))
              for (const Move& m : c)
                succ[q].push_back(m.state);
          std::sort(succ[q].begin(), succ[q].end());
          succ[q].erase(std::unique(succ[q].begin(), succ[q].end()), succ[q].end());
        }
      return succ;
    }

    void recolor(const Successors& succ, const std::vector<unsigned>& color,
                 const std::vector<char>& in, long base, std::vector<unsigned>& out)
    {
      Components comps = strongly_connected(succ, in);
      std::size_t nc = comps.cyclic.size();
      std::vector<unsigned> least(nc, ~0u);
      for (std::size_t v = 0; v < in.size(); ++v)
        if (comps.comp[v] >= 0)
          least[comps.comp[v]] = std::min(least[comps.comp[v]], color[v]);
      for (std::size_t c = 0; c < nc; ++c)
        {
          if (!comps.cyclic[c])
            continue;
          unsigned m = least[c];
          long mine = base < 0 ? static_cast<long>(m % 2)
                               : (static_cast<long>(m % 2) == base % 2 ? base : base + 1);
          std::vector<char> rest(in.size(), 0);
          bool any = false;
          for (std::size_t v = 0; v < in.size(); ++v)
            if (comps.comp[v] == static_cast<std::int64_t>(c))
              {
                // every cycle through v that avoids color m lies in a
                // deeper component and is recolored there
                out[v] = static_cast<unsigned>(mine);
                if (color[v] != m)
                  rest[v] = any = 1;
              }
          if (any)
            recolor(succ, color, rest, mine, out);
        }
    }
  }

  std::vector<char> cyclic_states(const Apt& a)
  {
    Successors succ = move_graph(a);
    Components comps = strongly_connected(succ, std::vector<char>(a.num_states(), 1));
    std::vector<char> on(a.num_states(), 0);
    for (StateId q = 0; q < a.num_states(); ++q)
      on[q] = comps.cyclic[comps.comp[q]];
    return on;
  }

  Apt normalize_colors(const Apt& a)
  {
    Successors succ = move_graph(a);
    std::size_t n = a.num_states();
    std::vector<unsigned> out(n, ~0u);
    recolor(succ, a.color, std::vector<char>(n, 1), -1, out);
    unsigned low = ~0u;
    for (unsigned c : out)
      low = std::min(low, c);
    if (low == ~0u)
      low = 0;
    Apt r = a;
    r.max_color = 0;
    for (StateId q = 0; q < n; ++q)
      {
        r.color[q] = out[q] == ~0u ? low : out[q];
        r.max_color = std::max(r.max_color, r.color[q]);
      }
    return r;
  }

  std::vector<char> simulation_preorder(const Apt& a)
  {
    std::size_t n = a.num_states(), nl = a.num_letters();
    std::vector<char> sim(n * n, 0);
    for (StateId p = 0; p < n; ++p)
      for (StateId q = 0; q < n; ++q)
        sim[p * n + q] = no_worse(a.color[p], a.color[q]);
    // q simulates p at letter l: each conjunction of p is at least as
    // demanding as some conjunction of q
    auto holds = [&](StateId p, StateId q) {
      for (LetterId l = 0; l < nl; ++l)
        for (const Conj& cp : a.at(p, l))
          {
            bool matched = false;
            for (const Conj& cq : a.at(q, l))
              if (implied_by(cq, cp, sim, n))
                {
                  matched = true;
                  break;
                }
            if (!matched)
              return false;
          }
      return true;
    };
    std::vector<std::vector<StateId>> pred(n);
    for (StateId q = 0; q < n; ++q)
      {
        std::vector<StateId> succ;
        for (LetterId l = 0; l < nl; ++l)
          for (const Conj& c : a.at(q, l))
            for (const Move& m : c)
              succ.push_back(m.state);
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
        for (StateId s : succ)
          pred[s].push_back(q);
      }
    std::vector<std::pair<StateId, StateId>> work;
    std::vector<char> queued(n * n, 0);
    for (StateId p = 0; p < n; ++p)
      for (StateId q = 0; q < n; ++q)
        if (p != q && sim[p * n + q])
          {
            work.emplace_back(p, q);
            queued[p * n + q] = 1;
          }
    while (!work.empty())
      {
        auto [p, q] = work.back();
        work.pop_back();
        queued[p * n + q] = 0;
        if (!sim[p * n + q] || holds(p, q))
          continue;
        sim[p * n + q] = 0;
        for (StateId pp : pred[p])
          for (StateId qq : pred[q])
            if (pp != qq && sim[pp * n + qq] && !queued[pp * n + qq])
              {
                work.emplace_back(pp, qq);
                queued[pp * n + qq] = 1;
              }
      }
    return sim;
  }

  Apt simulation_reduce(const Apt& a)
  {
    std::size_t n = a.num_states();
    std::vector<char> sim = simulation_preorder(a);
    std::vector<StateId> rep(n);
    for (StateId q = 0; q < n; ++q)
      {
        rep[q] = q;
        for (StateId p = 0; p < q; ++p)
          if (rep[p] == p && sim[p * n + q] && sim[q * n + p])
            {
              rep[q] = p;
              break;
            }
      }
    Apt r = a;
    r.initial = rep[a.initial];
    for (StateId q = 0; q < n; ++q)
      for (LetterId l = 0; l < a.num_letters(); ++l)
        {
          Dnf d = a.at(rep[q], l);
          for (Conj& c : d)
            {
              for (Move& m : c)
                m.state = rep[m.state];
              normalize(c);
              // a dropped move is always implied by one still present
              std::vector<char> drop(c.size(), 0);
              for (std::size_t i = 0; i < c.size(); ++i)
                for (std::size_t j = 0; j < c.size() && !drop[i]; ++j)
                  drop[i] = j != i && !drop[j] && c[j].dir == c[i].dir
                            && sim[c[j].state * n + c[i].state];
              Conj kept;
              for (std::size_t i = 0; i < c.size(); ++i)
                if (!drop[i])
                  kept.push_back(c[i]);
              c = std::move(kept);
            }
          normalize(d);
          std::vector<char> gone(d.size(), 0);
          for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = 0; j < d.size() && !gone[i]; ++j)
              gone[i] = j != i && !gone[j] && implied_by(d[j], d[i], sim, n);
          Dnf out;
          for (std::size_t i = 0; i < d.size(); ++i)
            if (!gone[i])
              out.push_back(std::move(d[i]));
          r.at(q, l) = std::move(out);
        }
    return reachable_trim(r);
  }

  // --------------------------------------------------------- serialization

  namespace
  {
    std::string pretty(const HfSet& s) { return render(s, RenderStyle::pretty()); }

    HfSet conj_value(const Apt& a, const Conj& c)
    {
      std::vector<HfSet> moves;
      for (const Move& m : c)
        moves.push_back(hf::pair(hf::ordinal(m.dir), a.states[m.state]));
      return HfSet::of(std::move(moves));
    }

    [[noreturn]] void bad(std::size_t line, const std::string& msg)
    {
      fail(ErrorKind::Format, "apt line " + std::to_string(line) + ": " + msg);
    }
  }

  std::string serialize(const Apt& a)
  {
    std::ostringstream out;
    out << "apt 1\n";
    out << "arity " << a.arity << "\n";
    out << "max_color " << a.max_color << "\n";
    out << "alphabet " << pretty(a.alphabet) << "\n";
    out << "states " << pretty(HfSet::of(a.states)) << "\n";
    out << "initial " << pretty(a.states.at(a.initial)) << "\n";
    std::vector<std::pair<HfSet, std::string>> lines;
    for (StateId q = 0; q < a.num_states(); ++q)
      for (LetterId l = 0; l < a.num_letters(); ++l)
        {
          const Dnf& d = a.at(q, l);
          if (d.empty())
            continue;
          std::vector<HfSet> conjs;
          for (const Conj& c : d)
            conjs.push_back(conj_value(a, c));
          std::sort(conjs.begin(), conjs.end());
          HfSet key = hf::pair(a.states[q], a.alphabet.elements()[l]);
          std::string text = pretty(key) + " -> [";
          for (std::size_t i = 0; i < conjs.size(); ++i)
            text += (i ? "," : "") + pretty(conjs[i]);
          text += "]";
          lines.emplace_back(key, std::move(text));
        }
    std::sort(lines.begin(), lines.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [key, text] : lines)
      out << text << "\n";
    std::vector<std::pair<HfSet, unsigned>> colors;
    for (StateId q = 0; q < a.num_states(); ++q)
      colors.emplace_back(a.states[q], a.color[q]);
    std::sort(colors.begin(), colors.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [q, c] : colors)
      out << "color " << pretty(q) << " " << c << "\n";
    return out.str();
  }

  Apt parse_apt(std::string_view text)
  {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() -> bool {
      while (std::getline(in, line))
        {
          ++lineno;
          auto first = line.find_first_not_of(" \t\r");
          if (first == std::string::npos || line[first] == '#')
            continue;
          return true;
        }
      return false;
    };
    auto field = [&](const char* key) -> std::string {
      if (!next_line())
        bad(lineno, std::string("missing '") + key + "'");
      std::string k = key;
      if (line.compare(0, k.size() + 1, k + " ") != 0)
        bad(lineno, std::string("expected '") + key + "'");
      return line.substr(k.size() + 1);
    };
    auto number = [&](const std::string& s) -> unsigned {
      try
        {
          std::size_t used = 0;
          unsigned long v = std::stoul(s, &used);
          if (used != s.size() || v > 1000000)
            bad(lineno, "bad number '" + s + "'");
          return static_cast<unsigned>(v);
        }
      catch (const std::logic_error&)
        {
          bad(lineno, "bad number '" + s + "'");
        }
    };
    auto hf_value = [&](const std::string& s) {
      try
        {
          return parse_hf(s);
        }
      catch (const Error& e)
        {
          bad(lineno, e.what());
        }
    };

    if (!next_line() || line.rfind("apt 1", 0) != 0)
      bad(lineno, "missing 'apt 1' header");
    unsigned arity = number(field("arity"));
    unsigned max_color = number(field("max_color"));
    HfSet alphabet = hf_value(field("alphabet"));
    HfSet states = hf_value(field("states"));
    HfSet initial = hf_value(field("initial"));
    std::vector<HfSet> names(states.elements().begin(), states.elements().end());
    std::unordered_map<HfSet, StateId> index;
    for (StateId q = 0; q < names.size(); ++q)
      index.emplace(names[q], q);
    auto state_of = [&](const HfSet& s) {
      auto it = index.find(s);
      if (it == index.end())
        bad(lineno, pretty(s) + " is not a state");
      return it->second;
    };
    if (names.empty())
      bad(lineno, "no states");
    Apt a = Apt::shell(arity, alphabet, names, state_of(initial), max_color);
    std::vector<bool> colored(names.size(), false);
    while (next_line())
      {
        if (line.rfind("color ", 0) == 0)
          {
            std::size_t pos = 6;
            HfSet q;
            try
              {
                q = parse_hf_prefix(line, pos);
              }
            catch (const Error& e)
              {
                bad(lineno, e.what());
              }
            std::string rest = line.substr(pos);
            rest.erase(0, rest.find_first_not_of(' '));
            StateId s = state_of(q);
            a.color[s] = number(rest);
            colored[s] = true;
            continue;
          }
        std::size_t arrow = line.find("->");
        if (arrow == std::string::npos)
          bad(lineno, "expected a transition or color record");
        auto qa = hf::as_pair(hf_value(line.substr(0, arrow)));
        if (!qa)
          bad(lineno, "transition key is not a (state,letter) pair");
        StateId q = state_of(qa->first);
        auto l = alphabet.index_of(qa->second);
        if (!l)
          bad(lineno, pretty(qa->second) + " is not a letter");
        std::string rhs = line.substr(arrow + 2);
        auto lb = rhs.find('[');
        auto rb = rhs.rfind(']');
        if (lb == std::string::npos || rb == std::string::npos || rb < lb)
          bad(lineno, "expected [conj,...]");
        HfSet dnf = hf_value("{" + rhs.substr(lb + 1, rb - lb - 1) + "}");
        Dnf d;
        for (const HfSet& c : dnf.elements())
          {
            Conj conj;
            for (const HfSet& m : c.elements())
              {
                auto dq = hf::as_pair(m);
                if (!dq || !dq->first.ordinal_value())
                  bad(lineno, "conjunction member " + pretty(m) + " is not (d,state)");
                conj.push_back(Move{static_cast<std::uint32_t>(*dq->first.ordinal_value()),
                                    state_of(dq->second)});
              }
            d.push_back(std::move(conj));
          }
        normalize(d);
        a.at(q, static_cast<LetterId>(*l)) = std::move(d);
      }
    for (StateId q = 0; q < names.size(); ++q)
      if (!colored[q])
        bad(lineno, "state " + pretty(names[q]) + " has no color");
    return a;
  }

  std::string describe(const Apt& a)
  {
    return "states=" + std::to_string(a.num_states()) + " letters="
           + std::to_string(a.num_letters()) + " max_color=" + std::to_string(a.max_color)
           + " conjunctions=" + std::to_string(a.num_conjunctions());
  }

}
