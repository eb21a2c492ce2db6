#include <msotree/error.hpp>
#include <msotree/omega/omega.hpp>
#include <msotree/util/graph.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace msotree
{

  namespace
  {
    constexpr std::size_t kChoiceCap = 1000000;

    template <typename T> void sort_unique(std::vector<T>& v)
    {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }

    std::vector<StateId> heads(const PairSet& s)
    {
      std::vector<StateId> h;
      for (auto [q, q2] : s)
        h.push_back(q2);
      sort_unique(h);
      return h;
    }

    HfSet pair_set_name(const Apt& a, const PairSet& s)
    {
      std::vector<HfSet> elems;
      for (auto [q, q2] : s)
        elems.push_back(hf::pair(a.states[q], a.states[q2]));
      return HfSet::of(std::move(elems));
    }

    template <typename Key> struct Interner
    {
      std::map<Key, std::uint32_t> ids;
      std::vector<Key> keys;

      std::pair<std::uint32_t, bool> add(const Key& k)
      {
        auto [it, fresh] = ids.emplace(k, static_cast<std::uint32_t>(keys.size()));
        if (fresh)
          keys.push_back(k);
        return {it->second, fresh};
      }
    };
  }

  // ------------------------------------------------------------------- !A

  namespace
  {
    using Image = std::vector<PairSet>; // per direction

    bool dominates(const Image& x, const Image& y)
    {
      for (std::size_t d = 0; d < x.size(); ++d)
        if (!std::includes(y[d].begin(), y[d].end(), x[d].begin(), x[d].end()))
          return false;
      return true;
    }

    void keep_minimal(std::vector<Image>& v)
    {
      sort_unique(v);
      std::vector<char> dominated(v.size(), 0);
      for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size() && !dominated[i]; ++j)
          dominated[i] = j != i && dominates(v[j], v[i]);
      std::vector<Image> out;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (!dominated[i])
          out.push_back(std::move(v[i]));
      v = std::move(out);
    }

    // Per-direction pair sets of every choice function over the heads hs,
    // built one head at a time.  With Minimal, images containing another
    // image direction-wise are dropped along the way.
    std::vector<Image> choice_images(const Apt& a, const std::vector<StateId>& hs, LetterId l,
                                     BangChoices choices)
    {
      std::vector<Image> partial{Image(a.arity)};
      for (StateId q : hs)
        {
          const Dnf& dq = a.at(q, l);
          std::vector<Image> next;
          if (partial.size() * dq.size() > kChoiceCap)
            fail(ErrorKind::TooLarge, "bang: more than " + std::to_string(kChoiceCap)
                                          + " choice functions at one transition");
          for (const Image& p : partial)
            for (const Conj& c : dq)
              {
                Image x = p;
                for (const Move& m : c)
                  x[m.dir].push_back({q, m.state});
                for (auto& s : x)
                  sort_unique(s);
                next.push_back(std::move(x));
              }
          if (choices == BangChoices::Minimal)
            keep_minimal(next);
          else
            sort_unique(next);
          partial = std::move(next);
          if (partial.empty())
            break;
        }
      return partial;
    }
  }

  BangAutomaton bang(const Apt& a, std::size_t cap, BangChoices choices)
  {
    require_valid(a);
    Interner<PairSet> states;
    states.add(PairSet{{a.initial, a.initial}});
    std::vector<std::vector<Dnf>> trans; // trans[s][letter]
    for (std::size_t s = 0; s < states.keys.size(); ++s)
      {
        std::vector<StateId> hs = heads(states.keys[s]);
        std::vector<Dnf> row(a.num_letters());
        for (LetterId l = 0; l < a.num_letters(); ++l)
          {
            Dnf out;
            for (const auto& per_dir : choice_images(a, hs, l, choices))
              {
                Conj c;
                for (std::uint32_t d = 0; d < a.arity; ++d)
                  {
                    if (per_dir[d].empty())
                      continue;
                    auto [id, fresh] = states.add(per_dir[d]);
                    if (fresh && states.keys.size() > cap)
                      fail(ErrorKind::TooLarge,
                           "bang: more than " + std::to_string(cap) + " reachable states");
                    c.push_back(Move{d, id});
                  }
                out.push_back(std::move(c));
              }
            normalize(out);
            row[l] = std::move(out);
          }
        trans.push_back(std::move(row));
      }
    std::vector<HfSet> names;
    for (const PairSet& s : states.keys)
      names.push_back(pair_set_name(a, s));
    BangAutomaton b;
    b.automaton = Apt::shell(a.arity, a.alphabet, std::move(names), 0, 0);
    for (StateId s = 0; s < trans.size(); ++s)
      for (LetterId l = 0; l < a.num_letters(); ++l)
        b.automaton.at(s, l) = std::move(trans[s][l]);
    b.pairs = std::move(states.keys);
    b.source_color = a.color;
    b.source_initial = a.initial;
    return b;
  }

  // ------------------------------------------------------- bad-trace NBW

  Nbw nbw_bad_trace(const std::vector<unsigned>& color, StateId initial,
                    const std::vector<PairSet>& letters, const std::vector<HfSet>& letter_names)
  {
    auto nq = static_cast<std::uint32_t>(color.size());
    unsigned top = 0;
    for (unsigned c : color)
      top = std::max(top, c);
    std::vector<unsigned> odd;
    for (unsigned m = 1; m <= top; m += 2)
      odd.push_back(m);
    // 0: start, 1 + q: pre-guess at q, then one state per (q, odd m <= col q)
    Nbw n;
    n.letters = letter_names;
    n.states.push_back(hf::pair(hf::ordinal(0), hf::ordinal(0)));
    n.accepting.push_back(0);
    for (std::uint32_t q = 0; q < nq; ++q)
      {
        n.states.push_back(hf::pair(hf::ordinal(1), hf::ordinal(q)));
        n.accepting.push_back(0);
      }
    std::vector<std::vector<std::int64_t>> guess(nq, std::vector<std::int64_t>(odd.size(), -1));
    for (std::uint32_t q = 0; q < nq; ++q)
      for (std::size_t k = 0; k < odd.size(); ++k)
        if (color[q] >= odd[k])
          {
            guess[q][k] = static_cast<std::int64_t>(n.states.size());
            n.states.push_back(
                hf::pair(hf::ordinal(2), hf::pair(hf::ordinal(q), hf::ordinal(odd[k]))));
            n.accepting.push_back(color[q] == odd[k] ? 1 : 0);
          }
    n.initial = {0};
    std::size_t nl = letters.size();
    n.succ.assign(n.states.size() * nl, {});
    auto enter = [&](std::vector<std::uint32_t>& out, StateId q2) {
      out.push_back(1 + q2);
      for (std::size_t k = 0; k < odd.size(); ++k)
        if (guess[q2][k] >= 0)
          out.push_back(static_cast<std::uint32_t>(guess[q2][k]));
    };
    for (std::uint32_t l = 0; l < nl; ++l)
      {
        const PairSet& s = letters[l];
        auto hs = heads(s);
        if (std::binary_search(hs.begin(), hs.end(), initial))
          enter(n.succ[0 * nl + l], initial);
        for (auto [q, q2] : s)
          {
            enter(n.succ[(1 + q) * nl + l], q2);
            for (std::size_t k = 0; k < odd.size(); ++k)
              if (guess[q][k] >= 0 && guess[q2][k] >= 0)
                n.succ[static_cast<std::size_t>(guess[q][k]) * nl + l].push_back(
                    static_cast<std::uint32_t>(guess[q2][k]));
          }
      }
    for (auto& v : n.succ)
      sort_unique(v);
    return n;
  }

  Nbw nbw_bad_trace(const BangAutomaton& b)
  {
    return nbw_bad_trace(b.source_color, b.source_initial, b.pairs, b.automaton.states);
  }

  // ------------------------------------------------------ determinization

  namespace
  {
    // Safra tree; nodes listed oldest first, parent < child.
    struct SafraNode
    {
      std::int32_t parent;
      std::vector<std::uint32_t> label;

      friend auto operator<=>(const SafraNode&, const SafraNode&) = default;
    };
    using SafraTree = std::vector<SafraNode>; // empty: the rejecting sink

    struct SafraStep
    {
      SafraTree tree;
      unsigned color;
    };

    class Safra
    {
    public:
      explicit Safra(const Nbw& n)
        : n_(n), default_color_(2 * (2 * static_cast<unsigned>(n.num_states()) + 1) + 1)
      {
      }

      unsigned default_color() const { return default_color_; }

      SafraTree initial() const
      {
        SafraTree t;
        std::vector<std::uint32_t> init = n_.initial;
        sort_unique(init);
        if (!init.empty())
          t.push_back(SafraNode{-1, init});
        return t;
      }

      SafraStep step(const SafraTree& tree, std::uint32_t letter) const
      {
        if (tree.empty())
          return {tree, default_color_};
        SafraTree ext = tree;
        // branch on accepting states
        for (std::size_t i = 0; i < tree.size(); ++i)
          {
            std::vector<std::uint32_t> acc;
            for (auto q : tree[i].label)
              if (n_.accepting[q])
                acc.push_back(q);
            if (!acc.empty())
              ext.push_back(SafraNode{static_cast<std::int32_t>(i), acc});
          }
        for (auto& node : ext)
          {
            std::vector<std::uint32_t> next;
            for (auto q : node.label)
              {
                const auto& s = n_.at(q, letter);
                next.insert(next.end(), s.begin(), s.end());
              }
            sort_unique(next);
            node.label = std::move(next);
          }
        std::vector<std::vector<std::size_t>> children(ext.size());
        for (std::size_t i = 1; i < ext.size(); ++i)
          children[static_cast<std::size_t>(ext[i].parent)].push_back(i);
        // states kept only in the leftmost node among siblings' subtrees
        std::vector<std::pair<std::size_t, std::vector<std::uint32_t>>> work{{0, {}}};
        while (!work.empty())
          {
            auto [v, blocked] = std::move(work.back());
            work.pop_back();
            auto& lab = ext[v].label;
            std::vector<std::uint32_t> kept;
            std::set_difference(lab.begin(), lab.end(), blocked.begin(), blocked.end(),
                                std::back_inserter(kept));
            lab = std::move(kept);
            std::vector<std::uint32_t> acc = blocked;
            std::vector<std::pair<std::size_t, std::vector<std::uint32_t>>> pending;
            for (std::size_t c : children[v])
              {
                pending.emplace_back(c, acc);
                std::vector<std::uint32_t> merged;
                std::set_union(acc.begin(), acc.end(), ext[c].label.begin(), ext[c].label.end(),
                               std::back_inserter(merged));
                acc = std::move(merged);
              }
            for (auto it = pending.rbegin(); it != pending.rend(); ++it)
              work.push_back(std::move(*it));
          }
        std::vector<char> dead(ext.size(), 0), green(ext.size(), 0);
        for (std::size_t i = 0; i < ext.size(); ++i)
          if (ext[i].label.empty() || (ext[i].parent >= 0 && dead[static_cast<std::size_t>(ext[i].parent)]))
            dead[i] = 1;
        // vertical merge, top-down
        for (std::size_t i = 0; i < ext.size(); ++i)
          {
            if (dead[i])
              continue;
            std::vector<std::uint32_t> uni;
            bool any = false;
            for (std::size_t c : children[i])
              if (!dead[c])
                {
                  any = true;
                  std::vector<std::uint32_t> merged;
                  std::set_union(uni.begin(), uni.end(), ext[c].label.begin(), ext[c].label.end(),
                                 std::back_inserter(merged));
                  uni = std::move(merged);
                }
            if (any && uni == ext[i].label)
              {
                green[i] = 1;
                kill_below(i, children, dead);
              }
          }
        unsigned color = default_color_;
        for (std::size_t i = 0; i < ext.size(); ++i)
          {
            if (dead[i])
              color = std::min(color, static_cast<unsigned>(2 * i + 1));
            else if (green[i])
              color = std::min(color, static_cast<unsigned>(2 * i + 2));
          }
        if (dead[0])
          return {SafraTree{}, color};
        SafraTree out;
        std::vector<std::int32_t> renum(ext.size(), -1);
        for (std::size_t i = 0; i < ext.size(); ++i)
          if (!dead[i])
            {
              renum[i] = static_cast<std::int32_t>(out.size());
              out.push_back(SafraNode{ext[i].parent < 0 ? -1 : renum[static_cast<std::size_t>(ext[i].parent)],
                                      ext[i].label});
            }
        return {std::move(out), color};
      }

    private:
      static void kill_below(std::size_t v, const std::vector<std::vector<std::size_t>>& children,
                             std::vector<char>& dead)
      {
        for (std::size_t c : children[v])
          if (!dead[c])
            {
              dead[c] = 1;
              kill_below(c, children, dead);
            }
      }

      const Nbw& n_;
      unsigned default_color_;
    };

    // Monotone, parity-preserving renumbering of a color sequence.
    std::map<unsigned, unsigned> compress(std::vector<unsigned> used)
    {
      sort_unique(used);
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
      return to;
    }
  }

  Dpw determinize(const Nbw& n, std::size_t cap)
  {
    Safra safra(n);
    using Key = std::pair<SafraTree, unsigned>;
    Interner<Key> states;
    states.add(Key{safra.initial(), safra.default_color()});
    std::vector<std::uint32_t> delta;
    for (std::size_t s = 0; s < states.keys.size(); ++s)
      for (std::uint32_t l = 0; l < n.num_letters(); ++l)
        {
          SafraStep st = safra.step(states.keys[s].first, l);
          auto [id, fresh] = states.add(Key{std::move(st.tree), st.color});
          if (fresh && states.keys.size() > cap)
            fail(ErrorKind::TooLarge,
                 "determinization: more than " + std::to_string(cap) + " states");
          delta.push_back(id);
        }
    std::vector<unsigned> raw;
    for (const Key& k : states.keys)
      raw.push_back(k.second);
    auto to = compress(raw);
    Dpw d;
    d.letters = n.letters;
    d.initial = 0;
    d.delta = std::move(delta);
    for (std::size_t s = 0; s < states.keys.size(); ++s)
      {
        d.states.push_back(hf::ordinal(s));
        d.color.push_back(to[raw[s]]);
        d.max_color = std::max(d.max_color, d.color.back());
      }
    return d;
  }

  Dpw complement_dpw(const Dpw& d)
  {
    Dpw c = d;
    for (auto& x : c.color)
      x += 1;
    c.max_color = d.max_color + 1;
    return c;
  }

  // ------------------------------------------------------------- lassos

  namespace
  {
    void check_letters(std::size_t nl, const std::vector<std::uint32_t>& w)
    {
      for (auto a : w)
        if (a >= nl)
          fail(ErrorKind::UnknownLetter, "letter " + std::to_string(a) + " is outside the alphabet");
    }
  }

  bool lasso_accepts(const Dpw& d, const std::vector<std::uint32_t>& u,
                     const std::vector<std::uint32_t>& v)
  {
    if (v.empty())
      fail(ErrorKind::UnknownLetter, "the period of a lasso must be nonempty");
    check_letters(d.num_letters(), u);
    check_letters(d.num_letters(), v);
    std::uint32_t q = d.initial;
    for (auto a : u)
      q = d.at(q, a);
    std::map<std::pair<std::uint32_t, std::size_t>, std::size_t> seen;
    std::vector<std::uint32_t> visited;
    std::size_t pos = 0;
    while (!seen.count({q, pos}))
      {
        seen[{q, pos}] = visited.size();
        visited.push_back(q);
        q = d.at(q, v[pos]);
        pos = (pos + 1) % v.size();
      }
    unsigned m = ~0u;
    for (std::size_t k = seen[{q, pos}]; k < visited.size(); ++k)
      m = std::min(m, d.color[visited[k]]);
    return m % 2 == 0;
  }

  bool nbw_lasso_accepts(const Nbw& n, const std::vector<std::uint32_t>& u,
                         const std::vector<std::uint32_t>& v)
  {
    if (v.empty())
      fail(ErrorKind::UnknownLetter, "the period of a lasso must be nonempty");
    check_letters(n.num_letters(), u);
    check_letters(n.num_letters(), v);
    std::vector<std::uint32_t> w = u;
    w.insert(w.end(), v.begin(), v.end());
    std::size_t len = w.size(), nq = n.num_states();
    auto next = [&](std::size_t i) { return i + 1 < len ? i + 1 : u.size(); };
    // vertex (q, i): in state q before reading w[i]
    Successors succ(nq * len);
    for (std::size_t i = 0; i < len; ++i)
      for (std::uint32_t q = 0; q < nq; ++q)
        for (auto q2 : n.at(q, w[i]))
          succ[q * len + i].push_back(static_cast<std::uint32_t>(q2 * len + next(i)));
    std::vector<std::uint32_t> roots;
    for (auto q : n.initial)
      roots.push_back(static_cast<std::uint32_t>(q * len));
    auto reach = reachable(succ, roots);
    Components k = strongly_connected(succ, reach);
    for (std::uint32_t q = 0; q < nq; ++q)
      for (std::size_t i = 0; i < len; ++i)
        {
          std::size_t x = q * len + i;
          if (reach[x] && n.accepting[q] && k.cyclic[k.comp[x]])
            return true;
        }
    return false;
  }

  bool all_traces_accepting_lasso(const std::vector<unsigned>& color, StateId initial,
                                  const std::vector<PairSet>& u, const std::vector<PairSet>& v)
  {
    std::vector<PairSet> w = u;
    w.insert(w.end(), v.begin(), v.end());
    std::size_t len = w.size(), nq = color.size();
    if (v.empty() || len == 0)
      return true;
    auto h0 = heads(w[0]);
    if (!std::binary_search(h0.begin(), h0.end(), initial))
      return true;
    auto next = [&](std::size_t i) { return i + 1 < len ? i + 1 : u.size(); };
    // vertex (q, i): the trace is at q, which lies in pi2 of w[i]
    Successors succ(nq * len);
    std::vector<unsigned> vcolor(nq * len);
    for (std::size_t i = 0; i < len; ++i)
      for (std::uint32_t q = 0; q < nq; ++q)
        vcolor[q * len + i] = color[q];
    for (std::size_t i = 0; i < len; ++i)
      for (auto [q, q2] : w[next(i)])
        succ[q * len + i].push_back(static_cast<std::uint32_t>(q2 * len + next(i)));
    auto reach = reachable(succ, {static_cast<std::uint32_t>(initial * len)});
    unsigned top = 0;
    for (unsigned c : color)
      top = std::max(top, c);
    for (unsigned c = 1; c <= top; c += 2)
      if (cycle_with_least_color(succ, reach, vcolor, c))
        return false;
    return true;
  }

  // ------------------------------------------------------------ ND(A)

  Apt nd(const Apt& a, std::size_t cap)
  {
    auto staged = [](const char* stage, auto&& fn) {
      try
        {
          return fn();
        }
      catch (const Error& e)
        {
          throw e.with_stage(stage);
        }
    };
    BangAutomaton b = staged("bang", [&] { return bang(a, cap, BangChoices::Minimal); });
    Nbw bad = nbw_bad_trace(b);
    return staged("product", [&] {
      // The complemented Safra automaton is explored lazily, only on the
      // letters the product actually reads.
      Safra safra(bad);
      using Key = std::pair<SafraTree, unsigned>;
      Interner<Key> dpw;
      dpw.add(Key{safra.initial(), safra.default_color()});
      std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> dstep;
      auto dpw_next = [&](std::uint32_t dq, std::uint32_t letter) {
        auto it = dstep.find({dq, letter});
        if (it != dstep.end())
          return it->second;
        SafraStep st = safra.step(dpw.keys[dq].first, letter);
        auto [id, fresh] = dpw.add(Key{std::move(st.tree), st.color});
        if (fresh && dpw.keys.size() > cap)
          fail(ErrorKind::TooLarge, "determinization: more than " + std::to_string(cap) + " states");
        dstep.emplace(std::make_pair(dq, letter), id);
        return id;
      };
      Interner<std::pair<StateId, std::uint32_t>> states;
      states.add({0, 0});
      std::vector<std::vector<Dnf>> trans;
      for (std::size_t s = 0; s < states.keys.size(); ++s)
        {
          auto [bs, dq] = states.keys[s];
          std::uint32_t dnext = dpw_next(dq, bs);
          std::vector<Dnf> row(a.num_letters());
          for (LetterId l = 0; l < a.num_letters(); ++l)
            {
              for (const Conj& c : b.automaton.at(bs, l))
                {
                  Conj out;
                  for (const Move& m : c)
                    {
                      auto [id, fresh] = states.add({m.state, dnext});
                      if (fresh && states.keys.size() > cap)
                        fail(ErrorKind::TooLarge,
                             "simulation product: more than " + std::to_string(cap) + " states");
                      out.push_back(Move{m.dir, id});
                    }
                  normalize(out);
                  row[l].push_back(std::move(out));
                }
              normalize(row[l]);
            }
          trans.push_back(std::move(row));
        }
      std::vector<unsigned> raw;
      for (auto [bs, dq] : states.keys)
        raw.push_back(dpw.keys[dq].second);
      auto to = compress(raw);
      std::vector<HfSet> names;
      for (auto [bs, dq] : states.keys)
        names.push_back(hf::pair(b.automaton.states[bs], hf::ordinal(dq)));
      Apt r = Apt::shell(a.arity, a.alphabet, std::move(names), 0, 0);
      for (StateId s = 0; s < trans.size(); ++s)
        {
          r.color[s] = to[raw[s]] + 1;
          r.max_color = std::max(r.max_color, r.color[s]);
          for (LetterId l = 0; l < a.num_letters(); ++l)
            r.at(s, l) = std::move(trans[s][l]);
        }
      return r;
    });
  }

  // --------------------------------------------------------- serialization

  namespace
  {
    std::string pretty(const HfSet& s) { return render(s, RenderStyle::pretty()); }

    [[noreturn]] void bad(const char* what, std::size_t line, const std::string& msg)
    {
      fail(ErrorKind::Format, std::string(what) + " line " + std::to_string(line) + ": " + msg);
    }

    struct Reader
    {
      const char* what;
      std::istringstream in;
      std::string line;
      std::size_t lineno = 0;

      Reader(const char* w, std::string_view text) : what(w), in(std::string(text)) {}

      bool next()
      {
        while (std::getline(in, line))
          {
            ++lineno;
            if (!line.empty() && line.back() == '\r')
              line.pop_back();
            auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos || line[first] == '#')
              continue;
            return true;
          }
        return false;
      }

      std::string field(const std::string& key)
      {
        if (!next() || line.compare(0, key.size() + 1, key + " ") != 0)
          bad(what, lineno, "expected '" + key + "'");
        return line.substr(key.size() + 1);
      }

      HfSet hf(std::string_view s)
      {
        try
          {
            return parse_hf(s);
          }
        catch (const Error& e)
          {
            bad(what, lineno, e.what());
          }
      }

      unsigned number(const std::string& s)
      {
        try
          {
            std::size_t used = 0;
            unsigned long v = std::stoul(s, &used);
            if (used == s.size() && v <= 1000000)
              return static_cast<unsigned>(v);
          }
        catch (const std::logic_error&)
          {
          }
        bad(what, lineno, "bad number '" + s + "'");
      }

      std::uint32_t index_in(const std::unordered_map<HfSet, std::uint32_t>& m, const HfSet& x,
                             const char* kind)
      {
        auto it = m.find(x);
        if (it == m.end())
          bad(what, lineno, pretty(x) + " is not a " + kind);
        return it->second;
      }
    };

    std::unordered_map<HfSet, std::uint32_t> index_of(const std::vector<HfSet>& v)
    {
      std::unordered_map<HfSet, std::uint32_t> m;
      for (std::uint32_t i = 0; i < v.size(); ++i)
        m.emplace(v[i], i);
      return m;
    }

    template <typename Row> std::string sorted_rows(std::vector<std::pair<HfSet, Row>> rows)
    {
      std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      std::string out;
      for (const auto& [k, text] : rows)
        out += text + "\n";
      return out;
    }
  }

  std::string serialize(const Dpw& d)
  {
    std::ostringstream out;
    out << "dpw 1\n";
    out << "max_color " << d.max_color << "\n";
    out << "letters " << pretty(HfSet::of(d.letters)) << "\n";
    out << "states " << pretty(HfSet::of(d.states)) << "\n";
    out << "initial " << pretty(d.states[d.initial]) << "\n";
    std::vector<std::pair<HfSet, std::string>> rows, colors;
    for (std::uint32_t q = 0; q < d.num_states(); ++q)
      {
        for (std::uint32_t a = 0; a < d.num_letters(); ++a)
          {
            HfSet key = hf::pair(d.states[q], d.letters[a]);
            rows.emplace_back(key, pretty(key) + " -> " + pretty(d.states[d.at(q, a)]));
          }
        colors.emplace_back(d.states[q], "color " + pretty(d.states[q]) + " " + std::to_string(d.color[q]));
      }
    out << sorted_rows(std::move(rows)) << sorted_rows(std::move(colors));
    return out.str();
  }

  Dpw parse_dpw(std::string_view text)
  {
    Reader r("dpw", text);
    if (!r.next() || r.line != "dpw 1")
      bad("dpw", r.lineno, "missing 'dpw 1' header");
    Dpw d;
    d.max_color = r.number(r.field("max_color"));
    HfSet letters = r.hf(r.field("letters")), states = r.hf(r.field("states"));
    d.letters.assign(letters.elements().begin(), letters.elements().end());
    d.states.assign(states.elements().begin(), states.elements().end());
    auto li = index_of(d.letters), si = index_of(d.states);
    d.initial = r.index_in(si, r.hf(r.field("initial")), "state");
    const std::uint32_t unset = 0xffffffffu;
    d.delta.assign(d.num_states() * d.num_letters(), unset);
    d.color.assign(d.num_states(), unset);
    while (r.next())
      {
        if (r.line.rfind("color ", 0) == 0)
          {
            std::size_t pos = 6;
            HfSet q;
            try
              {
                q = parse_hf_prefix(r.line, pos);
              }
            catch (const Error& e)
              {
                bad("dpw", r.lineno, e.what());
              }
            std::string rest = r.line.substr(pos);
            rest.erase(0, rest.find_first_not_of(' '));
            d.color[r.index_in(si, q, "state")] = r.number(rest);
            continue;
          }
        auto arrow = r.line.find("->");
        if (arrow == std::string::npos)
          bad("dpw", r.lineno, "expected a transition or color record");
        auto key = hf::as_pair(r.hf(std::string_view(r.line).substr(0, arrow)));
        if (!key)
          bad("dpw", r.lineno, "transition key is not a (state,letter) pair");
        std::uint32_t q = r.index_in(si, key->first, "state");
        std::uint32_t a = r.index_in(li, key->second, "letter");
        d.delta[q * d.num_letters() + a] = r.index_in(si, r.hf(std::string_view(r.line).substr(arrow + 2)), "state");
      }
    if (std::find(d.delta.begin(), d.delta.end(), unset) != d.delta.end())
      bad("dpw", r.lineno, "transition function is not total");
    if (std::find(d.color.begin(), d.color.end(), unset) != d.color.end())
      bad("dpw", r.lineno, "some state has no color");
    return d;
  }

  std::string serialize(const Nbw& n)
  {
    std::ostringstream out;
    out << "nbw 1\n";
    out << "letters " << pretty(HfSet::of(n.letters)) << "\n";
    out << "states " << pretty(HfSet::of(n.states)) << "\n";
    std::vector<HfSet> init, acc;
    for (auto q : n.initial)
      init.push_back(n.states[q]);
    for (std::uint32_t q = 0; q < n.num_states(); ++q)
      if (n.accepting[q])
        acc.push_back(n.states[q]);
    out << "initial " << pretty(HfSet::of(init)) << "\n";
    out << "accepting " << pretty(HfSet::of(acc)) << "\n";
    std::vector<std::pair<HfSet, std::string>> rows;
    for (std::uint32_t q = 0; q < n.num_states(); ++q)
      for (std::uint32_t a = 0; a < n.num_letters(); ++a)
        {
          if (n.at(q, a).empty())
            continue;
          std::vector<HfSet> ts;
          for (auto t : n.at(q, a))
            ts.push_back(n.states[t]);
          HfSet key = hf::pair(n.states[q], n.letters[a]);
          rows.emplace_back(key, pretty(key) + " -> " + pretty(HfSet::of(ts)));
        }
    out << sorted_rows(std::move(rows));
    return out.str();
  }

  Nbw parse_nbw(std::string_view text)
  {
    Reader r("nbw", text);
    if (!r.next() || r.line != "nbw 1")
      bad("nbw", r.lineno, "missing 'nbw 1' header");
    Nbw n;
    HfSet letters = r.hf(r.field("letters")), states = r.hf(r.field("states"));
    n.letters.assign(letters.elements().begin(), letters.elements().end());
    n.states.assign(states.elements().begin(), states.elements().end());
    auto li = index_of(n.letters), si = index_of(n.states);
    for (const HfSet& q : r.hf(r.field("initial")).elements())
      n.initial.push_back(r.index_in(si, q, "state"));
    n.accepting.assign(n.num_states(), 0);
    for (const HfSet& q : r.hf(r.field("accepting")).elements())
      n.accepting[r.index_in(si, q, "state")] = 1;
    n.succ.assign(n.num_states() * n.num_letters(), {});
    while (r.next())
      {
        auto arrow = r.line.find("->");
        if (arrow == std::string::npos)
          bad("nbw", r.lineno, "expected a transition record");
        auto key = hf::as_pair(r.hf(std::string_view(r.line).substr(0, arrow)));
        if (!key)
          bad("nbw", r.lineno, "transition key is not a (state,letter) pair");
        std::uint32_t q = r.index_in(si, key->first, "state");
        std::uint32_t a = r.index_in(li, key->second, "letter");
        auto& out = n.succ[q * n.num_letters() + a];
        for (const HfSet& t : r.hf(std::string_view(r.line).substr(arrow + 2)).elements())
          out.push_back(r.index_in(si, t, "state"));
        sort_unique(out);
      }
    return n;
  }

}
