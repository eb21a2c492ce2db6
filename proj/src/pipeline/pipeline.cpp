#include <msotree/pipeline/pipeline.hpp>

#include <msotree/error.hpp>

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <tuple>
#include <stdexcept>
#include <unordered_map>

namespace msotree
{

  std::size_t CompilationTrace::peak_states() const
  {
    std::size_t m = 0;
    for (const TraceRecord& r : records)
      m = std::max({m, r.states_before, r.states_after});
    return m;
  }

  HfSet bit_alphabet(std::size_t p)
  {
    std::vector<HfSet> layer{hf::empty_set()};
    for (std::size_t i = 0; i < p; ++i)
      {
        std::vector<HfSet> next;
        next.reserve(layer.size() * 2);
        for (const HfSet& l : layer)
          {
            next.push_back(hf::pair(l, hf::ordinal(0)));
            next.push_back(hf::pair(l, hf::ordinal(1)));
          }
        layer = std::move(next);
      }
    return HfSet::of(std::move(layer));
  }

  HfSet bit_letter(const std::vector<bool>& bits)
  {
    HfSet l = hf::empty_set();
    for (bool b : bits)
      l = hf::pair(l, hf::ordinal(b ? 1 : 0));
    return l;
  }

  std::vector<bool> letter_bits(const HfSet& letter, std::size_t p)
  {
    std::vector<bool> bits(p);
    HfSet l = letter;
    for (std::size_t i = p; i-- > 0;)
      {
        auto ab = hf::as_pair(l);
        if (!ab)
          fail(ErrorKind::NotPair, render(letter) + " is not a letter of 2^" + std::to_string(p));
        bits[i] = hf::as_ordinal(ab->second) == 1;
        l = ab->first;
      }
    if (!l.empty())
      fail(ErrorKind::NotPair, render(letter) + " is not a letter of 2^" + std::to_string(p));
    return bits;
  }

  namespace
  {

    using Clock = std::chrono::steady_clock;

    // The simulation preorder is quadratic in the state count.
    constexpr std::size_t kSimulationLimit = 3000;

    double since(Clock::time_point t0)
    {
      return std::chrono::duration<double>(Clock::now() - t0).count();
    }

    struct Compiled
    {
      Apt automaton;
      std::vector<VarId> vars; // coordinate i is vars[i]
    };

    // Canonical text of a formula up to renaming: free variables by rank,
    // bound ones by binder depth.
    void canon(const IfFormula& f, std::map<VarId, std::string>& names, unsigned depth,
               std::string& out)
    {
      using K = IfFormula::Kind;
      switch (f.kind())
        {
        case K::Subset:
          out += "(" + names.at(f.x()) + "<" + names.at(f.y()) + ")";
          return;
        case K::Succ:
          out += "(" + names.at(f.x()) + "s" + std::to_string(f.dir()) + names.at(f.y()) + ")";
          return;
        case K::Not:
          out += "~";
          canon(f.a(), names, depth, out);
          return;
        case K::Or:
        case K::And:
        case K::Implies:
          out += f.kind() == K::Or ? "|(" : f.kind() == K::And ? "&(" : ">(";
          canon(f.a(), names, depth, out);
          out += ",";
          canon(f.b(), names, depth, out);
          out += ")";
          return;
        case K::Exists:
        case K::Forall:
          {
            auto saved = names.find(f.x());
            std::optional<std::string> old;
            if (saved != names.end())
              old = saved->second;
            names[f.x()] = "b" + std::to_string(depth);
            out += f.kind() == K::Exists ? "E" : "A";
            out += std::to_string(depth) + ".";
            canon(f.a(), names, depth + 1, out);
            if (old)
              names[f.x()] = *old;
            else
              names.erase(f.x());
            return;
          }
        }
    }

    std::string canonical_key(const IfFormula& f, const std::vector<VarId>& free)
    {
      std::map<VarId, std::string> names;
      for (std::size_t i = 0; i < free.size(); ++i)
        names[free[i]] = "f" + std::to_string(i);
      std::string out;
      canon(f, names, 0, out);
      return out;
    }

    void post_order(const IfFormula& f, std::vector<const IfFormula*>& out)
    {
      using K = IfFormula::Kind;
      switch (f.kind())
        {
        case K::Subset:
        case K::Succ:
          break;
        case K::Not:
        case K::Exists:
        case K::Forall:
          post_order(f.a(), out);
          break;
        case K::Or:
        case K::And:
        case K::Implies:
          post_order(f.a(), out);
          post_order(f.b(), out);
          break;
        }
      out.push_back(&f);
    }

    // Hand-built automata over 2^1 for subformulas the individual-free
    // translation emits over and over, and for their negations.  Their
    // languages equal those of the formulas they stand for.
    template <class F>
    Apt one_var_automaton(unsigned arity, std::vector<unsigned> colors, F&& delta)
    {
      std::vector<HfSet> names;
      for (std::size_t i = 0; i < colors.size(); ++i)
        names.push_back(hf::ordinal(i));
      unsigned top = *std::max_element(colors.begin(), colors.end());
      Apt a = Apt::shell(arity, bit_alphabet(1), std::move(names), 0, top);
      a.color = std::move(colors);
      for (StateId q = 0; q < a.num_states(); ++q)
        for (bool bit : {false, true})
          {
            Dnf& d = a.at(q, a.letter(bit_letter({bit})));
            d = delta(q, bit);
            normalize(d);
          }
      return a;
    }

    // Moves to \a q in the directions of \a dirs and to \a rest elsewhere.
    Conj spread(unsigned arity, std::initializer_list<unsigned> dirs, StateId q, StateId rest)
    {
      Conj c;
      for (unsigned d = 0; d < arity; ++d)
        c.push_back(Move{d, std::find(dirs.begin(), dirs.end(), d) != dirs.end() ? q : rest});
      return c;
    }

    // X is empty.  0: nothing so far, 1: rejecting sink.
    Apt empty_automaton(unsigned arity)
    {
      return one_var_automaton(arity, {0, 1}, [arity](StateId q, bool bit) {
        return Dnf{spread(arity, {}, 0, q == 0 && !bit ? 0 : 1)};
      });
    }

    // X is nonempty.  0: an element lies below, 1: anything.
    Apt nonempty_automaton(unsigned arity)
    {
      return one_var_automaton(arity, {1, 0}, [arity](StateId q, bool bit) {
        if (q == 1 || bit)
          return Dnf{spread(arity, {}, 0, 1)};
        Dnf d;
        for (unsigned e = 0; e < arity; ++e)
          d.push_back(spread(arity, {e}, 0, 1));
        return d;
      });
    }

    // X is a singleton.  0: the element lies below, 1: nothing below,
    // 2: rejecting sink.
    Apt sing_automaton(unsigned arity)
    {
      return one_var_automaton(arity, {1, 0, 1}, [arity](StateId q, bool bit) {
        if (q == 2 || (q == 1 && bit))
          return Dnf{spread(arity, {}, 0, 2)};
        if (q == 1 || bit)
          return Dnf{spread(arity, {}, 0, 1)};
        Dnf d;
        for (unsigned e = 0; e < arity; ++e)
          d.push_back(spread(arity, {e}, 0, 1));
        return d;
      });
    }

    // X is not a singleton: empty, or two elements below.  0: start,
    // 1: anything, 2: one element below, 3: two elements below, 4: nothing
    // below, 5: rejecting sink.
    Apt non_singleton_automaton(unsigned arity)
    {
      enum : StateId
      {
        start,
        any,
        one,
        two,
        none,
        sink
      };
      auto at_least = [arity](StateId need, bool bit) {
        Dnf d;
        if (need == one && bit)
          return Dnf{spread(arity, {}, 0, any)};
        StateId below = bit ? one : need;
        for (unsigned e = 0; e < arity; ++e)
          d.push_back(spread(arity, {e}, below, any));
        if (need == two && !bit)
          for (unsigned e = 0; e < arity; ++e)
            for (unsigned f = e + 1; f < arity; ++f)
              d.push_back(spread(arity, {e, f}, one, any));
        return d;
      };
      return one_var_automaton(arity, {1, 0, 1, 1, 0, 1}, [&](StateId q, bool bit) {
        switch (q)
          {
          case start:
            {
              Dnf d = at_least(two, bit);
              if (!bit)
                d.push_back(spread(arity, {}, 0, none));
              return d;
            }
          case any: return Dnf{spread(arity, {}, 0, any)};
          case one:
          case two: return at_least(q, bit);
          case none: return Dnf{spread(arity, {}, 0, bit ? sink : none)};
          default: return Dnf{spread(arity, {}, 0, sink)};
          }
      });
    }

    Apt constant_automaton(const Apt& like, bool accept)
    {
      Apt a = Apt::shell(like.arity, like.alphabet, {hf::ordinal(0)}, 0, accept ? 0 : 1);
      a.color = {accept ? 0u : 1u};
      for (Dnf& d : a.delta)
        d = {spread(like.arity, {}, 0, 0)};
      return a;
    }

    // Who wins from each state when the letter at every position is picked
    // freely by \a picker.  Letting Prop pick over-approximates nonemptiness
    // of each state's language; letting Opp pick under-approximates it.
    std::vector<char> free_letter_wins(const Apt& a, Player picker)
    {
      std::size_t n = a.num_states(), nl = a.num_letters();
      Arena g;
      // states, then (state, letter) when Opp picks, then conjunctions
      auto add = [&](Player p, unsigned c) {
        g.owner.push_back(p);
        g.color.push_back(c);
        g.succ.emplace_back();
        return static_cast<std::uint32_t>(g.owner.size() - 1);
      };
      for (StateId q = 0; q < n; ++q)
        add(picker, a.color[q]);
      for (StateId q = 0; q < n; ++q)
        for (LetterId l = 0; l < nl; ++l)
          {
            std::uint32_t from = q;
            if (picker == Player::Opp)
              {
                from = add(Player::Prop, a.max_color);
                g.succ[q].push_back(from);
              }
            for (const Conj& c : a.at(q, l))
              {
                std::uint32_t v = add(Player::Opp, a.max_color);
                g.succ[from].push_back(v);
                for (const Move& m : c)
                  g.succ[v].push_back(m.state);
              }
          }
      ArenaSolution sol = solve_arena(g);
      std::vector<char> prop(n);
      for (StateId q = 0; q < n; ++q)
        prop[q] = sol.winner[q] == Player::Prop;
      return prop;
    }

    // Turns states with empty language into rejecting sinks and states
    // accepting everything into accepting sinks, then drops the
    // conjunctions and moves they make pointless.
    Apt prune_trivial_states(const Apt& a)
    {
      std::size_t n = a.num_states();
      std::vector<char> maybe = free_letter_wins(a, Player::Prop);
      std::vector<char> all = free_letter_wins(a, Player::Opp);
      if (!maybe[a.initial] || all[a.initial])
        return constant_automaton(a, all[a.initial]);
      Apt r = a;
      unsigned odd = a.max_color % 2 == 1 ? a.max_color : a.max_color + 1;
      auto sink = static_cast<StateId>(std::find(maybe.begin(), maybe.end(), 0) - maybe.begin());
      r.max_color = std::max(a.max_color, odd);
      for (StateId q = 0; q < n; ++q)
        {
          if (!maybe[q] || all[q])
            {
              r.color[q] = maybe[q] ? 0 : odd;
              for (LetterId l = 0; l < a.num_letters(); ++l)
                r.at(q, l) = {spread(a.arity, {}, 0, q)};
              continue;
            }
          for (LetterId l = 0; l < a.num_letters(); ++l)
            {
              Dnf out;
              for (const Conj& c : a.at(q, l))
                {
                  bool dead = false;
                  Conj kept;
                  for (const Move& m : c)
                    {
                      dead = dead || !maybe[m.state];
                      if (!all[m.state])
                        kept.push_back(m);
                    }
                  if (dead)
                    continue;
                  if (kept.empty())
                    kept.push_back(c.front());
                  out.push_back(std::move(kept));
                }
              if (out.empty()) // every choice meets an empty state
                out.push_back(spread(a.arity, {}, 0, sink));
              normalize(out);
              r.at(q, l) = std::move(out);
            }
        }
      return reachable_trim(r);
    }

    class Compiler
    {
    public:
      Compiler(const PipelineOptions& options, CompilationTrace* trace)
        : options_(options), trace_(trace)
      {
        if (options_.patterns)
          {
            // both are negations in core form; their bodies get the
            // complementary automata
            VarId next = 1;
            IfFormula sing = to_core_if(if_sing(0, next));
            IfFormula empty = to_core_if(IfFormula::forall(1, IfFormula::subset(0, 1)));
            unsigned k = options_.arity;
            for (auto [f, pos, neg] : {std::tuple{sing, sing_automaton(k), non_singleton_automaton(k)},
                                       std::tuple{empty, empty_automaton(k), nonempty_automaton(k)}})
              {
                library_.emplace(canonical_key(f, {0}), Entry{pos, {}});
                library_.emplace(canonical_key(f.a(), {0}), Entry{neg, {}});
              }
            guard_key_ = canonical_key(sing.a(), {0});
          }
      }

      Compiled run(const IfFormula& f)
      {
        std::vector<VarId> free = free_vars(f);
        std::string key;
        if (options_.patterns && free.size() == 1)
          {
            key = canonical_key(f, free);
            if (auto it = library_.find(key); it != library_.end())
              {
                auto t0 = Clock::now();
                std::size_t n = it->second.automaton.num_states();
                if (trace_)
                  {
                    std::vector<const IfFormula*> nodes;
                    post_order(f, nodes);
                    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
                      trace_->records.push_back({render(*nodes[i]), "library", 0, 0, 0});
                  }
                record(f, "library", n, n, t0);
                return {it->second.automaton, free};
              }
          }
        if (options_.memoize)
          {
            if (key.empty())
              key = canonical_key(f, free);
            if (auto it = cache_.find(key); it != cache_.end())
              {
                replay(f, it->second.records);
                return {it->second.automaton, free};
              }
          }
        std::size_t mark = trace_ ? trace_->records.size() : 0;
        Compiled c = build(f, free);
        if (options_.memoize)
          {
            Entry e{c.automaton, {}};
            if (trace_)
              e.records.assign(trace_->records.begin() + static_cast<std::ptrdiff_t>(mark),
                               trace_->records.end());
            cache_.emplace(std::move(key), std::move(e));
          }
        return c;
      }

      // Relabels a p-variable automaton onto the variables \a to, a superset.
      Apt widen(const Compiled& c, const std::vector<VarId>& to)
      {
        if (c.vars == to)
          return c.automaton;
        std::vector<std::size_t> pos;
        for (VarId v : c.vars)
          pos.push_back(static_cast<std::size_t>(
              std::lower_bound(to.begin(), to.end(), v) - to.begin()));
        const HfSet& gamma = alphabet(to.size());
        std::vector<LetterId> map;
        map.reserve(gamma.size());
        for (const HfSet& l : gamma.elements())
          {
            std::vector<bool> bits = letter_bits(l, to.size());
            std::vector<bool> sub;
            for (std::size_t p : pos)
              sub.push_back(bits[p]);
            map.push_back(c.automaton.letter(bit_letter(sub)));
          }
        return substitute(c.automaton, gamma, map);
      }

    private:
      struct Entry
      {
        Apt automaton;
        std::vector<TraceRecord> records;
      };

      const HfSet& alphabet(std::size_t p)
      {
        auto it = alphabets_.find(p);
        if (it == alphabets_.end())
          it = alphabets_.emplace(p, bit_alphabet(p)).first;
        return it->second;
      }

      void replay(const IfFormula& f, const std::vector<TraceRecord>& cached)
      {
        if (!trace_)
          return;
        std::vector<const IfFormula*> nodes;
        post_order(f, nodes);
        for (std::size_t i = 0; i < nodes.size() && i < cached.size(); ++i)
          {
            TraceRecord r = cached[i];
            r.node = render(*nodes[i]);
            r.construction = "cached";
            r.seconds = 0;
            trace_->records.push_back(std::move(r));
          }
      }

      Apt finish(const Apt& a, const std::string& stage)
      {
        Apt r = options_.reduce ? reduce(a) : reachable_trim(a);
        if (options_.reduce)
          {
            r = normalize_colors(prune_trivial_states(r));
            if (r.num_states() <= kSimulationLimit)
              r = simulation_reduce(r);
            r = reduce(r);
          }
        if (r.num_states() > options_.max_states)
          fail(ErrorKind::TooLarge, stage + " produced " + std::to_string(r.num_states())
                                        + " states, over the cap of "
                                        + std::to_string(options_.max_states));
        return r;
      }

      void record(const IfFormula& f, std::string construction, std::size_t before,
                  std::size_t after, Clock::time_point t0)
      {
        if (trace_)
          trace_->records.push_back({render(f), std::move(construction), before, after, since(t0)});
      }

      Apt atomic(const IfFormula& f, const std::vector<VarId>& vars)
      {
        bool subset = f.kind() == IfFormula::Kind::Subset;
        Apt base = subset ? atomic_subset(options_.arity) : atomic_succ(f.dir(), options_.arity);
        std::size_t ix = static_cast<std::size_t>(
            std::lower_bound(vars.begin(), vars.end(), f.x()) - vars.begin());
        std::size_t iy = static_cast<std::size_t>(
            std::lower_bound(vars.begin(), vars.end(), f.y()) - vars.begin());
        const HfSet& gamma = alphabet(vars.size());
        std::vector<LetterId> map;
        for (const HfSet& l : gamma.elements())
          {
            std::vector<bool> bits = letter_bits(l, vars.size());
            map.push_back(base.letter(
                hf::pair(hf::ordinal(bits[ix] ? 1 : 0), hf::ordinal(bits[iy] ? 1 : 0))));
          }
        return substitute(base, gamma, map);
      }

      Compiled build(const IfFormula& f, const std::vector<VarId>& free)
      {
        using K = IfFormula::Kind;
        auto t0 = Clock::now();
        switch (f.kind())
          {
          case K::Subset:
          case K::Succ:
            {
              Apt a = staged("atomic", [&] { return finish(atomic(f, free), "atomic"); });
              record(f, "atomic", a.num_states(), a.num_states(), t0);
              return {std::move(a), free};
            }
          case K::Or:
            {
              Compiled l = run(f.a());
              Compiled r = run(f.b());
              t0 = Clock::now();
              std::size_t before = 0;
              Apt a = staged("disjoin", [&] {
                Apt d = disjoin(widen(l, free), widen(r, free));
                before = d.num_states();
                return finish(d, "disjoin");
              });
              record(f, "disjoin", before, a.num_states(), t0);
              return {std::move(a), free};
            }
          case K::Not:
            {
              Compiled c = run(f.a());
              t0 = Clock::now();
              std::size_t before = c.automaton.num_states();
              Apt a = staged("complement", [&] {
                Apt n = options_.dualization == Dualization::Exact
                            ? complement(c.automaton)
                            : complement_minimized(c.automaton);
                return finish(n, "complement");
              });
              record(f, "complement", before, a.num_states(), t0);
              return {std::move(a), free};
            }
          case K::Exists:
            {
              if (options_.patterns)
                if (auto p = point_quantifier(f, free))
                  return std::move(*p);
              Compiled c = run(f.a());
              t0 = Clock::now();
              std::size_t before = c.automaton.num_states();
              if (!std::binary_search(c.vars.begin(), c.vars.end(), f.x()))
                {
                  // X does not occur free in the body; the domain of sets is
                  // never empty, so the quantifier is vacuous.
                  record(f, "vacuous", before, before, t0);
                  return {std::move(c.automaton), free};
                }
              if (c.vars.back() != f.x())
                throw std::logic_error("bound variable is not the innermost coordinate");
              Apt a = staged("simulate+project", [&] {
                Apt n = is_nondeterministic(c.automaton) ? c.automaton
                                                         : nd(c.automaton, options_.max_states);
                n = finish(n, "simulate");
                return finish(project(n, hf::ordinal(2)), "project");
              });
              record(f, "simulate+project", before, a.num_states(), t0);
              return {std::move(a), free};
            }
          case K::And:
          case K::Implies:
          case K::Forall:
            break;
          }
        fail(ErrorKind::InvalidAutomaton, "compile expects a core formula, got " + render(f));
      }

      // The conjunct ~R of (exists X)(Sing(X) & ~R), which in core form
      // reads (exists X) ~(S | R) with S the body of the negated guard.
      const IfFormula* guarded_rest(const IfFormula& f)
      {
        const IfFormula& body = f.a();
        if (body.kind() != IfFormula::Kind::Not || body.a().kind() != IfFormula::Kind::Or)
          return nullptr;
        const IfFormula& o = body.a();
        auto is_guard = [&](const IfFormula& g) {
          std::vector<VarId> fv = free_vars(g);
          return fv.size() == 1 && fv[0] == f.x() && canonical_key(g, fv) == guard_key_;
        };
        if (is_guard(o.a()))
          return &o.b();
        if (is_guard(o.b()))
          return &o.a();
        return nullptr;
      }

      std::optional<Compiled> point_quantifier(const IfFormula& f, const std::vector<VarId>& free)
      {
        const IfFormula* rest = guarded_rest(f);
        if (!rest)
          return std::nullopt;
        const IfFormula& o = f.a().a();
        bool guard_first = rest == &o.b();
        const IfFormula& guard = guard_first ? o.a() : o.b();
        auto skip = [&](const IfFormula& g) {
          if (!trace_)
            return;
          std::vector<const IfFormula*> nodes;
          post_order(g, nodes);
          for (const IfFormula* n : nodes)
            trace_->records.push_back({render(*n), "guard", 0, 0, 0});
        };
        if (guard_first)
          skip(guard);
        Compiled r = run(*rest);
        if (!guard_first)
          skip(guard);
        auto t0 = Clock::now();
        std::vector<VarId> vars = free_vars(f.a());
        if (vars.back() != f.x())
          throw std::logic_error("bound variable is not the innermost coordinate");
        std::size_t before = r.automaton.num_states();
        record(o, "guard", before, before, t0);
        Apt neg = staged("complement", [&] {
          Apt w = widen(r, vars);
          return finish(options_.dualization == Dualization::Exact ? complement(w)
                                                                   : complement_minimized(w),
                        "complement");
        });
        record(f.a(), "complement", before, neg.num_states(), t0);
        t0 = Clock::now();
        Apt a = staged("point-project", [&] {
          return finish(project_point(neg, options_.max_states), "point-project");
        });
        record(f, "point-project", neg.num_states(), a.num_states(), t0);
        return Compiled{std::move(a), free};
      }

      template <class F>
      Apt staged(const char* stage, F&& fn)
      {
        try
          {
            return fn();
          }
        catch (const Error& e)
          {
            throw e.with_stage(stage);
          }
      }

      const PipelineOptions& options_;
      CompilationTrace* trace_;
      std::unordered_map<std::string, Entry> cache_;
      std::unordered_map<std::string, Entry> library_;
      std::map<std::size_t, HfSet> alphabets_;
      std::string guard_key_;
    };

    template <class F>
    auto in_stage(const char* stage, F&& fn)
    {
      try
        {
          return fn();
        }
      catch (const Error& e)
        {
          throw e.with_stage(stage);
        }
    }

  }

  Apt compile(const IfFormula& core, std::size_t p, const PipelineOptions& options,
              CompilationTrace* trace)
  {
    return in_stage("compile", [&] {
      if (!core.is_core())
        fail(ErrorKind::InvalidAutomaton, "compile expects a core formula");
      std::vector<VarId> all(p);
      for (std::size_t i = 0; i < p; ++i)
        all[i] = static_cast<VarId>(i);
      std::vector<VarId> free = free_vars(core);
      if (!free.empty() && free.back() >= p)
        fail(ErrorKind::UnboundVariable,
             "variable X" + std::to_string(free.back()) + " is outside 0.." + std::to_string(p));
      Compiler c(options, trace);
      Compiled r = c.run(core);
      return c.widen(r, all);
    });
  }

  Apt compile_sentence(const Formula& sentence, const PipelineOptions& options,
                       CompilationTrace* trace)
  {
    Formula rel = in_stage("relational", [&] { return to_relational(sentence, options.arity); });
    IfTranslation tr =
        in_stage("individual-free", [&] { return to_individual_free(rel, options.arity); });
    if (tr.free_count != 0)
      throw Error(ErrorKind::UnboundVariable,
                  "sentence has free set variable " + tr.names.front())
          .with_stage("decide");
    IfFormula core = in_stage("core", [&] { return to_core_if(tr.formula); });
    return compile(core, 0, options, trace);
  }

  Verdict decide_automaton(const Apt& a)
  {
    auto t0 = Clock::now();
    Verdict v;
    v.automaton = a;
    v.game = in_stage("game", [&] { return acceptance_game_alpha1(a); });
    Vertex start{Player::Prop, 0};
    Decision d = in_stage("solve", [&] { return solve(v.game, start); });
    if (!check_certificate(v.game, d.winner, d.strategy, start))
      throw std::logic_error("solver returned a strategy that fails its own check");
    v.winner = d.winner;
    v.truth = d.winner == Player::Prop;
    v.certificate = std::move(d.strategy);
    v.peak_states = a.num_states();
    v.seconds = since(t0);
    return v;
  }

  Verdict decide(const Formula& sentence, const PipelineOptions& options)
  {
    auto t0 = Clock::now();
    CompilationTrace trace;
    Apt a = compile_sentence(sentence, options, &trace);
    Verdict v = decide_automaton(a);
    v.trace = std::move(trace);
    v.peak_states = std::max(v.peak_states, v.trace.peak_states());
    v.seconds = since(t0);
    return v;
  }

  Verdict decide(std::string_view sentence, const PipelineOptions& options)
  {
    Formula f = in_stage("parse", [&] { return parse_formula(sentence, options.arity, true); });
    return decide(f, options);
  }

}
