#include <msotree/games/parity_game.hpp>
#include <msotree/error.hpp>
#include <msotree/util/graph.hpp>

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace msotree
{

  std::string_view to_string(Player p) { return p == Player::Prop ? "prop" : "opp"; }

  namespace
  {
    Player parity_owner(unsigned c) { return c % 2 == 0 ? Player::Prop : Player::Opp; }

    using Mask = std::vector<char>;

    class Zielonka
    {
    public:
      explicit Zielonka(const Arena& g) : g_(g), pred_(g.size())
      {
        for (std::uint32_t u = 0; u < g.size(); ++u)
          for (std::uint32_t v : g.succ[u])
            pred_[v].push_back(u);
        winner_.assign(g.size(), Player::Prop);
        choice_.assign(g.size(), kNoChoice);
      }

      ArenaSolution run()
      {
        Mask all(g_.size(), 1);
        solve(all);
        ArenaSolution s{winner_, choice_};
        for (std::uint32_t v = 0; v < g_.size(); ++v)
          if (g_.owner[v] != s.winner[v])
            s.choice[v] = kNoChoice;
        return s;
      }

    private:
      // Fills winner_ on V and choice_ for each vertex whose owner wins it.
      void solve(const Mask& V)
      {
        std::size_t n = g_.size();
        unsigned m = ~0u;
        for (std::size_t v = 0; v < n; ++v)
          if (V[v])
            m = std::min(m, g_.color[v]);
        if (m == ~0u)
          return;
        Player i = parity_owner(m);
        Mask target(n, 0);
        for (std::size_t v = 0; v < n; ++v)
          target[v] = V[v] && g_.color[v] == m;
        Mask a = attractor(V, target, i);
        Mask rest = minus(V, a);
        solve(rest);
        bool opponent_wins_somewhere = false;
        for (std::size_t v = 0; v < n; ++v)
          if (rest[v] && winner_[v] == other(i))
            opponent_wins_somewhere = true;
        if (!opponent_wins_somewhere)
          {
            for (std::size_t v = 0; v < n; ++v)
              {
                if (!V[v])
                  continue;
                winner_[v] = i;
                if (target[v] && g_.owner[v] == i)
                  choice_[v] = first_edge_into(static_cast<std::uint32_t>(v), V);
              }
            return;
          }
        Mask lost(n, 0);
        for (std::size_t v = 0; v < n; ++v)
          lost[v] = rest[v] && winner_[v] == other(i);
        Mask b = attractor(V, lost, other(i));
        for (std::size_t v = 0; v < n; ++v)
          if (b[v])
            winner_[v] = other(i);
        solve(minus(V, b));
      }

      std::uint32_t first_edge_into(std::uint32_t u, const Mask& set) const
      {
        const auto& s = g_.succ[u];
        for (std::uint32_t e = 0; e < s.size(); ++e)
          if (set[s[e]])
            return e;
        return kNoChoice;
      }

      // Attractor of \a target for player p inside V; records p's choices on
      // the vertices it adds.
      Mask attractor(const Mask& V, const Mask& target, Player p)
      {
        std::size_t n = g_.size();
        Mask attr = target;
        std::vector<std::uint32_t> count(n, 0);
        std::deque<std::uint32_t> queue;
        for (std::uint32_t v = 0; v < n; ++v)
          {
            if (!V[v])
              continue;
            for (std::uint32_t w : g_.succ[v])
              count[v] += V[w] ? 1 : 0;
            if (target[v])
              queue.push_back(v);
          }
        while (!queue.empty())
          {
            std::uint32_t v = queue.front();
            queue.pop_front();
            for (std::uint32_t u : pred_[v])
              {
                if (!V[u] || attr[u])
                  continue;
                if (g_.owner[u] == p)
                  {
                    choice_[u] = first_edge_into(u, attr);
                    attr[u] = 1;
                    queue.push_back(u);
                  }
                else if (--count[u] == 0)
                  {
                    attr[u] = 1;
                    queue.push_back(u);
                  }
              }
          }
        return attr;
      }

      static Mask minus(const Mask& a, const Mask& b)
      {
        Mask r(a.size());
        for (std::size_t v = 0; v < a.size(); ++v)
          r[v] = a[v] && !b[v];
        return r;
      }

      const Arena& g_;
      std::vector<std::vector<std::uint32_t>> pred_;
      std::vector<Player> winner_;
      std::vector<std::uint32_t> choice_;
    };
  }

  ArenaSolution solve_arena(const Arena& g)
  {
    return Zielonka(g).run();
  }

  Player brute_force_winner(const Arena& g, std::uint32_t start, std::size_t cap)
  {
    std::size_t n = g.size();
    std::vector<std::uint32_t> mine[2];
    for (std::uint32_t v = 0; v < n; ++v)
      mine[static_cast<int>(g.owner[v])].push_back(v);
    double product = 1;
    for (std::uint32_t v = 0; v < n; ++v)
      product *= static_cast<double>(std::max<std::size_t>(g.succ[v].size(), 1));
    if (product > static_cast<double>(cap))
      fail(ErrorKind::TooLarge, "brute force would enumerate more than " + std::to_string(cap)
                                    + " strategy pairs");
    std::vector<std::uint32_t> pick(n, 0);
    auto advance = [&](const std::vector<std::uint32_t>& vs) {
      for (std::uint32_t v : vs)
        {
          if (++pick[v] < g.succ[v].size())
            return true;
          pick[v] = 0;
        }
      return false;
    };
    std::vector<std::int64_t> seen(n);
    auto play_even = [&]() {
      std::fill(seen.begin(), seen.end(), -1);
      std::vector<std::uint32_t> path;
      std::uint32_t v = start;
      while (seen[v] < 0)
        {
          seen[v] = static_cast<std::int64_t>(path.size());
          path.push_back(v);
          v = g.succ[v][pick[v]];
        }
      unsigned m = ~0u;
      for (std::size_t k = static_cast<std::size_t>(seen[v]); k < path.size(); ++k)
        m = std::min(m, g.color[path[k]]);
      return m % 2 == 0;
    };
    auto& props = mine[0];
    auto& opps = mine[1];
    for (std::uint32_t v : props)
      pick[v] = 0;
    do
      {
        for (std::uint32_t v : opps)
          pick[v] = 0;
        bool beats_all = true;
        do
          {
            if (!play_even())
              {
                beats_all = false;
                break;
              }
          }
        while (advance(opps));
        if (beats_all)
          return Player::Prop;
      }
    while (advance(props));
    return Player::Opp;
  }

  bool check_arena_certificate(const Arena& g, Player winner, const std::vector<std::uint32_t>& choice,
                               std::uint32_t start)
  {
    std::size_t n = g.size();
    if (start >= n)
      fail(ErrorKind::UnknownVertex, "start vertex out of range");
    std::vector<std::vector<std::uint32_t>> succ(n);
    Mask reach(n, 0);
    std::vector<std::uint32_t> stack{start};
    reach[start] = 1;
    while (!stack.empty())
      {
        std::uint32_t v = stack.back();
        stack.pop_back();
        if (g.owner[v] == winner)
          {
            std::uint32_t c = v < choice.size() ? choice[v] : kNoChoice;
            if (c == kNoChoice)
              fail(ErrorKind::IncompleteStrategy,
                   "no choice at reachable vertex " + std::to_string(v));
            if (c >= g.succ[v].size())
              fail(ErrorKind::IllegalMove, "choice outside the edge set at vertex " + std::to_string(v));
            succ[v] = {g.succ[v][c]};
          }
        else
          succ[v] = g.succ[v];
        for (std::uint32_t w : succ[v])
          if (!reach[w])
            {
              reach[w] = 1;
              stack.push_back(w);
            }
      }
    unsigned top = 0;
    for (std::uint32_t v = 0; v < n; ++v)
      if (reach[v])
        top = std::max(top, g.color[v]);
    for (unsigned c = 0; c <= top; ++c)
      {
        if (parity_owner(c) == winner)
          continue;
        if (cycle_with_least_color(succ, reach, g.color, c))
          return false;
      }
    return true;
  }

  // ------------------------------------------------------------ reduced games

  std::vector<std::string> validate(const ParityGame& g)
  {
    std::vector<std::string> v;
    if (g.prop.empty())
      v.push_back("no prop vertices");
    if (g.opp.empty())
      v.push_back("no opp vertices");
    HfSet ps = HfSet::of(g.prop), os = HfSet::of(g.opp);
    if (ps.size() != g.prop.size() || os.size() != g.opp.size())
      v.push_back("duplicate vertex names");
    if (!hf::set_intersection(ps, os).empty())
      v.push_back("prop and opp vertices are not disjoint");
    if (g.e_prop.size() != g.prop.size() || g.color_prop.size() != g.prop.size()
        || g.e_opp.size() != g.opp.size() || g.color_opp.size() != g.opp.size())
      {
        v.push_back("edge or color tables have the wrong size");
        return v;
      }
    for (std::size_t p = 0; p < g.prop.size(); ++p)
      {
        if (g.e_prop[p].empty())
          v.push_back("prop vertex " + render(g.prop[p], RenderStyle::pretty()) + " has no move");
        for (auto o : g.e_prop[p])
          if (o >= g.opp.size())
            v.push_back("prop edge out of range");
        if (g.color_prop[p] > g.max_color)
          v.push_back("color exceeds max_color");
      }
    for (std::size_t o = 0; o < g.opp.size(); ++o)
      {
        if (g.e_opp[o].empty())
          v.push_back("opp vertex " + render(g.opp[o], RenderStyle::pretty()) + " has no move");
        for (auto e : g.e_opp[o])
          if (e.target >= g.prop.size())
            v.push_back("opp edge out of range");
        if (g.color_opp[o] > g.max_color)
          v.push_back("color exceeds max_color");
      }
    return v;
  }

  void require_valid(const ParityGame& g)
  {
    auto v = validate(g);
    if (v.empty())
      return;
    std::string msg;
    for (const auto& s : v)
      msg += (msg.empty() ? "" : "; ") + s;
    fail(ErrorKind::Format, "invalid game: " + msg);
  }

  void normalize(ParityGame& g)
  {
    for (auto& es : g.e_prop)
      {
        std::sort(es.begin(), es.end(), [&](auto x, auto y) { return g.opp[x] < g.opp[y]; });
        es.erase(std::unique(es.begin(), es.end()), es.end());
      }
    auto key = [&](const OppEdge& e) { return hf::pair(hf::ordinal(e.dir), g.prop[e.target]); };
    for (auto& es : g.e_opp)
      {
        std::sort(es.begin(), es.end(), [&](const OppEdge& x, const OppEdge& y) { return key(x) < key(y); });
        es.erase(std::unique(es.begin(), es.end()), es.end());
      }
  }

  Arena to_arena(const ParityGame& g)
  {
    auto np = static_cast<std::uint32_t>(g.prop.size());
    Arena a;
    for (std::size_t p = 0; p < g.prop.size(); ++p)
      {
        a.owner.push_back(Player::Prop);
        std::vector<std::uint32_t> s;
        for (auto o : g.e_prop[p])
          s.push_back(np + o);
        a.succ.push_back(std::move(s));
        a.color.push_back(g.color_prop[p]);
      }
    for (std::size_t o = 0; o < g.opp.size(); ++o)
      {
        a.owner.push_back(Player::Opp);
        std::vector<std::uint32_t> s;
        for (auto e : g.e_opp[o])
          s.push_back(e.target);
        a.succ.push_back(std::move(s));
        a.color.push_back(g.color_opp[o]);
      }
    return a;
  }

  namespace
  {
    std::uint32_t arena_id(const ParityGame& g, Vertex v)
    {
      std::size_t limit = v.side == Player::Prop ? g.prop.size() : g.opp.size();
      if (v.index >= limit)
        fail(ErrorKind::UnknownVertex, "vertex index out of range");
      return v.side == Player::Prop ? v.index : static_cast<std::uint32_t>(g.prop.size()) + v.index;
    }

    Strategy empty_strategy(const ParityGame& g, Player owner)
    {
      Strategy s;
      s.owner = owner;
      s.at_prop.assign(g.prop.size(), std::nullopt);
      s.at_opp.assign(g.opp.size(), std::nullopt);
      return s;
    }
  }

  SolveResult solve(const ParityGame& g)
  {
    require_valid(g);
    ArenaSolution s = solve_arena(to_arena(g));
    std::size_t np = g.prop.size();
    SolveResult r;
    r.prop_strategy = empty_strategy(g, Player::Prop);
    r.opp_strategy = empty_strategy(g, Player::Opp);
    for (std::size_t p = 0; p < np; ++p)
      {
        r.prop_winner.push_back(s.winner[p]);
        if (s.choice[p] != kNoChoice)
          r.prop_strategy.at_prop[p] = g.e_prop[p][s.choice[p]];
      }
    for (std::size_t o = 0; o < g.opp.size(); ++o)
      {
        r.opp_winner.push_back(s.winner[np + o]);
        if (s.choice[np + o] != kNoChoice)
          r.opp_strategy.at_opp[o] = g.e_opp[o][s.choice[np + o]];
      }
    return r;
  }

  Decision solve(const ParityGame& g, Vertex start)
  {
    std::uint32_t id = arena_id(g, start);
    SolveResult r = solve(g);
    Player w = id < g.prop.size() ? r.prop_winner[id] : r.opp_winner[id - g.prop.size()];
    return Decision{w, w == Player::Prop ? r.prop_strategy : r.opp_strategy};
  }

  Player brute_force_solve(const ParityGame& g, Vertex start, std::size_t cap)
  {
    require_valid(g);
    return brute_force_winner(to_arena(g), arena_id(g, start), cap);
  }

  bool check_certificate(const ParityGame& g, Player winner, const Strategy& s, Vertex start)
  {
    require_valid(g);
    if (s.owner != winner)
      fail(ErrorKind::IncompleteStrategy, "strategy belongs to the other player");
    std::size_t np = g.prop.size();
    std::vector<std::uint32_t> choice(np + g.opp.size(), kNoChoice);
    if (winner == Player::Prop)
      for (std::size_t p = 0; p < np && p < s.at_prop.size(); ++p)
        {
          if (!s.at_prop[p])
            continue;
          auto it = std::find(g.e_prop[p].begin(), g.e_prop[p].end(), *s.at_prop[p]);
          if (it == g.e_prop[p].end())
            fail(ErrorKind::IllegalMove, "prop vertex " + render(g.prop[p], RenderStyle::pretty())
                                             + " moves outside its edge set");
          choice[p] = static_cast<std::uint32_t>(it - g.e_prop[p].begin());
        }
    else
      for (std::size_t o = 0; o < g.opp.size() && o < s.at_opp.size(); ++o)
        {
          if (!s.at_opp[o])
            continue;
          auto it = std::find(g.e_opp[o].begin(), g.e_opp[o].end(), *s.at_opp[o]);
          if (it == g.e_opp[o].end())
            fail(ErrorKind::IllegalMove, "opp vertex " + render(g.opp[o], RenderStyle::pretty())
                                             + " moves outside its edge set");
          choice[np + o] = static_cast<std::uint32_t>(it - g.e_opp[o].begin());
        }
    return check_arena_certificate(to_arena(g), winner, choice, arena_id(g, start));
  }

  ParityGame acceptance_game_alpha1(const Apt& a)
  {
    if (a.num_letters() != 1)
      fail(ErrorKind::AlphabetNotSingleton,
           "acceptance games are built for one-letter alphabets, got "
               + std::to_string(a.num_letters()) + " letters");
    require_valid(a);
    ParityGame g;
    g.max_color = a.max_color;
    std::vector<std::int64_t> prop_of(a.num_states(), -1);
    std::vector<StateId> order{a.initial};
    prop_of[a.initial] = 0;
    std::vector<std::pair<StateId, std::size_t>> opp_src; // (state, conj index)
    for (std::size_t i = 0; i < order.size(); ++i)
      {
        StateId q = order[i];
        for (const Conj& c : a.at(q, 0))
          for (const Move& m : c)
            if (prop_of[m.state] < 0)
              {
                prop_of[m.state] = static_cast<std::int64_t>(order.size());
                order.push_back(m.state);
              }
      }
    for (StateId q : order)
      {
        g.prop.push_back(a.states[q]);
        g.color_prop.push_back(a.color[q]);
      }
    g.e_prop.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
      {
        StateId q = order[i];
        const Dnf& d = a.at(q, 0);
        for (std::size_t k = 0; k < d.size(); ++k)
          {
            std::vector<HfSet> moves;
            std::vector<OppEdge> edges;
            for (const Move& m : d[k])
              {
                moves.push_back(hf::pair(hf::ordinal(m.dir), a.states[m.state]));
                edges.push_back(OppEdge{m.dir, static_cast<std::uint32_t>(prop_of[m.state])});
              }
            g.e_prop[i].push_back(static_cast<std::uint32_t>(g.opp.size()));
            g.opp.push_back(hf::pair(a.states[q], HfSet::of(std::move(moves))));
            g.e_opp.push_back(std::move(edges));
            g.color_opp.push_back(a.max_color);
          }
      }
    if (!hf::set_intersection(HfSet::of(g.prop), HfSet::of(g.opp)).empty())
      fail(ErrorKind::InvalidAutomaton, "state names clash with acceptance game positions");
    normalize(g);
    return g;
  }

  // --------------------------------------------------------- serialization

  namespace
  {
    std::string pretty(const HfSet& s) { return render(s, RenderStyle::pretty()); }

    [[noreturn]] void bad(std::size_t line, const std::string& msg)
    {
      fail(ErrorKind::Format, "game line " + std::to_string(line) + ": " + msg);
    }

    struct Lines
    {
      std::istringstream in;
      std::string line;
      std::size_t lineno = 0;

      explicit Lines(std::string_view text) : in(std::string(text)) {}

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

      HfSet hf(std::string_view s)
      {
        try
          {
            return parse_hf(s);
          }
        catch (const Error& e)
          {
            bad(lineno, e.what());
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
        bad(lineno, "bad number '" + s + "'");
      }
    };

    struct Names
    {
      std::unordered_map<HfSet, std::uint32_t> prop, opp;

      explicit Names(const ParityGame& g)
      {
        for (std::uint32_t i = 0; i < g.prop.size(); ++i)
          prop.emplace(g.prop[i], i);
        for (std::uint32_t i = 0; i < g.opp.size(); ++i)
          opp.emplace(g.opp[i], i);
      }
    };
  }

  Vertex find_vertex(const ParityGame& g, const HfSet& name)
  {
    for (std::uint32_t i = 0; i < g.prop.size(); ++i)
      if (g.prop[i] == name)
        return Vertex{Player::Prop, i};
    for (std::uint32_t i = 0; i < g.opp.size(); ++i)
      if (g.opp[i] == name)
        return Vertex{Player::Opp, i};
    fail(ErrorKind::UnknownVertex, pretty(name) + " is not a vertex");
  }

  std::string serialize(const ParityGame& g)
  {
    std::ostringstream out;
    out << "game 1\n";
    out << "max_color " << g.max_color << "\n";
    out << "prop " << pretty(HfSet::of(g.prop)) << "\n";
    out << "opp " << pretty(HfSet::of(g.opp)) << "\n";
    std::vector<std::uint32_t> pi(g.prop.size()), oi(g.opp.size());
    for (std::uint32_t i = 0; i < pi.size(); ++i)
      pi[i] = i;
    for (std::uint32_t i = 0; i < oi.size(); ++i)
      oi[i] = i;
    std::sort(pi.begin(), pi.end(), [&](auto x, auto y) { return g.prop[x] < g.prop[y]; });
    std::sort(oi.begin(), oi.end(), [&](auto x, auto y) { return g.opp[x] < g.opp[y]; });
    for (auto p : pi)
      {
        std::vector<HfSet> ts;
        for (auto o : g.e_prop[p])
          ts.push_back(g.opp[o]);
        out << "move " << pretty(g.prop[p]) << " -> " << pretty(HfSet::of(ts)) << "\n";
      }
    for (auto o : oi)
      {
        std::vector<HfSet> ts;
        for (auto e : g.e_opp[o])
          ts.push_back(hf::pair(hf::ordinal(e.dir), g.prop[e.target]));
        out << "move " << pretty(g.opp[o]) << " -> " << pretty(HfSet::of(ts)) << "\n";
      }
    for (auto p : pi)
      out << "color " << pretty(g.prop[p]) << " " << g.color_prop[p] << "\n";
    for (auto o : oi)
      out << "color " << pretty(g.opp[o]) << " " << g.color_opp[o] << "\n";
    return out.str();
  }

  ParityGame parse_game(std::string_view text)
  {
    Lines in(text);
    auto field = [&](const std::string& key) {
      if (!in.next() || in.line.compare(0, key.size() + 1, key + " ") != 0)
        bad(in.lineno, "expected '" + key + "'");
      return in.line.substr(key.size() + 1);
    };
    if (!in.next() || in.line != "game 1")
      bad(in.lineno, "missing 'game 1' header");
    ParityGame g;
    g.max_color = in.number(field("max_color"));
    HfSet ps = in.hf(field("prop")), os = in.hf(field("opp"));
    g.prop.assign(ps.elements().begin(), ps.elements().end());
    g.opp.assign(os.elements().begin(), os.elements().end());
    g.e_prop.resize(g.prop.size());
    g.e_opp.resize(g.opp.size());
    g.color_prop.assign(g.prop.size(), 0);
    g.color_opp.assign(g.opp.size(), 0);
    Names names(g);
    std::vector<char> has_color(g.prop.size() + g.opp.size(), 0);
    while (in.next())
      {
        if (in.line.rfind("move ", 0) == 0)
          {
            auto arrow = in.line.find("->");
            if (arrow == std::string::npos)
              bad(in.lineno, "expected '->'");
            HfSet from = in.hf(std::string_view(in.line).substr(5, arrow - 5));
            HfSet to = in.hf(std::string_view(in.line).substr(arrow + 2));
            if (auto p = names.prop.find(from); p != names.prop.end())
              {
                for (const HfSet& t : to.elements())
                  {
                    auto o = names.opp.find(t);
                    if (o == names.opp.end())
                      bad(in.lineno, pretty(t) + " is not an opp vertex");
                    g.e_prop[p->second].push_back(o->second);
                  }
              }
            else if (auto o = names.opp.find(from); o != names.opp.end())
              {
                for (const HfSet& t : to.elements())
                  {
                    auto dp = hf::as_pair(t);
                    std::optional<std::size_t> d = dp ? dp->first.ordinal_value() : std::nullopt;
                    auto p2 = dp ? names.prop.find(dp->second) : names.prop.end();
                    if (!d || p2 == names.prop.end())
                      bad(in.lineno, pretty(t) + " is not a (direction, prop vertex) pair");
                    g.e_opp[o->second].push_back(OppEdge{static_cast<std::uint32_t>(*d), p2->second});
                  }
              }
            else
              bad(in.lineno, pretty(from) + " is not a vertex");
            continue;
          }
        if (in.line.rfind("color ", 0) == 0)
          {
            std::size_t pos = 6;
            HfSet v;
            try
              {
                v = parse_hf_prefix(in.line, pos);
              }
            catch (const Error& e)
              {
                bad(in.lineno, e.what());
              }
            std::string rest = in.line.substr(pos);
            rest.erase(0, rest.find_first_not_of(' '));
            unsigned c = in.number(rest);
            if (auto p = names.prop.find(v); p != names.prop.end())
              {
                g.color_prop[p->second] = c;
                has_color[p->second] = 1;
              }
            else if (auto o = names.opp.find(v); o != names.opp.end())
              {
                g.color_opp[o->second] = c;
                has_color[g.prop.size() + o->second] = 1;
              }
            else
              bad(in.lineno, pretty(v) + " is not a vertex");
            continue;
          }
        bad(in.lineno, "expected a move or color record");
      }
    if (std::find(has_color.begin(), has_color.end(), 0) != has_color.end())
      bad(in.lineno, "some vertex has no color");
    normalize(g);
    auto v = validate(g);
    if (!v.empty())
      bad(in.lineno, v.front());
    return g;
  }

  std::string serialize(const ParityGame& g, const Strategy& s)
  {
    std::vector<std::pair<HfSet, HfSet>> rows;
    if (s.owner == Player::Prop)
      {
        for (std::size_t p = 0; p < g.prop.size() && p < s.at_prop.size(); ++p)
          if (s.at_prop[p])
            rows.emplace_back(g.prop[p], g.opp[*s.at_prop[p]]);
      }
    else
      for (std::size_t o = 0; o < g.opp.size() && o < s.at_opp.size(); ++o)
        if (s.at_opp[o])
          rows.emplace_back(g.opp[o], hf::pair(hf::ordinal(s.at_opp[o]->dir), g.prop[s.at_opp[o]->target]));
    std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::ostringstream out;
    out << "strategy " << to_string(s.owner) << "\n";
    for (const auto& [v, c] : rows)
      out << pretty(v) << " -> " << pretty(c) << "\n";
    return out.str();
  }

  Strategy parse_strategy(std::string_view text, const ParityGame& g)
  {
    Lines in(text);
    if (!in.next() || (in.line != "strategy prop" && in.line != "strategy opp"))
      bad(in.lineno, "missing 'strategy prop|opp' header");
    Strategy s = empty_strategy(g, in.line == "strategy prop" ? Player::Prop : Player::Opp);
    Names names(g);
    while (in.next())
      {
        auto arrow = in.line.find("->");
        if (arrow == std::string::npos)
          bad(in.lineno, "expected '->'");
        HfSet from = in.hf(std::string_view(in.line).substr(0, arrow));
        HfSet to = in.hf(std::string_view(in.line).substr(arrow + 2));
        if (s.owner == Player::Prop)
          {
            auto p = names.prop.find(from);
            if (p == names.prop.end())
              fail(ErrorKind::UnknownVertex, pretty(from) + " is not a prop vertex");
            auto o = names.opp.find(to);
            if (o == names.opp.end())
              fail(ErrorKind::IllegalMove, pretty(to) + " is not an opp vertex");
            s.at_prop[p->second] = o->second;
          }
        else
          {
            auto o = names.opp.find(from);
            if (o == names.opp.end())
              fail(ErrorKind::UnknownVertex, pretty(from) + " is not an opp vertex");
            auto dp = hf::as_pair(to);
            std::optional<std::size_t> d = dp ? dp->first.ordinal_value() : std::nullopt;
            auto p = dp ? names.prop.find(dp->second) : names.prop.end();
            if (!d || p == names.prop.end())
              fail(ErrorKind::IllegalMove, pretty(to) + " is not a (direction, prop vertex) pair");
            s.at_opp[o->second] = OppEdge{static_cast<std::uint32_t>(*d), p->second};
          }
      }
    return s;
  }

}
