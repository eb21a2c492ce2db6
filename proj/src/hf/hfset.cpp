#include <msotree/hf/hfset.hpp>
#include <msotree/error.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <unordered_set>

namespace msotree
{

  namespace detail
  {
    struct HfNode
    {
      std::vector<HfSet> elems;
      std::size_t hash = 0;
      std::uint32_t depth = 0;
      std::int64_t ordinal = -1;
    };
  }

  namespace
  {
    using detail::HfNode;

    std::size_t mix(std::size_t h, std::size_t v)
    {
      // splitmix-style finalizer, stable across runs
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h ^= h >> 31;
      h *= 0xbf58476d1ce4e5b9ULL;
      h ^= h >> 27;
      return h;
    }

    struct NodeHash
    {
      std::size_t operator()(const HfNode* n) const noexcept { return n->hash; }
    };

    struct NodeEq
    {
      bool operator()(const HfNode* a, const HfNode* b) const noexcept
      {
        return a->elems == b->elems;
      }
    };

    struct Table
    {
      std::mutex mutex;
      std::deque<HfNode> storage;
      std::unordered_set<const HfNode*, NodeHash, NodeEq> index;
      const HfNode* empty = nullptr;

      Table()
      {
        storage.emplace_back();
        HfNode& e = storage.back();
        e.hash = mix(0, 0);
        e.ordinal = 0;
        empty = &e;
        index.insert(empty);
      }
    };

    Table& table()
    {
      static Table* t = new Table();
      return *t;
    }

    bool less(const HfSet& a, const HfSet& b) { return canonical_order(a, b) < 0; }
  }

  HfSet intern_sorted(std::vector<HfSet>&& sorted)
  {
    HfNode probe;
    probe.elems = std::move(sorted);
    std::size_t h = mix(0, probe.elems.size());
    std::uint32_t depth = 0;
    bool ordinal = true;
    for (std::size_t i = 0; i < probe.elems.size(); ++i)
      {
        const HfNode* e = probe.elems[i].node_;
        h = mix(h, e->hash);
        depth = std::max(depth, e->depth + 1);
        if (e->ordinal != static_cast<std::int64_t>(i))
          ordinal = false;
      }
    probe.hash = h;
    probe.depth = depth;
    probe.ordinal = ordinal ? static_cast<std::int64_t>(probe.elems.size()) : -1;

    Table& t = table();
    std::lock_guard lock(t.mutex);
    auto it = t.index.find(&probe);
    if (it != t.index.end())
      return HfSet(*it);
    t.storage.push_back(std::move(probe));
    const HfNode* node = &t.storage.back();
    t.index.insert(node);
    return HfSet(node);
  }

  HfSet::HfSet() noexcept : node_(table().empty) {}

  HfSet HfSet::of(std::vector<HfSet> elements)
  {
    std::sort(elements.begin(), elements.end(), less);
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    return intern_sorted(std::move(elements));
  }

  HfSet HfSet::of(std::initializer_list<HfSet> elements)
  {
    return of(std::vector<HfSet>(elements));
  }

  std::span<const HfSet> HfSet::elements() const noexcept { return node_->elems; }
  std::size_t HfSet::size() const noexcept { return node_->elems.size(); }
  std::size_t HfSet::hash() const noexcept { return node_->hash; }
  std::uint32_t HfSet::depth() const noexcept { return node_->depth; }

  std::optional<std::size_t> HfSet::ordinal_value() const noexcept
  {
    if (node_->ordinal < 0)
      return std::nullopt;
    return static_cast<std::size_t>(node_->ordinal);
  }

  std::optional<std::size_t> HfSet::index_of(const HfSet& x) const
  {
    const auto& v = node_->elems;
    auto it = std::lower_bound(v.begin(), v.end(), x, less);
    if (it == v.end() || *it != x)
      return std::nullopt;
    return static_cast<std::size_t>(it - v.begin());
  }

  bool HfSet::contains(const HfSet& x) const { return index_of(x).has_value(); }

  std::strong_ordering canonical_order(const HfSet& a, const HfSet& b)
  {
    if (a == b)
      return std::strong_ordering::equal;
    auto ea = a.elements();
    auto eb = b.elements();
    if (ea.size() != eb.size())
      return ea.size() <=> eb.size();
    auto oa = a.ordinal_value();
    auto ob = b.ordinal_value();
    if (oa && ob)
      return *oa <=> *ob;
    for (std::size_t i = 0; i < ea.size(); ++i)
      {
        auto c = canonical_order(ea[i], eb[i]);
        if (c != 0)
          return c;
      }
    return std::strong_ordering::equal;
  }

  std::strong_ordering operator<=>(const HfSet& a, const HfSet& b)
  {
    return canonical_order(a, b);
  }

  namespace hf
  {
    namespace
    {
      void check_cap(long double n, std::size_t cap, const char* what)
      {
        if (n > static_cast<long double>(cap))
          fail(ErrorKind::TooLarge, std::string(what) + " would have "
               + std::to_string(static_cast<unsigned long long>(
                   std::min(n, static_cast<long double>(
                       std::numeric_limits<unsigned long long>::max()))))
               + " elements (cap " + std::to_string(cap) + ")");
      }
    }

    HfSet empty_set() { return HfSet(); }
    HfSet singleton(const HfSet& a) { return intern_sorted({a}); }

    HfSet ordinal(std::size_t n)
    {
      static std::mutex m;
      static std::vector<HfSet> cache{HfSet()};
      std::lock_guard lock(m);
      while (cache.size() <= n)
        {
          std::vector<HfSet> elems(cache.begin(), cache.end());
          cache.push_back(intern_sorted(std::move(elems)));
        }
      return cache[n];
    }

    std::size_t as_ordinal(const HfSet& s)
    {
      if (auto v = s.ordinal_value())
        return *v;
      fail(ErrorKind::NotOrdinal, render(s) + " is not an ordinal");
    }

    HfSet interval(std::size_t n) { return ordinal(n + 1); }

    HfSet even_set(std::size_t n)
    {
      std::vector<HfSet> v;
      for (std::size_t i = 0; i <= n; i += 2)
        v.push_back(ordinal(i));
      return intern_sorted(std::move(v));
    }

    HfSet pair(const HfSet& a, const HfSet& b)
    {
      return HfSet::of({singleton(a), HfSet::of({a, b})});
    }

    std::optional<std::pair<HfSet, HfSet>> as_pair(const HfSet& p)
    {
      auto e = p.elements();
      if (e.size() == 1)
        {
          if (e[0].size() != 1)
            return std::nullopt;
          HfSet a = e[0].elements()[0];
          return std::pair{a, a};
        }
      if (e.size() == 2)
        {
          // canonical order puts the singleton first
          if (e[0].size() != 1 || e[1].size() != 2)
            return std::nullopt;
          HfSet a = e[0].elements()[0];
          auto f = e[1].elements();
          if (f[0] == a)
            return std::pair{a, f[1]};
          if (f[1] == a)
            return std::pair{a, f[0]};
        }
      return std::nullopt;
    }

    std::pair<HfSet, HfSet> unpair(const HfSet& p)
    {
      if (auto r = as_pair(p))
        return *r;
      fail(ErrorKind::NotPair, render(p, RenderStyle::numeric()) + " is not a pair");
    }

    bool is_subset(const HfSet& a, const HfSet& b)
    {
      if (a.size() > b.size())
        return false;
      auto ea = a.elements();
      auto eb = b.elements();
      return std::includes(eb.begin(), eb.end(), ea.begin(), ea.end(), less);
    }

    HfSet set_union(const HfSet& a, const HfSet& b)
    {
      std::vector<HfSet> out;
      auto ea = a.elements();
      auto eb = b.elements();
      std::set_union(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(out), less);
      return intern_sorted(std::move(out));
    }

    HfSet set_intersection(const HfSet& a, const HfSet& b)
    {
      std::vector<HfSet> out;
      auto ea = a.elements();
      auto eb = b.elements();
      std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(),
                            std::back_inserter(out), less);
      return intern_sorted(std::move(out));
    }

    HfSet set_difference(const HfSet& a, const HfSet& b)
    {
      std::vector<HfSet> out;
      auto ea = a.elements();
      auto eb = b.elements();
      std::set_difference(ea.begin(), ea.end(), eb.begin(), eb.end(),
                          std::back_inserter(out), less);
      return intern_sorted(std::move(out));
    }

    HfSet big_union(const HfSet& k)
    {
      std::vector<HfSet> all;
      for (const HfSet& x : k.elements())
        all.insert(all.end(), x.elements().begin(), x.elements().end());
      return HfSet::of(std::move(all));
    }

    HfSet powerset(const HfSet& k, std::size_t cap)
    {
      std::size_t n = k.size();
      check_cap(std::pow(2.0L, static_cast<long double>(n)), cap, "powerset");
      auto e = k.elements();
      std::vector<HfSet> out;
      out.reserve(std::size_t{1} << n);
      for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask)
        {
          std::vector<HfSet> sub;
          for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1)
              sub.push_back(e[i]);
          out.push_back(intern_sorted(std::move(sub)));
        }
      return HfSet::of(std::move(out));
    }

    HfSet powerset_nonempty(const HfSet& k, std::size_t cap)
    {
      return set_difference(powerset(k, cap), singleton(HfSet()));
    }

    HfSet product(const HfSet& k, const HfSet& l, std::size_t cap)
    {
      check_cap(static_cast<long double>(k.size()) * l.size(), cap, "product");
      std::vector<HfSet> out;
      for (const HfSet& a : k.elements())
        for (const HfSet& b : l.elements())
          out.push_back(pair(a, b));
      return HfSet::of(std::move(out));
    }

    HfSet function_space(const HfSet& k, const HfSet& l, std::size_t cap)
    {
      std::size_t n = k.size();
      std::size_t m = l.size();
      check_cap(std::pow(static_cast<long double>(m), static_cast<long double>(n)), cap,
                "function space");
      if (n == 0)
        return singleton(HfSet());
      if (m == 0)
        return HfSet();
      auto dom = k.elements();
      auto cod = l.elements();
      std::vector<std::size_t> digits(n, 0);
      std::vector<HfSet> out;
      for (;;)
        {
          std::vector<HfSet> graph;
          graph.reserve(n);
          for (std::size_t i = 0; i < n; ++i)
            graph.push_back(pair(dom[i], cod[digits[i]]));
          out.push_back(HfSet::of(std::move(graph)));
          std::size_t i = 0;
          while (i < n && ++digits[i] == m)
            digits[i++] = 0;
          if (i == n)
            break;
        }
      return HfSet::of(std::move(out));
    }

    HfSet apply(const HfSet& f, const HfSet& a)
    {
      std::optional<HfSet> image;
      for (const HfSet& p : f.elements())
        {
          auto xy = as_pair(p);
          if (!xy)
            fail(ErrorKind::NotFunctional,
                 render(f, RenderStyle::pretty()) + " contains a non-pair");
          if (xy->first != a)
            continue;
          if (image && *image != xy->second)
            fail(ErrorKind::NotFunctional,
                 render(f, RenderStyle::pretty()) + " has two images for "
                 + render(a, RenderStyle::pretty()));
          image = xy->second;
        }
      if (!image)
        fail(ErrorKind::NotInDomain,
             render(a, RenderStyle::pretty()) + " is not in the domain of "
             + render(f, RenderStyle::pretty()));
      return *image;
    }

    HfSet tabulate(const HfSet& domain, const std::function<HfSet(const HfSet&)>& fn)
    {
      std::vector<HfSet> graph;
      graph.reserve(domain.size());
      for (const HfSet& x : domain.elements())
        graph.push_back(pair(x, fn(x)));
      return HfSet::of(std::move(graph));
    }

    bool is_function(const HfSet& f, const HfSet& domain, const HfSet& codomain)
    {
      if (f.size() != domain.size())
        return false;
      std::vector<HfSet> seen;
      for (const HfSet& p : f.elements())
        {
          auto xy = as_pair(p);
          if (!xy || !domain.contains(xy->first) || !codomain.contains(xy->second))
            return false;
          seen.push_back(xy->first);
        }
      return HfSet::of(std::move(seen)) == domain;
    }

    HfSet inl(const HfSet& a) { return pair(ordinal(0), a); }
    HfSet inr(const HfSet& b) { return pair(ordinal(1), b); }

    HfSet disjoint_union(const HfSet& k, const HfSet& l)
    {
      std::vector<HfSet> out;
      out.reserve(k.size() + l.size());
      for (const HfSet& a : k.elements())
        out.push_back(inl(a));
      for (const HfSet& b : l.elements())
        out.push_back(inr(b));
      return HfSet::of(std::move(out));
    }
  }

  namespace
  {
    void render_into(const HfSet& s, RenderStyle style, std::string& out)
    {
      if (style.ordinals)
        if (auto n = s.ordinal_value())
          {
            out += std::to_string(*n);
            return;
          }
      if (style.pairs)
        if (auto p = hf::as_pair(s))
          {
            out += '(';
            render_into(p->first, style, out);
            out += ',';
            render_into(p->second, style, out);
            out += ')';
            return;
          }
      out += '{';
      bool first = true;
      for (const HfSet& e : s.elements())
        {
          if (!first)
            out += ',';
          first = false;
          render_into(e, style, out);
        }
      out += '}';
    }

    constexpr std::size_t kMaxParsedOrdinal = 1u << 16;

    struct Parser
    {
      std::string_view text;
      std::size_t& pos;

      [[noreturn]] void error(const std::string& what)
      {
        fail(ErrorKind::MalformedSet, what + " at offset " + std::to_string(pos));
      }

      void skip_ws()
      {
        while (pos < text.size()
               && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n'
                   || text[pos] == '\r'))
          ++pos;
      }

      bool eat(char c)
      {
        skip_ws();
        if (pos < text.size() && text[pos] == c)
          {
            ++pos;
            return true;
          }
        return false;
      }

      void expect(char c)
      {
        if (!eat(c))
          error(std::string("expected '") + c + "'");
      }

      HfSet value(std::size_t nesting)
      {
        if (nesting > 4096)
          error("nesting too deep");
        skip_ws();
        if (pos >= text.size())
          error("unexpected end of input");
        char c = text[pos];
        if (c == '{')
          {
            ++pos;
            std::vector<HfSet> elems;
            if (eat('}'))
              return HfSet();
            do
              elems.push_back(value(nesting + 1));
            while (eat(','));
            expect('}');
            return HfSet::of(std::move(elems));
          }
        if (c == '(')
          {
            ++pos;
            HfSet a = value(nesting + 1);
            expect(',');
            HfSet b = value(nesting + 1);
            expect(')');
            return hf::pair(a, b);
          }
        if (c >= '0' && c <= '9')
          {
            std::size_t start = pos;
            std::size_t n = 0;
            while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9')
              {
                n = n * 10 + static_cast<std::size_t>(text[pos] - '0');
                if (n > kMaxParsedOrdinal)
                  error("ordinal literal too large");
                ++pos;
              }
            if (text[start] == '0' && pos - start > 1)
              {
                pos = start;
                error("leading zero in ordinal literal");
              }
            return hf::ordinal(n);
          }
        error(std::string("unexpected character '") + c + "'");
      }
    };
  }

  std::string render(const HfSet& s, RenderStyle style)
  {
    std::string out;
    render_into(s, style, out);
    return out;
  }

  HfSet parse_hf_prefix(std::string_view text, std::size_t& pos)
  {
    Parser p{text, pos};
    return p.value(0);
  }

  HfSet parse_hf(std::string_view text)
  {
    std::size_t pos = 0;
    HfSet v = parse_hf_prefix(text, pos);
    Parser p{text, pos};
    p.skip_ws();
    if (pos != text.size())
      p.error("trailing characters");
    return v;
  }

}
