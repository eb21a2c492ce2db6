#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace msotree
{

  namespace detail
  {
    struct HfNode;
  }

  /// A hereditarily finite set.
  ///
  /// Values are hash-consed: every distinct set exists exactly once in a
  /// process-wide table, so equality is a pointer comparison and an HfSet
  /// is a cheap, trivially copyable handle.  Elements are kept in canonical
  /// order (cardinality first, then lexicographic on the sorted elements),
  /// which makes the representation, iteration order and text rendering of
  /// equal sets identical.  Interned nodes live for the rest of the process.
  /// All operations are thread-safe.
  class HfSet
  {
  public:
    /// The empty set.
    HfSet() noexcept;

    /// Builds {e | e in elements}; order and duplicates are irrelevant.
    static HfSet of(std::vector<HfSet> elements);
    static HfSet of(std::initializer_list<HfSet> elements);

    std::span<const HfSet> elements() const noexcept;
    std::size_t size() const noexcept;
    bool empty() const noexcept { return size() == 0; }

    /// Membership, O(log n) comparisons.
    bool contains(const HfSet& x) const;

    /// Position of \a x in elements(), if present.
    std::optional<std::size_t> index_of(const HfSet& x) const;

    /// Value as a natural number when this set is a von Neumann ordinal.
    std::optional<std::size_t> ordinal_value() const noexcept;

    std::size_t hash() const noexcept;
    std::uint32_t depth() const noexcept;

    friend bool operator==(const HfSet& a, const HfSet& b) noexcept
    {
      return a.node_ == b.node_;
    }

    friend std::strong_ordering operator<=>(const HfSet& a, const HfSet& b);

  private:
    explicit HfSet(const detail::HfNode* node) noexcept : node_(node) {}
    const detail::HfNode* node_;

    friend struct detail::HfNode;
    friend HfSet intern_sorted(std::vector<HfSet>&& sorted);
  };

  /// The canonical well-order on V_omega: cardinality first, then the
  /// canonically sorted element lists lexicographically.
  std::strong_ordering canonical_order(const HfSet& a, const HfSet& b);

  struct HfSetHash
  {
    std::size_t operator()(const HfSet& s) const noexcept { return s.hash(); }
  };

  /// Default cap on the cardinality of any constructed set.
  inline constexpr std::size_t kDefaultSizeCap = std::size_t{1} << 20;

  namespace hf
  {
    HfSet empty_set();
    HfSet singleton(const HfSet& a);

    /// von Neumann ordinal: 0 = {}, n+1 = n U {n}.
    HfSet ordinal(std::size_t n);
    /// Inverse of ordinal(); throws NotOrdinal.
    std::size_t as_ordinal(const HfSet& s);

    /// [0,n] = {0,...,n}.
    HfSet interval(std::size_t n);
    /// Even members of [0,n].
    HfSet even_set(std::size_t n);

    /// Kuratowski pair {{a},{a,b}}.
    HfSet pair(const HfSet& a, const HfSet& b);
    std::optional<std::pair<HfSet, HfSet>> as_pair(const HfSet& p);
    /// Left inverse of pair(); throws NotPair.
    std::pair<HfSet, HfSet> unpair(const HfSet& p);

    bool is_subset(const HfSet& a, const HfSet& b);
    HfSet set_union(const HfSet& a, const HfSet& b);
    HfSet set_intersection(const HfSet& a, const HfSet& b);
    HfSet set_difference(const HfSet& a, const HfSet& b);
    /// U k = union of the members of k.
    HfSet big_union(const HfSet& k);

    HfSet powerset(const HfSet& k, std::size_t cap = kDefaultSizeCap);
    HfSet powerset_nonempty(const HfSet& k, std::size_t cap = kDefaultSizeCap);

    /// k x l as a set of Kuratowski pairs.
    HfSet product(const HfSet& k, const HfSet& l, std::size_t cap = kDefaultSizeCap);
    /// l^k: all total functional subsets of k x l.
    HfSet function_space(const HfSet& k, const HfSet& l,
                         std::size_t cap = kDefaultSizeCap);
    /// Image of \a a under the functional set \a f.  Throws NotFunctional when
    /// \a f is not a set of pairs with unique images, NotInDomain when \a a has
    /// no image.
    HfSet apply(const HfSet& f, const HfSet& a);
    /// Builds the functional set {(x, fn(x)) | x in domain}.
    HfSet tabulate(const HfSet& domain, const std::function<HfSet(const HfSet&)>& fn);
    /// True when \a f is a total function from \a domain into \a codomain.
    bool is_function(const HfSet& f, const HfSet& domain, const HfSet& codomain);

    /// k + l = ({0} x k) U ({1} x l).
    HfSet disjoint_union(const HfSet& k, const HfSet& l);
    HfSet inl(const HfSet& a);
    HfSet inr(const HfSet& b);
  }

  /// Text rendering.  Plain style writes only braces: {} and {e1,e2,...}.
  /// With \c ordinals set, von Neumann ordinals print as decimal numbers;
  /// with \c pairs set, Kuratowski pairs print as (a,b).  Every style is
  /// parsed back by parse_hf to the identical value.
  struct RenderStyle
  {
    bool ordinals = false;
    bool pairs = false;

    static RenderStyle plain() { return {}; }
    static RenderStyle numeric() { return {true, false}; }
    static RenderStyle pretty() { return {true, true}; }
  };

  std::string render(const HfSet& s, RenderStyle style = RenderStyle::plain());

  /// Parses "{...}", decimal ordinals and "(a,b)" pairs; whitespace allowed
  /// between tokens.  Throws MalformedSet.
  HfSet parse_hf(std::string_view text);

  /// Parses one HF value starting at \a pos, advancing it past the value.
  HfSet parse_hf_prefix(std::string_view text, std::size_t& pos);

}

template <>
struct std::hash<msotree::HfSet>
{
  std::size_t operator()(const msotree::HfSet& s) const noexcept { return s.hash(); }
};
