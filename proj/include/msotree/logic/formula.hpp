#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace msotree
{

  /// Individual term: a base (root or an individual variable) followed by
  /// successor applications.  dirs are listed innermost first, so
  /// s1(s0(x)) has base x and dirs {0,1}.
  struct Term
  {
    bool is_root = true;
    std::string var;
    std::vector<unsigned> dirs;

    static Term root() { return {}; }
    static Term variable(std::string name) { return {false, std::move(name), {}}; }

    /// s_d(*this)
    Term succ(unsigned d) const;
    /// Term without its outermost successor; requires !dirs.empty().
    Term parent() const;

    bool is_variable() const { return !is_root && dirs.empty(); }

    friend bool operator==(const Term&, const Term&) = default;
  };

  std::string render(const Term& t);

  /// MSO formula over the D-ary tree.  Immutable, shared structure.
  class Formula
  {
  public:
    enum class Kind
    {
      True,
      False,
      Pred,     // X(t)
      Eq,       // t = u
      Lt,       // t < u
      Succ,     // succ_d(t,u), the relational successor atom
      Not,
      And,
      Or,
      Implies,
      Iff,
      Ex1,
      All1,
      Ex2,
      All2,
    };

    static Formula truth();
    static Formula falsity();
    static Formula pred(std::string set_var, Term t);
    static Formula eq(Term t, Term u);
    static Formula lt(Term t, Term u);
    static Formula succ(unsigned d, Term t, Term u);
    static Formula negate(Formula a);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula implies(Formula a, Formula b);
    static Formula iff(Formula a, Formula b);
    static Formula ex1(std::string var, Formula body);
    static Formula all1(std::string var, Formula body);
    static Formula ex2(std::string var, Formula body);
    static Formula all2(std::string var, Formula body);

    /// Left-folded conjunction / disjunction; empty lists give true / false.
    static Formula conj_all(const std::vector<Formula>& fs);
    static Formula disj_all(const std::vector<Formula>& fs);

    Kind kind() const;
    /// Predicate variable (Pred) or bound variable (quantifiers).
    const std::string& name() const;
    unsigned dir() const;
    const Term& t() const;
    const Term& u() const;
    /// Operand of Not / quantifier body, or left operand.
    const Formula& a() const;
    const Formula& b() const;

    bool is_quantifier() const;
    bool is_binary() const;

    friend bool operator==(const Formula& x, const Formula& y);

    /// Number of AST nodes.
    std::size_t size() const;

  private:
    struct Node;
    Formula() = default;
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
  };

  struct ParseOptions
  {
    unsigned arity = 2;
    /// Reject free variables with UnboundVariable.
    bool closed = false;
  };

  /// Parses the surface syntax.  Errors carry line and column.
  Formula parse_formula(std::string_view text, const ParseOptions& options);
  Formula parse_formula(std::string_view text, unsigned arity = 2, bool closed = false);

  /// Renders in surface syntax; parse_formula(render(f)) == f.
  std::string render(const Formula& f);

  std::set<std::string> free_individuals(const Formula& f);
  std::set<std::string> free_sets(const Formula& f);
  bool is_closed(const Formula& f);
  /// Every name occurring in f, bound or free.
  std::set<std::string> all_names(const Formula& f);
  /// Largest successor index used, or -1.
  int max_direction(const Formula& f);

  /// True when all atoms are X(x), succ_d(x,y), x=y, x<y with variables.
  bool is_relational(const Formula& f);

  /// Generates names not in a given set: base, base1, base2, ...
  class FreshNames
  {
  public:
    explicit FreshNames(std::set<std::string> used) : used_(std::move(used)) {}
    std::string next(const std::string& base);

  private:
    std::set<std::string> used_;
  };

}
