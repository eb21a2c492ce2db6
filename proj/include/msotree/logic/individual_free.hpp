#pragma once

#include <msotree/logic/formula.hpp>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace msotree
{

  /// Set variable of an individual-free formula.  Ids are positions in the
  /// owning translation's name table; binders nested inside the scope of
  /// another binder always carry larger ids.
  using VarId = std::uint32_t;

  /// Individual-free formula: atoms X subset Y and Succ_d(X,Y) over set
  /// variables only.  The core fragment uses Subset, Succ, Not, Or, Exists.
  class IfFormula
  {
  public:
    /// Empty handle, only valid as an assignment target.
    IfFormula() = default;

    enum class Kind
    {
      Subset,
      Succ,
      Not,
      Or,
      And,
      Implies,
      Exists,
      Forall,
    };

    static IfFormula subset(VarId x, VarId y);
    static IfFormula succ(unsigned d, VarId x, VarId y);
    static IfFormula negate(IfFormula a);
    static IfFormula disj(IfFormula a, IfFormula b);
    static IfFormula conj(IfFormula a, IfFormula b);
    static IfFormula implies(IfFormula a, IfFormula b);
    static IfFormula exists(VarId x, IfFormula body);
    static IfFormula forall(VarId x, IfFormula body);

    Kind kind() const;
    /// Bound variable for quantifiers, first argument for atoms.
    VarId x() const;
    VarId y() const;
    unsigned dir() const;
    const IfFormula& a() const;
    const IfFormula& b() const;

    bool is_atom() const { return kind() == Kind::Subset || kind() == Kind::Succ; }
    bool is_core() const;
    std::size_t size() const;

    friend bool operator==(const IfFormula& p, const IfFormula& q);

  private:
    struct Node;
    explicit IfFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
  };

  /// Free variables in increasing id order.
  std::vector<VarId> free_vars(const IfFormula& f);
  /// Largest id occurring anywhere, or -1 for none.
  long max_var(const IfFormula& f);

  /// Renders with names[id] when available, X<id> otherwise.
  std::string render(const IfFormula& f, const std::vector<std::string>& names = {});

  /// Result of the individual-free translation.  Free set variables of the
  /// source get ids 0..free_count-1 in name order.
  struct IfTranslation
  {
    IfFormula formula;
    std::vector<std::string> names;
    std::size_t free_count = 0;
  };

  /// Relational normal form: atoms only X(x), succ_d(x,y), x=y, x<y between
  /// variables.  Compound terms are unfolded through fresh individuals;
  /// \a arity fixes the directions in the "is the root" clause.
  Formula to_relational(const Formula& f, unsigned arity);

  /// Individual-free translation of a relational formula.  Individuals
  /// become Sing-guarded set variables.  Throws NotRelational.
  IfTranslation to_individual_free(const Formula& relational, unsigned arity);

  /// Rewrites And, Implies and Forall into Subset/Succ/Not/Or/Exists.
  IfFormula to_core_if(const IfFormula& f);

  /// Sing(X) = ~(X = empty) & all Y. (Y subset X -> Y = empty | X subset Y),
  /// X = empty meaning all Y. X subset Y.  \a next supplies fresh ids.
  IfFormula if_sing(VarId x, VarId& next);

}
