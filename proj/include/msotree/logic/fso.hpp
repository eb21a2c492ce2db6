#pragma once

#include <msotree/hf/hfset.hpp>
#include <msotree/logic/formula.hpp>

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace msotree
{

  /// HF-term: an HfSet expression over bound HF variables.
  class HfTerm
  {
  public:
    enum class Kind
    {
      Const,
      Var,
      SetOf,
      Pair,
      Union,
      Intersection,
      Difference,
      BigUnion,
      Powerset,
      PowersetNonempty,
      Product,
      FunctionSpace,
      Apply,
      DisjointUnion,
      Card, // von Neumann cardinality
    };

    HfTerm(HfSet value); // NOLINT: constants convert implicitly
    static HfTerm var(std::string name);
    static HfTerm set_of(std::vector<HfTerm> elems);
    static HfTerm unary(Kind k, HfTerm a);
    static HfTerm binary(Kind k, HfTerm a, HfTerm b);

    Kind kind() const;
    const HfSet& value() const;
    const std::string& name() const;
    const std::vector<HfTerm>& args() const;

  private:
    struct Node;
    explicit HfTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
  };

  using HfEnv = std::map<std::string, HfSet>;

  /// Evaluates in V_omega.  Throws NotHfClosed on an unbound variable.
  HfSet eval(const HfTerm& t, const HfEnv& env = {});
  std::string render(const HfTerm& t);

  /// Formula of the small FSO dialect: MSO-style individual structure,
  /// HF atoms, function atoms F(t) = L, HF-bounded quantifiers and
  /// function quantifiers (exists F : K).
  class FsoFormula
  {
  public:
    /// Empty handle, only valid as an assignment target.
    FsoFormula() = default;

    enum class Kind
    {
      True,
      False,
      HfEq,     // K = L
      HfIn,     // K in L
      HfSubset, // K subset L
      FunEq,    // F(t) = L
      Eq,
      Lt,
      Not,
      And,
      Or,
      Implies,
      Ex1,
      All1,
      ExIn,  // (exists k in K)
      AllIn,
      ExSub, // (exists k subset K)
      AllSub,
      ExFun, // (exists F : K)
      AllFun,
    };

    static FsoFormula truth();
    static FsoFormula falsity();
    static FsoFormula hf_eq(HfTerm k, HfTerm l);
    static FsoFormula hf_in(HfTerm k, HfTerm l);
    static FsoFormula hf_subset(HfTerm k, HfTerm l);
    static FsoFormula fun_eq(std::string f, Term t, HfTerm l);
    static FsoFormula eq(Term t, Term u);
    static FsoFormula lt(Term t, Term u);
    static FsoFormula negate(FsoFormula a);
    static FsoFormula conj(FsoFormula a, FsoFormula b);
    static FsoFormula disj(FsoFormula a, FsoFormula b);
    static FsoFormula implies(FsoFormula a, FsoFormula b);
    static FsoFormula ex1(std::string x, FsoFormula body);
    static FsoFormula all1(std::string x, FsoFormula body);
    static FsoFormula ex_in(std::string k, HfTerm bound, FsoFormula body);
    static FsoFormula all_in(std::string k, HfTerm bound, FsoFormula body);
    static FsoFormula ex_sub(std::string k, HfTerm bound, FsoFormula body);
    static FsoFormula all_sub(std::string k, HfTerm bound, FsoFormula body);
    static FsoFormula ex_fun(std::string f, HfTerm codomain, FsoFormula body);
    static FsoFormula all_fun(std::string f, HfTerm codomain, FsoFormula body);

    Kind kind() const;
    /// Bound variable, or the function symbol of FunEq.
    const std::string& name() const;
    const Term& t() const;
    const Term& u() const;
    /// Left HF operand, or the bound of a quantifier.
    const HfTerm& k() const;
    /// Right HF operand.
    const HfTerm& l() const;
    const FsoFormula& a() const;
    const FsoFormula& b() const;

  private:
    struct Node;
    explicit FsoFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
  };

  std::string render(const FsoFormula& f);

  /// Truth in V_omega of a closed formula built only from HF atoms,
  /// connectives and HF-bounded quantifiers.
  bool eval_hf(const FsoFormula& f);

  /// X(t) becomes F_X(t) = 1, (exists X) becomes (exists F_X : 2).
  FsoFormula mso_to_fso(const Formula& f);

  /// Interprets the HF part propositionally and each function quantifier
  /// (exists F : K) by |K| partition variables, one per element of K in
  /// canonical order.  Throws NotHfClosed, FreeFunctionVariable.
  Formula fso_to_mso(const FsoFormula& f);

  /// Part_c(X_1..X_c): every node lies in exactly one X_i.
  Formula partition_formula(const std::vector<std::string>& sets, const std::string& x);

}
