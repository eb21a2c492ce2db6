#include <msotree/logic/fso.hpp>
#include <msotree/error.hpp>

#include <optional>
#include <set>

namespace msotree
{

  struct HfTerm::Node
  {
    Kind kind;
    HfSet value;
    std::string name;
    std::vector<HfTerm> args;
  };

  HfTerm::HfTerm(HfSet value)
    : node_(std::make_shared<Node>(Node{Kind::Const, value, {}, {}}))
  {
  }

  HfTerm HfTerm::var(std::string name)
  {
    return HfTerm(std::make_shared<Node>(Node{Kind::Var, {}, std::move(name), {}}));
  }

  HfTerm HfTerm::set_of(std::vector<HfTerm> elems)
  {
    return HfTerm(std::make_shared<Node>(Node{Kind::SetOf, {}, {}, std::move(elems)}));
  }

  HfTerm HfTerm::unary(Kind k, HfTerm a)
  {
    return HfTerm(std::make_shared<Node>(Node{k, {}, {}, {std::move(a)}}));
  }

  HfTerm HfTerm::binary(Kind k, HfTerm a, HfTerm b)
  {
    return HfTerm(std::make_shared<Node>(Node{k, {}, {}, {std::move(a), std::move(b)}}));
  }

  HfTerm::Kind HfTerm::kind() const { return node_->kind; }
  const HfSet& HfTerm::value() const { return node_->value; }
  const std::string& HfTerm::name() const { return node_->name; }
  const std::vector<HfTerm>& HfTerm::args() const { return node_->args; }

  HfSet eval(const HfTerm& t, const HfEnv& env)
  {
    using K = HfTerm::Kind;
    auto arg = [&](std::size_t i) { return eval(t.args().at(i), env); };
    switch (t.kind())
      {
      case K::Const: return t.value();
      case K::Var:
        {
          auto it = env.find(t.name());
          if (it == env.end())
            fail(ErrorKind::NotHfClosed, "HF variable '" + t.name() + "' is unbound");
          return it->second;
        }
      case K::SetOf:
        {
          std::vector<HfSet> elems;
          for (const auto& a : t.args())
            elems.push_back(eval(a, env));
          return HfSet::of(std::move(elems));
        }
      case K::Pair: return hf::pair(arg(0), arg(1));
      case K::Union: return hf::set_union(arg(0), arg(1));
      case K::Intersection: return hf::set_intersection(arg(0), arg(1));
      case K::Difference: return hf::set_difference(arg(0), arg(1));
      case K::BigUnion: return hf::big_union(arg(0));
      case K::Powerset: return hf::powerset(arg(0));
      case K::PowersetNonempty: return hf::powerset_nonempty(arg(0));
      case K::Product: return hf::product(arg(0), arg(1));
      case K::FunctionSpace: return hf::function_space(arg(0), arg(1));
      case K::Apply: return hf::apply(arg(0), arg(1));
      case K::DisjointUnion: return hf::disjoint_union(arg(0), arg(1));
      case K::Card: return hf::ordinal(arg(0).size());
      }
    fail(ErrorKind::NotHfClosed, "unknown HF term");
  }

  std::string render(const HfTerm& t)
  {
    using K = HfTerm::Kind;
    auto call = [&](const char* f) {
      std::string out = f;
      out += '(';
      for (std::size_t i = 0; i < t.args().size(); ++i)
        {
          if (i)
            out += ',';
          out += render(t.args()[i]);
        }
      return out + ')';
    };
    switch (t.kind())
      {
      case K::Const: return render(t.value(), RenderStyle::pretty());
      case K::Var: return t.name();
      case K::SetOf:
        {
          std::string out = "{";
          for (std::size_t i = 0; i < t.args().size(); ++i)
            out += (i ? "," : "") + render(t.args()[i]);
          return out + "}";
        }
      case K::Pair: return "(" + render(t.args()[0]) + "," + render(t.args()[1]) + ")";
      case K::Union: return call("union");
      case K::Intersection: return call("inter");
      case K::Difference: return call("diff");
      case K::BigUnion: return call("bigunion");
      case K::Powerset: return call("pow");
      case K::PowersetNonempty: return call("pow+");
      case K::Product: return call("prod");
      case K::FunctionSpace: return call("fun");
      case K::Apply: return call("app");
      case K::DisjointUnion: return call("sum");
      case K::Card: return call("card");
      }
    return "?";
  }

  // ------------------------------------------------------------ formulas

  struct FsoFormula::Node
  {
    Kind kind;
    std::string name;
    Term t, u;
    std::optional<HfTerm> k, l;
    FsoFormula a, b;
  };

  namespace
  {
    using SK = FsoFormula::Kind;
  }

  FsoFormula FsoFormula::truth()
  {
    return FsoFormula(std::make_shared<Node>(Node{SK::True, {}, {}, {}, {}, {}, {}, {}}));
  }

  FsoFormula FsoFormula::falsity()
  {
    return FsoFormula(std::make_shared<Node>(Node{SK::False, {}, {}, {}, {}, {}, {}, {}}));
  }

  FsoFormula FsoFormula::hf_eq(HfTerm k, HfTerm l)
  {
    return FsoFormula(std::make_shared<Node>(Node{SK::HfEq, {}, {}, {}, k, l, {}, {}}));
  }

  FsoFormula FsoFormula::hf_in(HfTerm k, HfTerm l)
  {
    return FsoFormula(std::make_shared<Node>(Node{SK::HfIn, {}, {}, {}, k, l, {}, {}}));
  }

  FsoFormula FsoFormula::hf_subset(HfTerm k, HfTerm l)
  {
    return FsoFormula(std::make_shared<Node>(Node{SK::HfSubset, {}, {}, {}, k, l, {}, {}}));
  }

  FsoFormula FsoFormula::fun_eq(std::string f, Term t, HfTerm l)
  {
    return FsoFormula(
        std::make_shared<Node>(Node{SK::FunEq, std::move(f), std::move(t), {}, {}, l, {}, {}}));
  }

  FsoFormula FsoFormula::eq(Term t, Term u)
  {
    return FsoFormula(std::make_shared<Node>(
        Node{SK::Eq, {}, std::move(t), std::move(u), {}, {}, {}, {}}));
  }

  FsoFormula FsoFormula::lt(Term t, Term u)
  {
    return FsoFormula(std::make_shared<Node>(
        Node{SK::Lt, {}, std::move(t), std::move(u), {}, {}, {}, {}}));
  }

  FsoFormula FsoFormula::negate(FsoFormula a)
  {
    return FsoFormula(std::make_shared<Node>(Node{SK::Not, {}, {}, {}, {}, {}, a, {}}));
  }

  FsoFormula FsoFormula::conj(FsoFormula a, FsoFormula b)
  {
    return FsoFormula(
        std::make_shared<Node>(Node{SK::And, {}, {}, {}, {}, {}, a, b}));
  }

  FsoFormula FsoFormula::disj(FsoFormula a, FsoFormula b)
  {
    return FsoFormula(std::make_shared<Node>(Node{SK::Or, {}, {}, {}, {}, {}, a, b}));
  }

  FsoFormula FsoFormula::implies(FsoFormula a, FsoFormula b)
  {
    return FsoFormula(
        std::make_shared<Node>(Node{SK::Implies, {}, {}, {}, {}, {}, a, b}));
  }

  namespace
  {
    template <class Node>
    std::shared_ptr<const Node> quant(SK kind, std::string name, std::optional<HfTerm> bound,
                                      FsoFormula body)
    {
      return std::make_shared<Node>(
          Node{kind, std::move(name), {}, {}, std::move(bound), {}, std::move(body), {}});
    }
  }

  FsoFormula FsoFormula::ex1(std::string x, FsoFormula body)
  {
    return FsoFormula(quant<Node>(SK::Ex1, std::move(x), {}, body));
  }

  FsoFormula FsoFormula::all1(std::string x, FsoFormula body)
  {
    return FsoFormula(quant<Node>(SK::All1, std::move(x), {}, body));
  }

  FsoFormula FsoFormula::ex_in(std::string k, HfTerm bound, FsoFormula body)
  {
    return FsoFormula(quant<Node>(SK::ExIn, std::move(k), bound, body));
  }

  FsoFormula FsoFormula::all_in(std::string k, HfTerm bound, FsoFormula body)
  {
    return FsoFormula(quant<Node>(SK::AllIn, std::move(k), bound, body));
  }

  FsoFormula FsoFormula::ex_sub(std::string k, HfTerm bound, FsoFormula body)
  {
    return FsoFormula(quant<Node>(SK::ExSub, std::move(k), bound, body));
  }

  FsoFormula FsoFormula::all_sub(std::string k, HfTerm bound, FsoFormula body)
  {
    return FsoFormula(quant<Node>(SK::AllSub, std::move(k), bound, body));
  }

  FsoFormula FsoFormula::ex_fun(std::string f, HfTerm codomain, FsoFormula body)
  {
    return FsoFormula(quant<Node>(SK::ExFun, std::move(f), codomain, body));
  }

  FsoFormula FsoFormula::all_fun(std::string f, HfTerm codomain, FsoFormula body)
  {
    return FsoFormula(quant<Node>(SK::AllFun, std::move(f), codomain, body));
  }

  FsoFormula::Kind FsoFormula::kind() const { return node_->kind; }
  const std::string& FsoFormula::name() const { return node_->name; }
  const Term& FsoFormula::t() const { return node_->t; }
  const Term& FsoFormula::u() const { return node_->u; }
  const HfTerm& FsoFormula::k() const { return *node_->k; }
  const HfTerm& FsoFormula::l() const { return *node_->l; }

  const FsoFormula& FsoFormula::a() const { return node_->a; }
  const FsoFormula& FsoFormula::b() const { return node_->b; }


  // ----------------------------------------------------------- rendering

  namespace
  {
    void render_into(const FsoFormula& f, std::string& out)
    {
      auto bin = [&](const char* op) {
        out += '(';
        render_into(f.a(), out);
        out += op;
        render_into(f.b(), out);
        out += ')';
      };
      auto quant = [&](const char* q, const char* rel) {
        out += std::string("(") + q + " " + f.name();
        if (rel)
          out += std::string(" ") + rel + " " + render(f.k());
        out += ". ";
        render_into(f.a(), out);
        out += ')';
      };
      switch (f.kind())
        {
        case SK::True: out += "true"; break;
        case SK::False: out += "false"; break;
        case SK::HfEq: out += render(f.k()) + " == " + render(f.l()); break;
        case SK::HfIn: out += render(f.k()) + " in " + render(f.l()); break;
        case SK::HfSubset: out += render(f.k()) + " sub " + render(f.l()); break;
        case SK::FunEq: out += f.name() + "(" + render(f.t()) + ") == " + render(f.l()); break;
        case SK::Eq: out += render(f.t()) + " = " + render(f.u()); break;
        case SK::Lt: out += render(f.t()) + " < " + render(f.u()); break;
        case SK::Not:
          out += "~";
          render_into(f.a(), out);
          break;
        case SK::And: bin(" & "); break;
        case SK::Or: bin(" | "); break;
        case SK::Implies: bin(" -> "); break;
        case SK::Ex1: quant("ex1", nullptr); break;
        case SK::All1: quant("all1", nullptr); break;
        case SK::ExIn: quant("exhf", "in"); break;
        case SK::AllIn: quant("allhf", "in"); break;
        case SK::ExSub: quant("exhf", "sub"); break;
        case SK::AllSub: quant("allhf", "sub"); break;
        case SK::ExFun: quant("exfun", ":"); break;
        case SK::AllFun: quant("allfun", ":"); break;
        }
    }

    bool eval_rec(const FsoFormula& f, HfEnv& env)
    {
      auto over = [&](const HfSet& domain, bool exists) {
        auto saved = env.find(f.name()) != env.end()
                         ? std::optional<HfSet>(env[f.name()])
                         : std::nullopt;
        bool result = !exists;
        for (const HfSet& v : domain.elements())
          {
            env[f.name()] = v;
            if (eval_rec(f.a(), env) == exists)
              {
                result = exists;
                break;
              }
          }
        if (saved)
          env[f.name()] = *saved;
        else
          env.erase(f.name());
        return result;
      };
      switch (f.kind())
        {
        case SK::True: return true;
        case SK::False: return false;
        case SK::HfEq: return eval(f.k(), env) == eval(f.l(), env);
        case SK::HfIn: return eval(f.l(), env).contains(eval(f.k(), env));
        case SK::HfSubset: return hf::is_subset(eval(f.k(), env), eval(f.l(), env));
        case SK::Not: return !eval_rec(f.a(), env);
        case SK::And: return eval_rec(f.a(), env) && eval_rec(f.b(), env);
        case SK::Or: return eval_rec(f.a(), env) || eval_rec(f.b(), env);
        case SK::Implies: return !eval_rec(f.a(), env) || eval_rec(f.b(), env);
        case SK::ExIn: return over(eval(f.k(), env), true);
        case SK::AllIn: return over(eval(f.k(), env), false);
        case SK::ExSub: return over(hf::powerset(eval(f.k(), env)), true);
        case SK::AllSub: return over(hf::powerset(eval(f.k(), env)), false);
        case SK::Ex1:
        case SK::All1:
        case SK::ExFun:
        case SK::AllFun:
          fail(ErrorKind::Unbounded, "quantifier over " + f.name() + " has no HF bound");
        case SK::FunEq:
        case SK::Eq:
        case SK::Lt:
          fail(ErrorKind::NotHfClosed, "atom " + render(f) + " is not an HF atom");
        }
      return false;
    }

    void collect_names(const FsoFormula& f, std::set<std::string>& names)
    {
      for (const Term* t : {&f.t(), &f.u()})
        if (!t->is_root)
          names.insert(t->var);
      switch (f.kind())
        {
        case SK::Not:
        case SK::Ex1:
        case SK::All1:
        case SK::ExIn:
        case SK::AllIn:
        case SK::ExSub:
        case SK::AllSub:
        case SK::ExFun:
        case SK::AllFun:
          names.insert(f.name());
          collect_names(f.a(), names);
          break;
        case SK::And:
        case SK::Or:
        case SK::Implies:
          collect_names(f.a(), names);
          collect_names(f.b(), names);
          break;
        case SK::FunEq: names.insert(f.name()); break;
        default: break;
        }
    }

    struct FunBinding
    {
      std::vector<std::string> sets;
      std::vector<HfSet> enumeration;
    };

    class Interpreter
    {
    public:
      explicit Interpreter(const FsoFormula& f)
        : fresh_([&] {
            std::set<std::string> names;
            collect_names(f, names);
            return names;
          }())
      {
      }

      Formula run(const FsoFormula& f)
      {
        switch (f.kind())
          {
          case SK::True: return Formula::truth();
          case SK::False: return Formula::falsity();
          case SK::HfEq:
          case SK::HfIn:
          case SK::HfSubset:
            return eval_rec(f, hf_) ? Formula::truth() : Formula::falsity();
          case SK::FunEq:
            {
              const FunBinding* fb = lookup(f.name());
              HfSet target = eval(f.l(), hf_);
              std::vector<Formula> alts;
              for (std::size_t i = 0; i < fb->enumeration.size(); ++i)
                if (fb->enumeration[i] == target)
                  alts.push_back(Formula::pred(fb->sets[i], f.t()));
              return Formula::disj_all(alts);
            }
          case SK::Eq: return Formula::eq(f.t(), f.u());
          case SK::Lt: return Formula::lt(f.t(), f.u());
          case SK::Not: return Formula::negate(run(f.a()));
          case SK::And: return Formula::conj(run(f.a()), run(f.b()));
          case SK::Or: return Formula::disj(run(f.a()), run(f.b()));
          case SK::Implies: return Formula::implies(run(f.a()), run(f.b()));
          case SK::Ex1: return Formula::ex1(f.name(), run(f.a()));
          case SK::All1: return Formula::all1(f.name(), run(f.a()));
          case SK::ExIn:
          case SK::AllIn:
          case SK::ExSub:
          case SK::AllSub:
            {
              HfSet bound = eval(f.k(), hf_);
              if (f.kind() == SK::ExSub || f.kind() == SK::AllSub)
                bound = hf::powerset(bound);
              bool exists = f.kind() == SK::ExIn || f.kind() == SK::ExSub;
              auto saved = hf_.count(f.name()) ? std::optional<HfSet>(hf_[f.name()])
                                               : std::nullopt;
              std::vector<Formula> parts;
              for (const HfSet& v : bound.elements())
                {
                  hf_[f.name()] = v;
                  parts.push_back(run(f.a()));
                }
              if (saved)
                hf_[f.name()] = *saved;
              else
                hf_.erase(f.name());
              return exists ? Formula::disj_all(parts) : Formula::conj_all(parts);
            }
          case SK::ExFun:
          case SK::AllFun:
            {
              HfSet codomain = eval(f.k(), hf_);
              FunBinding fb;
              for (std::size_t i = 0; i < codomain.size(); ++i)
                {
                  fb.sets.push_back(fresh_.next(f.name() + "_" + std::to_string(i)));
                  fb.enumeration.push_back(codomain.elements()[i]);
                }
              Formula part = partition_formula(fb.sets, fresh_.next("x"));
              funs_.emplace_back(f.name(), fb);
              Formula body = run(f.a());
              funs_.pop_back();
              bool exists = f.kind() == SK::ExFun;
              Formula r = exists ? Formula::conj(part, body) : Formula::implies(part, body);
              for (auto it = fb.sets.rbegin(); it != fb.sets.rend(); ++it)
                r = exists ? Formula::ex2(*it, r) : Formula::all2(*it, r);
              return r;
            }
          }
        return Formula::falsity();
      }

    private:
      FreshNames fresh_;
      HfEnv hf_;
      std::vector<std::pair<std::string, FunBinding>> funs_;

      const FunBinding* lookup(const std::string& name) const
      {
        for (auto it = funs_.rbegin(); it != funs_.rend(); ++it)
          if (it->first == name)
            return &it->second;
        fail(ErrorKind::FreeFunctionVariable, "function variable '" + name + "' is free");
      }
    };

  }

  std::string render(const FsoFormula& f)
  {
    std::string out;
    render_into(f, out);
    return out;
  }

  bool eval_hf(const FsoFormula& f)
  {
    HfEnv env;
    return eval_rec(f, env);
  }

  Formula partition_formula(const std::vector<std::string>& sets, const std::string& x)
  {
    Term v = Term::variable(x);
    std::vector<Formula> alts;
    for (std::size_t i = 0; i < sets.size(); ++i)
      {
        std::vector<Formula> parts{Formula::pred(sets[i], v)};
        for (std::size_t j = 0; j < sets.size(); ++j)
          if (j != i)
            parts.push_back(Formula::negate(Formula::pred(sets[j], v)));
        alts.push_back(Formula::conj_all(parts));
      }
    return Formula::all1(x, Formula::disj_all(alts));
  }

  FsoFormula mso_to_fso(const Formula& f)
  {
    using FK = Formula::Kind;
    auto fun = [](const std::string& set) { return "F_" + set; };
    switch (f.kind())
      {
      case FK::True: return FsoFormula::truth();
      case FK::False: return FsoFormula::falsity();
      case FK::Pred: return FsoFormula::fun_eq(fun(f.name()), f.t(), hf::ordinal(1));
      case FK::Eq: return FsoFormula::eq(f.t(), f.u());
      case FK::Lt: return FsoFormula::lt(f.t(), f.u());
      case FK::Succ: return FsoFormula::eq(f.t().succ(f.dir()), f.u());
      case FK::Not: return FsoFormula::negate(mso_to_fso(f.a()));
      case FK::And: return FsoFormula::conj(mso_to_fso(f.a()), mso_to_fso(f.b()));
      case FK::Or: return FsoFormula::disj(mso_to_fso(f.a()), mso_to_fso(f.b()));
      case FK::Implies: return FsoFormula::implies(mso_to_fso(f.a()), mso_to_fso(f.b()));
      case FK::Iff:
        {
          FsoFormula a = mso_to_fso(f.a());
          FsoFormula b = mso_to_fso(f.b());
          return FsoFormula::conj(FsoFormula::implies(a, b), FsoFormula::implies(b, a));
        }
      case FK::Ex1: return FsoFormula::ex1(f.name(), mso_to_fso(f.a()));
      case FK::All1: return FsoFormula::all1(f.name(), mso_to_fso(f.a()));
      case FK::Ex2: return FsoFormula::ex_fun(fun(f.name()), hf::ordinal(2), mso_to_fso(f.a()));
      case FK::All2: return FsoFormula::all_fun(fun(f.name()), hf::ordinal(2), mso_to_fso(f.a()));
      }
    return FsoFormula::falsity();
  }

  Formula fso_to_mso(const FsoFormula& f) { return Interpreter(f).run(f); }

}
