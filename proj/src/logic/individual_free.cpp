#include <msotree/logic/individual_free.hpp>
#include <msotree/error.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace msotree
{

  struct IfFormula::Node
  {
    Kind kind;
    VarId x = 0, y = 0;
    unsigned dir = 0;
    IfFormula a, b;
  };

  namespace
  {
    using IK = IfFormula::Kind;
  }

  IfFormula IfFormula::subset(VarId x, VarId y)
  {
    return IfFormula(std::make_shared<Node>(Node{IK::Subset, x, y, 0, {}, {}}));
  }

  IfFormula IfFormula::succ(unsigned d, VarId x, VarId y)
  {
    return IfFormula(std::make_shared<Node>(Node{IK::Succ, x, y, d, {}, {}}));
  }

  IfFormula IfFormula::negate(IfFormula a)
  {
    return IfFormula(std::make_shared<Node>(Node{IK::Not, 0, 0, 0, a, {}}));
  }

  IfFormula IfFormula::disj(IfFormula a, IfFormula b)
  {
    return IfFormula(std::make_shared<Node>(Node{IK::Or, 0, 0, 0, a, b}));
  }

  IfFormula IfFormula::conj(IfFormula a, IfFormula b)
  {
    return IfFormula(std::make_shared<Node>(Node{IK::And, 0, 0, 0, a, b}));
  }

  IfFormula IfFormula::implies(IfFormula a, IfFormula b)
  {
    return IfFormula(std::make_shared<Node>(Node{IK::Implies, 0, 0, 0, a, b}));
  }

  IfFormula IfFormula::exists(VarId x, IfFormula body)
  {
    return IfFormula(std::make_shared<Node>(Node{IK::Exists, x, 0, 0, body, {}}));
  }

  IfFormula IfFormula::forall(VarId x, IfFormula body)
  {
    return IfFormula(std::make_shared<Node>(Node{IK::Forall, x, 0, 0, body, {}}));
  }

  IfFormula::Kind IfFormula::kind() const { return node_->kind; }
  VarId IfFormula::x() const { return node_->x; }
  VarId IfFormula::y() const { return node_->y; }
  unsigned IfFormula::dir() const { return node_->dir; }
  const IfFormula& IfFormula::a() const { return node_->a; }
  const IfFormula& IfFormula::b() const { return node_->b; }

  bool IfFormula::is_core() const
  {
    switch (kind())
      {
      case IK::Subset:
      case IK::Succ: return true;
      case IK::Not:
      case IK::Exists: return a().is_core();
      case IK::Or: return a().is_core() && b().is_core();
      default: return false;
      }
  }

  std::size_t IfFormula::size() const
  {
    std::size_t s = 1;
    if (node_->a.node_)
      s += a().size();
    if (node_->b.node_)
      s += b().size();
    return s;
  }

  bool operator==(const IfFormula& p, const IfFormula& q)
  {
    if (p.node_ == q.node_)
      return true;
    const auto& n = *p.node_;
    const auto& m = *q.node_;
    if (n.kind != m.kind || n.x != m.x || n.y != m.y || n.dir != m.dir)
      return false;
    if (n.a.node_ && !(n.a == m.a))
      return false;
    if (n.b.node_ && !(n.b == m.b))
      return false;
    return true;
  }

  namespace
  {
    void collect_free(const IfFormula& f, std::vector<VarId>& bound, std::set<VarId>& out)
    {
      auto add = [&](VarId v) {
        if (std::find(bound.begin(), bound.end(), v) == bound.end())
          out.insert(v);
      };
      switch (f.kind())
        {
        case IK::Subset:
        case IK::Succ:
          add(f.x());
          add(f.y());
          return;
        case IK::Not: collect_free(f.a(), bound, out); return;
        case IK::Or:
        case IK::And:
        case IK::Implies:
          collect_free(f.a(), bound, out);
          collect_free(f.b(), bound, out);
          return;
        case IK::Exists:
        case IK::Forall:
          bound.push_back(f.x());
          collect_free(f.a(), bound, out);
          bound.pop_back();
          return;
        }
    }

    int level(const IfFormula& f)
    {
      switch (f.kind())
        {
        case IK::Implies:
        case IK::Exists:
        case IK::Forall: return 0;
        case IK::Or: return 1;
        case IK::And: return 2;
        case IK::Not: return 3;
        default: return 4;
        }
    }

    void render_into(const IfFormula& f, const std::vector<std::string>& names, int min_level,
                     std::string& out)
    {
      auto name = [&](VarId v) {
        return v < names.size() ? names[v] : "X" + std::to_string(v);
      };
      bool quant = f.kind() == IK::Exists || f.kind() == IK::Forall;
      bool wrap = level(f) < min_level || (quant && min_level > 0);
      if (wrap)
        out += '(';
      switch (f.kind())
        {
        case IK::Subset: out += name(f.x()) + " <= " + name(f.y()); break;
        case IK::Succ:
          out += "Succ" + std::to_string(f.dir()) + "(" + name(f.x()) + "," + name(f.y()) + ")";
          break;
        case IK::Not:
          out += "~";
          render_into(f.a(), names, 3, out);
          break;
        case IK::Or:
          render_into(f.a(), names, 1, out);
          out += " | ";
          render_into(f.b(), names, 2, out);
          break;
        case IK::And:
          render_into(f.a(), names, 2, out);
          out += " & ";
          render_into(f.b(), names, 3, out);
          break;
        case IK::Implies:
          render_into(f.a(), names, 1, out);
          out += " -> ";
          render_into(f.b(), names, 0, out);
          break;
        case IK::Exists:
        case IK::Forall:
          out += (f.kind() == IK::Exists ? "ex2 " : "all2 ") + name(f.x()) + ". ";
          render_into(f.a(), names, 0, out);
          break;
        }
      if (wrap)
        out += ')';
    }

    long max_var_rec(const IfFormula& f)
    {
      long m = -1;
      switch (f.kind())
        {
        case IK::Subset:
        case IK::Succ: return std::max<long>(f.x(), f.y());
        case IK::Exists:
        case IK::Forall: m = f.x(); break;
        default: break;
        }
      if (f.kind() != IK::Subset && f.kind() != IK::Succ)
        m = std::max(m, max_var_rec(f.a()));
      if (f.kind() == IK::Or || f.kind() == IK::And || f.kind() == IK::Implies)
        m = std::max(m, max_var_rec(f.b()));
      return m;
    }
  }

  std::vector<VarId> free_vars(const IfFormula& f)
  {
    std::vector<VarId> bound;
    std::set<VarId> out;
    collect_free(f, bound, out);
    return {out.begin(), out.end()};
  }

  long max_var(const IfFormula& f) { return max_var_rec(f); }

  std::string render(const IfFormula& f, const std::vector<std::string>& names)
  {
    std::string out;
    render_into(f, names, 0, out);
    return out;
  }

  // ------------------------------------------------------------ relational

  namespace
  {
    using FK = Formula::Kind;

    class Relationalizer
    {
    public:
      Relationalizer(const Formula& f, unsigned arity) : fresh_(all_names(f)), arity_(arity) {}

      // (z ⊜ t)
      Formula is_term(const std::string& z, const Term& t)
      {
        if (!t.dirs.empty())
          {
            std::string zp = fresh_.next("z");
            return Formula::ex1(zp, Formula::conj(is_term(zp, t.parent()),
                                                  Formula::succ(t.dirs.back(),
                                                                Term::variable(zp),
                                                                Term::variable(z))));
          }
        if (!t.is_root)
          return Formula::eq(Term::variable(z), t);
        std::string zp = fresh_.next("z");
        std::vector<Formula> preds;
        for (unsigned d = 0; d < arity_; ++d)
          preds.push_back(Formula::succ(d, Term::variable(zp), Term::variable(z)));
        return Formula::negate(Formula::ex1(zp, Formula::disj_all(preds)));
      }

      // binary atom with both sides made variables
      Formula binary(const Formula& atom,
                     const std::function<Formula(Term, Term)>& rebuild)
      {
        const Term& t = atom.t();
        const Term& u = atom.u();
        std::vector<std::pair<std::string, Formula>> defs;
        auto name_of = [&](const Term& term) {
          if (term.is_variable())
            return term;
          std::string z = fresh_.next("z");
          defs.emplace_back(z, is_term(z, term));
          return Term::variable(z);
        };
        Term tv = name_of(t);
        Term uv = name_of(u);
        Formula body = rebuild(tv, uv);
        for (auto it = defs.rbegin(); it != defs.rend(); ++it)
          body = Formula::conj(it->second, body);
        for (auto it = defs.rbegin(); it != defs.rend(); ++it)
          body = Formula::ex1(it->first, body);
        return body;
      }

      Formula run(const Formula& f)
      {
        switch (f.kind())
          {
          case FK::True:
          case FK::False: return f;
          case FK::Pred:
            {
              if (f.t().is_variable())
                return f;
              std::string z = fresh_.next("z");
              return Formula::ex1(
                  z, Formula::conj(is_term(z, f.t()), Formula::pred(f.name(), Term::variable(z))));
            }
          case FK::Eq:
            if (f.t().is_variable())
              return is_term(f.t().var, f.u());
            if (f.u().is_variable())
              return is_term(f.u().var, f.t());
            {
              std::string z = fresh_.next("z");
              return Formula::ex1(z, Formula::conj(is_term(z, f.t()), is_term(z, f.u())));
            }
          case FK::Lt:
            if (f.t().is_variable() && f.u().is_variable())
              return f;
            return binary(f, [](Term a, Term b) { return Formula::lt(a, b); });
          case FK::Succ:
            if (f.t().is_variable() && f.u().is_variable())
              return f;
            {
              unsigned d = f.dir();
              return binary(f, [d](Term a, Term b) { return Formula::succ(d, a, b); });
            }
          case FK::Not: return Formula::negate(run(f.a()));
          case FK::And: return Formula::conj(run(f.a()), run(f.b()));
          case FK::Or: return Formula::disj(run(f.a()), run(f.b()));
          case FK::Implies: return Formula::implies(run(f.a()), run(f.b()));
          case FK::Iff: return Formula::iff(run(f.a()), run(f.b()));
          case FK::Ex1: return Formula::ex1(f.name(), run(f.a()));
          case FK::All1: return Formula::all1(f.name(), run(f.a()));
          case FK::Ex2: return Formula::ex2(f.name(), run(f.a()));
          case FK::All2: return Formula::all2(f.name(), run(f.a()));
          }
        return f;
      }

    private:
      FreshNames fresh_;
      unsigned arity_;
    };
  }

  Formula to_relational(const Formula& f, unsigned arity)
  {
    return Relationalizer(f, arity).run(f);
  }

  // ------------------------------------------------------- individual-free

  IfFormula if_sing(VarId x, VarId& next)
  {
    VarId w = next++;
    IfFormula x_empty = IfFormula::forall(w, IfFormula::subset(x, w));
    VarId y = next++;
    VarId w2 = next++;
    IfFormula y_empty = IfFormula::forall(w2, IfFormula::subset(y, w2));
    return IfFormula::conj(
        IfFormula::negate(x_empty),
        IfFormula::forall(y, IfFormula::implies(IfFormula::subset(y, x),
                                                IfFormula::disj(y_empty, IfFormula::subset(x, y)))));
  }

  namespace
  {
    class IfTranslator
    {
    public:
      IfTranslator(unsigned arity, IfTranslation& out) : arity_(arity), out_(out) {}

      VarId fresh(const std::string& name)
      {
        out_.names.push_back(name);
        return static_cast<VarId>(out_.names.size() - 1);
      }

      VarId helper() { return fresh("_H" + std::to_string(out_.names.size())); }

      void bind_free(const std::string& name) { scope_.emplace_back(name, fresh(name)); }

      VarId lookup(const std::string& name) const
      {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
          if (it->first == name)
            return it->second;
        fail(ErrorKind::UnboundVariable, "variable '" + name + "' is not in scope");
      }

      IfFormula sing(VarId x)
      {
        VarId next = static_cast<VarId>(out_.names.size());
        IfFormula s = if_sing(x, next);
        while (out_.names.size() < next)
          helper();
        return s;
      }

      IfFormula truth()
      {
        VarId z = helper();
        return IfFormula::exists(z, IfFormula::subset(z, z));
      }

      IfFormula conj_all(std::vector<IfFormula> fs)
      {
        IfFormula r = fs.front();
        for (std::size_t i = 1; i < fs.size(); ++i)
          r = IfFormula::conj(r, fs[i]);
        return r;
      }

      // x < y: y lies in every set that holds the children of x and is
      // closed under all successors
      IfFormula less(VarId x, VarId y)
      {
        VarId z = helper();
        std::vector<IfFormula> children;
        for (unsigned d = 0; d < arity_; ++d)
          children.push_back(IfFormula::succ(d, x, z));
        VarId u = helper();
        VarId v = helper();
        IfFormula nonempty_u = IfFormula::exists(v, IfFormula::negate(IfFormula::subset(u, v)));
        std::vector<IfFormula> steps;
        for (unsigned d = 0; d < arity_; ++d)
          steps.push_back(IfFormula::succ(d, u, z));
        IfFormula closed = IfFormula::forall(
            u, IfFormula::implies(IfFormula::conj(IfFormula::subset(u, z), nonempty_u),
                                  conj_all(steps)));
        return IfFormula::forall(
            z, IfFormula::implies(IfFormula::conj(conj_all(children), closed),
                                  IfFormula::subset(y, z)));
      }

      IfFormula run(const Formula& f)
      {
        switch (f.kind())
          {
          case FK::True: return truth();
          case FK::False: return IfFormula::negate(truth());
          case FK::Pred: return IfFormula::subset(lookup(f.t().var), lookup(f.name()));
          case FK::Succ:
            return IfFormula::succ(f.dir(), lookup(f.t().var), lookup(f.u().var));
          case FK::Eq:
            {
              VarId x = lookup(f.t().var);
              VarId y = lookup(f.u().var);
              return IfFormula::conj(IfFormula::subset(x, y), IfFormula::subset(y, x));
            }
          case FK::Lt: return less(lookup(f.t().var), lookup(f.u().var));
          case FK::Not: return IfFormula::negate(run(f.a()));
          case FK::And: return IfFormula::conj(run(f.a()), run(f.b()));
          case FK::Or: return IfFormula::disj(run(f.a()), run(f.b()));
          case FK::Implies: return IfFormula::implies(run(f.a()), run(f.b()));
          case FK::Iff:
            {
              IfFormula a = run(f.a());
              IfFormula b = run(f.b());
              return IfFormula::conj(IfFormula::implies(a, b), IfFormula::implies(b, a));
            }
          case FK::Ex1:
          case FK::All1:
            {
              VarId x = fresh(f.name());
              IfFormula guard = sing(x);
              scope_.emplace_back(f.name(), x);
              IfFormula body = run(f.a());
              scope_.pop_back();
              return f.kind() == FK::Ex1
                         ? IfFormula::exists(x, IfFormula::conj(guard, body))
                         : IfFormula::forall(x, IfFormula::implies(guard, body));
            }
          case FK::Ex2:
          case FK::All2:
            {
              VarId x = fresh(f.name());
              scope_.emplace_back(f.name(), x);
              IfFormula body = run(f.a());
              scope_.pop_back();
              return f.kind() == FK::Ex2 ? IfFormula::exists(x, body)
                                         : IfFormula::forall(x, body);
            }
          }
        fail(ErrorKind::NotRelational, "unexpected formula");
      }

    private:
      unsigned arity_;
      IfTranslation& out_;
      std::vector<std::pair<std::string, VarId>> scope_;
    };
  }

  IfTranslation to_individual_free(const Formula& relational, unsigned arity)
  {
    if (!is_relational(relational))
      fail(ErrorKind::NotRelational, "compound terms remain in " + render(relational));
    IfTranslation out;
    IfTranslator tr(arity, out);
    for (const auto& name : free_sets(relational))
      tr.bind_free(name);
    for (const auto& name : free_individuals(relational))
      tr.bind_free(name);
    out.free_count = out.names.size();
    out.formula = tr.run(relational);
    return out;
  }

  namespace
  {
    IfFormula neg(const IfFormula& p)
    {
      return p.kind() == IK::Not ? p.a() : IfFormula::negate(p);
    }
  }

  IfFormula to_core_if(const IfFormula& f)
  {
    switch (f.kind())
      {
      case IK::Subset:
      case IK::Succ: return f;
      case IK::Not:
        {
          IfFormula a = to_core_if(f.a());
          return a == f.a() ? f : IfFormula::negate(a);
        }
      case IK::Or:
        {
          IfFormula a = to_core_if(f.a());
          IfFormula b = to_core_if(f.b());
          return a == f.a() && b == f.b() ? f : IfFormula::disj(a, b);
        }
      case IK::Exists:
        {
          IfFormula a = to_core_if(f.a());
          return a == f.a() ? f : IfFormula::exists(f.x(), a);
        }
      case IK::And:
        return neg(IfFormula::disj(neg(to_core_if(f.a())), neg(to_core_if(f.b()))));
      case IK::Implies: return IfFormula::disj(neg(to_core_if(f.a())), to_core_if(f.b()));
      case IK::Forall: return neg(IfFormula::exists(f.x(), neg(to_core_if(f.a()))));
      }
    return f;
  }

}
