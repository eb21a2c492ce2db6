#include <msotree/logic/formula.hpp>
#include <msotree/error.hpp>

#include <cctype>
#include <functional>

namespace msotree
{

  Term Term::succ(unsigned d) const
  {
    Term r = *this;
    r.dirs.push_back(d);
    return r;
  }

  Term Term::parent() const
  {
    Term r = *this;
    r.dirs.pop_back();
    return r;
  }

  std::string render(const Term& t)
  {
    std::string out;
    for (auto it = t.dirs.rbegin(); it != t.dirs.rend(); ++it)
      out += "s" + std::to_string(*it) + "(";
    out += t.is_root ? "root" : t.var;
    out.append(t.dirs.size(), ')');
    return out;
  }

  struct Formula::Node
  {
    Kind kind;
    std::string name;
    unsigned dir = 0;
    Term t, u;
    Formula a, b;
  };

  namespace
  {
    using Kind = Formula::Kind;
  }

  Formula Formula::truth()
  {
    static const Formula f(std::make_shared<Node>(Node{Kind::True, {}, 0, {}, {}, {}, {}}));
    return f;
  }

  Formula Formula::falsity()
  {
    static const Formula f(std::make_shared<Node>(Node{Kind::False, {}, 0, {}, {}, {}, {}}));
    return f;
  }

  Formula Formula::pred(std::string set_var, Term t)
  {
    return Formula(std::make_shared<Node>(
        Node{Kind::Pred, std::move(set_var), 0, std::move(t), {}, {}, {}}));
  }

  Formula Formula::eq(Term t, Term u)
  {
    return Formula(
        std::make_shared<Node>(Node{Kind::Eq, {}, 0, std::move(t), std::move(u), {}, {}}));
  }

  Formula Formula::lt(Term t, Term u)
  {
    return Formula(
        std::make_shared<Node>(Node{Kind::Lt, {}, 0, std::move(t), std::move(u), {}, {}}));
  }

  Formula Formula::succ(unsigned d, Term t, Term u)
  {
    return Formula(
        std::make_shared<Node>(Node{Kind::Succ, {}, d, std::move(t), std::move(u), {}, {}}));
  }

  Formula Formula::negate(Formula a)
  {
    return Formula(std::make_shared<Node>(Node{Kind::Not, {}, 0, {}, {}, a, {}}));
  }

  Formula Formula::conj(Formula a, Formula b)
  {
    return Formula(std::make_shared<Node>(Node{Kind::And, {}, 0, {}, {}, a, b}));
  }

  Formula Formula::disj(Formula a, Formula b)
  {
    return Formula(std::make_shared<Node>(Node{Kind::Or, {}, 0, {}, {}, a, b}));
  }

  Formula Formula::implies(Formula a, Formula b)
  {
    return Formula(
        std::make_shared<Node>(Node{Kind::Implies, {}, 0, {}, {}, a, b}));
  }

  Formula Formula::iff(Formula a, Formula b)
  {
    return Formula(std::make_shared<Node>(Node{Kind::Iff, {}, 0, {}, {}, a, b}));
  }

  Formula Formula::ex1(std::string var, Formula body)
  {
    return Formula(
        std::make_shared<Node>(Node{Kind::Ex1, std::move(var), 0, {}, {}, body, {}}));
  }

  Formula Formula::all1(std::string var, Formula body)
  {
    return Formula(
        std::make_shared<Node>(Node{Kind::All1, std::move(var), 0, {}, {}, body, {}}));
  }

  Formula Formula::ex2(std::string var, Formula body)
  {
    return Formula(
        std::make_shared<Node>(Node{Kind::Ex2, std::move(var), 0, {}, {}, body, {}}));
  }

  Formula Formula::all2(std::string var, Formula body)
  {
    return Formula(
        std::make_shared<Node>(Node{Kind::All2, std::move(var), 0, {}, {}, body, {}}));
  }

  Formula Formula::conj_all(const std::vector<Formula>& fs)
  {
    if (fs.empty())
      return truth();
    Formula r = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i)
      r = conj(r, fs[i]);
    return r;
  }

  Formula Formula::disj_all(const std::vector<Formula>& fs)
  {
    if (fs.empty())
      return falsity();
    Formula r = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i)
      r = disj(r, fs[i]);
    return r;
  }

  Formula::Kind Formula::kind() const { return node_->kind; }
  const std::string& Formula::name() const { return node_->name; }
  unsigned Formula::dir() const { return node_->dir; }
  const Term& Formula::t() const { return node_->t; }
  const Term& Formula::u() const { return node_->u; }

  const Formula& Formula::a() const { return node_->a; }
  const Formula& Formula::b() const { return node_->b; }

  bool Formula::is_quantifier() const
  {
    auto k = kind();
    return k == Kind::Ex1 || k == Kind::All1 || k == Kind::Ex2 || k == Kind::All2;
  }

  bool Formula::is_binary() const
  {
    auto k = kind();
    return k == Kind::And || k == Kind::Or || k == Kind::Implies || k == Kind::Iff;
  }

  bool operator==(const Formula& x, const Formula& y)
  {
    if (x.node_ == y.node_)
      return true;
    const auto& n = *x.node_;
    const auto& m = *y.node_;
    if (n.kind != m.kind || n.name != m.name || n.dir != m.dir || !(n.t == m.t)
        || !(n.u == m.u))
      return false;
    if (static_cast<bool>(n.a.node_) != static_cast<bool>(m.a.node_)
        || static_cast<bool>(n.b.node_) != static_cast<bool>(m.b.node_))
      return false;
    if (n.a.node_ && !(n.a == m.a))
      return false;
    if (n.b.node_ && !(n.b == m.b))
      return false;
    return true;
  }

  std::size_t Formula::size() const
  {
    std::size_t s = 1;
    if (node_->a.node_)
      s += a().size();
    if (node_->b.node_)
      s += b().size();
    return s;
  }

  // ---------------------------------------------------------------- parser

  namespace
  {
    enum class Tok
    {
      Ident,
      LParen,
      RParen,
      Dot,
      Comma,
      Eq,
      Lt,
      Not,
      Or,
      And,
      Implies,
      Iff,
      End,
    };

    struct Token
    {
      Tok tok;
      std::string text;
      std::size_t line, col;
    };

    bool is_ident_char(char c)
    {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }

    // "s12" -> 12, "succ3" -> 3 with the given prefix, or -1
    long numbered(const std::string& s, std::string_view prefix)
    {
      if (s.size() <= prefix.size() || s.compare(0, prefix.size(), prefix) != 0)
        return -1;
      long n = 0;
      for (std::size_t i = prefix.size(); i < s.size(); ++i)
        {
          if (!std::isdigit(static_cast<unsigned char>(s[i])))
            return -1;
          n = n * 10 + (s[i] - '0');
          if (n > 1000000)
            return -1;
        }
      return n;
    }

    bool is_keyword(const std::string& s)
    {
      return s == "true" || s == "false" || s == "root" || s == "ex1" || s == "all1"
             || s == "ex2" || s == "all2" || numbered(s, "s") >= 0
             || numbered(s, "succ") >= 0;
    }

    bool is_individual_name(const std::string& s)
    {
      return !s.empty() && std::islower(static_cast<unsigned char>(s[0])) && !is_keyword(s);
    }

    bool is_set_name(const std::string& s)
    {
      return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
    }

    class Parser
    {
    public:
      Parser(std::string_view text, const ParseOptions& opt) : opt_(opt)
      {
        tokenize(text);
      }

      Formula parse()
      {
        Formula f = imp();
        if (peek().tok != Tok::End)
          error(peek(), "unexpected '" + peek().text + "'");
        return f;
      }

    private:
      const ParseOptions& opt_;
      std::vector<Token> toks_;
      std::size_t pos_ = 0;
      std::vector<std::string> scope_;

      [[noreturn]] void error(const Token& at, const std::string& msg,
                              ErrorKind kind = ErrorKind::SyntaxError)
      {
        fail(kind, "line " + std::to_string(at.line) + ", column " + std::to_string(at.col)
                       + ": " + msg);
      }

      void tokenize(std::string_view s)
      {
        std::size_t line = 1, col = 1;
        std::size_t i = 0;
        auto advance = [&](std::size_t n) {
          for (std::size_t k = 0; k < n; ++k, ++i)
            {
              if (s[i] == '\n')
                {
                  ++line;
                  col = 1;
                }
              else
                ++col;
            }
        };
        while (i < s.size())
          {
            char c = s[i];
            if (std::isspace(static_cast<unsigned char>(c)))
              {
                advance(1);
                continue;
              }
            Token t{Tok::End, {}, line, col};
            if (std::isalpha(static_cast<unsigned char>(c)))
              {
                std::size_t j = i;
                while (j < s.size() && is_ident_char(s[j]))
                  ++j;
                t.tok = Tok::Ident;
                t.text = std::string(s.substr(i, j - i));
                advance(j - i);
                toks_.push_back(std::move(t));
                continue;
              }
            auto single = [&](Tok k, std::size_t n) {
              t.tok = k;
              t.text = std::string(s.substr(i, n));
              advance(n);
              toks_.push_back(t);
            };
            if (s.substr(i, 3) == "<->")
              single(Tok::Iff, 3);
            else if (s.substr(i, 2) == "->")
              single(Tok::Implies, 2);
            else if (c == '(')
              single(Tok::LParen, 1);
            else if (c == ')')
              single(Tok::RParen, 1);
            else if (c == '.')
              single(Tok::Dot, 1);
            else if (c == ',')
              single(Tok::Comma, 1);
            else if (c == '=')
              single(Tok::Eq, 1);
            else if (c == '<')
              single(Tok::Lt, 1);
            else if (c == '~')
              single(Tok::Not, 1);
            else if (c == '|')
              single(Tok::Or, 1);
            else if (c == '&')
              single(Tok::And, 1);
            else
              {
                Token bad{Tok::End, std::string(1, c), line, col};
                error(bad, std::string("unexpected character '") + c + "'");
              }
          }
        toks_.push_back(Token{Tok::End, "end of input", line, col});
      }

      const Token& peek(std::size_t k = 0) const
      {
        return toks_[std::min(pos_ + k, toks_.size() - 1)];
      }

      const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

      bool accept(Tok t)
      {
        if (peek().tok != t)
          return false;
        take();
        return true;
      }

      const Token& expect(Tok t, const char* what)
      {
        if (peek().tok != t)
          error(peek(), std::string("expected ") + what + ", found '" + peek().text + "'");
        return take();
      }

      bool bound(const std::string& v) const
      {
        for (const auto& s : scope_)
          if (s == v)
            return true;
        return false;
      }

      void use(const Token& at, const std::string& v)
      {
        if (opt_.closed && !bound(v))
          error(at, "unbound variable '" + v + "'", ErrorKind::UnboundVariable);
      }

      Formula imp()
      {
        Formula l = disj();
        if (accept(Tok::Implies))
          return Formula::implies(l, imp());
        if (accept(Tok::Iff))
          return Formula::iff(l, imp());
        return l;
      }

      Formula disj()
      {
        Formula l = conj();
        while (accept(Tok::Or))
          l = Formula::disj(l, conj());
        return l;
      }

      Formula conj()
      {
        Formula l = unary();
        while (accept(Tok::And))
          l = Formula::conj(l, unary());
        return l;
      }

      Formula unary()
      {
        if (accept(Tok::Not))
          return Formula::negate(unary());
        const Token& t = peek();
        if (t.tok == Tok::Ident
            && (t.text == "ex1" || t.text == "all1" || t.text == "ex2" || t.text == "all2"))
          return quantifier();
        return primary();
      }

      Formula quantifier()
      {
        std::string q = take().text;
        bool second = q.back() == '2';
        std::vector<std::string> vars;
        do
          {
            const Token& v = expect(Tok::Ident, "a variable");
            if (second ? !is_set_name(v.text) : !is_individual_name(v.text))
              error(v, std::string("'") + v.text + "' is not a valid "
                           + (second ? "set" : "individual") + " variable name");
            vars.push_back(v.text);
          }
        while (accept(Tok::Comma));
        expect(Tok::Dot, "'.'");
        for (const auto& v : vars)
          scope_.push_back(v);
        Formula body = imp();
        scope_.resize(scope_.size() - vars.size());
        for (auto it = vars.rbegin(); it != vars.rend(); ++it)
          {
            if (q == "ex1")
              body = Formula::ex1(*it, body);
            else if (q == "all1")
              body = Formula::all1(*it, body);
            else if (q == "ex2")
              body = Formula::ex2(*it, body);
            else
              body = Formula::all2(*it, body);
          }
        return body;
      }

      Formula primary()
      {
        const Token& t = peek();
        if (accept(Tok::LParen))
          {
            Formula f = imp();
            expect(Tok::RParen, "')'");
            return f;
          }
        if (t.tok != Tok::Ident)
          error(t, "expected a formula, found '" + t.text + "'");
        if (t.text == "true")
          {
            take();
            return Formula::truth();
          }
        if (t.text == "false")
          {
            take();
            return Formula::falsity();
          }
        if (long d = numbered(t.text, "succ"); d >= 0)
          {
            const Token& at = take();
            check_dir(at, d);
            expect(Tok::LParen, "'('");
            Term a = term();
            expect(Tok::Comma, "','");
            Term b = term();
            expect(Tok::RParen, "')'");
            return Formula::succ(static_cast<unsigned>(d), std::move(a), std::move(b));
          }
        if (is_set_name(t.text))
          {
            const Token& at = take();
            use(at, at.text);
            expect(Tok::LParen, "'('");
            Term a = term();
            expect(Tok::RParen, "')'");
            return Formula::pred(at.text, std::move(a));
          }
        Term a = term();
        if (accept(Tok::Eq))
          return Formula::eq(std::move(a), term());
        if (accept(Tok::Lt))
          return Formula::lt(std::move(a), term());
        error(peek(), "expected '=' or '<', found '" + peek().text + "'");
      }

      void check_dir(const Token& at, long d)
      {
        if (d < 0 || static_cast<unsigned long>(d) >= opt_.arity)
          error(at, "direction " + std::to_string(d) + " is not below arity "
                        + std::to_string(opt_.arity),
                ErrorKind::UnknownDirection);
      }

      Term term()
      {
        const Token& t = expect(Tok::Ident, "a term");
        if (t.text == "root")
          return Term::root();
        if (long d = numbered(t.text, "s"); d >= 0)
          {
            check_dir(t, d);
            expect(Tok::LParen, "'('");
            Term inner = term();
            expect(Tok::RParen, "')'");
            return inner.succ(static_cast<unsigned>(d));
          }
        if (!is_individual_name(t.text))
          error(t, "'" + t.text + "' is not an individual term");
        use(t, t.text);
        return Term::variable(t.text);
      }
    };

    // ------------------------------------------------------------ renderer

    int level(const Formula& f)
    {
      switch (f.kind())
        {
        case Kind::Implies:
        case Kind::Iff: return 0;
        case Kind::Or: return 1;
        case Kind::And: return 2;
        case Kind::Not: return 3;
        case Kind::Ex1:
        case Kind::All1:
        case Kind::Ex2:
        case Kind::All2: return 0;
        default: return 4;
        }
    }

    void render_into(const Formula& f, int min_level, std::string& out)
    {
      bool wrap = level(f) < min_level || (f.is_quantifier() && min_level > 0);
      if (wrap)
        out += '(';
      switch (f.kind())
        {
        case Kind::True: out += "true"; break;
        case Kind::False: out += "false"; break;
        case Kind::Pred: out += f.name() + "(" + render(f.t()) + ")"; break;
        case Kind::Eq: out += render(f.t()) + " = " + render(f.u()); break;
        case Kind::Lt: out += render(f.t()) + " < " + render(f.u()); break;
        case Kind::Succ:
          out += "succ" + std::to_string(f.dir()) + "(" + render(f.t()) + ", " + render(f.u())
                 + ")";
          break;
        case Kind::Not:
          out += "~";
          render_into(f.a(), 3, out);
          break;
        case Kind::And:
          render_into(f.a(), 2, out);
          out += " & ";
          render_into(f.b(), 3, out);
          break;
        case Kind::Or:
          render_into(f.a(), 1, out);
          out += " | ";
          render_into(f.b(), 2, out);
          break;
        case Kind::Implies:
        case Kind::Iff:
          render_into(f.a(), 1, out);
          out += f.kind() == Kind::Implies ? " -> " : " <-> ";
          render_into(f.b(), 0, out);
          break;
        case Kind::Ex1: out += "ex1 "; break;
        case Kind::All1: out += "all1 "; break;
        case Kind::Ex2: out += "ex2 "; break;
        case Kind::All2: out += "all2 "; break;
        }
      if (f.is_quantifier())
        {
          out += f.name() + ". ";
          render_into(f.a(), 0, out);
        }
      if (wrap)
        out += ')';
    }

    void collect_free(const Formula& f, std::vector<std::string>& bound,
                      std::set<std::string>& ind, std::set<std::string>& sets)
    {
      auto is_bound = [&](const std::string& v) {
        return std::find(bound.begin(), bound.end(), v) != bound.end();
      };
      auto term = [&](const Term& t) {
        if (!t.is_root && !is_bound(t.var))
          ind.insert(t.var);
      };
      switch (f.kind())
        {
        case Kind::True:
        case Kind::False: return;
        case Kind::Pred:
          if (!is_bound(f.name()))
            sets.insert(f.name());
          term(f.t());
          return;
        case Kind::Eq:
        case Kind::Lt:
        case Kind::Succ:
          term(f.t());
          term(f.u());
          return;
        case Kind::Not: collect_free(f.a(), bound, ind, sets); return;
        case Kind::And:
        case Kind::Or:
        case Kind::Implies:
        case Kind::Iff:
          collect_free(f.a(), bound, ind, sets);
          collect_free(f.b(), bound, ind, sets);
          return;
        case Kind::Ex1:
        case Kind::All1:
        case Kind::Ex2:
        case Kind::All2:
          bound.push_back(f.name());
          collect_free(f.a(), bound, ind, sets);
          bound.pop_back();
          return;
        }
    }

    template <class Fn>
    void visit(const Formula& f, const Fn& fn)
    {
      fn(f);
      if (f.kind() == Kind::Not || f.is_quantifier())
        visit(f.a(), fn);
      else if (f.is_binary())
        {
          visit(f.a(), fn);
          visit(f.b(), fn);
        }
    }
  }

  Formula parse_formula(std::string_view text, const ParseOptions& options)
  {
    if (options.arity == 0)
      fail(ErrorKind::SyntaxError, "arity must be at least 1");
    return Parser(text, options).parse();
  }

  Formula parse_formula(std::string_view text, unsigned arity, bool closed)
  {
    return parse_formula(text, ParseOptions{arity, closed});
  }

  std::string render(const Formula& f)
  {
    std::string out;
    render_into(f, 0, out);
    return out;
  }

  std::set<std::string> free_individuals(const Formula& f)
  {
    std::vector<std::string> bound;
    std::set<std::string> ind, sets;
    collect_free(f, bound, ind, sets);
    return ind;
  }

  std::set<std::string> free_sets(const Formula& f)
  {
    std::vector<std::string> bound;
    std::set<std::string> ind, sets;
    collect_free(f, bound, ind, sets);
    return sets;
  }

  bool is_closed(const Formula& f) { return free_individuals(f).empty() && free_sets(f).empty(); }

  std::set<std::string> all_names(const Formula& f)
  {
    std::set<std::string> names;
    visit(f, [&](const Formula& g) {
      if (g.kind() == Kind::Pred || g.is_quantifier())
        names.insert(g.name());
      for (const Term* t : {&g.t(), &g.u()})
        if (!t->is_root)
          names.insert(t->var);
    });
    return names;
  }

  int max_direction(const Formula& f)
  {
    int m = -1;
    visit(f, [&](const Formula& g) {
      if (g.kind() == Kind::Succ)
        m = std::max(m, static_cast<int>(g.dir()));
      for (const Term* t : {&g.t(), &g.u()})
        for (unsigned d : t->dirs)
          m = std::max(m, static_cast<int>(d));
    });
    return m;
  }

  bool is_relational(const Formula& f)
  {
    bool ok = true;
    visit(f, [&](const Formula& g) {
      switch (g.kind())
        {
        case Kind::Pred: ok = ok && g.t().is_variable(); break;
        case Kind::Eq:
        case Kind::Lt:
        case Kind::Succ: ok = ok && g.t().is_variable() && g.u().is_variable(); break;
        default: break;
        }
    });
    return ok;
  }

  std::string FreshNames::next(const std::string& base)
  {
    std::string name = base;
    for (std::size_t i = 1; used_.count(name) || is_keyword(name); ++i)
      name = base + std::to_string(i);
    used_.insert(name);
    return name;
  }

}
