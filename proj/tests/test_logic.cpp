#include <doctest.h>

#include <msotree/error.hpp>
#include <msotree/logic/formula.hpp>
#include <msotree/logic/fso.hpp>
#include <msotree/logic/individual_free.hpp>

#include <random>

using namespace msotree;
using FK = Formula::Kind;
using IK = IfFormula::Kind;

namespace
{
  ErrorKind error_of(const std::function<void()>& fn)
  {
    try
      {
        fn();
      }
    catch (const Error& e)
      {
        return e.kind();
      }
    FAIL("no error raised");
    return ErrorKind::Format;
  }

  Term var(const char* x) { return Term::variable(x); }

  Term random_term(std::mt19937& rng, const std::vector<std::string>& ind)
  {
    Term t = ind.empty() || rng() % 3 == 0 ? Term::root() : Term::variable(ind[rng() % ind.size()]);
    for (unsigned n = rng() % 3; n > 0; --n)
      t = t.succ(rng() % 2);
    return t;
  }

  Formula random_formula(std::mt19937& rng, int depth, std::vector<std::string>& ind,
                         std::vector<std::string>& sets)
  {
    unsigned pick = depth == 0 ? rng() % 5 : rng() % 14;
    switch (pick)
      {
      case 0: return rng() % 2 ? Formula::truth() : Formula::falsity();
      case 1:
        if (!sets.empty())
          return Formula::pred(sets[rng() % sets.size()], random_term(rng, ind));
        [[fallthrough]];
      case 2: return Formula::eq(random_term(rng, ind), random_term(rng, ind));
      case 3: return Formula::lt(random_term(rng, ind), random_term(rng, ind));
      case 4: return Formula::succ(rng() % 2, random_term(rng, ind), random_term(rng, ind));
      case 5: return Formula::negate(random_formula(rng, depth - 1, ind, sets));
      case 6:
        return Formula::conj(random_formula(rng, depth - 1, ind, sets),
                             random_formula(rng, depth - 1, ind, sets));
      case 7:
        return Formula::disj(random_formula(rng, depth - 1, ind, sets),
                             random_formula(rng, depth - 1, ind, sets));
      case 8:
        return Formula::implies(random_formula(rng, depth - 1, ind, sets),
                                random_formula(rng, depth - 1, ind, sets));
      case 9:
        return Formula::iff(random_formula(rng, depth - 1, ind, sets),
                            random_formula(rng, depth - 1, ind, sets));
      case 10:
      case 11:
        {
          std::string x = "x" + std::to_string(ind.size());
          ind.push_back(x);
          Formula body = random_formula(rng, depth - 1, ind, sets);
          ind.pop_back();
          return pick == 10 ? Formula::ex1(x, body) : Formula::all1(x, body);
        }
      default:
        {
          std::string x = "X" + std::to_string(sets.size());
          sets.push_back(x);
          Formula body = random_formula(rng, depth - 1, ind, sets);
          sets.pop_back();
          return pick == 12 ? Formula::ex2(x, body) : Formula::all2(x, body);
        }
      }
  }
}

TEST_CASE("parser examples")
{
  Formula f = parse_formula("ex2 X. all1 x. X(x)");
  REQUIRE(f.kind() == FK::Ex2);
  CHECK(f.name() == "X");
  REQUIRE(f.a().kind() == FK::All1);
  CHECK(f.a().a() == Formula::pred("X", var("x")));

  Formula g = parse_formula("ex1 x. x < x");
  CHECK(g == Formula::ex1("x", Formula::lt(var("x"), var("x"))));

  CHECK(error_of([] { parse_formula("s2(root) = root", 2); }) == ErrorKind::UnknownDirection);
  CHECK_NOTHROW(parse_formula("s2(root) = root", 3));
  CHECK(error_of([] { parse_formula("X(x)", 2, true); }) == ErrorKind::UnboundVariable);
  CHECK_NOTHROW(parse_formula("X(x)", 2, false));
  CHECK(error_of([] { parse_formula("ex1 x. x <", 2); }) == ErrorKind::SyntaxError);
  CHECK(error_of([] { parse_formula("ex1 X. true", 2); }) == ErrorKind::SyntaxError);
  CHECK(error_of([] { parse_formula("ex2 x. true", 2); }) == ErrorKind::SyntaxError);
  CHECK(error_of([] { parse_formula("x = y $", 2); }) == ErrorKind::SyntaxError);
  try
    {
      parse_formula("true &\n  (x = ", 2);
    }
  catch (const Error& e)
    {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("precedence and associativity")
{
  Formula f = parse_formula("~a = b & c = d | e = f -> g = h");
  REQUIRE(f.kind() == FK::Implies);
  REQUIRE(f.a().kind() == FK::Or);
  REQUIRE(f.a().a().kind() == FK::And);
  CHECK(f.a().a().a().kind() == FK::Not);

  Formula q = parse_formula("ex1 x. x = x | x < x");
  REQUIRE(q.kind() == FK::Ex1);
  CHECK(q.a().kind() == FK::Or);

  Formula r = parse_formula("a = a -> b = b -> c = c");
  REQUIRE(r.kind() == FK::Implies);
  CHECK(r.b().kind() == FK::Implies);

  Formula m = parse_formula("ex1 x, y. succ1(x, y)");
  CHECK(m == Formula::ex1("x", Formula::ex1("y", Formula::succ(1, var("x"), var("y")))));

  CHECK(parse_formula("s1(s0(root)) = x").t() == Term::root().succ(0).succ(1));
}

TEST_CASE("render/parse round trip")
{
  for (const char* text :
       {"ex2 X. all1 x. X(x)", "~(ex1 x. x < x)", "all1 x. all1 y. all1 z. x < y -> y < z -> x < z",
        "(a = b -> c = d) -> e = e", "a = b & (c = d | e = f)", "~~true", "X(s0(s1(root)))",
        "ex1 x. (ex1 y. x = y) & x = x", "a = a <-> (b = b <-> c = c)"})
    {
      Formula f = parse_formula(text);
      CHECK(parse_formula(render(f)) == f);
      CHECK(render(parse_formula(render(f))) == render(f));
    }
  std::mt19937 rng(5);
  for (int i = 0; i < 300; ++i)
    {
      std::vector<std::string> ind, sets;
      Formula f = random_formula(rng, 5, ind, sets);
      INFO(render(f));
      CHECK(parse_formula(render(f)) == f);
    }
}

TEST_CASE("free variables")
{
  Formula f = parse_formula("ex1 x. X(x) & Y(y) & (ex2 Y. Y(z))");
  CHECK(free_sets(f) == std::set<std::string>{"X", "Y"});
  CHECK(free_individuals(f) == std::set<std::string>{"y", "z"});
  CHECK_FALSE(is_closed(f));
  CHECK(is_closed(parse_formula("all2 X. ex1 x. X(x)")));
}

TEST_CASE("relational translation")
{
  Formula same = parse_formula("X(x)");
  CHECK(to_relational(same, 2) == same);

  // X(root) -> ex1 z. (~ex1 z'. (succ0(z',z) | succ1(z',z))) & X(z)
  Formula r = to_relational(parse_formula("X(root)"), 2);
  REQUIRE(r.kind() == FK::Ex1);
  std::string z = r.name();
  REQUIRE(r.a().kind() == FK::And);
  const Formula& is_root = r.a().a();
  REQUIRE(is_root.kind() == FK::Not);
  REQUIRE(is_root.a().kind() == FK::Ex1);
  std::string zp = is_root.a().name();
  CHECK(is_root.a().a()
        == Formula::disj(Formula::succ(0, var(zp.c_str()), var(z.c_str())),
                         Formula::succ(1, var(zp.c_str()), var(z.c_str()))));
  CHECK(r.a().b() == Formula::pred("X", var(z.c_str())));

  // X(s0(x)) -> ex1 z. (ex1 z'. z' = x & succ0(z',z)) & X(z)
  Formula s = to_relational(parse_formula("X(s0(x))"), 2);
  REQUIRE(s.kind() == FK::Ex1);
  z = s.name();
  const Formula& def = s.a().a();
  REQUIRE(def.kind() == FK::Ex1);
  zp = def.name();
  CHECK(def.a()
        == Formula::conj(Formula::eq(var(zp.c_str()), var("x")),
                         Formula::succ(0, var(zp.c_str()), var(z.c_str()))));

  std::mt19937 rng(9);
  for (int i = 0; i < 200; ++i)
    {
      std::vector<std::string> ind, sets;
      Formula f = random_formula(rng, 4, ind, sets);
      Formula g = to_relational(f, 2);
      CHECK(is_relational(g));
      CHECK(free_sets(g) == free_sets(f));
      CHECK(free_individuals(g) == free_individuals(f));
    }
}

TEST_CASE("individual-free translation")
{
  auto t = to_individual_free(parse_formula("ex1 x. Y(x)"), 2);
  REQUIRE(t.free_count == 1);
  CHECK(t.names[0] == "Y");
  const IfFormula& f = t.formula;
  REQUIRE(f.kind() == IK::Exists);
  VarId x = f.x();
  CHECK(x > 0);
  REQUIRE(f.a().kind() == IK::And);
  VarId next = x + 1;
  CHECK(f.a().a() == if_sing(x, next));
  CHECK(f.a().b() == IfFormula::subset(x, 0));

  auto s = to_individual_free(parse_formula("ex1 x. ex1 y. succ0(x, y)"), 2);
  REQUIRE(s.formula.kind() == IK::Exists);
  const IfFormula& inner = s.formula.a().b();
  REQUIRE(inner.kind() == IK::Exists);
  CHECK(inner.a().b() == IfFormula::succ(0, s.formula.x(), inner.x()));

  CHECK(error_of([] { to_individual_free(parse_formula("X(s0(x))"), 2); })
        == ErrorKind::NotRelational);

  // nested binders get larger ids than every enclosing one
  auto n = to_individual_free(to_relational(parse_formula("all2 A. ex1 x. all1 y. A(x) -> x < y"), 2), 2);
  std::function<void(const IfFormula&, long)> check = [&](const IfFormula& g, long outer) {
    if (g.kind() == IK::Exists || g.kind() == IK::Forall)
      {
        CHECK(static_cast<long>(g.x()) > outer);
        check(g.a(), std::max<long>(outer, g.x()));
      }
    else if (!g.is_atom())
      {
        check(g.a(), outer);
        if (g.kind() != IK::Not)
          check(g.b(), outer);
      }
  };
  check(n.formula, -1);
  CHECK(free_vars(n.formula).empty());
}

TEST_CASE("core normalization")
{
  IfFormula a = IfFormula::subset(0, 1);
  IfFormula b = IfFormula::succ(1, 1, 0);
  CHECK(to_core_if(IfFormula::conj(a, b))
        == IfFormula::negate(IfFormula::disj(IfFormula::negate(a), IfFormula::negate(b))));
  CHECK(to_core_if(IfFormula::forall(2, IfFormula::subset(2, 0)))
        == IfFormula::negate(IfFormula::exists(2, IfFormula::negate(IfFormula::subset(2, 0)))));
  IfFormula core = IfFormula::exists(2, IfFormula::disj(a, IfFormula::negate(b)));
  CHECK(core.is_core());
  CHECK(to_core_if(core) == core);

  auto t = to_individual_free(to_relational(parse_formula("all1 x. all1 y. x < y -> ~(y < x)"), 2), 2);
  IfFormula c = to_core_if(t.formula);
  CHECK(c.is_core());
  CHECK(to_core_if(c) == c);
  CHECK(free_vars(c) == free_vars(t.formula));
}

TEST_CASE("MSO to FSO")
{
  FsoFormula f = mso_to_fso(parse_formula("X(root)"));
  REQUIRE(f.kind() == FsoFormula::Kind::FunEq);
  CHECK(f.name() == "F_X");
  CHECK(f.t() == Term::root());
  CHECK(eval(f.l()) == hf::ordinal(1));

  FsoFormula e = mso_to_fso(parse_formula("ex2 X. X(root)"));
  REQUIRE(e.kind() == FsoFormula::Kind::ExFun);
  CHECK(eval(e.k()) == hf::ordinal(2));
  CHECK(e.a().kind() == FsoFormula::Kind::FunEq);

  FsoFormula q = mso_to_fso(parse_formula("x = y"));
  CHECK(q.kind() == FsoFormula::Kind::Eq);
}

TEST_CASE("FSO to MSO")
{
  using F = FsoFormula;
  auto k = HfTerm::var("k");
  CHECK(fso_to_mso(F::ex_in("k", HfSet::of({HfSet()}), F::hf_eq(k, HfSet()))) == Formula::disj_all({Formula::truth()}));
  CHECK(fso_to_mso(F::hf_in(hf::ordinal(2), hf::ordinal(3))) == Formula::truth());
  CHECK(fso_to_mso(F::ex_in("k", HfSet(), F::truth())) == Formula::falsity());

  // (exists F:2)(all x)(F(x)=0 | F(x)=1)
  F g = F::ex_fun("F", hf::ordinal(2),
                  F::all1("x", F::disj(F::fun_eq("F", var("x"), hf::ordinal(0)),
                                       F::fun_eq("F", var("x"), hf::ordinal(1)))));
  Formula m = fso_to_mso(g);
  REQUIRE(m.kind() == FK::Ex2);
  std::string x0 = m.name();
  REQUIRE(m.a().kind() == FK::Ex2);
  std::string x1 = m.a().name();
  const Formula& body = m.a().a();
  REQUIRE(body.kind() == FK::And);
  CHECK(body.a().kind() == FK::All1);
  CHECK(body.a() == partition_formula({x0, x1}, body.a().name()));
  CHECK(body.b()
        == Formula::all1("x", Formula::disj(Formula::pred(x0, var("x")),
                                            Formula::pred(x1, var("x")))));
  CHECK(is_closed(m));

  CHECK(error_of([] { fso_to_mso(FsoFormula::fun_eq("G", Term::root(), hf::ordinal(0))); })
        == ErrorKind::FreeFunctionVariable);
  CHECK(error_of([] { fso_to_mso(FsoFormula::hf_eq(HfTerm::var("k"), HfSet())); })
        == ErrorKind::NotHfClosed);

  Formula back = fso_to_mso(mso_to_fso(parse_formula("all2 X. X(root) -> ex1 x. X(x)")));
  CHECK(is_closed(back));
}

TEST_CASE("HF evaluation")
{
  using F = FsoFormula;
  auto k = HfTerm::var("k");
  auto l = HfTerm::var("l");
  CHECK(eval_hf(F::all_in("k", hf::ordinal(2), F::ex_in("l", hf::ordinal(2), F::hf_eq(k, l)))));
  CHECK(eval_hf(F::ex_sub("k", HfSet::of({HfSet()}), F::hf_in(HfSet(), k))));
  CHECK_FALSE(eval_hf(F::hf_in(HfSet(), HfSet())));
  CHECK(error_of([] { eval_hf(F::ex1("x", F::truth())); }) == ErrorKind::Unbounded);

  using K = HfTerm::Kind;
  for (std::size_t a = 0; a <= 3; ++a)
    for (std::size_t b = 0; b <= 3; ++b)
      {
        std::size_t expected = 1;
        for (std::size_t i = 0; i < a; ++i)
          expected *= b;
        HfTerm space = HfTerm::binary(K::FunctionSpace, hf::ordinal(a), hf::ordinal(b));
        CHECK(eval_hf(F::hf_eq(HfTerm::unary(K::Card, space), hf::ordinal(expected))));
        // every member is a total function from a into b
        auto f = HfTerm::var("f");
        auto x = HfTerm::var("x");
        auto y = HfTerm::var("y");
        CHECK(eval_hf(F::all_in(
            "f", space,
            F::conj(F::hf_subset(f, HfTerm::binary(K::Product, hf::ordinal(a), hf::ordinal(b))),
                    F::all_in("x", hf::ordinal(a),
                              F::ex_in("y", hf::ordinal(b),
                                       F::hf_in(HfTerm::binary(K::Pair, x, y), f)))))));
      }
}
