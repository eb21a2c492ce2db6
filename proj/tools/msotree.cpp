// Command-line front end: deciding sentences, compiling them to automata,
// and the file-level entry points of the automata and game layers.

#include <msotree/error.hpp>
#include <msotree/games/parity_game.hpp>
#include <msotree/logic/formula.hpp>
#include <msotree/omega/omega.hpp>
#include <msotree/pipeline/pipeline.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace msotree;
using nlohmann::json;

namespace
{

  constexpr int kTrue = 0;
  constexpr int kFalse = 1;
  constexpr int kUsage = 2;
  constexpr int kResource = 3;

  struct Common
  {
    unsigned arity = 2;
    std::size_t max_states = kDefaultStateCap;
    bool json = false;
    bool trace = false;
    std::string out;
  };

  void add_common(CLI::App* cmd, Common& c)
  {
    cmd->add_option("--arity", c.arity, "number of successors of each node")
        ->check(CLI::Range(1u, 16u));
    cmd->add_option("--max-states", c.max_states, "cap on every intermediate automaton")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--json", c.json, "machine-readable output");
    cmd->add_flag("--trace", c.trace, "report every compilation step");
    cmd->add_option("--out", c.out, "write the main artifact to this file");
  }

  std::string slurp(const std::string& path)
  {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw CLI::ValidationError(path, "cannot be read");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  void spill(const std::string& path, const std::string& text)
  {
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw CLI::ValidationError(path, "cannot be written");
    out << text;
  }

  // Writes to --out when given, else to stdout.
  void artifact(const Common& c, const std::string& text)
  {
    if (c.out.empty())
      std::cout << text;
    else
      spill(c.out, text);
  }

  PipelineOptions pipeline(const Common& c)
  {
    PipelineOptions o;
    o.arity = c.arity;
    o.max_states = c.max_states;
    return o;
  }

  json trace_json(const CompilationTrace& t)
  {
    json rows = json::array();
    for (const auto& r : t.records)
      rows.push_back({{"node", r.node},
                      {"construction", r.construction},
                      {"states_before", r.states_before},
                      {"states_after", r.states_after},
                      {"seconds", r.seconds}});
    return rows;
  }

  void print_trace(const CompilationTrace& t)
  {
    for (const auto& r : t.records)
      std::cout << r.construction << "\t" << r.states_before << " -> " << r.states_after << "\t"
                << r.seconds << "s\t" << r.node << "\n";
  }

  json apt_stats(const Apt& a)
  {
    return {{"states", a.num_states()},
            {"letters", a.num_letters()},
            {"arity", a.arity},
            {"max_color", a.max_color},
            {"conjunctions", a.num_conjunctions()},
            {"nondeterministic", is_nondeterministic(a)}};
  }

  json game_stats(const ParityGame& g)
  {
    std::size_t edges = 0;
    for (const auto& e : g.e_prop)
      edges += e.size();
    for (const auto& e : g.e_opp)
      edges += e.size();
    return {{"prop_vertices", g.prop.size()},
            {"opp_vertices", g.opp.size()},
            {"edges", edges},
            {"max_color", g.max_color}};
  }

  void print_stats(const json& j)
  {
    for (const auto& [k, v] : j.items())
      std::cout << k << ": " << v.dump() << "\n";
  }

  std::vector<std::uint32_t> letter_list(const std::string& s)
  {
    std::vector<std::uint32_t> r;
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, ','))
      {
        if (tok.find_first_not_of(" \t") == std::string::npos)
          continue;
        try
          {
            r.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
          }
        catch (const std::exception&)
          {
            throw CLI::ValidationError("letter list", "'" + tok + "' is not a letter index");
          }
      }
    return r;
  }

  int report_verdict(const Common& c, const Verdict& v, const std::string& game_path,
                     const std::string& cert_path)
  {
    if (!game_path.empty())
      spill(game_path, serialize(v.game));
    if (!cert_path.empty())
      spill(cert_path, serialize(v.game, v.certificate));
    if (c.json)
      {
        json j{{"truth", v.truth},
               {"winner", std::string(to_string(v.winner))},
               {"seconds", v.seconds},
               {"peak_states", v.peak_states},
               {"automaton", apt_stats(v.automaton)},
               {"game", game_stats(v.game)}};
        if (c.trace)
          j["trace"] = trace_json(v.trace);
        std::cout << j.dump(2) << "\n";
      }
    else
      {
        std::cout << (v.truth ? "true" : "false") << "\n";
        if (c.trace)
          print_trace(v.trace);
      }
    return v.truth ? kTrue : kFalse;
  }

}

int main(int argc, char** argv)
{
  CLI::App app{"Decides monadic second-order sentences over the full tree"};
  app.require_subcommand(1);
  Common c;
  std::string text, file, second, game_path, cert_path, u, v, start;

  auto* decide_cmd = app.add_subcommand("decide", "decide a closed sentence");
  add_common(decide_cmd, c);
  decide_cmd->add_option("sentence", text, "the sentence")->required();
  decide_cmd->add_option("--game", game_path, "write the acceptance game");
  decide_cmd->add_option("--cert", cert_path, "write the winner's strategy");

  auto* compile_cmd = app.add_subcommand("compile", "compile a formula to an automaton");
  add_common(compile_cmd, c);
  compile_cmd->add_option("formula", text, "free set variables become letter bits")->required();

  auto* da_cmd = app.add_subcommand("decide-automaton", "nonemptiness over a one-letter alphabet");
  add_common(da_cmd, c);
  da_cmd->add_option("automaton", file, ".apt file")->required()->check(CLI::ExistingFile);
  da_cmd->add_option("--game", game_path, "write the acceptance game");
  da_cmd->add_option("--cert", cert_path, "write the winner's strategy");

  auto* sim_cmd = app.add_subcommand("simulate", "equivalent nondeterministic automaton");
  add_common(sim_cmd, c);
  sim_cmd->add_option("automaton", file, ".apt file")->required()->check(CLI::ExistingFile);

  auto* lasso_cmd = app.add_subcommand("lasso", "membership of u v^omega in a parity word automaton");
  add_common(lasso_cmd, c);
  lasso_cmd->add_option("automaton", file, ".dpw file")->required()->check(CLI::ExistingFile);
  lasso_cmd->add_option("--u", u, "comma separated letter indices");
  lasso_cmd->add_option("--v", v, "comma separated letter indices, nonempty")->required();

  auto* solve_cmd = app.add_subcommand("solve-game", "winner and positional strategy");
  add_common(solve_cmd, c);
  solve_cmd->add_option("game", file, ".pg file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--start", start, "vertex name (default: prop vertex 0)");

  auto* check_cmd = app.add_subcommand("check-certificate", "validate a strategy");
  add_common(check_cmd, c);
  check_cmd->add_option("game", file, ".pg file")->required()->check(CLI::ExistingFile);
  check_cmd->add_option("strategy", second, ".strat file")->required()->check(CLI::ExistingFile);
  check_cmd->add_option("--start", start, "vertex name (default: prop vertex 0)");

  auto* stats_cmd = app.add_subcommand("stats", "sizes of an automaton, game or sentence");
  add_common(stats_cmd, c);
  stats_cmd->add_option("input", text, "an .apt, .pg or .dpw file, or a sentence")->required();

  try
    {
      app.parse(argc, argv);
    }
  catch (const CLI::ParseError& e)
    {
      int rc = app.exit(e);
      return rc == 0 ? 0 : kUsage;
    }

  auto start_vertex = [&](const ParityGame& g) {
    return start.empty() ? Vertex{Player::Prop, 0} : find_vertex(g, parse_hf(start));
  };

  try
    {
      if (*decide_cmd)
        return report_verdict(c, decide(std::string_view(text), pipeline(c)), game_path, cert_path);

      if (*compile_cmd)
        {
          Formula f = parse_formula(text, c.arity, false);
          IfTranslation tr = to_individual_free(to_relational(f, c.arity), c.arity);
          CompilationTrace trace;
          Apt a = compile(to_core_if(tr.formula), tr.free_count, pipeline(c), &trace);
          std::vector<std::string> vars(tr.names.begin(),
                                        tr.names.begin() + static_cast<std::ptrdiff_t>(tr.free_count));
          if (c.json)
            {
              json j = apt_stats(a);
              j["variables"] = vars;
              j["peak_states"] = trace.peak_states();
              if (c.trace)
                j["trace"] = trace_json(trace);
              if (c.out.empty())
                j["automaton"] = serialize(a);
              else
                spill(c.out, serialize(a));
              std::cout << j.dump(2) << "\n";
            }
          else
            {
              artifact(c, serialize(a));
              if (c.trace)
                print_trace(trace);
            }
          return kTrue;
        }

      if (*da_cmd)
        {
          Apt a = parse_apt(slurp(file));
          return report_verdict(c, decide_automaton(a), game_path, cert_path);
        }

      if (*sim_cmd)
        {
          Apt n = nd(parse_apt(slurp(file)), c.max_states);
          if (c.json)
            {
              json j = apt_stats(n);
              if (c.out.empty())
                j["automaton"] = serialize(n);
              else
                spill(c.out, serialize(n));
              std::cout << j.dump(2) << "\n";
            }
          else
            artifact(c, serialize(n));
          return kTrue;
        }

      if (*lasso_cmd)
        {
          Dpw d = parse_dpw(slurp(file));
          std::vector<std::uint32_t> uu = letter_list(u), vv = letter_list(v);
          if (vv.empty())
            throw CLI::ValidationError("--v", "the loop must be nonempty");
          for (auto l : uu)
            if (l >= d.letters.size())
              throw CLI::ValidationError("--u", "letter " + std::to_string(l) + " out of range");
          for (auto l : vv)
            if (l >= d.letters.size())
              throw CLI::ValidationError("--v", "letter " + std::to_string(l) + " out of range");
          bool ok = lasso_accepts(d, uu, vv);
          if (c.json)
            std::cout << json{{"accepts", ok}}.dump() << "\n";
          else
            std::cout << (ok ? "accepts" : "rejects") << "\n";
          return ok ? kTrue : kFalse;
        }

      if (*solve_cmd)
        {
          ParityGame g = parse_game(slurp(file));
          Vertex s = start_vertex(g);
          Decision d = solve(g, s);
          std::string strat = serialize(g, d.strategy);
          if (!c.out.empty())
            spill(c.out, strat);
          if (c.json)
            {
              json j{{"winner", std::string(to_string(d.winner))}, {"stats", game_stats(g)}};
              if (c.out.empty())
                j["strategy"] = strat;
              std::cout << j.dump(2) << "\n";
            }
          else
            {
              std::cout << "winner " << to_string(d.winner) << "\n";
              if (c.out.empty())
                std::cout << strat;
              print_stats(game_stats(g));
            }
          return kTrue;
        }

      if (*check_cmd)
        {
          ParityGame g = parse_game(slurp(file));
          Strategy s = parse_strategy(slurp(second), g);
          bool ok = false;
          std::string why;
          try
            {
              ok = check_certificate(g, s.owner, s, start_vertex(g));
            }
          catch (const Error& e)
            {
              if (e.kind() != ErrorKind::IncompleteStrategy && e.kind() != ErrorKind::IllegalMove)
                throw;
              why = e.what();
            }
          if (c.json)
            std::cout << json{{"valid", ok}, {"owner", std::string(to_string(s.owner))}, {"reason", why}}.dump()
                      << "\n";
          else
            std::cout << (ok ? "valid" : "invalid") << (why.empty() ? "" : ": " + why) << "\n";
          return ok ? kTrue : kFalse;
        }

      if (*stats_cmd)
        {
          json j;
          if (std::ifstream probe(text); probe)
            {
              std::string body = slurp(text);
              try
                {
                  j = apt_stats(parse_apt(body));
                  j["kind"] = "automaton";
                }
              catch (const Error&)
                {
                  try
                    {
                      j = game_stats(parse_game(body));
                      j["kind"] = "game";
                    }
                  catch (const Error&)
                    {
                      Dpw d = parse_dpw(body);
                      j = {{"kind", "dpw"},
                           {"states", d.states.size()},
                           {"letters", d.letters.size()}};
                    }
                }
            }
          else
            {
              CompilationTrace trace;
              Apt a = compile_sentence(parse_formula(text, c.arity, true), pipeline(c), &trace);
              j = apt_stats(a);
              j["kind"] = "sentence";
              j["peak_states"] = trace.peak_states();
              j["steps"] = trace.records.size();
              if (c.trace)
                j["trace"] = trace_json(trace);
            }
          if (c.json)
            std::cout << j.dump(2) << "\n";
          else
            print_stats(j);
          return kTrue;
        }
    }
  catch (const Error& e)
    {
      std::cerr << "error: " << e.what() << "\n";
      return e.kind() == ErrorKind::TooLarge ? kResource : kUsage;
    }
  catch (const CLI::Error& e)
    {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    }
  return kUsage;
}
