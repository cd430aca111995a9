#include "redlab/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "redlab/error.hpp"
#include "redlab/json_io.hpp"
#include "redlab/meaning.hpp"
#include "redlab/parse.hpp"

namespace redlab {

namespace {

constexpr int kSchemaVersion = 1;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw DomainError("FileNotFound", "cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Loaded {
  Calculus calc;
  TypeStyle style;
};

Loaded load_calculus(const RunConfig& cfg) {
  Loaded l;
  if (!cfg.calculus_file.empty())
    l.calc = parse_calculus(read_file(cfg.calculus_file));
  else
    l.calc = builtin(cfg.calculus);
  l.style = l.calc.type_style();
  return l;
}

TermRef load_term(const RunConfig& cfg, bool allow_meta = false) {
  if (!cfg.term_file.empty()) {
    std::string src = read_file(cfg.term_file);
    return parse_term(src, allow_meta);
  }
  if (cfg.term.empty())
    throw ParseError("missing term argument");
  return parse_term(cfg.term, allow_meta);
}

nlohmann::json envelope(const RunConfig& cfg) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = cfg.command;
  j["calculus"] = cfg.calculus_file.empty() ? cfg.calculus : cfg.calculus_file;
  return j;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

RunResult cmd_infer(const RunConfig& cfg) {
  Loaded l = load_calculus(cfg);
  TermRef t = load_term(cfg, true);  // redex schemas welcome here
  bool schema = has_meta(t);
  Reconstruction rec =
      schema ? reconstruct_schema(l.calc, t) : reconstruct(l.calc, t);
  RunResult res;
  res.exit_code = rec.branches.empty() ? 1 : 0;
  if (cfg.format == "json") {
    nlohmann::json j = envelope(cfg);
    j["term"] = to_string(t);
    j["schema"] = schema;
    j.update(reconstruction_json(rec, l.style));
    res.out = dump(j);
    return res;
  }
  std::ostringstream out;
  out << "term: " << to_string(t) << "\n";
  if (rec.branches.empty()) {
    out << "untypable: no reconstruction branch\n";
  } else {
    TypeStyle alias = l.style;
    alias.alias = true;
    out << "branches: " << rec.branches.size() << "\n";
    for (size_t i = 0; i < rec.branches.size(); ++i) {
      const InferBranch& b = rec.branches[i];
      out << "branch " << i << "\n";
      out << "  principal: " << to_string(b.conclusion, l.style)
          << "   (rendered " << to_string(b.conclusion, alias) << ")\n";
      std::istringstream lines(render_branch(b, l.style));
      std::string line;
      std::getline(lines, line);  // conclusion line already printed
      while (std::getline(lines, line)) out << "  " << line << "\n";
      out << "  derivation:\n";
      std::istringstream dlines(render_deriv(b.deriv, l.style));
      while (std::getline(dlines, line)) out << "    " << line << "\n";
    }
    if (rec.branch_limit_hit) out << "note: branch limit hit\n";
  }
  res.out = out.str();
  return res;
}

RunResult cmd_typecheck(const RunConfig& cfg) {
  Loaded l = load_calculus(cfg);
  TermRef t = load_term(cfg);
  if (cfg.type.empty()) throw ParseError("missing type argument");
  Hat goal = parse_hat(cfg.type, l.style);
  ContextMap ctx;
  for (auto& [v, h] : parse_context(cfg.context, l.style))
    ctx.emplace_back(v, h);
  bool ok = typecheck(l.calc, ctx, t, goal);
  RunResult res;
  if (cfg.format == "json") {
    nlohmann::json j = envelope(cfg);
    j["term"] = to_string(t);
    j["type"] = to_string(goal, l.style);
    j["result"] = ok;
    res.out = dump(j);
    return res;
  }
  res.out = to_string(t) + " : " + to_string(goal, l.style) + "  " +
            (ok ? "typechecks" : "does not typecheck") + "\n";
  return res;
}

RunResult cmd_reduce(const RunConfig& cfg) {
  Loaded l = load_calculus(cfg);
  TermRef t = load_term(cfg);
  check_term(l.calc, t);
  NormalizeResult r = normalize(l.calc, t, cfg.max_steps);
  RunResult res;
  if (cfg.format == "json") {
    nlohmann::json j = envelope(cfg);
    j["term"] = to_string(t);
    switch (r.kind) {
      case NormalizeResult::Kind::NormalForm:
        j["outcome"] = "normal-form";
        j["result"] = to_string(r.term);
        j["steps"] = r.steps;
        break;
      case NormalizeResult::Kind::Cycle: {
        j["outcome"] = "cycle";
        j["steps"] = r.steps;
        nlohmann::json trace = nlohmann::json::array();
        for (const auto& ct : r.cycle) trace.push_back(ct.text);
        j["cycle"] = trace;
        break;
      }
      case NormalizeResult::Kind::StepLimit:
        j["outcome"] = "step-limit";
        j["last"] = to_string(r.term);
        j["steps"] = r.steps;
        break;
    }
    res.out = dump(j);
    return res;
  }
  std::ostringstream out;
  switch (r.kind) {
    case NormalizeResult::Kind::NormalForm:
      out << "normal form: " << to_string(r.term) << "   (" << r.steps
          << (r.steps == 1 ? " step" : " steps") << ")\n";
      break;
    case NormalizeResult::Kind::Cycle:
      out << "cycle detected after " << r.steps << " steps:\n";
      for (const auto& ct : r.cycle) out << "  " << ct.text << "\n";
      break;
    case NormalizeResult::Kind::StepLimit:
      out << "step limit (" << r.steps << ") reached at: " << to_string(r.term)
          << "\n";
      break;
  }
  res.out = out.str();
  return res;
}

RunResult cmd_graph(const RunConfig& cfg) {
  Loaded l = load_calculus(cfg);
  TermRef t = load_term(cfg);
  check_term(l.calc, t);
  ReductionGraph g =
      reduction_graph(l.calc, t, cfg.max_nodes, cfg.max_depth);
  RunResult res;
  if (cfg.format == "dot") {
    res.out = to_dot(g);
    return res;
  }
  if (cfg.format == "json") {
    nlohmann::json j = envelope(cfg);
    j["term"] = to_string(t);
    j.update(graph_json(g));
    res.out = dump(j);
    return res;
  }
  std::ostringstream out;
  out << "nodes: " << g.nodes.size() << ", edges: " << g.edges.size()
      << (g.truncated ? " (truncated)" : "") << "\n";
  for (size_t i = 0; i < g.nodes.size(); ++i)
    out << "  n" << i << ": " << g.nodes[i].text << "\n";
  for (const auto& e : g.edges)
    out << "  n" << e.from << " -> n" << e.to << "  [" << e.rule << "@"
        << path_to_string(e.position) << "]\n";
  res.out = out.str();
  return res;
}

RunResult cmd_confluence(const RunConfig& cfg) {
  Loaded l = load_calculus(cfg);
  TermRef t = load_term(cfg);
  check_term(l.calc, t);
  Bounds bounds{cfg.max_steps, cfg.max_nodes, cfg.max_depth};
  std::vector<Redex> reducts = all_steps(l.calc, t);
  ReductionGraph g = reduction_graph(l.calc, t, cfg.max_nodes, cfg.max_depth);
  std::vector<int> nfs = g.normal_form_nodes();

  nlohmann::json pairs = nlohmann::json::array();
  bool all_joined = true;
  for (size_t i = 0; i < reducts.size(); ++i) {
    for (size_t j = i + 1; j < reducts.size(); ++j) {
      JoinResult jr = joinable(l.calc, reducts[i].result, reducts[j].result,
                               bounds);
      all_joined &= jr.joined;
      nlohmann::json pj;
      pj["a"] = to_string(reducts[i].result);
      pj["b"] = to_string(reducts[j].result);
      pj["joined"] = jr.joined;
      if (jr.joined) pj["witness"] = jr.witness.text;
      pairs.push_back(pj);
    }
  }
  RunResult res;
  if (cfg.format == "json") {
    nlohmann::json j = envelope(cfg);
    j["term"] = to_string(t);
    j["reducts"] = nlohmann::json::array();
    for (const auto& r : reducts) j["reducts"].push_back(to_string(r.result));
    j["pairs"] = pairs;
    j["all_joined"] = all_joined;
    j["normal_form_count"] = nfs.size();
    j["truncated"] = g.truncated;
    res.out = dump(j);
    return res;
  }
  std::ostringstream out;
  out << "one-step reducts: " << reducts.size() << "\n";
  for (const auto& r : reducts)
    out << "  [" << r.rule << "@" << path_to_string(r.position) << "] "
        << to_string(r.result) << "\n";
  out << "reduct pairs joined: " << (all_joined ? "all" : "NOT all") << "\n";
  out << "distinct normal forms in graph: " << nfs.size()
      << (g.truncated ? " (graph truncated)" : "") << "\n";
  for (int i : nfs) out << "  " << g.nodes[i].text << "\n";
  res.out = out.str();
  return res;
}

RunResult cmd_classify(const RunConfig& cfg) {
  Loaded l = load_calculus(cfg);
  std::vector<Classification> cls;
  if (!cfg.rule.empty()) {
    const ReductionRule* r = l.calc.find_reduction(cfg.rule);
    if (!r)
      throw DomainError("UnknownRule", "calculus '" + l.calc.name +
                                           "' has no reduction rule '" +
                                           cfg.rule + "'");
    cls.push_back(classify_rule(l.calc, *r));
  } else {
    cls = classify_calculus(l.calc);
  }
  RunResult res;
  if (cfg.format == "json") {
    nlohmann::json j = envelope(cfg);
    j["rules"] = nlohmann::json::array();
    for (const auto& cl : cls)
      j["rules"].push_back(classification_json(cl, l.style));
    res.out = dump(j);
    return res;
  }
  std::ostringstream out;
  for (const auto& cl : cls) out << render_classification(cl, l.style);
  res.out = out.str();
  return res;
}

RunResult cmd_sr_instances(const RunConfig& cfg) {
  Loaded l = load_calculus(cfg);
  if (cfg.rule.empty()) throw ParseError("missing --rule");
  const ReductionRule* r = l.calc.find_reduction(cfg.rule);
  if (!r)
    throw DomainError("UnknownRule", "calculus '" + l.calc.name +
                                         "' has no reduction rule '" +
                                         cfg.rule + "'");
  std::vector<TermRef> fixtures;
  if (!cfg.term.empty() || !cfg.term_file.empty())
    fixtures.push_back(load_term(cfg));
  SrReport rep = check_sr_instances(l.calc, *r, cfg.trials, cfg.seed, fixtures);
  RunResult res;
  if (cfg.format == "json") {
    nlohmann::json j = envelope(cfg);
    j.update(sr_report_json(rep));
    res.out = dump(j);
    return res;
  }
  std::ostringstream out;
  out << "rule " << rep.rule << ": " << rep.trials << " trials, "
      << rep.preserved << " preserved, " << rep.hat_changed
      << " moved to FROWN, " << rep.failed << " failed\n";
  for (const auto& f : rep.failed_instances) out << "  failed: " << f << "\n";
  res.out = out.str();
  return res;
}

RunResult cmd_sense(const RunConfig& cfg) {
  Loaded l = load_calculus(cfg);
  TermRef t = load_term(cfg);
  Sense s = sense(l.calc, t, cfg.branch);
  RunResult res;
  if (cfg.format == "json") {
    nlohmann::json j = envelope(cfg);
    j["term"] = to_string(t);
    j["branch"] = cfg.branch;
    j.update(sense_json(s));
    res.out = dump(j);
    return res;
  }
  std::ostringstream out;
  out << "sense (" << s.members.size() << " terms):\n";
  for (const auto& m : s.members) out << "  " << m.text << "\n";
  res.out = out.str();
  return res;
}

RunResult cmd_denotation(const RunConfig& cfg) {
  Loaded l = load_calculus(cfg);
  TermRef t = load_term(cfg);
  check_term(l.calc, t);
  Denotation d = denotation(l.calc, t, cfg.max_steps);
  RunResult res;
  if (cfg.format == "json") {
    nlohmann::json j = envelope(cfg);
    j["term"] = to_string(t);
    j.update(denotation_json(d));
    res.out = dump(j);
    return res;
  }
  if (d.kind == Denotation::Kind::EndTermNF)
    res.out = "denotation: " + d.term.text + "\n";
  else
    res.out = std::string("no normal form within bounds (") +
              (d.reason == Denotation::Reason::Cycle ? "cycle" : "step limit") +
              ")\n";
  return res;
}

RunResult cmd_validate(const RunConfig& cfg) {
  Calculus c;
  if (!cfg.calculus_file.empty())
    c = parse_calculus_raw(read_file(cfg.calculus_file));
  else
    c = builtin(cfg.calculus);
  std::vector<Diagnostic> diags = validate(c);
  RunResult res;
  if (cfg.format == "json") {
    nlohmann::json j = envelope(cfg);
    j["calculus_name"] = c.name;
    j["valid"] = diags.empty();
    j["diagnostics"] = nlohmann::json::array();
    for (const auto& d : diags) {
      nlohmann::json dj;
      dj["code"] = d.code;
      dj["message"] = d.message;
      j["diagnostics"].push_back(dj);
    }
    res.out = dump(j);
    return res;
  }
  std::ostringstream out;
  if (diags.empty()) {
    out << "calculus '" << c.name << "' is well-formed\n";
  } else {
    out << "calculus '" << c.name << "': " << diags.size()
        << " diagnostic(s)\n";
    for (const auto& d : diags)
      out << "  [" << d.code << "] " << d.message << "\n";
  }
  res.out = out.str();
  return res;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;
  if (const char* env = std::getenv("REDLAB_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (...) {
      throw ParseError("REDLAB_SEED must be an unsigned integer");
    }
  }

  CLI::App app{"redlab - a workbench for typed calculi and their reductions"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* cmd;
    bool term_positional;
    bool type_positional;
  };
  std::vector<Sub> subs;
  auto add = [&](const std::string& name, const std::string& desc,
                 bool term_pos, bool type_pos = false) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->add_option("--calculus", cfg.calculus, "built-in calculus name");
    s->add_option("--calculus-file", cfg.calculus_file, ".rcalc file path");
    s->add_option("--format", cfg.format, "text, json or dot");
    s->add_option("--max-steps", cfg.max_steps, "normalization step bound");
    s->add_option("--max-nodes", cfg.max_nodes, "graph node bound");
    s->add_option("--max-depth", cfg.max_depth, "graph depth bound");
    s->add_option("--seed", cfg.seed, "random seed");
    if (term_pos) {
      s->add_option("term", cfg.term, "term in concrete syntax");
      s->add_option("--term-file", cfg.term_file, "read the term from a file");
    }
    if (type_pos) s->add_option("type", cfg.type, "type in concrete syntax");
    subs.push_back({s, term_pos, type_pos});
    return s;
  };

  add("infer", "reconstruct principal hats for a term or redex schema", true);
  CLI::App* tc = add("typecheck", "decide a judgment context |- term : type",
                     true, true);
  tc->add_option("--context", cfg.context, "context as 'x: T, y: U'");
  add("reduce", "normalize a term (leftmost-outermost)", true);
  add("graph", "explore the reduction graph of a term", true);
  add("confluence", "probe joinability of a term's reducts", true);
  CLI::App* cls = add("classify", "classify reduction rules", false);
  cls->add_option("--rule", cfg.rule, "classify a single rule");
  CLI::App* sri =
      add("sr-instances", "empirical subject-reduction check", true);
  sri->add_option("--rule", cfg.rule, "reduction rule to instantiate");
  sri->add_option("--trials", cfg.trials, "number of instances");
  CLI::App* sen = add("sense", "the set of terms in a derivation", true);
  sen->add_option("--branch", cfg.branch, "reconstruction branch index");
  add("denotation", "the normal-form end-term", true);
  add("validate", "well-formedness diagnostics for a calculus", false);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    cfg.command = "help";
    cfg.term = app.help();
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw ParseError(e.what());
  }
  for (const Sub& s : subs)
    if (s.cmd->parsed()) cfg.command = s.cmd->get_name();

  if (cfg.format != "text" && cfg.format != "json" && cfg.format != "dot")
    throw ParseError("unknown --format '" + cfg.format + "'");
  if (cfg.format == "dot" && cfg.command != "graph")
    throw ParseError("--format dot is only available for 'graph'");
  if (cfg.max_steps < 1 || cfg.max_nodes < 1 || cfg.max_depth < 1 ||
      cfg.trials < 1)
    throw ParseError("bounds must be positive");
  return cfg;
}

RunResult run(const RunConfig& cfg) {
  try {
    if (cfg.command == "help") return {0, cfg.term, ""};
    if (cfg.command == "infer") return cmd_infer(cfg);
    if (cfg.command == "typecheck") return cmd_typecheck(cfg);
    if (cfg.command == "reduce") return cmd_reduce(cfg);
    if (cfg.command == "graph") return cmd_graph(cfg);
    if (cfg.command == "confluence") return cmd_confluence(cfg);
    if (cfg.command == "classify") return cmd_classify(cfg);
    if (cfg.command == "sr-instances") return cmd_sr_instances(cfg);
    if (cfg.command == "sense") return cmd_sense(cfg);
    if (cfg.command == "denotation") return cmd_denotation(cfg);
    if (cfg.command == "validate") return cmd_validate(cfg);
    return {2, "", "unknown command '" + cfg.command + "'\n"};
  } catch (const ParseError& e) {
    std::string msg = e.what();
    if (e.line > 0)
      msg += " (line " + std::to_string(e.line) + ", column " +
             std::to_string(e.col) + ")";
    return {2, "", msg + "\n"};
  } catch (const DomainError& e) {
    return {1, "", "[" + e.code + "] " + e.what() + "\n"};
  }
}

}  // namespace redlab
