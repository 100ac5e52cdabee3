#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "pgcl/checks.hpp"
#include "pgcl/errors.hpp"
#include "pgcl/machine.hpp"
#include "pgcl/parser.hpp"
#include "pgcl/sampler.hpp"
#include "pgcl/wp.hpp"

namespace pgcl::cli {

namespace {

using nlohmann::json;

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string read_text(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read '" + path + "'");
  buf << f.rdbuf();
  return buf.str();
}

Rational parse_rational(const std::string& text, const std::string& what) {
  try {
    return Rational::parse(text);
  } catch (const std::invalid_argument&) {
    throw UsageError("malformed " + what + " '" + text + "'");
  }
}

std::pair<std::string, std::string> split_binding(const std::string& s, const char* flag) {
  auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError(std::string(flag) + " expects name=value, got '" + s + "'");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

ParamMap parse_params(const std::vector<std::string>& bindings) {
  ParamMap out;
  for (const auto& b : bindings) {
    auto [name, value] = split_binding(b, "--param");
    out[name] = parse_rational(value, "parameter value");
  }
  return out;
}

struct Grid {
  std::string name;
  std::vector<Rational> values;
};

std::optional<Grid> parse_grid(const std::vector<std::string>& lists, const std::vector<std::string>& steps) {
  if (lists.size() + steps.size() > 1) throw UsageError("only one grid parameter is supported");
  if (!lists.empty()) {
    auto [name, value] = split_binding(lists[0], "--grid");
    Grid g{name, {}};
    std::stringstream ss(value);
    for (std::string item; std::getline(ss, item, ',');) g.values.push_back(parse_rational(item, "grid value"));
    if (g.values.empty()) throw UsageError("empty grid");
    return g;
  }
  if (!steps.empty()) {
    auto [name, value] = split_binding(steps[0], "--grid-steps");
    Rational n = parse_rational(value, "grid step count");
    if (!n.is_integer() || n < Rational(1)) throw UsageError("grid step count must be a positive integer");
    return Grid{name, uniform_grid(n.numerator().get_si())};
  }
  return std::nullopt;
}

struct LoopFlags {
  std::size_t max_iters = 100000;
  std::string residual = "";

  LoopConfig config() const {
    LoopConfig c;
    c.max_iterations = max_iters;
    if (!residual.empty()) {
      c.tolerance = parse_rational(residual, "residual");
      if (!(Rational(0) < c.tolerance)) throw UsageError("--residual must be positive");
    }
    return c;
  }
};

void add_loop_flags(CLI::App* cmd, LoopFlags& f) {
  cmd->add_option("--max-iters", f.max_iters, "Loop iteration budget")->capture_default_str();
  cmd->add_option("--residual", f.residual, "Loop convergence tolerance (default 2^-40)");
}

std::string state_key(const StateSpace& space, const Valuation& v) { return space.describe(v); }

json verdict_json(const Verdict& v, const StateSpace& space) {
  json j;
  j["status"] = to_string(v.status);
  j["residual"] = v.residual.fraction();
  j["exact"] = v.exact();
  if (v.counterexample) {
    const auto& c = *v.counterexample;
    j["counterexample"] = {{"probe", c.probe},
                           {"state", state_key(space, c.state)},
                           {"lhs", c.lhs.fraction()},
                           {"rhs", c.rhs.fraction()}};
  }
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

std::string verdict_text(const Verdict& v, const StateSpace& space) {
  std::string out = to_string(v.status);
  if (v.status == Status::Holds) out += v.residual.is_zero() ? " (exact)" : " (residual " + v.residual.str() + ")";
  if (v.counterexample) {
    const auto& c = *v.counterexample;
    out += "\n  probe " + c.probe + " at " + state_key(space, c.state) + ": " + c.lhs.str() + " vs " + c.rhs.str();
  }
  if (!v.note.empty() && v.status != Status::Holds) out += "\n  " + v.note;
  return out;
}

int exit_for(const std::vector<Status>& statuses) {
  bool inconclusive = false;
  for (auto s : statuses) {
    if (s == Status::Fails) return kFails;
    inconclusive = inconclusive || s == Status::Inconclusive;
  }
  return inconclusive ? kInconclusive : kOk;
}

// Runs `check` once, or once per grid point with the grid parameter bound.
int run_checks(const std::optional<Grid>& grid, const ParamMap& params, bool as_json, std::ostream& out,
               const std::function<std::pair<Verdict, StateSpace>(const ParamMap&)>& check) {
  std::vector<Status> statuses;
  if (!grid) {
    auto [v, space] = check(params);
    statuses.push_back(v.status);
    if (as_json)
      out << verdict_json(v, space).dump(2) << "\n";
    else
      out << verdict_text(v, space) << "\n";
    return exit_for(statuses);
  }
  json points = json::array();
  for (const auto& value : grid->values) {
    ParamMap bound = params;
    bound[grid->name] = value;
    auto [v, space] = check(bound);
    statuses.push_back(v.status);
    if (as_json) {
      json j = verdict_json(v, space);
      j["param"] = grid->name;
      j["value"] = value.fraction();
      points.push_back(j);
    } else {
      out << grid->name << "=" << value.str() << ": " << verdict_text(v, space) << "\n";
    }
  }
  if (as_json) out << points.dump(2) << "\n";
  return exit_for(statuses);
}

std::optional<Expr> initial_filter(const std::string& text, const SourceUnit& unit) {
  if (text.empty()) return std::nullopt;
  return parse_expr(text, unit.space, unit.params);
}

// Weights from a distribution file (its run count ignored) or an inline list.
sampler::WeightedDist dist_arg(const std::string& arg, std::istream& in, std::uint64_t* runs = nullptr) {
  if (arg == "-" || std::filesystem::is_regular_file(arg)) {
    auto file = sampler::parse_dist_file(read_text(arg, in));
    if (runs) *runs = file.runs;
    return file.dist;
  }
  return sampler::parse_weights(arg);
}

std::string double_text(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weakest pre-expectations, derivation checks and fair-coin samplers for pGCL", "pgcl"};
  app.require_subcommand(1);
  app.fallthrough();

  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable output");

  std::vector<std::string> params, grid_lists, grid_steps, observed;
  std::string program, left, right, post, initial, variant, epsilon = "1/2", dist, machine, bits, prob;
  std::uint64_t seed = 1;
  std::size_t probes = 16, count = 1, max_nodes = 100000;
  std::uint64_t runs = 0;
  long bound = 1;
  bool crosscheck = false;
  LoopFlags loop;

  auto add_params = [&](CLI::App* c) {
    c->add_option("--param", params, "Parameter binding name=value (repeatable)");
  };
  auto add_grid = [&](CLI::App* c) {
    c->add_option("--grid", grid_lists, "Check at each value: name=v1,v2,...");
    c->add_option("--grid-steps", grid_steps, "Check at name = 0, 1/N, ..., 1: name=N");
  };
  auto add_json = [&](CLI::App* c) { c->add_flag("--json", as_json, "Machine-readable output"); };

  auto* wp_cmd = app.add_subcommand("wp", "Weakest pre-expectation of a program");
  wp_cmd->add_option("--program", program, "Program file, or - for stdin")->required();
  wp_cmd->add_option("--post", post, "Post-expectation expression")->required();
  wp_cmd->add_option("--initial", initial, "Only print states satisfying this predicate");
  add_params(wp_cmd);
  add_loop_flags(wp_cmd, loop);
  add_json(wp_cmd);

  auto* eq_cmd = app.add_subcommand("check-equal", "Compare two programs on a probe family");
  auto* ref_cmd = app.add_subcommand("check-refines", "Check spec is refined by impl on a probe family");
  eq_cmd->add_option("--left", left, "First program file")->required();
  eq_cmd->add_option("--right", right, "Second program file")->required();
  ref_cmd->add_option("--spec", left, "Specification program file")->required();
  ref_cmd->add_option("--impl", right, "Implementation program file")->required();
  for (auto* c : {eq_cmd, ref_cmd}) {
    add_params(c);
    add_grid(c);
    c->add_option("--observe", observed, "Variables the probes may depend on (default: all)");
    c->add_option("--initial", initial, "Compare only from states satisfying this predicate");
    c->add_option("--seed", seed, "Seed for the random probes")->capture_default_str();
    c->add_option("--probes", probes, "Number of random probes")->capture_default_str();
    add_loop_flags(c, loop);
    add_json(c);
  }

  auto* var_cmd = app.add_subcommand("check-variant", "Bounded-variant termination check of a loop");
  var_cmd->add_option("--program", program, "Program file (loop at top level or after a loop-free prefix)")
      ->required();
  var_cmd->add_option("--variant", variant, "Variant expression")->required();
  var_cmd->add_option("--bound", bound, "Upper bound on the variant")->capture_default_str();
  var_cmd->add_option("--epsilon", epsilon, "Least decrease probability")->capture_default_str();
  var_cmd->add_option("--initial", initial, "Start only from states satisfying this predicate");
  add_params(var_cmd);
  add_grid(var_cmd);
  add_json(var_cmd);

  auto* sample_cmd = app.add_subcommand("sample", "Draw samples with a fair coin");
  auto* src = sample_cmd->add_option_group("source");
  src->add_option("--dist", dist, "Weights (inline list or file)");
  src->add_option("--p", prob, "Bias for the binary sampler");
  src->require_option(1);
  sample_cmd->add_option("--bits", bits, "Scripted coin flips, e.g. 0110");
  sample_cmd->add_option("--seed", seed, "Seed for the pseudo-random coin")->capture_default_str();
  sample_cmd->add_option("--count", count, "Number of samples")->capture_default_str();
  add_json(sample_cmd);

  auto* trials_cmd = app.add_subcommand("trials", "Monte-Carlo trials of the discrete sampler");
  trials_cmd->add_option("--dist", dist, "Distribution file (run count, then weights) or inline weights")
      ->required();
  trials_cmd->add_option("--runs", runs, "Override the run count");
  trials_cmd->add_option("--seed", seed, "Seed")->capture_default_str();
  trials_cmd->add_flag("--crosscheck", crosscheck, "Compare against the exact machine analysis");
  add_json(trials_cmd);

  auto* build_cmd = app.add_subcommand("machine-build", "Extract the sampler's state machine");
  auto* analyze_cmd = app.add_subcommand("machine-analyze", "Exact outcome probabilities and expected flips");
  auto* dot_cmd = app.add_subcommand("machine-dot", "Render a machine as DOT");
  build_cmd->add_option("--dist", dist, "Weights (inline list or file)")->required();
  build_cmd->add_option("--max-nodes", max_nodes, "Node budget")->capture_default_str();
  add_json(build_cmd);
  for (auto* c : {analyze_cmd, dot_cmd}) {
    auto* g = c->add_option_group("source");
    g->add_option("--dist", dist, "Weights (inline list or file)");
    g->add_option("--machine", machine, "Machine file");
    g->require_option(1);
    c->add_option("--max-nodes", max_nodes, "Node budget")->capture_default_str();
    add_json(c);
  }

  std::vector<std::string> argv_store{"pgcl"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  auto load_machine_arg = [&]() -> ddg::Machine {
    if (!machine.empty()) {
      auto loaded = ddg::load_machine(read_text(machine, in));
      for (const auto& w : loaded.warnings) err << "warning: " << w << "\n";
      return loaded.machine;
    }
    return ddg::build_machine(dist_arg(dist, in), max_nodes);
  };

  try {
    const ParamMap bindings = parse_params(params);

    if (wp_cmd->parsed()) {
      SourceUnit unit = parse_unit(read_text(program, in), bindings);
      Expr post_expr = parse_expr(post, unit.space, unit.params);
      WpResult r = wp(unit.program, post_expr, unit.space, loop.config());
      auto filter = initial_filter(initial, unit);
      std::optional<Rational> constant;
      bool is_constant = true;
      json map = json::object();
      std::ostringstream text;
      for (std::size_t i = 0; i < unit.space.state_count(); ++i) {
        Valuation s = unit.space.state(i);
        if (filter && !eval_bool(*filter, s)) continue;
        if (!constant) constant = r.pre[i];
        is_constant = is_constant && *constant == r.pre[i];
        map[state_key(unit.space, s)] = r.pre[i].fraction();
        text << state_key(unit.space, s) << "\t" << r.pre[i].str() << "\n";
      }
      if (as_json) {
        json j{{"pre", map}, {"residual", r.loop_residual.fraction()}, {"converged", r.converged}};
        j["constant"] = is_constant && constant ? json(constant->fraction()) : json(nullptr);
        out << j.dump(2) << "\n";
      } else {
        out << text.str();
        if (is_constant && constant) out << "constant " << constant->str() << "\n";
        out << "residual " << r.loop_residual.str() << (r.converged ? "" : " (not converged)") << "\n";
      }
      return r.converged ? kOk : kInconclusive;
    }

    if (eq_cmd->parsed() || ref_cmd->parsed()) {
      const bool refines = ref_cmd->parsed();
      const std::string left_text = read_text(left, in);
      const std::string right_text = read_text(right, in);
      auto grid = parse_grid(grid_lists, grid_steps);
      const LoopConfig cfg = loop.config();
      return run_checks(grid, bindings, as_json, out, [&](const ParamMap& ps) {
        SourceUnit a = parse_unit(left_text, ps);
        SourceUnit b = parse_unit(right_text, ps);
        if (!(a.space == b.space)) throw UsageError("the two programs declare different state spaces");
        ProbeOptions po;
        po.observed = observed;
        po.random_count = probes;
        po.seed = seed;
        ProbeFamily family = ProbeFamily::build(a.space, {a.program, b.program}, po);
        CheckOptions co;
        co.loop = cfg;
        co.initial = initial_filter(initial, a);
        Verdict v = refines ? check_refines(a.program, b.program, family, a.space, co)
                            : check_equal(a.program, b.program, family, a.space, co);
        return std::make_pair(v, a.space);
      });
    }

    if (var_cmd->parsed()) {
      const std::string text = read_text(program, in);
      auto grid = parse_grid(grid_lists, grid_steps);
      const Rational eps = parse_rational(epsilon, "epsilon");
      return run_checks(grid, bindings, as_json, out, [&](const ParamMap& ps) {
        SourceUnit unit = parse_unit(text, ps);
        VariantSpec spec{parse_expr(variant, unit.space, unit.params), bound, eps};
        CheckOptions co;
        co.initial = initial_filter(initial, unit);
        return std::make_pair(check_variant(unit.program, spec, unit.space, co), unit.space);
      });
    }

    if (sample_cmd->parsed()) {
      std::unique_ptr<sampler::BitSource> source;
      if (!bits.empty()) {
        std::vector<int> script;
        for (char c : bits) {
          if (c == '0' || c == '1')
            script.push_back(c - '0');
          else if (c != ',' && c != ' ')
            throw UsageError("--bits takes 0s and 1s");
        }
        source = std::make_unique<sampler::ScriptedBits>(script);
      } else {
        source = std::make_unique<sampler::SeededBits>(seed);
      }
      json samples = json::array();
      std::optional<sampler::WeightedDist> d;
      std::optional<Rational> p;
      if (!dist.empty())
        d = dist_arg(dist, in);
      else
        p = parse_rational(prob, "probability");
      for (std::size_t i = 0; i < count; ++i) {
        sampler::SampleTrace t = d ? sampler::sample_discrete(*d, *source) : sampler::sample_binary(*p, *source);
        std::string b;
        for (int x : t.bits) b += static_cast<char>('0' + x);
        if (as_json)
          samples.push_back({{"outcome", t.outcome}, {"flips", t.flips}, {"bits", b}});
        else
          out << "outcome=" << t.outcome << " flips=" << t.flips << " bits=" << (b.empty() ? "-" : b) << "\n";
      }
      if (as_json) out << samples.dump(2) << "\n";
      return kOk;
    }

    if (trials_cmd->parsed()) {
      std::uint64_t file_runs = 1000000;
      sampler::WeightedDist d = dist_arg(dist, in, &file_runs);
      std::uint64_t n = runs ? runs : file_runs;
      std::optional<ddg::CrosscheckReport> cc;
      sampler::TrialsReport r;
      if (crosscheck) {
        cc = ddg::crosscheck(d, n, seed);
        r = cc->trials;
      } else {
        r = sampler::run_trials(d, n, seed);
      }
      sampler::ChiSquare chi = sampler::chi_square(r.tallies, d);
      if (as_json) {
        json j{{"runs", r.runs},       {"seed", r.seed},         {"tallies", r.tallies},
               {"avg_flips", r.avg_flips}, {"rel_freq", r.rel_freq}, {"chi_square", chi.statistic},
               {"dof", chi.dof},       {"p_value", chi.p_value}};
        if (cc) {
          j["exact_expected_flips"] = cc->exact.expected_flips.fraction();
          j["freq_z"] = cc->freq_z;
          j["flips_z"] = cc->flips_z;
        }
        out << j.dump(2) << "\n";
      } else {
        out << r.runs << " runs, seed " << r.seed << "\nRelative frequencies\n     ";
        for (double f : r.rel_freq) out << " " << double_text(f);
        out << "\nrealised, using " << double_text(r.avg_flips) << " flips on average.\n";
        out << "chi-square " << double_text(chi.statistic) << " on " << chi.dof << " dof, p = "
            << double_text(chi.p_value) << "\n";
        if (cc) {
          out << "exact expected flips " << cc->exact.expected_flips.str() << ", z = " << double_text(cc->flips_z)
              << "\nfrequency z-scores";
          for (double z : cc->freq_z) out << " " << double_text(z);
          out << "\n";
        }
      }
      return kOk;
    }

    if (build_cmd->parsed()) {
      ddg::Machine m = ddg::build_machine(dist_arg(dist, in), max_nodes);
      if (as_json) {
        json nodes = json::array();
        for (const auto& n : m.nodes) {
          json j{{"id", n.id}, {"label", n.label}};
          if (n.leaf()) {
            j["outcome"] = n.outcome;
          } else {
            j["heads"] = m.nodes[n.heads].id;
            j["tails"] = m.nodes[n.tails].id;
          }
          nodes.push_back(j);
        }
        out << json{{"root", m.nodes[m.root].id}, {"outcomes", m.outcomes}, {"nodes", nodes}}.dump(2) << "\n";
      } else {
        out << ddg::save_machine(m);
      }
      return kOk;
    }

    if (analyze_cmd->parsed()) {
      ddg::MachineAnalysis a = ddg::analyze(load_machine_arg());
      if (as_json) {
        json probs = json::array();
        for (const auto& p : a.outcome_prob) probs.push_back(p.fraction());
        out << json{{"nodes", a.node_count}, {"expected_flips", a.expected_flips.fraction()}, {"outcome_prob", probs}}
                   .dump(2)
            << "\n";
      } else {
        out << "nodes=" << a.node_count << " expected_flips=" << a.expected_flips.fraction() << "\n";
        for (std::size_t i = 0; i < a.outcome_prob.size(); ++i)
          out << "outcome " << i + 1 << " " << a.outcome_prob[i].fraction() << "\n";
      }
      return kOk;
    }

    if (dot_cmd->parsed()) {
      std::string dot = ddg::to_dot(load_machine_arg());
      if (as_json)
        out << json{{"dot", dot}}.dump(2) << "\n";
      else
        out << dot;
      return kOk;
    }
  } catch (const std::exception& e) {
    err << "pgcl: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace pgcl::cli
