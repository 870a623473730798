// Command-line front end. Exit codes: 0 true/pass, 1 false/fail, 2 error.

#include "gdiam/bench.hpp"
#include "gdiam/hardness.hpp"
#include "gdiam/instance.hpp"
#include "gdiam/vc_check.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace gdiam;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string numeric = "rational";
  std::string out;
};

NumericMode numeric_mode(const Globals& g) {
  return g.numeric == "float" ? NumericMode::Float : NumericMode::Rational;
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw std::runtime_error("cannot write " + g.out);
  f << text;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> v;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) v.push_back(std::stoi(item));
  return v;
}

// Source graph from --graph, or random from --sizes and --p.
struct GraphSource {
  std::string path, sizes;
  double p = 0.5;
};

SourceGraph load_or_random(const GraphSource& src, SourceKind kind, std::uint64_t seed) {
  if (!src.path.empty()) {
    auto g = load_source_graph(src.path);
    if (g.kind != kind)
      throw std::invalid_argument(std::string("graph kind ") + source_kind_name(g.kind) + " does not fit, need " +
                                  source_kind_name(kind));
    return g;
  }
  std::vector<int> sizes = parse_int_list(src.sizes);
  if (sizes.empty()) sizes = kind == SourceKind::Tripartite ? std::vector<int>{4, 6, 4}
                             : kind == SourceKind::Hypergraph6 ? std::vector<int>(6, 2)
                             : kind == SourceKind::Fourpartite ? std::vector<int>{3, 3, 3, 3}
                                                               : std::vector<int>{3, 3, 3};
  return random_source_graph(kind, sizes, src.p, seed);
}

std::string witness_str(const std::optional<std::pair<int, int>>& w) {
  return w ? std::to_string(w->first) + "," + std::to_string(w->second) : "none";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diameter deciders for geometric intersection graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--numeric", g.numeric, "rational: exact input required; float: round")
      ->check(CLI::IsMember({"rational", "float"}));
  app.add_option("--out", g.out, "output file (default stdout)");

  // gen
  auto* gen = app.add_subcommand("gen", "write a random instance, reduction instance or source graph");
  std::string gen_alg, gen_target, gen_source, save_graph;
  int gen_n = 300;
  bool literal = false, no_hub = false;
  GenOptions gopt;
  GraphSource gsrc;
  gen->add_option("--alg", gen_alg, "random instance for an algorithm");
  gen->add_option("--n", gen_n, "object count");
  gen->add_option("--side", gopt.cube_side, "unit-cube center range for diam2");
  gen->add_flag("--no-hub", no_hub, "no domain-spanning Q box");
  gen->add_option("--target", gen_target, "reduction instance for a target");
  gen->add_option("--source", gen_source, "write a random source graph of this kind");
  gen->add_option("--graph", gsrc.path, "source graph file");
  gen->add_option("--sizes", gsrc.sizes, "part sizes of a random source graph, e.g. 4,6,4");
  gen->add_option("--p", gsrc.p, "edge probability of a random source graph");
  gen->add_option("--save-graph", save_graph, "also save the source graph used");
  gen->add_flag("--literal", literal, "no padding vertices (clique targets)");

  // solve
  auto* solve = app.add_subcommand("solve", "run a decider on an instance");
  std::string solve_path, solve_alg;
  int solve_g = 0;
  bool check_oracle = false;
  solve->add_option("instance", solve_path, "instance JSON")->required();
  solve->add_option("--alg", solve_alg, "algorithm")->required();
  solve->add_option("--g", solve_g, "grid parameter (0 = default)");
  solve->add_flag("--check-oracle", check_oracle, "compare with the BFS oracle");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact BFS oracle");
  std::string oracle_path;
  int delta = 2;
  oracle->add_option("instance", oracle_path, "instance JSON")->required();
  oracle->add_option("--delta", delta, "diameter bound for generic instances");

  // verify-reduction
  auto* verify = app.add_subcommand("verify-reduction", "check a reduction against its source graph");
  std::string v_target, v_instance, v_obs;
  GraphSource vsrc;
  bool v_literal = false;
  verify->add_option("--target", v_target, "reduction target");
  verify->add_option("--graph", vsrc.path, "source graph file");
  verify->add_option("--sizes", vsrc.sizes, "part sizes of a random source graph");
  verify->add_option("--p", vsrc.p, "edge probability of a random source graph");
  verify->add_flag("--literal", v_literal, "no padding vertices (clique targets)");
  verify->add_option("--instance", v_instance, "check observations on this instance only");
  verify->add_option("--observation", v_obs, "obs_ball3D, obs_4Dcube, obs_10Dcube or obs_6Dcube");

  // vc
  auto* vc = app.add_subcommand("vc", "VC-dimension falsification suites");
  std::string vc_case_s;
  int trials = 500, restarts = 0, steps = 3000;
  vc->add_option("--case", vc_case_s, "diam2-vc1, diam3-vc1, diam3-vc2 or rect-unbounded")->required();
  vc->add_option("--trials", trials, "random configurations (largest k for rect-unbounded)");
  vc->add_option("--adversarial", restarts, "hill-climbing restarts in addition");
  vc->add_option("--steps", steps, "hill-climbing steps per restart");

  // bench
  auto* bench = app.add_subcommand("bench", "time a decider over growing n");
  std::string b_alg, b_ns = "1024,2048,4096,8192,16384";
  int reps = 3, skip = 2, b_g = 0;
  GenOptions bopt;
  bool b_no_hub = false;
  bench->add_option("--alg", b_alg, "algorithm")->required();
  bench->add_option("--n", b_ns, "comma-separated increasing n");
  bench->add_option("--reps", reps, "repetitions per n (>= 3)");
  bench->add_option("--skip", skip, "smallest n left out of the fit");
  bench->add_option("--g", b_g, "grid parameter (0 = default)");
  bench->add_option("--side", bopt.cube_side, "unit-cube center range for diam2");
  bench->add_flag("--no-hub", b_no_hub, "no domain-spanning Q box");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      gopt.hub = !no_hub;
      const int picks = !gen_alg.empty() + !gen_target.empty() + !gen_source.empty();
      if (picks != 1) throw std::invalid_argument("gen needs exactly one of --alg, --target, --source");
      if (!gen_source.empty()) {
        GraphSource s = gsrc;
        s.path.clear();
        emit(g, format_source_graph(load_or_random(s, parse_source_kind(gen_source), g.seed)));
        return 0;
      }
      Instance inst;
      if (!gen_alg.empty()) {
        inst = random_instance(parse_alg(gen_alg), gen_n, g.seed, gopt);
      } else {
        const Target t = parse_target(gen_target);
        auto sg = load_or_random(gsrc, source_kind_for(t), g.seed);
        if (!save_graph.empty()) save_source_graph(sg, save_graph);
        auto params = default_params(sg, t);
        params.pad_isolated = !literal;
        inst = reduce(sg, t, params);
      }
      inst.numeric_mode = numeric_mode(g);
      emit(g, to_json(inst).dump(1) + "\n");
      return 0;
    }

    if (*solve) {
      const Alg a = parse_alg(solve_alg);
      const Instance inst = load_instance(solve_path);
      SolveOptions opt;
      opt.g = solve_g;
      opt.seed = g.seed;
      opt.numeric = numeric_mode(g);
      auto r = run_solve(inst, a, opt);
      std::ostringstream out;
      out << "result=" << (r.result ? "true" : "false") << "\nwitness=" << witness_str(r.witness)
          << "\nstats=" << r.stats << "\n";
      if (check_oracle) {
        auto o = run_oracle(inst);
        out << "oracle=" << (o.result ? "true" : "false") << "\n";
        if (o.result != r.result) {
          emit(g, out.str());
          std::cerr << "error: decider and oracle disagree on " << solve_path << "\n";
          return 2;
        }
      }
      emit(g, out.str());
      return r.result ? 0 : 1;
    }

    if (*oracle) {
      auto o = run_oracle(load_instance(oracle_path), delta);
      emit(g, "result=" + std::string(o.result ? "true" : "false") + "\nmode=" + o.mode +
                  "\nwitness=" + witness_str(o.witness) + "\n");
      return o.result ? 0 : 1;
    }

    if (*verify) {
      std::ostringstream out;
      bool ok = true;
      auto report_obs = [&](const Instance& inst, Observation which) {
        auto rep = verify_observations(inst, which);
        out << observation_name(which) << "=" << (rep.ok ? "ok" : "fail") << " checks=" << rep.checks;
        if (!rep.ok) out << " item=" << rep.item << " message=\"" << rep.message << "\"";
        out << "\n";
        ok = ok && rep.ok;
      };
      if (!v_instance.empty()) {
        if (v_obs.empty()) throw std::invalid_argument("--instance needs --observation");
        report_obs(load_instance(v_instance), parse_observation(v_obs));
      } else {
        if (v_target.empty()) throw std::invalid_argument("verify-reduction needs --target or --instance");
        const Target t = parse_target(v_target);
        auto sg = load_or_random(vsrc, source_kind_for(t), g.seed);
        auto params = default_params(sg, t);
        params.pad_isolated = !v_literal;
        auto eq = check_equivalence(sg, t, params);
        out << "target=" << target_name(t) << "\nsource=" << (eq.source ? "true" : "false")
            << "\ngeometric=" << (eq.geometric ? "true" : "false") << "\nagree=" << (eq.agree() ? "true" : "false")
            << "\n";
        ok = eq.agree();
        const Instance inst = reduce(sg, t, params);
        if (source_kind_for(t) == SourceKind::Tripartite)
          report_obs(inst, t == Target::Balls3d ? Observation::Ball3D : Observation::Cube4D);
        else
          report_obs(inst, t == Target::Hypercubes10d ? Observation::Cube10D : Observation::Cube6D);
      }
      emit(g, out.str());
      return ok ? 0 : 1;
    }

    if (*vc) {
      const VcCase c = parse_vc_case(vc_case_s);
      auto rep = run_vc_case(c, trials, g.seed);
      std::ostringstream out;
      out << "case=" << vc_case_name(c) << " trials=" << rep.trials << " violations=" << rep.violations
          << " nontrivial=" << rep.nontrivial << " exhaustive=" << (rep.exhaustive ? "true" : "false") << "\n";
      if (!rep.witness.empty()) out << "witness=" << rep.witness << "\n";
      bool ok = rep.ok();
      if (restarts > 0 && c != VcCase::RectUnbounded) {
        auto adv = adversarial_vc_case(c, restarts, steps, g.seed, 10);
        out << "adversarial restarts=" << adv.trials << " violations=" << adv.violations
            << " nontrivial=" << adv.nontrivial << "\n";
        if (!adv.witness.empty()) out << "witness=" << adv.witness << "\n";
        ok = ok && adv.ok();
      }
      out << (ok ? "PASS" : "FAIL") << "\n";
      emit(g, out.str());
      return ok ? 0 : 1;
    }

    if (*bench) {
      const Alg a = parse_alg(b_alg);
      bopt.hub = !b_no_hub;
      SolveOptions opt;
      opt.g = b_g;
      opt.numeric = numeric_mode(g);
      auto recs = run_bench(a, parse_int_list(b_ns), reps, g.seed, opt, bopt);
      emit(g, bench_csv(recs));
      std::ostream& info = g.out.empty() ? std::cerr : std::cout;
      for (const auto& r : recs)
        if (r.rep == 0) info << "n=" << r.n << " " << r.aux << "\n";
      if (static_cast<int>(parse_int_list(b_ns).size()) - skip >= 2) {
        auto fit = fit_scaling(recs, skip);
        char line[160];
        std::snprintf(line, sizeof line, "fit alg=%s exponent=%.3f r2=%.4f skipped=%d\n", alg_name(a), fit.exponent,
                      fit.r2, fit.skipped);
        info << line;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
