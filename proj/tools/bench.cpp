// bench: dataset generation and experiment runner.
//
// Exit status: 0 all checks passed, 2 a threshold check failed, 1 usage or
// input error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdnn/dataset_io.hpp"
#include "sdnn/experiments.hpp"

#ifndef BENCH_VERSION
#define BENCH_VERSION "dev"
#endif

namespace {

using nlohmann::ordered_json;
using namespace sdnn;
namespace ex = sdnn::experiments;

constexpr const char* kFormat = "report-v1";

struct Check {
  std::string name;
  double value;
  std::string op;  // "<=", ">=", "<", "==" etc.
  double limit;

  bool pass() const {
    if (op == "<=") return value <= limit;
    if (op == ">=") return value >= limit;
    if (op == "<") return value < limit;
    if (op == ">") return value > limit;
    return value == limit;
  }
};

struct Report {
  std::string subcommand;
  ordered_json config = ordered_json::object();
  ordered_json results = ordered_json::object();
  ordered_json trials = ordered_json::array();
  std::vector<Check> checks;
  std::optional<double> wall_seconds;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass()) return false;
    return true;
  }

  ordered_json to_json() const {
    ordered_json j;
    j["format"] = kFormat;
    j["version"] = BENCH_VERSION;
    j["subcommand"] = subcommand;
    j["config"] = config;
    j["results"] = results;
    ordered_json cs = ordered_json::array();
    for (const auto& c : checks)
      cs.push_back({{"name", c.name}, {"value", c.value}, {"op", c.op}, {"limit", c.limit}, {"pass", c.pass()}});
    j["checks"] = cs;
    j["pass"] = pass();
    if (!trials.empty()) j["trials"] = trials;
    if (wall_seconds) j["timing"] = {{"wall_seconds", *wall_seconds}};
    return j;
  }

  std::string to_csv() const {
    std::ostringstream out;
    if (!trials.empty()) {
      bool header = true;
      for (const auto& row : trials) {
        if (header) {
          std::string sep;
          for (const auto& [k, v] : row.items()) out << std::exchange(sep, ",") << k;
          out << '\n';
          header = false;
        }
        std::string sep;
        for (const auto& [k, v] : row.items()) out << std::exchange(sep, ",") << v.dump();
        out << '\n';
      }
      return out.str();
    }
    out << "key,value\n";
    for (const auto& [k, v] : results.items())
      if (v.is_primitive()) out << k << ',' << v.dump() << '\n';
    for (const auto& c : checks) out << "check:" << c.name << ',' << (c.pass() ? "pass" : "fail") << '\n';
    return out.str();
  }
};

struct Options {
  std::size_t n = 10;
  std::size_t d = 10000;
  std::string metric = "L1";
  double p = 3.0;
  double eps = 0.25;
  double delta = 0.2;
  std::optional<double> ct;
  std::optional<double> cm;
  std::size_t trials = 400;
  std::uint64_t seed = 0;
  std::string profile = "hp";
  double delta_grid = 100.0;
  std::string strategy = "scan";
  std::string generator = "planted-nn";
  double gap = 2.0;
  std::string out;
  std::string format = "json";
  bool timing = false;
  bool allow_large_p = false;
  bool binary = false;
  std::string input;
  std::size_t rows = 0;
  std::size_t linear_d = 10000;
  std::vector<std::size_t> sizes{16, 64, 256};
};

void add_output(CLI::App* app, Options& o) {
  app->add_option("--out", o.out, "Report file (stdout when omitted)");
  app->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app->add_flag("--timing", o.timing, "Include wall time (reports are then not bit-reproducible)");
  app->add_option("--seed", o.seed, "Master seed");
}

void add_params(CLI::App* app, Options& o) {
  app->add_option("--eps", o.eps, "Accuracy epsilon")->capture_default_str();
  app->add_option("--delta", o.delta, "Failure probability delta")->capture_default_str();
  app->add_option("--ct", o.ct, "Rounds multiplier cT");
}

Params make_params(const Options& o) {
  Params p = Params::with(o.eps, o.delta, o.seed);
  p.rounds_constant = o.ct;
  p.rows_constant = o.cm;
  p.validate();
  return p;
}

ordered_json params_json(const Options& o) {
  ordered_json j{{"eps", o.eps}, {"delta", o.delta}, {"seed", o.seed}};
  j["ct"] = o.ct ? ordered_json(*o.ct) : ordered_json(nullptr);
  return j;
}

ordered_json trial_rows(const TrialSummary& s) {
  ordered_json rows = ordered_json::array();
  for (const auto& t : s.trials)
    rows.push_back({{"seed", t.seed},
                    {"returned", t.returned},
                    {"truth", t.truth},
                    {"ratio", t.ratio},
                    {"probes", t.probes},
                    {"distinct_probes", t.distinct_probes},
                    {"words", t.words},
                    {"success", t.success}});
  return rows;
}

void summary_json(ordered_json& j, const TrialSummary& s) {
  j["success_rate"] = s.success_rate;
  j["mean_ratio"] = s.mean_ratio;
  j["max_ratio"] = s.max_ratio;
  j["mean_probes"] = s.mean_probes;
  j["mean_distinct_probes"] = s.mean_distinct_probes;
  j["max_distinct_probes"] = s.max_distinct_probes;
  j["mean_words"] = s.mean_words;
  j["max_words"] = s.max_words;
}

Report run_gen(const Options& o) {
  Report r;
  InstanceSpec spec;
  const auto kind = parse_generator(o.generator);
  if (!kind) throw std::invalid_argument("unknown generator: " + o.generator);
  spec.generator = *kind;
  spec.n = o.n;
  spec.d = o.d;
  spec.metric = parse_metric(o.metric, o.p);
  spec.gap = o.gap;
  spec.grid_bound = o.delta_grid;
  spec.seed = o.seed;
  spec.path = o.input;
  const auto inst = generate(spec);
  save_dataset(o.out, inst.points, o.binary);
  r.config = {{"generator", o.generator}, {"n", o.n},        {"d", o.d},           {"metric", spec.metric.name()},
              {"gap", o.gap},             {"delta_grid", o.delta_grid}, {"seed", o.seed}, {"binary", o.binary}};
  r.results = {{"path", o.out}, {"n", inst.points.size()}, {"d", inst.points.dim()}};
  return r;
}

Report run_linear(const Options& o, Metric metric, bool generator_given) {
  Report r;
  ex::LinearConfig c;
  c.metric = metric;
  c.profile = o.profile == "expected" ? Profile::ExpectedConstant : Profile::HighProbability;
  const std::string generator =
      generator_given ? o.generator : (c.profile == Profile::ExpectedConstant ? "grid" : "planted-nn");
  const auto kind = parse_generator(generator);
  if (!kind) throw std::invalid_argument("unsupported generator: " + generator);
  if (*kind == GeneratorKind::FromFile && o.input.empty()) throw std::invalid_argument("from-file needs --input");
  c.generator = *kind;
  c.path = o.input;
  c.n = o.n;
  c.d = o.d;
  if (c.generator == GeneratorKind::FromFile) {
    const PointSet file = load_dataset(c.path);
    c.n = file.size();
    c.d = file.dim();
  }
  c.gap = o.gap;
  c.grid_bound = o.delta_grid;
  c.params = make_params(o);
  c.trials = o.trials;
  c.seed = o.seed;
  const auto res = ex::linear_ann(c);

  r.config = params_json(o);
  r.config["cm"] = o.cm ? ordered_json(*o.cm) : ordered_json(nullptr);
  r.config.update(ordered_json{{"metric", metric.name()}, {"generator", generator}, {"n", c.n}, {"d", c.d},
                               {"gap", o.gap}, {"profile", o.profile}, {"delta_grid", o.delta_grid},
                               {"trials", o.trials}});
  if (c.generator == GeneratorKind::FromFile) r.config["input"] = o.input;
  summary_json(r.results, res.summary);
  r.results["rounds"] = res.rounds;
  r.results["rows"] = res.rows;
  r.results["mean_multiset"] = res.mean_multiset;
  r.results["max_multiset"] = res.max_multiset;
  r.results["multiset_within_2tn"] = res.multiset_within_bound;
  r.results["mean_mass"] = res.mean_mass;
  r.results["proven_range"] = res.proven_range;
  r.trials = trial_rows(res.summary);

  const double d = static_cast<double>(c.d), n = static_cast<double>(c.n);
  if (c.profile == Profile::HighProbability) {
    r.checks.push_back({"success_rate", res.summary.success_rate, ">=", 1.0 - o.delta - 0.05});
    r.checks.push_back({"max_distinct_probes_over_d", static_cast<double>(res.summary.max_distinct_probes) / d, "<", 0.1});
    r.checks.push_back({"max_words_over_nd", static_cast<double>(res.summary.max_words) / (n * d), "<", 0.1});
  } else {
    r.checks.push_back({"mean_ratio", res.summary.mean_ratio, "<=", 8.0 + o.eps});
  }
  return r;
}

Report run_lp(const Options& o) {
  if (o.p > 8.0 && !o.allow_large_p) throw std::invalid_argument("p > 8 needs --allow-large-p");
  Report r;
  ex::QuadraticConfig c;
  c.n = o.n;
  c.d = o.d;
  c.p = o.p;
  c.gap = o.gap;
  c.params = make_params(o);
  c.strategy = o.strategy == "tournament" ? Strategy::Tournament : Strategy::Scan;
  c.trials = o.trials;
  c.seed = o.seed;
  const auto res = ex::quadratic_ann(c);

  r.config = params_json(o);
  r.config.update(ordered_json{{"p", o.p}, {"n", o.n}, {"d", o.d}, {"gap", o.gap}, {"strategy", o.strategy},
                               {"trials", o.trials}});
  summary_json(r.results, res.summary);
  r.results["mean_comparisons"] = res.mean_comparisons;
  r.results["max_comparisons"] = res.max_comparisons;
  r.results["pair_epsilon"] = res.pair_epsilon;
  r.results["pair_delta"] = res.pair_delta;
  r.results["pair_rounds"] = res.pair_rounds;
  r.results["proven_range"] = res.proven_range;
  r.trials = trial_rows(res.summary);
  r.checks.push_back({"success_rate", res.summary.success_rate, ">=", 1.0 - o.delta - 0.05});
  if (c.strategy == Strategy::Scan)
    r.checks.push_back({"max_comparisons", static_cast<double>(res.max_comparisons), "==", static_cast<double>(o.n - 1)});
  return r;
}

Report run_range(const Options& o) {
  Report r;
  ex::RangeConfig c;
  c.n = o.n;
  c.d = o.d;
  c.params = make_params(o);
  c.trials = o.trials;
  c.seed = o.seed;
  const auto res = ex::range_search(c);
  r.config = params_json(o);
  r.config.update(ordered_json{{"n", o.n}, {"d", o.d}, {"trials", o.trials}});
  r.results = {{"rounds", res.rounds},
               {"false_negatives", res.false_negatives},
               {"far_included", res.far_included},
               {"far_inclusion_rate", res.far_inclusion_rate},
               {"mean_reported", res.mean_reported},
               {"mean_distinct_probes", res.mean_distinct_probes},
               {"mean_words", res.mean_words}};
  r.checks.push_back({"false_negatives", static_cast<double>(res.false_negatives), "==", 0.0});
  r.checks.push_back({"far_inclusion_rate", res.far_inclusion_rate, "<=", o.delta + 0.05});
  return r;
}

Report run_mass(const Options& o) {
  Report r;
  ex::MassBoundConfig c;
  c.instances = o.trials;
  c.max_n = o.n;
  c.max_d = o.d;
  c.seed = o.seed;
  const auto res = ex::mass_bound(c);
  const auto col = ex::collapse_recurrence(o.trials, o.seed);
  r.config = {{"instances", o.trials}, {"max_n", o.n}, {"max_d", o.d}, {"seed", o.seed}};
  r.results = {{"instances", res.rows.size()},
               {"violations", res.violations},
               {"min_mass", res.min_mass},
               {"max_mass_over_n", res.max_mass_over_n},
               {"collapse_instances", col.instances},
               {"collapse_violations", col.violations},
               {"collapse_max_excess", col.max_excess}};
  for (const auto& row : res.rows)
    r.trials.push_back({{"metric", row.metric}, {"generator", row.generator}, {"n", row.n}, {"d", row.d},
                        {"mass", row.mass}, {"ok", row.ok}});
  r.checks.push_back({"mass_violations", static_cast<double>(res.violations), "==", 0.0});
  r.checks.push_back({"collapse_violations", static_cast<double>(col.violations), "==", 0.0});
  return r;
}

Report run_sketch(const Options& o) {
  Report r;
  ex::SketchConfig c;
  const Metric metric = parse_metric(o.metric, o.p);
  if (metric.exponent() != 1.0 && metric.exponent() != 2.0) throw std::invalid_argument("sketch-quality needs L1 or L2");
  c.kind = metric.exponent() == 1.0 ? ProjectionKind::Cauchy : ProjectionKind::SignJL;
  c.d = o.d;
  c.rows = o.rows;
  c.epsilon = o.eps;
  c.failure = o.delta;
  c.pairs = o.trials;
  c.seed = o.seed;
  const auto res = ex::sketch_quality(c);
  r.config = {{"metric", metric.name()}, {"d", o.d}, {"rows", o.rows}, {"eps", o.eps},
              {"delta", o.delta},        {"pairs", o.trials}, {"seed", o.seed}};
  r.results = {{"rows", res.rows},
               {"pairs", res.pairs},
               {"within", res.within},
               {"fraction", res.fraction},
               {"max_relative_error", res.max_relative_error}};
  r.checks.push_back({"fraction_within", res.fraction, ">=", 0.9});
  return r;
}

Report run_comparator(const Options& o) {
  if (o.p > 8.0 && !o.allow_large_p) throw std::invalid_argument("p > 8 needs --allow-large-p");
  Report r;
  ex::ComparatorConfig c;
  c.p = o.p;
  c.epsilon = o.eps;
  c.delta = o.delta;
  c.d = o.d;
  c.triples = o.trials;
  c.rounds_constant = o.ct.value_or(kDefaultComparatorRounds);
  c.seed = o.seed;
  const auto res = ex::comparator(c);
  const auto tr = ex::truncation_ratio(o.p, o.eps, o.trials, 10, o.seed);
  r.config = params_json(o);
  r.config.update(ordered_json{{"p", o.p}, {"d", o.d}, {"triples", o.trials}});
  r.results = {{"rounds", res.rounds},
               {"correct_rate", res.correct_rate},
               {"range_violations", res.range_violations},
               {"max_term", res.max_term},
               {"term_bound", res.term_bound},
               {"mean_distinct", res.mean_distinct},
               {"truncation_violations", tr.violations},
               {"truncation_applied", tr.truncated},
               {"truncation_min_gain", tr.min_gain}};
  r.checks.push_back({"correct_rate", res.correct_rate, ">=", 1.0 - o.delta - 0.05});
  r.checks.push_back({"range_violations", static_cast<double>(res.range_violations), "==", 0.0});
  r.checks.push_back({"truncation_violations", static_cast<double>(tr.violations), "==", 0.0});
  return r;
}

Report run_tournament(const Options& o) {
  Report r;
  const auto res = ex::tournament_counts(o.sizes, o.seed);
  r.config = {{"sizes", o.sizes}, {"seed", o.seed}};
  r.results = {{"fitted_c", res.fitted_c}, {"within_fit", res.within_fit}, {"all_exact", res.all_exact}};
  for (const auto& row : res.rows)
    r.trials.push_back({{"n", row.n}, {"comparisons", row.comparisons}, {"n_log_log_n", row.n_log_log},
                        {"exact", row.exact}});
  r.checks.push_back({"all_exact", res.all_exact ? 1.0 : 0.0, "==", 1.0});
  r.checks.push_back({"within_fit", res.within_fit ? 1.0 : 0.0, "==", 1.0});
  return r;
}

Report run_space(const Options& o) {
  Report r;
  const auto res = ex::space_scaling(o.n, o.d, {o.n, 2 * o.n, 4 * o.n}, o.linear_d, o.seed);
  r.config = {{"n", o.n}, {"d", o.d}, {"linear_d", o.linear_d}, {"seed", o.seed}};
  r.results = {{"quadratic_ratio", res.quadratic_ratio}};
  for (const auto& row : res.rows)
    r.trials.push_back({{"structure", row.structure}, {"n", row.n}, {"d", row.d}, {"words", row.words},
                        {"words_over_nd", static_cast<double>(row.words) / static_cast<double>(row.n * row.d)}});
  r.checks.push_back({"quadratic_ratio_low", res.quadratic_ratio, ">=", 3.5});
  r.checks.push_back({"quadratic_ratio_high", res.quadratic_ratio, "<=", 4.5});
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sublinear-probe nearest neighbor structures: generators and experiments"};
  app.set_version_flag("--version", BENCH_VERSION);
  app.require_subcommand(1);

  Options gen, l1, l2, lp, range, mass, sketch, cmp, tour, space;

  auto* g = app.add_subcommand("gen", "Generate a dataset file");
  g->add_option("--generator", gen.generator)
      ->check(CLI::IsMember({"gaussian", "boolean-cube", "unit-vectors", "planted-nn", "grid", "from-file"}));
  g->add_option("--n", gen.n);
  g->add_option("--d", gen.d);
  g->add_option("--metric", gen.metric);
  g->add_option("--p", gen.p);
  g->add_option("--gap", gen.gap);
  g->add_option("--delta-grid", gen.delta_grid);
  g->add_option("--input", gen.input, "Source dataset for from-file");
  g->add_option("--seed", gen.seed);
  g->add_option("--out", gen.out, "Dataset path")->required();
  g->add_flag("--binary", gen.binary, "Write the binary dataset format");

  auto linear = [&](const char* name, const char* help, Options& o) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("--n", o.n);
    s->add_option("--d", o.d);
    s->add_option("--trials", o.trials);
    s->add_option("--gap", o.gap);
    s->add_option("--generator", o.generator)->check(CLI::IsMember({"gaussian", "boolean-cube", "unit-vectors", "planted-nn", "grid", "from-file"}));
    s->add_option("--input", o.input, "Dataset for the from-file generator");
    s->add_option("--profile", o.profile)->check(CLI::IsMember({"hp", "expected"}));
    s->add_option("--delta-grid", o.delta_grid, "Coordinate bound for the expected profile");
    s->add_option("--cm", o.cm, "Sketch rows multiplier cM");
    add_params(s, o);
    add_output(s, o);
    return s;
  };
  auto* a1 = linear("ann-l1", "Near-linear L1 structure on planted instances", l1);
  auto* a2 = linear("ann-l2", "Near-linear L2 structure on planted instances", l2);

  lp.n = 8;
  lp.d = 2000;
  lp.eps = 0.2;
  lp.trials = 300;
  auto* q = app.add_subcommand("ann-lp", "Quadratic Lp structure on planted instances");
  q->add_option("--n", lp.n);
  q->add_option("--d", lp.d);
  q->add_option("--p", lp.p);
  q->add_option("--metric", lp.metric, "Ignored unless Lp; kept for symmetry");
  q->add_option("--gap", lp.gap);
  q->add_option("--trials", lp.trials);
  q->add_option("--strategy", lp.strategy)->check(CLI::IsMember({"scan", "tournament"}));
  q->add_flag("--allow-large-p", lp.allow_large_p);
  add_params(q, lp);
  add_output(q, lp);

  range.d = 2000;
  range.delta = 0.1;
  auto* rs = app.add_subcommand("range", "Approximate orthogonal range search");
  rs->add_option("--n", range.n);
  rs->add_option("--d", range.d);
  rs->add_option("--trials", range.trials);
  add_params(rs, range);
  add_output(rs, range);

  mass.n = 30;
  mass.d = 2000;
  mass.trials = 200;
  auto* mb = app.add_subcommand("mass-bound", "Sampling mass bound and collapse recurrence");
  mb->add_option("--instances,--trials", mass.trials, "Instances per metric");
  mb->add_option("--n", mass.n, "Largest n");
  mb->add_option("--d", mass.d, "Largest d");
  add_output(mb, mass);

  sketch.d = 300;
  sketch.delta = 0.1;
  sketch.trials = 200;
  auto* sq = app.add_subcommand("sketch-quality", "Cauchy median and sign-JL distance estimates");
  sq->add_option("--metric", sketch.metric)->check(CLI::IsMember({"L1", "L2", "l1", "l2"}));
  sq->add_option("--d", sketch.d);
  sq->add_option("--rows", sketch.rows, "Sketch rows (0: 8 log(1/delta) / eps^2)");
  sq->add_option("--trials,--pairs", sketch.trials);
  add_params(sq, sketch);
  add_output(sq, sketch);

  cmp.eps = 0.2;
  cmp.delta = 0.1;
  cmp.d = 50;
  cmp.p = 1.0;
  auto* cp = app.add_subcommand("comparator", "Two-point Lp comparator and truncation check");
  cp->add_option("--p", cmp.p);
  cp->add_option("--d", cmp.d);
  cp->add_option("--trials,--triples", cmp.trials);
  cp->add_flag("--allow-large-p", cmp.allow_large_p);
  add_params(cp, cmp);
  add_output(cp, cmp);

  auto* tn = app.add_subcommand("tournament", "Tournament comparison counts with an exact comparator");
  tn->add_option("--sizes", tour.sizes)->delimiter(',');
  add_output(tn, tour);

  space.n = 8;
  space.d = 2000;
  auto* sp = app.add_subcommand("space-scaling", "Stored words as n grows");
  sp->add_option("--n", space.n);
  sp->add_option("--d", space.d, "Dimension for the quadratic structure");
  sp->add_option("--linear-d", space.linear_d, "Dimension for the linear structure");
  add_output(sp, space);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const auto start = std::chrono::steady_clock::now();
  Report report;
  const Options* opts = nullptr;
  try {
    if (*g) {
      report = run_gen(gen);
      opts = &gen;
    } else if (*a1) {
      report = run_linear(l1, Metric::l1(), a1->count("--generator") > 0);
      opts = &l1;
    } else if (*a2) {
      report = run_linear(l2, Metric::l2(), a2->count("--generator") > 0);
      opts = &l2;
    } else if (*q) {
      report = run_lp(lp);
      opts = &lp;
    } else if (*rs) {
      report = run_range(range);
      opts = &range;
    } else if (*mb) {
      report = run_mass(mass);
      opts = &mass;
    } else if (*sq) {
      report = run_sketch(sketch);
      opts = &sketch;
    } else if (*cp) {
      report = run_comparator(cmp);
      opts = &cmp;
    } else if (*tn) {
      report = run_tournament(tour);
      opts = &tour;
    } else {
      report = run_space(space);
      opts = &space;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  report.subcommand = app.get_subcommands().front()->get_name();
  if (opts->timing)
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string text = opts->format == "csv" ? report.to_csv() : report.to_json().dump(2) + "\n";
  if (opts->out.empty() || report.subcommand == "gen") {
    std::cout << text;
  } else {
    std::ofstream f(opts->out);
    if (!f) {
      std::cerr << "error: cannot write " << opts->out << '\n';
      return 1;
    }
    f << text;
  }
  return report.pass() ? 0 : 2;
}
