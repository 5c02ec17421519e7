#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stylex/classifier/metrics.hpp"
#include "stylex/classifier/model_io.hpp"
#include "stylex/crawl/experiment.hpp"
#include "stylex/dataset/corpus_io.hpp"
#include "stylex/live/live_backend.hpp"
#include "stylex/sim/mock_app.hpp"

namespace fs = std::filesystem;
using namespace stylex;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBackend = 3;
constexpr int kExitData = 4;
constexpr const char* kEndpointEnv = "STYLEX_CDP_ENDPOINT";

struct Options {
  std::uint64_t seed = 1;
  std::optional<std::size_t> budget_actions;
  std::optional<double> budget_seconds;
  std::string strategy = "STYLEX_CLK";
  std::vector<std::string> strategies;
  double epsilon = 0.0;
  std::size_t boosting_rounds = 10;
  std::size_t repeats = 5;
  std::vector<std::string> backends;
  std::string out;
  std::string models;
  std::string corpus;
  std::string event = "all";
  double test_fraction = 0.2;
  std::string instrumentation;
  std::string start_url;
  std::string urls_file;
  std::size_t quiescence_ms = 500;
  std::string app_kind = "equivalence";
  std::size_t classes = 5;
  std::size_t clones = 10;
  std::size_t depth = 3;
};

// One backend selection, either a simulator spec or a DevTools endpoint.
struct BackendSpec {
  enum class Kind { sim, cdp } kind = Kind::sim;
  std::string target;
};

BackendSpec parse_backend(const std::string& s) {
  if (s.rfind("sim:", 0) == 0) return {BackendSpec::Kind::sim, s.substr(4)};
  if (s.rfind("cdp:", 0) == 0) {
    std::string target = s.substr(4);
    if (target.empty()) {
      const char* env = std::getenv(kEndpointEnv);
      if (!env || !*env) throw ConfigError(std::string("cdp: backend needs an endpoint or ") + kEndpointEnv);
      target = env;
    }
    return {BackendSpec::Kind::cdp, target};
  }
  if (s == "cdp") return parse_backend("cdp:");
  throw ConfigError("backend must be sim:<path> or cdp:<url>, got '" + s + "'");
}

BackendSpec single_backend(const Options& o) {
  if (o.backends.empty()) {
    if (const char* env = std::getenv(kEndpointEnv); env && *env) return {BackendSpec::Kind::cdp, env};
    throw ConfigError("--backend is required");
  }
  if (o.backends.size() != 1) throw ConfigError("this command takes exactly one --backend");
  return parse_backend(o.backends.front());
}

fs::path out_dir(const Options& o) {
  if (o.out.empty()) throw ConfigError("--out is required");
  fs::create_directories(o.out);
  return o.out;
}

void write_json(const fs::path& p, const ojson& j) { write_text_file(p, j.dump(2) + "\n"); }

void write_config_echo(const fs::path& dir, const std::string& command, const Options& o) {
  ojson j;
  j["format"] = "stylex-run-config";
  j["schema_version"] = 1;
  j["command"] = command;
  j["seed"] = std::to_string(o.seed);
  j["budget_actions"] = o.budget_actions ? ojson(*o.budget_actions) : ojson(nullptr);
  j["budget_seconds"] = o.budget_seconds ? ojson(*o.budget_seconds) : ojson(nullptr);
  j["strategy"] = o.strategy;
  j["strategies"] = o.strategies;
  j["epsilon"] = o.epsilon;
  j["boosting_rounds"] = o.boosting_rounds;
  j["repeats"] = o.repeats;
  j["backends"] = o.backends;
  j["models"] = o.models;
  j["corpus"] = o.corpus;
  j["event"] = o.event;
  j["test_fraction"] = o.test_fraction;
  j["instrumentation"] = o.instrumentation;
  j["start_url"] = o.start_url;
  j["urls"] = o.urls_file;
  j["quiescence_ms"] = o.quiescence_ms;
  if (command == "gen-app") {
    j["app_kind"] = o.app_kind;
    j["classes"] = o.classes;
    j["clones"] = o.clones;
    j["depth"] = o.depth;
  }
  write_json(dir / "config.json", j);
}

CrawlBudget budget_of(const Options& o) {
  CrawlBudget b;
  if (o.budget_actions) b.max_actions = *o.budget_actions;
  if (o.budget_seconds) {
    if (*o.budget_seconds <= 0) throw ConfigError("--budget-seconds must be positive");
    b.max_wall_time = std::chrono::milliseconds(static_cast<std::int64_t>(*o.budget_seconds * 1000));
  }
  if (!b.max_actions && !b.max_wall_time) b = CrawlBudget::defaults();
  b.validate();
  return b;
}

StrategyKind strategy_kind(const std::string& name) {
  auto k = parse_strategy(name);
  if (!k) throw ConfigError("unknown strategy '" + name + "'");
  return *k;
}

std::vector<EventType> events_of(const std::string& s) {
  if (s == "all") return {kAllEventTypes.begin(), kAllEventTypes.end()};
  auto e = parse_event_type(s);
  if (!e) throw ConfigError("unknown event type '" + s + "'");
  return {*e};
}

std::string model_file_name(EventType e) { return std::string(to_string(e)) + ".model.json"; }

std::vector<BoostedTreeModel> load_models(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("model directory '" + dir.string() + "' does not exist");
  std::vector<BoostedTreeModel> out;
  for (EventType e : kAllEventTypes) {
    const fs::path p = dir / model_file_name(e);
    if (!fs::exists(p)) continue;
    auto m = load_model(p);
    if (m.event != e) throw SchemaError(p.string() + " holds a model for '" + std::string(to_string(m.event)) + "'");
    out.push_back(std::move(m));
  }
  if (out.empty()) throw ConfigError("no models found in '" + dir.string() + "'");
  return out;
}

std::string read_instrumentation(const Options& o) {
  if (o.instrumentation.empty()) throw ConfigError("cdp backends need --instrumentation <script.js>");
  if (!fs::exists(o.instrumentation)) throw ConfigError("instrumentation script '" + o.instrumentation + "' not found");
  return read_text_file(o.instrumentation);
}

LiveConfig live_config(const Options& o) {
  LiveConfig c;
  c.start_url = o.start_url;
  c.instrumentation_script = read_instrumentation(o);
  c.quiescence = std::chrono::milliseconds(o.quiescence_ms);
  return c;
}

std::shared_ptr<const MockAppSpec> load_sim(const std::string& path) {
  if (!fs::exists(path)) throw ConfigError("mock app '" + path + "' not found");
  return std::make_shared<const MockAppSpec>(load_app(path));
}

// Backend factory plus the predictor a style-guided strategy uses on it.
struct CrawlSetup {
  BackendFactory make_backend;
  std::shared_ptr<const ActionablePredictor> predictor;
};

CrawlSetup crawl_setup(const Options& o, const std::vector<StrategyKind>& kinds) {
  const BackendSpec spec = single_backend(o);
  CrawlSetup s;
  if (spec.kind == BackendSpec::Kind::sim) {
    auto app = load_sim(spec.target);
    s.make_backend = [app] { return std::unique_ptr<Backend>(std::make_unique<SimBackend>(app)); };
    if (o.models == "oracle") s.predictor = std::make_shared<OraclePredictor>(app);
  } else {
    if (o.start_url.empty()) throw ConfigError("cdp crawling needs --start-url");
    if (o.models == "oracle") throw ConfigError("the oracle predictor exists only for sim backends");
    const LiveConfig cfg = live_config(o);
    const std::string endpoint = spec.target;
    s.make_backend = [cfg, endpoint] {
      return std::unique_ptr<Backend>(LiveBackend::connect(resolve_devtools_endpoint(endpoint), cfg));
    };
  }
  const bool guided = std::any_of(kinds.begin(), kinds.end(), is_style_guided);
  if (guided && !s.predictor) {
    if (o.models.empty()) throw ConfigError("style-guided strategies need --models");
    s.predictor = std::make_shared<ModelPredictor>(load_models(o.models));
  }
  return s;
}

Strategy make_strategy(const Options& o, const CrawlSetup& setup, StrategyKind kind, std::uint64_t seed) {
  if (o.epsilon < 0 || o.epsilon > 1) throw ConfigError("--epsilon must be in [0, 1]");
  Strategy s;
  s.kind = kind;
  s.seed = seed;
  s.epsilon = o.epsilon;
  if (is_style_guided(kind)) s.predictor = setup.predictor;
  s.validate();
  return s;
}

std::string site_of_url(const std::string& url) {
  auto p = url.find("://");
  std::string rest = p == std::string::npos ? url : url.substr(p + 3);
  if (auto slash = rest.find('/'); slash != std::string::npos) rest.resize(slash);
  return rest.empty() ? url : rest;
}

// ---------------------------------------------------------------- commands

int cmd_collect(const Options& o) {
  const fs::path dir = out_dir(o);
  if (o.backends.empty()) throw ConfigError("--backend is required");
  Corpus corpus;
  std::vector<std::string> sources;
  for (const auto& b : o.backends) {
    const BackendSpec spec = parse_backend(b);
    if (spec.kind == BackendSpec::Kind::sim) {
      auto app = load_sim(spec.target);
      for (const auto& [state, _] : app->states)
        add_snapshot(corpus, propagate_labels(labeled_snapshot(*app, state, app->name)));
      sources.push_back("sim:" + app->name);
      continue;
    }
    if (o.urls_file.empty()) throw ConfigError("cdp collection needs --urls <file>");
    std::ifstream in(o.urls_file);
    if (!in) throw ConfigError("cannot read '" + o.urls_file + "'");
    LiveConfig cfg = live_config(o);
    auto live = LiveBackend::connect(resolve_devtools_endpoint(spec.target), cfg);
    std::string url;
    while (std::getline(in, url)) {
      url = std::string(util::trim(url));
      if (url.empty() || url[0] == '#') continue;
      DomSnapshot snap = live->harvest_listeners(live->navigate(url));
      for (auto& e : snap.elements) e.site_id = site_of_url(url);
      add_snapshot(corpus, propagate_labels(std::move(snap)));
      sources.push_back(url);
    }
  }
  corpus.provenance = "collected from " + std::to_string(sources.size()) + " source(s)";
  save_corpus(corpus, dir / "corpus.jsonl");
  ojson summary;
  summary["rows"] = corpus.rows.size();
  summary["sites"] = corpus.sites;
  summary["sources"] = sources;
  for (EventType e : kAllEventTypes) {
    std::size_t n = 0;
    for (const auto& r : corpus.rows) n += is_positive(r, e);
    summary["positives"][std::string(to_string(e))] = n;
  }
  write_json(dir / "collect-summary.json", summary);
  write_config_echo(dir, "collect", o);
  std::cout << "collected " << corpus.rows.size() << " rows from " << corpus.sites.size() << " site(s)\n";
  return 0;
}

ojson report_json(const EvalReport& r) {
  auto cls = [](const ClassMetrics& m) {
    return ojson{{"precision", m.precision}, {"recall", m.recall}, {"f_measure", m.f_measure}};
  };
  return ojson{{"tp", r.tp}, {"fp", r.fp}, {"fn", r.fn}, {"tn", r.tn},
               {"actionable", cls(r.actionable)}, {"non_actionable", cls(r.non_actionable)}};
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v * 100);
  return buf;
}

void write_eval_outputs(const fs::path& dir, const std::vector<std::pair<EventType, EvalReport>>& reports) {
  ojson j;
  j["format"] = "stylex-eval-report";
  j["schema_version"] = 1;
  ojson per = ojson::object();
  std::ostringstream csv;
  csv << "event,actionable_precision,actionable_recall,actionable_f,non_actionable_precision,"
         "non_actionable_recall,non_actionable_f,tp,fp,fn,tn\n";
  for (const auto& [e, r] : reports) {
    per[std::string(to_string(e))] = report_json(r);
    csv << to_string(e) << ',' << pct(r.actionable.precision) << ',' << pct(r.actionable.recall) << ','
        << pct(r.actionable.f_measure) << ',' << pct(r.non_actionable.precision) << ','
        << pct(r.non_actionable.recall) << ',' << pct(r.non_actionable.f_measure) << ',' << r.tp << ',' << r.fp
        << ',' << r.fn << ',' << r.tn << '\n';
  }
  j["events"] = per;
  write_json(dir / "eval-report.json", j);
  write_text_file(dir / "eval-report.csv", csv.str());
  std::cout << csv.str();
}

int cmd_train(const Options& o) {
  const fs::path dir = out_dir(o);
  if (o.corpus.empty()) throw ConfigError("--corpus is required");
  if (o.boosting_rounds == 0) throw ConfigError("--boosting-rounds must be at least 1");
  if (!(o.test_fraction >= 0 && o.test_fraction < 1)) throw ConfigError("--test-fraction must be in [0, 1)");
  const auto events = events_of(o.event);
  const Corpus corpus = load_corpus(o.corpus);
  SplitCorpus split;
  if (o.test_fraction > 0) {
    split = split_by_site(corpus, o.test_fraction, util::derive_seed(o.seed, "split"));
  } else {
    split.train = corpus;
  }
  save_corpus(split.train, dir / "train.jsonl");
  if (o.test_fraction > 0) save_corpus(split.test, dir / "test.jsonl");
  const fs::path model_dir = dir / "models";
  fs::create_directories(model_dir);
  BoostingConfig cfg;
  cfg.boosting_rounds = o.boosting_rounds;
  ojson importance = ojson::object();
  std::vector<std::pair<EventType, EvalReport>> reports;
  for (EventType e : events) {
    const std::uint64_t seed = util::derive_seed(o.seed, std::string("train/") + std::string(to_string(e)));
    const Corpus balanced = balance(split.train, e, util::derive_seed(seed, "balance"));
    const BoostedTreeModel model = train(balanced, e, cfg, seed);
    save_model(model, model_dir / model_file_name(e));
    ojson imp = ojson::array();
    for (const auto& [name, share] : predictor_importance(model)) imp.push_back({{"feature", name}, {"usage", share}});
    importance[std::string(to_string(e))] = imp;
    if (o.test_fraction > 0 && !split.test.rows.empty()) reports.emplace_back(e, evaluate(model, split.test, e));
    std::cout << "trained " << to_string(e) << " model: " << model.stages.size() << " stage(s)\n";
  }
  write_json(dir / "importance.json", importance);
  if (!reports.empty()) write_eval_outputs(dir, reports);
  write_config_echo(dir, "train", o);
  return 0;
}

int cmd_eval(const Options& o) {
  const fs::path dir = out_dir(o);
  if (o.corpus.empty()) throw ConfigError("--corpus is required");
  if (o.models.empty()) throw ConfigError("--models is required");
  const Corpus corpus = load_corpus(o.corpus);
  std::vector<std::pair<EventType, EvalReport>> reports;
  for (const auto& m : load_models(o.models)) reports.emplace_back(m.event, evaluate(m, corpus, m.event));
  write_eval_outputs(dir, reports);
  write_config_echo(dir, "eval", o);
  return 0;
}

int cmd_crawl(const Options& o) {
  const fs::path dir = out_dir(o);
  const StrategyKind kind = strategy_kind(o.strategy);
  const CrawlBudget budget = budget_of(o);
  const CrawlSetup setup = crawl_setup(o, {kind});
  const Strategy strategy = make_strategy(o, setup, kind, o.seed);
  write_config_echo(dir, "crawl", o);
  auto backend = setup.make_backend();
  const CrawlResult r = crawl(*backend, strategy, budget);

  write_text_file(dir / "graph.json", graph_to_string(r.graph));
  write_text_file(dir / "graph.dot", graph_to_dot(r.graph));
  write_text_file(dir / "registry.json", r.registry.to_string());
  const auto maximal = maximal_set({r.coverage});
  std::ostringstream actions, timings;
  actions << "action,from,element,event,button,to,covered_weight,coverage\n";
  timings << "action,elapsed_seconds\n";
  for (std::size_t i = 0; i < r.log.size(); ++i) {
    const auto& a = r.log[i];
    const auto& cov = r.coverage_series[i];
    actions << a.index + 1 << ',' << a.from << ',' << a.element << ',' << to_string(a.event) << ','
            << a.payload.button << ',' << a.to << ',' << cov.covered_weight() << ','
            << util::format_double17(cov.ratio(maximal)) << '\n';
    timings << a.index + 1 << ',' << util::format_double17(a.elapsed_seconds) << '\n';
  }
  write_text_file(dir / "actions.csv", actions.str());
  write_text_file(dir / "timings.csv", timings.str());
  ojson rep;
  rep["format"] = "stylex-crawl-report";
  rep["schema_version"] = 1;
  rep["strategy"] = std::string(to_string(kind));
  rep["actions"] = r.log.size();
  rep["replayed_actions"] = r.replayed_actions;
  rep["states"] = r.graph.states.size();
  rep["edges"] = r.graph.edges.size();
  rep["covered_weight"] = r.coverage.covered_weight();
  rep["discovered_weight"] = r.coverage.discovered_weight();
  rep["coverage"] = r.coverage.ratio(maximal);
  rep["exhausted"] = r.exhausted;
  rep["complete"] = r.complete;
  if (!r.complete) rep["failure"] = r.failure;
  write_json(dir / "crawl-report.json", rep);
  std::cout << to_string(kind) << ": " << r.log.size() << " action(s), " << r.graph.states.size() << " state(s), "
            << pct(r.coverage.ratio(maximal)) << "% of discovered code covered\n";
  if (!r.complete) {
    std::cerr << "crawl stopped early: " << r.failure << '\n';
    return kExitBackend;
  }
  return 0;
}

int cmd_compare(const Options& o) {
  const fs::path dir = out_dir(o);
  std::vector<StrategyKind> kinds;
  for (const auto& s : o.strategies) kinds.push_back(strategy_kind(s));
  if (kinds.empty()) throw ConfigError("--strategies needs at least one strategy");
  const CrawlBudget budget = budget_of(o);
  const CrawlSetup setup = crawl_setup(o, kinds);
  for (StrategyKind k : kinds) make_strategy(o, setup, k, o.seed);
  write_config_echo(dir, "compare", o);
  const auto runs = run_repeats(
      setup.make_backend, [&](StrategyKind k, std::uint64_t seed) { return make_strategy(o, setup, k, seed); }, kinds,
      o.repeats, budget, o.seed);
  const Comparison c = summarize(runs);
  write_text_file(dir / "coverage-per-action.csv", comparison_csv(c));
  write_json(dir / "compare-report.json", comparison_json(c));
  write_text_file(dir / "coverage.svg", comparison_svg(c));
  std::ostringstream timings;
  timings << "strategy,repeat,action,elapsed_seconds\n";
  std::size_t incomplete = 0;
  for (const auto& sr : runs)
    for (std::size_t r = 0; r < sr.runs.size(); ++r) {
      incomplete += !sr.runs[r].complete;
      for (const auto& a : sr.runs[r].log)
        timings << to_string(sr.kind) << ',' << r << ',' << a.index + 1 << ','
                << util::format_double17(a.elapsed_seconds) << '\n';
    }
  write_text_file(dir / "timings.csv", timings.str());
  for (const auto& s : c.strategies)
    std::cout << to_string(s.kind) << ": mean final coverage " << pct(s.mean_final()) << "%\n";
  if (incomplete > 0) {
    std::cerr << incomplete << " run(s) stopped on a backend error\n";
    return kExitBackend;
  }
  return 0;
}

int cmd_gen_app(const Options& o) {
  if (o.out.empty()) throw ConfigError("--out is required");
  MockAppSpec app;
  if (o.app_kind == "equivalence")
    app = generate_equivalence_app(o.classes, o.clones, o.seed);
  else if (o.app_kind == "two-state-anchor")
    app = two_state_anchor_app();
  else if (o.app_kind == "deep-menu")
    app = deep_menu_app(o.depth);
  else
    throw ConfigError("unknown app kind '" + o.app_kind + "'");
  const fs::path p = o.out;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  save_app(app, p);
  std::cout << "wrote " << app.name << " to " << p.string() << '\n';
  return 0;
}

int run_guarded(const std::function<int()>& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const BackendError& e) {
    std::cerr << "backend error: " << e.what() << '\n';
    return kExitBackend;
  } catch (const Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Style-guided crawling: corpus collection, actionable models, crawl experiments"};
  app.require_subcommand(1);
  Options o;

  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "Random seed")->capture_default_str(); };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "Output directory")->required(); };
  auto add_backend = [&](CLI::App* c) {
    c->add_option("--backend", o.backends, "sim:<mock-app.json> or cdp:<ws-or-http-url>");
  };
  auto add_live = [&](CLI::App* c) {
    c->add_option("--instrumentation", o.instrumentation, "In-page extraction script (cdp backends)");
    c->add_option("--quiescence-ms", o.quiescence_ms, "DOM silence that counts as settled")->capture_default_str();
  };
  auto add_crawl = [&](CLI::App* c) {
    add_seed(c);
    add_out(c);
    add_backend(c);
    add_live(c);
    c->add_option("--budget-actions", o.budget_actions, "Maximum number of crawl actions");
    c->add_option("--budget-seconds", o.budget_seconds, "Maximum wall-clock time");
    c->add_option("--epsilon", o.epsilon, "Style-signature match threshold")->capture_default_str();
    c->add_option("--models", o.models, "Model directory, or 'oracle' for sim backends");
    c->add_option("--start-url", o.start_url, "Initial page (cdp backends)");
  };

  auto* collect = app.add_subcommand("collect", "Collect a labeled corpus");
  add_out(collect);
  add_backend(collect);
  add_live(collect);
  collect->add_option("--urls", o.urls_file, "File with one URL per line (cdp backends)");

  auto* trainc = app.add_subcommand("train", "Train one actionable model per event type");
  add_seed(trainc);
  add_out(trainc);
  trainc->add_option("--corpus", o.corpus, "Corpus file")->required();
  trainc->add_option("--event", o.event, "Event type or 'all'")->capture_default_str();
  trainc->add_option("--boosting-rounds", o.boosting_rounds, "Boosting rounds")->capture_default_str();
  trainc->add_option("--test-fraction", o.test_fraction, "Share of sites held out")->capture_default_str();

  auto* evalc = app.add_subcommand("eval", "Evaluate models on a corpus");
  add_out(evalc);
  evalc->add_option("--corpus", o.corpus, "Corpus file")->required();
  evalc->add_option("--models", o.models, "Model directory")->required();

  auto* crawlc = app.add_subcommand("crawl", "Crawl with one strategy");
  add_crawl(crawlc);
  crawlc->add_option("--strategy", o.strategy, "DEF, RND, STYLEX_CLK or STYLEX_EVNTS")->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Compare strategies over repeated crawls");
  add_crawl(compare);
  compare->add_option("--strategies", o.strategies, "Strategies to compare")->delimiter(',');
  compare->add_option("--repeats", o.repeats, "Runs per strategy")->capture_default_str();

  auto* gen = app.add_subcommand("gen-app", "Write a bundled mock app");
  add_seed(gen);
  gen->add_option("--out", o.out, "Output file")->required();
  gen->add_option("--kind", o.app_kind, "equivalence, two-state-anchor or deep-menu")->capture_default_str();
  gen->add_option("--classes", o.classes, "Style classes (equivalence)")->capture_default_str();
  gen->add_option("--clones", o.clones, "Clones per class (equivalence)")->capture_default_str();
  gen->add_option("--depth", o.depth, "Menu depth (deep-menu)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (compare->parsed() && o.strategies.empty()) o.strategies = {"STYLEX_CLK", "RND"};

  if (collect->parsed()) return run_guarded([&] { return cmd_collect(o); });
  if (trainc->parsed()) return run_guarded([&] { return cmd_train(o); });
  if (evalc->parsed()) return run_guarded([&] { return cmd_eval(o); });
  if (crawlc->parsed()) return run_guarded([&] { return cmd_crawl(o); });
  if (compare->parsed()) return run_guarded([&] { return cmd_compare(o); });
  return run_guarded([&] { return cmd_gen_app(o); });
}
