// Command-line front end: rule mining, measure audits, passive and active
// learning experiments, and the interactive session server.

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <json.hpp>

#include "ahprank/bench.hpp"
#include "ahprank/errors.hpp"
#include "ahprank/session.hpp"

using namespace ahprank;

namespace {

struct CommonFlags {
  std::string config_file;
  std::string dataset;
  double minsup = 0.05;
  double minconf = 0.0;
  std::size_t max_head = 2;
  std::vector<std::string> measures;
  std::string emulator;
  std::size_t folds = 5;
  double training_fraction = 0.2;
  double holdout = 0.0;
  std::size_t theta = 1000;
  std::size_t iterations = 20;
  std::size_t repeats = 10;
  std::uint64_t seed = 0;
  double err = 0.0;
  std::size_t swap_after = 0;
  std::string swap_to;
  std::string strategy = "sbg";
  std::string output;
};

struct Options {
  CommonFlags flags;
  std::map<std::string, CLI::Option*> given;
};

void add_dataset_flags(CLI::App* cmd, Options& o) {
  auto& f = o.flags;
  o.given["config"] = cmd->add_option("--config", f.config_file, "JSON experiment config");
  o.given["dataset"] = cmd->add_option(
      "--dataset", f.dataset, "FIMI file, synthetic:<transactions>:<items>, or measures:<n>");
  o.given["minsup"] = cmd->add_option("--minsup", f.minsup, "relative minimum support (0,1]");
  o.given["minconf"] = cmd->add_option("--minconf", f.minconf, "minimum confidence [0,1]");
  o.given["max_head"] = cmd->add_option("--max-head", f.max_head, "largest rule head, 0 = any");
  o.given["measures"] = cmd->add_option("--measures", f.measures, "measure names")->delimiter(',');
}

void add_experiment_flags(CLI::App* cmd, Options& o) {
  auto& f = o.flags;
  add_dataset_flags(cmd, o);
  o.given["emulator"] = cmd->add_option("--emulator", f.emulator,
                                        "rand | lex | chi, or an emulator JSON object");
  o.given["seed"] = cmd->add_option("--seed", f.seed, "experiment seed")->required();
  o.given["output"] = cmd->add_option("--output", f.output, "report path prefix");
}

nlohmann::json emulator_spec(const std::string& text) {
  if (!text.empty() && text.front() == '{') return nlohmann::json::parse(text);
  return {{"kind", text}};
}

ExperimentConfig build_config(const Options& o, LearningMode mode) {
  ExperimentConfig c;
  if (!o.flags.config_file.empty()) {
    std::ifstream in(o.flags.config_file);
    if (!in) throw ArgumentError("cannot open config '" + o.flags.config_file + "'");
    c = ExperimentConfig::from_json(nlohmann::json::parse(in));
  }
  c.mode = mode;
  auto given = [&](const char* name) {
    auto it = o.given.find(name);
    return it != o.given.end() && it->second->count() > 0;
  };
  const auto& f = o.flags;
  if (given("dataset")) c.dataset = f.dataset;
  if (given("minsup")) c.minsup = f.minsup;
  if (given("minconf")) c.minconf = f.minconf;
  if (given("max_head")) c.max_head = f.max_head;
  if (given("measures")) {
    c.measures.clear();
    for (const auto& name : f.measures) {
      auto id = measure_from_name(name);
      if (!id) throw ArgumentError("unknown measure '" + name + "'");
      c.measures.push_back(*id);
    }
  }
  if (given("emulator")) c.emulator = emulator_spec(f.emulator);
  if (given("folds")) c.folds = f.folds;
  if (given("training_fraction")) c.training_fraction = f.training_fraction;
  if (given("holdout")) c.holdout = f.holdout;
  if (given("theta")) c.theta = f.theta;
  if (given("T")) c.iterations = f.iterations;
  if (given("repeats")) c.repeats = f.repeats;
  if (given("seed")) c.seed = f.seed;
  if (given("err")) c.err = f.err;
  if (given("swap_after")) c.swap_after = f.swap_after;
  if (given("swap_to")) c.swap_to = emulator_spec(f.swap_to);
  if (given("strategy")) {
    if (f.strategy == "sbg") c.strategy = QueryStrategy::Sensitivity;
    else if (f.strategy == "random" || f.strategy == "rg") c.strategy = QueryStrategy::Random;
    else throw ArgumentError("strategy must be sbg or random");
  }
  if (given("output")) c.output = f.output;
  c.validate();
  return c;
}

SessionServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn pattern ranking functions from user feedback via AHP"};
  app.require_subcommand(1);

  Options mine_opts;
  auto* mine = app.add_subcommand("mine", "mine association rules and export rules/measures");
  add_dataset_flags(mine, mine_opts);
  std::string rules_csv, measures_csv;
  mine->add_option("--rules-csv", rules_csv, "write rules here (default stdout)");
  mine->add_option("--measures-csv", measures_csv, "write the measure matrix here");

  Options audit_opts;
  auto* audit = app.add_subcommand("audit", "Spearman rho of each measure against an emulator");
  add_experiment_flags(audit, audit_opts);

  Options passive_opts;
  auto* passive = app.add_subcommand("passive", "passive learning with random-split folds");
  add_experiment_flags(passive, passive_opts);
  passive_opts.given["folds"] = passive->add_option("--folds", passive_opts.flags.folds);
  passive_opts.given["training_fraction"] =
      passive->add_option("--training-fraction", passive_opts.flags.training_fraction);

  Options active_opts;
  auto* active = app.add_subcommand("active", "active learning with emulated feedback");
  add_experiment_flags(active, active_opts);
  auto& af = active_opts.flags;
  active_opts.given["theta"] = active->add_option("--theta", af.theta, "sample size");
  active_opts.given["T"] = active->add_option("-T,--queries", af.iterations, "queries per run");
  active_opts.given["repeats"] = active->add_option("--repeats", af.repeats);
  active_opts.given["holdout"] =
      active->add_option("--holdout", af.holdout, "fraction held out for evaluation");
  active_opts.given["err"] = active->add_option("--err", af.err, "answer flip probability");
  active_opts.given["swap_after"] =
      active->add_option("--swap-after", af.swap_after, "switch target after this many queries");
  active_opts.given["swap_to"] = active->add_option("--swap-to", af.swap_to, "second target");
  active_opts.given["strategy"] =
      active->add_option("--strategy", af.strategy, "sbg | random")->check(
          CLI::IsMember({"sbg", "random", "rg"}));

  auto* serve = app.add_subcommand("serve", "HTTP/JSON interactive sessions");
  std::vector<std::string> serve_datasets;
  double serve_minsup = 0.05, serve_minconf = 0.0;
  std::string host = "127.0.0.1", static_dir, snapshots;
  int port = 8080;
  std::uint64_t serve_seed = 0;
  serve->add_option("--dataset", serve_datasets, "name=source pairs (source as for --dataset)")
      ->required();
  serve->add_option("--minsup", serve_minsup);
  serve->add_option("--minconf", serve_minconf);
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--static", static_dir, "directory with UI assets");
  serve->add_option("--snapshots", snapshots, "write finished sessions here");
  serve->add_option("--seed", serve_seed, "seed for synthetic datasets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*mine) {
      ExperimentConfig c = build_config(mine_opts, LearningMode::Passive);
      const auto db = load_transactions(c);
      const auto rules = mine_rules(*db, c);
      std::cerr << db->size() << " transactions, " << rules.size() << " rules\n";
      if (rules_csv.empty()) {
        write_rules_csv(std::cout, rules);
      } else {
        std::ofstream out(rules_csv);
        write_rules_csv(out, rules);
      }
      if (!measures_csv.empty()) {
        std::ofstream out(measures_csv);
        write_measures_csv(out, PatternCollection::from_rules(*db, rules, c.measures));
      }
      return 0;
    }
    if (*audit) {
      const ExperimentConfig c = build_config(audit_opts, LearningMode::Passive);
      const AuditReport report = run_measure_audit(c);
      nlohmann::json summary = {{"config", c.to_json()}, {"audit", report.to_json()}};
      write_report_files(c.output, summary, nullptr);
      std::cout << summary.dump(2) << '\n';
      return 0;
    }
    if (*passive) {
      const ExperimentConfig c = build_config(passive_opts, LearningMode::Passive);
      const MetricsReport report = run_passive_cv(c);
      nlohmann::json summary = {{"config", c.to_json()}, {"report", report.to_json()}};
      write_report_files(c.output, summary, &report);
      std::cout << summary.dump(2) << '\n';
      return 0;
    }
    if (*active) {
      const ExperimentConfig c = build_config(active_opts, LearningMode::Active);
      const MetricsReport report = run_active_experiment(c);
      nlohmann::json summary = {{"config", c.to_json()}, {"report", report.to_json()}};
      write_report_files(c.output, summary, &report);
      std::cout << summary.dump(2) << '\n';
      return 0;
    }
    if (*serve) {
      SessionManager manager(snapshots.empty() ? std::nullopt
                                               : std::optional<std::string>(snapshots));
      for (const auto& entry : serve_datasets) {
        const auto eq = entry.find('=');
        ExperimentConfig c;
        c.dataset = eq == std::string::npos ? entry : entry.substr(eq + 1);
        c.minsup = serve_minsup;
        c.minconf = serve_minconf;
        c.seed = serve_seed;
        const std::string name = eq == std::string::npos ? entry : entry.substr(0, eq);
        Corpus corpus = load_corpus(c);
        std::cerr << "dataset " << name << ": " << corpus.patterns.size() << " patterns\n";
        manager.add_dataset(name, std::make_shared<const PatternCollection>(std::move(corpus.patterns)));
      }
      SessionServer server(manager, static_dir);
      if (!server.bind(host, port)) {
        std::cerr << "cannot bind " << host << ':' << port << '\n';
        return 1;
      }
      g_server = &server;
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      std::cerr << "listening on http://" << host << ':' << port << '\n';
      server.run();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
