/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "evtree/config.hpp"
#include "evtree/errors.hpp"
#include "evtree/event_selection.hpp"
#include "evtree/ingest.hpp"
#include "evtree/maxtree.hpp"
#include "evtree/meta_graph.hpp"
#include "evtree/synth.hpp"
#include "evtree/text.hpp"

namespace {

using namespace evtree;

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;

struct BuildOpts {
  std::string input, output, sidecar, dot;
  bool no_merge = false;
  bool no_tfidf = false;
  double edit_ratio = 0.10;
  std::string time_gap = "1d";
};

void run_build(const BuildOpts& o) {
  DatasetMeta meta;
  if (!o.sidecar.empty()) meta = load_dataset_meta(o.sidecar);
  auto msgs = ingest_file(o.input, meta);
  if (!o.no_merge) {
    MergePolicy policy;
    policy.edit_ratio_max = o.edit_ratio;
    policy.max_time_gap = parse_duration(o.time_gap);
    msgs = merge_similar(msgs, policy);
  }
  if (!o.no_tfidf) {
    if (meta.vocabulary.empty())
      compute_tfidf(msgs);
    else
      compute_tfidf(msgs, meta.vocabulary);
  }
  const MetaGraph g = strip_singletons(build_meta_graph(msgs));
  write_graph_json_file(g, o.output);
  if (!o.dot.empty()) {
    std::ofstream out(o.dot);
    if (!out) throw io_error("cannot write DOT file: " + o.dot);
    write_dot(g, out);
  }
  std::cout << g.vertex_count() << " vertices, " << g.edge_count() << " edges\n";
}

struct DetectOpts {
  std::string graph, output, dot_dir, log, config;
  DetectionConfig cfg;
  std::string window = "1d";
};

// Flat "key = value" lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> parse_flat_kv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file: " + path);
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw parse_error(path + " line " + std::to_string(line_no) +
                          ": expected key = value");
      continue;
    }
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

// Config file values apply only where no flag was given.
void apply_detect_config(const std::string& path, CLI::App* cmd, DetectOpts& o) {
  auto flag_given = [&](const std::string& name) { return cmd->count(name) > 0; };
  for (const auto& [key, value] : parse_flat_kv(path)) {
    try {
      if (key == "budget") {
        if (!flag_given("--budget")) o.cfg.budget = std::stod(value);
      } else if (key == "window") {
        if (!flag_given("--window")) o.window = value;
      } else if (key == "top-k") {
        if (!flag_given("--top-k")) o.cfg.k = std::stoi(value);
      } else if (key == "algorithm") {
        if (!flag_given("--algorithm")) o.cfg.algorithm = algorithm_from_string(value);
      } else if (key == "sampling") {
        if (!flag_given("--sampling")) o.cfg.sampling = sampling_from_string(value);
      } else if (key == "root-limit") {
        if (!flag_given("--root-limit")) o.cfg.root_limit = std::stoi(value);
      } else if (key == "dp-decimals") {
        if (!flag_given("--dp-decimals")) o.cfg.dp_decimals = std::stoi(value);
      } else if (key == "seed") {
        if (!flag_given("--seed")) o.cfg.seed = std::stoull(value);
      } else if (key == "threads") {
        if (!flag_given("--threads")) o.cfg.threads = std::stoi(value);
      } else {
        throw usage_error(path + ": unknown config key: " + key);
      }
    } catch (const validation_error& e) {
      throw usage_error(e.what());
    } catch (const std::invalid_argument&) {
      throw usage_error(path + ": malformed value for " + key + ": " + value);
    }
  }
}

void print_tree_summary(const EventTree& t, const MetaGraph& g, std::size_t index,
                        const std::vector<Interaction>* log_msgs,
                        const TfidfModel* model) {
  Timestamp lo = g.vertex(t.nodes.front()).timestamp;
  Timestamp hi = lo;
  for (const auto& id : t.nodes) {
    lo = std::min(lo, g.vertex(id).timestamp);
    hi = std::max(hi, g.vertex(id).timestamp);
  }
  std::cout << "event " << index << ": root " << t.root << ", size " << t.size()
            << ", cost " << t.cost << ", span " << (hi - lo) << "s";
  if (log_msgs && model) {
    std::map<int, double> agg;
    for (const auto& m : *log_msgs)
      if (t.contains(m.id))
        for (const auto& [term, w] : m.content.tfidf) agg[term] += w;
    std::vector<std::pair<double, int>> top;
    for (const auto& [term, w] : agg) top.push_back({w, term});
    std::sort(top.rbegin(), top.rend());
    if (!top.empty()) {
      std::cout << ", top terms:";
      for (std::size_t i = 0; i < std::min<std::size_t>(5, top.size()); ++i)
        std::cout << ' ' << model->term(top[i].second);
    }
  }
  std::cout << '\n';
}

void run_detect(DetectOpts& o) {
  o.cfg.validate();
  const MetaGraph g = read_graph_json_file(o.graph);

  EventSet set = top_k_events(g, o.cfg.solve_params(), o.cfg.sampling, o.cfg.seed,
                              o.cfg.top_k_options());

  std::ofstream out(o.output);
  if (!out) throw io_error("cannot write event set: " + o.output);
  write_event_set_json(set, g, o.cfg, out);

  if (!o.dot_dir.empty()) {
    std::filesystem::create_directories(o.dot_dir);
    for (std::size_t i = 0; i < set.trees.size(); ++i) {
      const std::string path = o.dot_dir + "/event_" + std::to_string(i + 1) + ".dot";
      std::ofstream dot(path);
      if (!dot) throw io_error("cannot write DOT file: " + path);
      write_tree_dot(set.trees[i], g, dot);
    }
  }

  std::vector<Interaction> log_msgs;
  std::optional<TfidfModel> model;
  if (!o.log.empty()) {
    log_msgs = ingest_file(o.log);
    model = compute_tfidf(log_msgs);
  }
  std::cout << "covered " << set.covered.size() << "/" << g.vertex_count()
            << " interactions with " << set.trees.size() << " events (k=" << o.cfg.k
            << ")" << (set.shortfall ? " [shortfall]" : "") << '\n';
  for (std::size_t i = 0; i < set.trees.size(); ++i)
    print_tree_summary(set.trees[i], g, i + 1, o.log.empty() ? nullptr : &log_msgs,
                       model ? &*model : nullptr);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    const auto b = item.find_last_not_of(" \t");
    out.push_back(item.substr(a, b - a + 1));
  }
  return out;
}

SweepSpec parse_sweep_spec(const std::string& path) {
  std::map<std::string, std::string> kv;
  for (auto& [k, v] : parse_flat_kv(path)) kv[k] = v;

  SweepSpec spec;
  try {
    if (kv.count("axis")) spec.axis = sweep_axis_from_string(kv["axis"]);
    for (const auto& v : split_list(kv.count("grid") ? kv["grid"] : ""))
      spec.grid.push_back(std::stod(v));
    for (const auto& a : split_list(kv.count("algorithms") ? kv["algorithms"] : "greedy"))
      spec.algorithms.push_back(algorithm_from_string(a));
    if (kv.count("repetitions")) spec.repetitions = std::stoi(kv["repetitions"]);
    if (kv.count("seed")) spec.seed = std::stoull(kv["seed"]);
    if (kv.count("event_size")) spec.base.event_size = std::stoi(kv["event_size"]);
    if (kv.count("noise_level")) spec.base.noise_level = std::stod(kv["noise_level"]);
    if (kv.count("n_participants"))
      spec.base.n_participants = std::stoi(kv["n_participants"]);
    if (kv.count("topic_dim")) spec.base.topic_dim = std::stoi(kv["topic_dim"]);
    if (kv.count("time_span")) spec.base.time_span = parse_duration(kv["time_span"]);
    if (kv.count("dp_decimals")) spec.dp_decimals = std::stoi(kv["dp_decimals"]);
  } catch (const validation_error& e) {
    throw usage_error(e.what());
  } catch (const std::invalid_argument&) {
    throw usage_error(path + ": malformed numeric value");
  }
  if (spec.grid.empty()) throw usage_error(path + ": sweep grid must not be empty");
  return spec;
}

void run_sweep_cmd(const std::string& spec_path, const std::string& output) {
  const SweepSpec spec = parse_sweep_spec(spec_path);
  const auto rows = run_sweep(spec);
  std::ofstream out(output);
  if (!out) throw io_error("cannot write CSV: " + output);
  write_sweep_csv(rows, out);
  std::cout << rows.size() << " rows -> " << output << '\n';
}

struct GenOpts {
  SynthParams params;
  std::string output, truth;
};

void run_gen(const GenOpts& o) {
  const SynthDataset ds = make_dataset(o.params);
  auto msgs = ds.interactions;
  std::sort(msgs.begin(), msgs.end(), time_id_less);
  serialize_file(msgs, o.output);
  if (!o.truth.empty()) {
    std::ofstream out(o.truth);
    if (!out) throw io_error("cannot write ground truth: " + o.truth);
    write_ground_truth_json(ds.truth, out);
  }
  std::cout << msgs.size() << " interactions -> " << o.output << '\n';
}

void run_dot(const std::string& graph_path, const std::string& output) {
  const MetaGraph g = read_graph_json_file(graph_path);
  std::ofstream out(output);
  if (!out) throw io_error("cannot write DOT file: " + output);
  write_dot(g, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evtree: mine interaction logs for coherent event trees"};
  app.require_subcommand(1);

  BuildOpts build_opts;
  auto* build = app.add_subcommand(
      "build", "Ingest a JSON-lines log and write the interaction meta-graph");
  build->add_option("-i,--input", build_opts.input, "interaction log (JSON lines)")
      ->required();
  build->add_option("-o,--output", build_opts.output, "meta-graph JSON path")->required();
  build->add_option("--sidecar", build_opts.sidecar, "dataset sidecar JSON");
  build->add_option("--dot", build_opts.dot, "also write a Graphviz view");
  build->add_flag("--no-merge", build_opts.no_merge, "skip near-duplicate merging");
  build->add_flag("--no-tfidf", build_opts.no_tfidf, "skip tf-idf weighting of texts");
  build->add_option("--merge-edit-ratio", build_opts.edit_ratio,
                    "max Levenshtein ratio for merging")
      ->check(CLI::Range(0.0, 1.0));
  build->add_option("--merge-time-gap", build_opts.time_gap,
                    "max time gap for merging (e.g. 1d)");
  build->callback([&] { run_build(build_opts); });

  DetectOpts detect_opts;
  auto* detect =
      app.add_subcommand("detect", "Extract the top-k event trees from a meta-graph");
  detect->add_option("--config", detect_opts.config,
                     "flat key=value config file; flags override");
  detect->add_option("-g,--graph", detect_opts.graph, "meta-graph JSON path")->required();
  detect->add_option("-o,--output", detect_opts.output, "event set JSON path")->required();
  detect->add_option("--dot-dir", detect_opts.dot_dir, "directory for per-event DOT files");
  detect->add_option("--log", detect_opts.log,
                     "original interaction log, enables top-term summaries");
  detect->add_option("-B,--budget", detect_opts.cfg.budget, "dissimilarity budget B")
      ->check(CLI::NonNegativeNumber);
  detect->add_option("-I,--window", detect_opts.window, "time budget I (e.g. 1d, 4w)");
  detect->add_option("-k,--top-k", detect_opts.cfg.k, "number of events")
      ->check(CLI::PositiveNumber);
  detect
      ->add_option("-a,--algorithm", detect_opts.cfg.algorithm,
                   "greedy|random|dp|dp_dij|binary_search")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Algorithm>{{"greedy", Algorithm::Greedy},
                                           {"random", Algorithm::Random},
                                           {"dp", Algorithm::Dp},
                                           {"dp_dij", Algorithm::DpDij},
                                           {"binary_search", Algorithm::BinarySearch}}));
  detect
      ->add_option("--sampling", detect_opts.cfg.sampling, "upperbound|random")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Sampling>{
          {"upperbound", Sampling::UpperBound}, {"random", Sampling::Random}}));
  detect->add_option("--root-limit", detect_opts.cfg.root_limit, "candidate trees solved")
      ->check(CLI::PositiveNumber);
  detect->add_option("--dp-decimals", detect_opts.cfg.dp_decimals,
                     "weight discretization digits")
      ->check(CLI::Range(0, 6));
  detect->add_option("--seed", detect_opts.cfg.seed, "RNG seed");
  detect->add_option("--threads", detect_opts.cfg.threads, "candidate solver threads")
      ->check(CLI::PositiveNumber);
  detect->callback([&] {
    if (!detect_opts.config.empty())
      apply_detect_config(detect_opts.config, detect, detect_opts);
    detect_opts.cfg.window = parse_duration(detect_opts.window);
    if (detect_opts.cfg.threads == 1) {
      const unsigned hw = std::thread::hardware_concurrency();
      if (!detect->count("--threads") && hw > 1)
        detect_opts.cfg.threads = static_cast<int>(hw);
    }
    run_detect(detect_opts);
  });

  std::string sweep_spec_path, sweep_output;
  auto* sweep =
      app.add_subcommand("sweep", "Run a synthetic evaluation sweep and write a CSV");
  sweep->add_option("-s,--spec", sweep_spec_path, "sweep spec (key = value lines)")
      ->required();
  sweep->add_option("-o,--output", sweep_output, "CSV output path")->required();
  sweep->callback([&] { run_sweep_cmd(sweep_spec_path, sweep_output); });

  GenOpts gen_opts;
  auto* gen = app.add_subcommand(
      "gen", "Generate a synthetic dataset with planted events and noise");
  gen->add_option("-o,--output", gen_opts.output, "JSON-lines output path")->required();
  gen->add_option("--truth", gen_opts.truth, "ground-truth sidecar JSON path");
  gen->add_option("--events", gen_opts.params.n_events)->check(CLI::PositiveNumber);
  gen->add_option("--size", gen_opts.params.event_size)->check(CLI::PositiveNumber);
  gen->add_option("--noise", gen_opts.params.noise_level)->check(CLI::NonNegativeNumber);
  gen->add_option("--participants", gen_opts.params.n_participants)
      ->check(CLI::PositiveNumber);
  gen->add_option("--topic-dim", gen_opts.params.topic_dim)->check(CLI::PositiveNumber);
  gen->add_option("--span", gen_opts.params.time_span)->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_opts.params.seed);
  gen->callback([&] { run_gen(gen_opts); });

  std::string dot_graph, dot_output;
  auto* dot = app.add_subcommand("dot", "Export a meta-graph to Graphviz DOT");
  dot->add_option("-g,--graph", dot_graph, "meta-graph JSON path")->required();
  dot->add_option("-o,--output", dot_output, "DOT output path")->required();
  dot->callback([&] { run_dot(dot_graph, dot_output); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const not_found_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
