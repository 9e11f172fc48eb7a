/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "evtree/event_selection.hpp"
#include "evtree/maxtree.hpp"
#include "evtree/types.hpp"

namespace evtree {

// Knobs for one synthetic dataset.
//
// Topic geometry: each event owns an orthogonal slice of the topic space and
// its messages perform a fixed-angle random walk on the unit sphere inside
// it, so planted tree edges cost the same known amount and unrelated pairs
// drift apart. Noise messages live on two reserved dimensions and carry a
// unique hashtag each, which prices every noise-incident edge at >= 1.
// Requires topic_dim >= 2 * n_events + 2.
struct SynthParams {
  int n_events = 1;
  int event_size = 20;
  double noise_level = 0.0;  // noise interactions / total event interactions
  int n_participants = 50;
  int topic_dim = 10;
  std::int64_t time_span = 604800;
  std::uint64_t seed = 0;

  void validate() const;
};

// One planted event plus the parameters that make it recoverable.
struct PlantedEvent {
  std::vector<Interaction> interactions;  // ids ascending, root first
  std::vector<std::pair<InteractionId, InteractionId>> tree_edges;
  InteractionId root = 0;
  double budget = 0.0;       // B: >= the planted tree's total edge weight
  std::int64_t window = 0;   // I: the event's exact time span

  std::vector<InteractionId> ids() const;
};

struct GroundTruth {
  std::vector<PlantedEvent> events;

  std::vector<InteractionId> all_ids() const;  // sorted union
};

struct SynthDataset {
  std::vector<Interaction> interactions;  // events + noise, shuffled
  GroundTruth truth;
};

// Builds one event: a uniform random recursive tree whose nodes become
// interactions. Child senders are drawn so that every tree edge satisfies a
// meta-graph rule (kind picked uniformly among broadcast/relay/reply), child
// timestamps strictly increase along root-to-leaf paths, and each tree
// edge's dissimilarity is bounded by budget / (size - 1).
PlantedEvent gen_event_tree(const SynthParams& params, int event_index,
                            InteractionId id_base, Timestamp t_base,
                            std::uint64_t seed);

// Adds ceil(noise_level * total event interactions) noise messages with
// random participants, timestamps across the span, and content far from all
// event centroids; returns the shuffled union.
std::vector<Interaction> inject_noise(const std::vector<PlantedEvent>& events,
                                      double noise_level, const SynthParams& params,
                                      std::uint64_t seed);

// gen_event_tree for every event + inject_noise, wired together.
SynthDataset make_dataset(const SynthParams& params);

// Precision / recall / F1 over interaction-id sets, plus the objective value
// (found size) and solver wall time filled in by the sweep driver.
struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double objective = 0.0;
  double runtime_s = 0.0;
};

// Conventions: empty `found` scores precision 1 and recall 0; f1 is the
// harmonic mean and 0 when both terms are 0.
EvalReport score(const std::vector<InteractionId>& found,
                 const std::vector<InteractionId>& truth);
EvalReport score(const EventSet& found, const GroundTruth& truth);

enum class SweepAxis { Noise, Size };

SweepAxis sweep_axis_from_string(const std::string& s);

struct SweepSpec {
  SweepAxis axis = SweepAxis::Noise;
  std::vector<double> grid;            // noise levels, or event sizes
  std::vector<Algorithm> algorithms;
  int repetitions = 10;
  std::uint64_t seed = 0;
  SynthParams base;                    // holds the off-axis values; n_events must be 1
  int dp_decimals = 2;
};

// Mean metrics for one (grid value, algorithm) cell.
struct SweepRow {
  double axis_value = 0.0;
  Algorithm algorithm = Algorithm::Greedy;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double objective = 0.0;
  double runtime_s = 0.0;
  int repetitions = 0;
};

// For each grid point and repetition: generate a dataset (repetition seeds
// are seed + repetition index), detect at the ground-truth (B, I, r) with
// each algorithm, score against the planted event, and average.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// CSV: axis_value,algorithm,precision,recall,f1,objective,runtime_s,repetitions.
// Wall time is the one non-reproducible column; set include_runtime=false
// when outputs must be byte-comparable.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out,
                     bool include_runtime = true);

// Sidecar for dataset dumps.
void write_ground_truth_json(const GroundTruth& truth, std::ostream& out);

}  // namespace evtree
