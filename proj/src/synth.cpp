/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#include "evtree/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "evtree/errors.hpp"
#include "evtree/rng.hpp"

namespace evtree {

void SynthParams::validate() const {
  if (n_events < 1) throw validation_error("n_events must be >= 1");
  if (event_size < 1) throw validation_error("event_size must be >= 1");
  if (noise_level < 0.0) throw validation_error("noise_level must be >= 0");
  if (n_participants < 4) throw validation_error("n_participants must be >= 4");
  if (topic_dim < 2 * n_events + 2)
    throw validation_error("topic_dim must be >= 2*n_events + 2 (got " +
                           std::to_string(topic_dim) + ")");
  if (time_span < 1) throw validation_error("time_span must be >= 1");
}

std::vector<InteractionId> PlantedEvent::ids() const {
  std::vector<InteractionId> out;
  out.reserve(interactions.size());
  for (const auto& m : interactions) out.push_back(m.id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<InteractionId> GroundTruth::all_ids() const {
  std::vector<InteractionId> out;
  for (const auto& e : events)
    for (const auto& m : e.interactions) out.push_back(m.id);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string participant(Rng& rng, int pool) {
  return "p" + std::to_string(rng.below(static_cast<std::uint64_t>(pool)));
}

// 1-2 distinct participants, none of them in `exclude`.
std::vector<std::string> draw_recipients(Rng& rng, int pool,
                                         const std::vector<std::string>& exclude) {
  const int want = 1 + static_cast<int>(rng.below(2));
  std::vector<std::string> out;
  for (int attempts = 0; static_cast<int>(out.size()) < want && attempts < 200; ++attempts) {
    std::string p = participant(rng, pool);
    if (std::find(exclude.begin(), exclude.end(), p) != exclude.end()) continue;
    if (std::find(out.begin(), out.end(), p) != out.end()) continue;
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double norm_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Unit vector orthogonal to v inside coordinates [lo, lo + d).
std::vector<double> orthogonal_dir(Rng& rng, const std::vector<double>& v, int lo, int d) {
  while (true) {
    std::vector<double> g(d, 0.0);
    for (int i = 0; i < d; i += 2) {
      const double u1 = std::max(rng.real(), 1e-12);
      const double u2 = rng.real();
      const double r = std::sqrt(-2.0 * std::log(u1));
      g[i] = r * std::cos(2.0 * kPi * u2);
      if (i + 1 < d) g[i + 1] = r * std::sin(2.0 * kPi * u2);
    }
    double dot = 0.0;
    for (int i = 0; i < d; ++i) dot += g[i] * v[lo + i];
    for (int i = 0; i < d; ++i) g[i] -= dot * v[lo + i];
    const double n = norm_of(g);
    if (n > 1e-9) {
      for (auto& x : g) x /= n;
      return g;
    }
  }
}

}  // namespace

PlantedEvent gen_event_tree(const SynthParams& params, int event_index,
                            InteractionId id_base, Timestamp t_base,
                            std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  const int s = params.event_size;
  const int d_event = (params.topic_dim - 2) / params.n_events;
  const int dim_lo = event_index * d_event;

  // Per-edge dissimilarity target: a fixed-angle step on the unit sphere, so
  // every tree edge costs exactly 1 - cos(alpha) (or less after reflection
  // into the positive orthant) and the whole tree fits the budget.
  double alpha = 0.0, edge_w = 0.0;
  if (s >= 2) {
    const double target = 3.0 / (s - 1);
    alpha = target >= 1.0 ? 0.45 * kPi : std::acos(1.0 - target);
    edge_w = 1.0 - std::cos(alpha);
  }

  PlantedEvent ev;
  ev.root = id_base;
  ev.budget = s >= 2 ? 1.02 * (s - 1) * edge_w : 0.0;

  std::vector<int> parent(s, -1);
  for (int i = 1; i < s; ++i) parent[i] = static_cast<int>(rng.below(i));

  const std::int64_t slice = params.time_span / params.n_events;
  const std::int64_t step_max = std::max<std::int64_t>(1, slice / std::max(1, s));

  std::vector<Interaction> nodes(s);
  std::vector<std::vector<double>> vec(s);
  const std::string tag = "e" + std::to_string(event_index);

  for (int i = 0; i < s; ++i) {
    Interaction& m = nodes[i];
    m.id = id_base + i;
    if (i == 0) {
      m.timestamp = t_base;
      m.sender = participant(rng, params.n_participants);
      m.recipients = draw_recipients(rng, params.n_participants, {m.sender});
      vec[0].assign(params.topic_dim, 0.0);
      for (int d = 0; d < d_event; ++d) vec[0][dim_lo + d] = rng.real(0.2, 1.0);
      double n = norm_of(vec[0]);
      for (auto& x : vec[0]) x /= n;
    } else {
      const Interaction& p = nodes[parent[i]];
      m.timestamp = p.timestamp + rng.range(1, step_max);
      switch (rng.below(3)) {
        case 0:  // broadcast: same sender
          m.sender = p.sender;
          m.recipients = draw_recipients(rng, params.n_participants, {m.sender});
          break;
        case 1: {  // relay: a recipient of p forwards, not back to p's sender
          m.sender = p.recipients[rng.below(p.recipients.size())];
          m.recipients = draw_recipients(rng, params.n_participants, {m.sender, p.sender});
          break;
        }
        default: {  // reply: a recipient of p answers p's sender
          m.sender = p.recipients[rng.below(p.recipients.size())];
          m.recipients = {p.sender};
          break;
        }
      }
      ev.tree_edges.emplace_back(p.id, m.id);

      // Rotate the parent vector by alpha in a random orthogonal direction,
      // then reflect into the positive orthant (which can only shrink the
      // angle to the parent, keeping the edge weight <= edge_w).
      const auto dir = orthogonal_dir(rng, vec[parent[i]], dim_lo, d_event);
      vec[i].assign(params.topic_dim, 0.0);
      for (int d = 0; d < d_event; ++d)
        vec[i][dim_lo + d] = std::abs(std::cos(alpha) * vec[parent[i]][dim_lo + d] +
                                      std::sin(alpha) * dir[d]);
      double n = norm_of(vec[i]);
      for (auto& x : vec[i]) x /= n;
    }
    m.content.topic = vec[i];
    m.content.hashtags = {tag};
  }

  Timestamp t_max = t_base;
  for (const auto& m : nodes) t_max = std::max(t_max, m.timestamp);
  ev.window = t_max - t_base;
  ev.interactions = std::move(nodes);
  return ev;
}

std::vector<Interaction> inject_noise(const std::vector<PlantedEvent>& events,
                                      double noise_level, const SynthParams& params,
                                      std::uint64_t seed) {
  if (noise_level < 0.0) throw validation_error("noise_level must be >= 0");
  Rng rng(seed);

  std::size_t total = 0;
  InteractionId next_id = 0;
  for (const auto& e : events) {
    total += e.interactions.size();
    for (const auto& m : e.interactions) next_id = std::max(next_id, m.id + 1);
  }
  const auto count =
      static_cast<std::size_t>(std::ceil(noise_level * static_cast<double>(total)));

  std::vector<Interaction> all;
  all.reserve(total + count);
  for (const auto& e : events)
    all.insert(all.end(), e.interactions.begin(), e.interactions.end());

  for (std::size_t k = 0; k < count; ++k) {
    Interaction m;
    m.id = next_id++;
    m.sender = participant(rng, params.n_participants);
    m.recipients = draw_recipients(rng, params.n_participants, {m.sender});
    m.timestamp = rng.range(0, params.time_span);
    std::vector<double> v(params.topic_dim, 0.0);
    v[params.topic_dim - 2] = rng.real(0.1, 1.0);
    v[params.topic_dim - 1] = rng.real(0.1, 1.0);
    m.content.topic = std::move(v);
    m.content.hashtags = {"z" + std::to_string(k)};
    all.push_back(std::move(m));
  }

  for (std::size_t i = all.size(); i > 1; --i)
    std::swap(all[i - 1], all[rng.below(i)]);
  return all;
}

SynthDataset make_dataset(const SynthParams& params) {
  params.validate();
  SynthDataset ds;
  const std::int64_t slice = params.time_span / params.n_events;
  InteractionId id_base = 0;
  for (int e = 0; e < params.n_events; ++e) {
    ds.truth.events.push_back(gen_event_tree(params, e, id_base,
                                             static_cast<Timestamp>(e) * slice,
                                             mix_seed(params.seed, e)));
    id_base += params.event_size;
  }
  ds.interactions = inject_noise(ds.truth.events, params.noise_level, params,
                                 mix_seed(params.seed, params.n_events));
  return ds;
}

EvalReport score(const std::vector<InteractionId>& found,
                 const std::vector<InteractionId>& truth) {
  std::unordered_set<InteractionId> t(truth.begin(), truth.end());
  std::unordered_set<InteractionId> f(found.begin(), found.end());
  std::size_t inter = 0;
  for (const auto& id : f) inter += t.count(id);

  EvalReport r;
  r.precision = f.empty() ? 1.0 : static_cast<double>(inter) / static_cast<double>(f.size());
  r.recall = t.empty() ? 1.0 : static_cast<double>(inter) / static_cast<double>(t.size());
  r.f1 = (r.precision + r.recall == 0.0)
             ? 0.0
             : 2.0 * r.precision * r.recall / (r.precision + r.recall);
  r.objective = static_cast<double>(f.size());
  return r;
}

EvalReport score(const EventSet& found, const GroundTruth& truth) {
  return score(found.covered, truth.all_ids());
}

SweepAxis sweep_axis_from_string(const std::string& s) {
  if (s == "noise") return SweepAxis::Noise;
  if (s == "size") return SweepAxis::Size;
  throw validation_error("unknown sweep axis: " + s + " (expected noise|size)");
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (spec.grid.empty()) throw validation_error("sweep grid must not be empty");
  if (spec.algorithms.empty()) throw validation_error("sweep needs at least one algorithm");
  if (spec.repetitions < 1) throw validation_error("repetitions must be >= 1");
  if (spec.base.n_events != 1)
    throw validation_error("sweeps are defined for a single planted event");

  std::vector<SweepRow> rows;
  for (const double gv : spec.grid) {
    SynthParams p = spec.base;
    if (spec.axis == SweepAxis::Noise)
      p.noise_level = gv;
    else
      p.event_size = static_cast<int>(std::llround(gv));

    std::vector<SweepRow> acc(spec.algorithms.size());
    for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
      acc[a].axis_value = gv;
      acc[a].algorithm = spec.algorithms[a];
      acc[a].repetitions = spec.repetitions;
    }

    for (int rep = 0; rep < spec.repetitions; ++rep) {
      p.seed = spec.seed + static_cast<std::uint64_t>(rep);
      const SynthDataset ds = make_dataset(p);
      const MetaGraph g = build_meta_graph(ds.interactions);
      const PlantedEvent& ev = ds.truth.events[0];
      const auto truth_ids = ev.ids();

      for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
        SolveParams sp;
        sp.budget = ev.budget;
        sp.window = ev.window;
        sp.algorithm = spec.algorithms[a];
        sp.dp_decimals = spec.dp_decimals;
        sp.rng_seed = p.seed;
        const auto t0 = std::chrono::steady_clock::now();
        const EventTree tree = tmaxtree(g, ev.root, sp);
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        const EvalReport r = score(tree.nodes, truth_ids);
        acc[a].precision += r.precision;
        acc[a].recall += r.recall;
        acc[a].f1 += r.f1;
        acc[a].objective += r.objective;
        acc[a].runtime_s += dt.count();
      }
    }
    for (auto& row : acc) {
      const double n = spec.repetitions;
      row.precision /= n;
      row.recall /= n;
      row.f1 /= n;
      row.objective /= n;
      row.runtime_s /= n;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out,
                     bool include_runtime) {
  out << "axis_value,algorithm,precision,recall,f1,objective";
  if (include_runtime) out << ",runtime_s";
  out << ",repetitions\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%g,%s,%.6f,%.6f,%.6f,%.6f", r.axis_value,
                  to_string(r.algorithm), r.precision, r.recall, r.f1, r.objective);
    out << buf;
    if (include_runtime) {
      std::snprintf(buf, sizeof(buf), ",%.6f", r.runtime_s);
      out << buf;
    }
    out << ',' << r.repetitions << '\n';
  }
}

void write_ground_truth_json(const GroundTruth& truth, std::ostream& out) {
  nlohmann::json j;
  j["events"] = nlohmann::json::array();
  for (const auto& e : truth.events) {
    nlohmann::json je;
    je["root"] = e.root;
    je["budget"] = e.budget;
    je["window"] = e.window;
    je["ids"] = e.ids();
    je["tree_edges"] = nlohmann::json::array();
    for (const auto& [s, d] : e.tree_edges) je["tree_edges"].push_back({s, d});
    j["events"].push_back(std::move(je));
  }
  out << j.dump(2) << '\n';
}

}  // namespace evtree
