#include "psim/adversary/scoring.hpp"

#include <algorithm>

namespace psim::adversary {

using beaconing::StationId;

AttackScore evaluate_attack(const LinkageResult& linkage,
                            const std::vector<Tracklet>& tracklets,
                            const GroundTruthView& truth) {
  AttackScore score;
  auto succ = linkage.successors();
  std::map<StationId, const Tracklet*> seen;
  for (const auto& t : tracklets) seen[t.station_id] = &t;

  for (const auto& c : truth.changes) {
    if (!seen.count(c.old_cam) || !seen.count(c.new_cam)) continue;
    ++score.transitions;
    auto it = succ.find(c.old_cam);
    if (it == succ.end()) continue;
    if (it->second == c.new_cam) {
      ++score.correct_links;
    } else {
      ++score.wrong_links;
    }
  }
  if (score.transitions > 0) {
    score.link_accuracy =
        static_cast<double>(score.correct_links) / static_cast<double>(score.transitions);
  }

  std::map<VehicleId, std::vector<const Tracklet*>> per_vehicle;
  for (const auto& t : tracklets) {
    if (t.station_id.scope != AppScope::kCam) continue;
    auto own = truth.owner.find(t.station_id);
    if (own == truth.owner.end()) continue;
    per_vehicle[own->second].push_back(&t);
  }
  double trace_sum = 0.0;
  for (auto& [vehicle, list] : per_vehicle) {
    std::sort(list.begin(), list.end(),
              [](const auto* a, const auto* b) { return a->first_t < b->first_t; });
    double total = list.back()->last_t - list.front()->first_t;
    if (total <= 0.0) {
      trace_sum += 1.0;
      continue;
    }
    double best = 0.0;
    std::size_t run_start = 0;
    for (std::size_t i = 0; i < list.size(); ++i) {
      bool continues = i + 1 < list.size();
      if (continues) {
        auto it = succ.find(list[i]->station_id);
        continues = it != succ.end() && it->second == list[i + 1]->station_id;
      }
      if (!continues) {
        best = std::max(best, list[i]->last_t - list[run_start]->first_t);
        run_start = i + 1;
      }
    }
    trace_sum += best / total;
  }
  if (!per_vehicle.empty()) {
    score.traceability = trace_sum / static_cast<double>(per_vehicle.size());
  }

  if (!truth.changes.empty()) {
    double sum = 0.0;
    for (const auto& c : truth.changes) {
      std::size_t count = 0;
      std::vector<VehicleId> counted;
      for (const auto& o : truth.changes) {
        if (o.region != c.region) continue;
        if (o.t > c.silence_until + kTimeEpsilon || c.t > o.silence_until + kTimeEpsilon) continue;
        if (std::find(counted.begin(), counted.end(), o.vehicle) != counted.end()) continue;
        counted.push_back(o.vehicle);
        ++count;
      }
      sum += static_cast<double>(count);
    }
    score.mean_anonymity_set = sum / static_cast<double>(truth.changes.size());
  }
  return score;
}

}  // namespace psim::adversary
