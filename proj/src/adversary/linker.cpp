#include "psim/adversary/linker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace psim::adversary {

using beaconing::StationId;

bool Coverage::covers(Vec2 emitter) const {
  if (full) return true;
  return std::any_of(posts.begin(), posts.end(), [&](const ListeningPost& p) {
    return distance(emitter, p.center) <= p.radius_m;
  });
}

void ObservationStore::ingest(const beaconing::Message& msg, Vec2 emitter_position) {
  if (!coverage_.covers(emitter_position)) return;
  if (const auto* cam = std::get_if<beaconing::Cam>(&msg)) {
    observations_.push_back(
        {cam->timestamp, cam->station_id, cam->position, cam->velocity, cam->quasi_ids});
  } else if (const auto* denm = std::get_if<beaconing::Denm>(&msg)) {
    observations_.push_back(
        {denm->timestamp, denm->station_id, denm->event_position, Vec2{}, std::nullopt});
  } else {
    ++notices_;
  }
}

std::vector<Tracklet> chain_same_id(const ObservationStore& store) {
  std::map<StationId, std::vector<const Observation*>> groups;
  for (const auto& obs : store.observations()) groups[obs.station_id].push_back(&obs);
  std::vector<Tracklet> out;
  out.reserve(groups.size());
  for (auto& [id, list] : groups) {
    std::stable_sort(list.begin(), list.end(),
                     [](const auto* a, const auto* b) { return a->t < b->t; });
    Tracklet tr;
    tr.station_id = id;
    tr.count = list.size();
    tr.first_t = list.front()->t;
    tr.last_t = list.back()->t;
    tr.first_position = list.front()->position;
    tr.first_velocity = list.front()->velocity;
    tr.last_position = list.back()->position;
    tr.last_velocity = list.back()->velocity;
    tr.quasi_ids = list.front()->quasi_ids;
    out.push_back(tr);
  }
  return out;
}

double link_cost(const Tracklet& end, const Tracklet& start, const MotionModel& model) {
  double gap = start.first_t - end.last_t;
  if (!(gap > kTimeEpsilon) || gap > model.max_gap_s + kTimeEpsilon) return kInfeasible;
  Vec2 predicted = end.last_position + end.last_velocity * gap;
  double s = model.sigma(gap);
  return squared_distance(predicted, start.first_position) / (s * s);
}

GapAssignment associate_across_gap(std::vector<Tracklet> ends,
                                   std::vector<Tracklet> starts,
                                   const MotionModel& model) {
  auto by_id = [](const Tracklet& a, const Tracklet& b) { return a.station_id < b.station_id; };
  std::sort(ends.begin(), ends.end(), by_id);
  std::sort(starts.begin(), starts.end(), by_id);
  GapAssignment gap;
  AssignmentProblem problem;
  problem.no_match_cost = model.no_match_cost;
  for (const auto& e : ends) {
    gap.ends.push_back(e.station_id);
    std::vector<double> row;
    for (const auto& s : starts) {
      double c = link_cost(e, s, model);
      // A link dearer than two no-matches can never be optimal.
      if (c > 2.0 * model.no_match_cost) c = kInfeasible;
      row.push_back(c);
    }
    problem.cost.push_back(std::move(row));
  }
  for (const auto& s : starts) gap.starts.push_back(s.station_id);
  if (ends.empty() || starts.empty()) {
    gap.end_to_start.assign(ends.size(), std::nullopt);
    gap.cost = problem.cost;
    gap.total_cost = static_cast<double>(ends.size() + starts.size()) * model.no_match_cost;
    return gap;
  }
  Assignment a = solve_assignment(problem);
  gap.cost = std::move(problem.cost);
  gap.end_to_start = std::move(a.row_to_col);
  gap.total_cost = a.total_cost;
  return gap;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

bool same_quasi(const beaconing::QuasiIds& a, const beaconing::QuasiIds& b, double tol) {
  return std::abs(a.vehicle_length_m - b.vehicle_length_m) <= tol &&
         std::abs(a.vehicle_width_m - b.vehicle_width_m) <= tol;
}

}  // namespace

SemanticClasses semantic_match(const std::vector<Tracklet>& tracklets, double tolerance_m) {
  SemanticClasses out;
  std::size_t n = tracklets.size();
  UnionFind uf(n);
  std::vector<std::size_t> unlabelled;
  for (std::size_t i = 0; i < n; ++i) {
    if (!tracklets[i].quasi_ids) {
      unlabelled.push_back(i);
      continue;
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (tracklets[j].quasi_ids &&
          same_quasi(*tracklets[i].quasi_ids, *tracklets[j].quasi_ids, tolerance_m)) {
        uf.unite(i, j);
      }
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < n; ++i) {
    if (tracklets[i].quasi_ids) classes[uf.find(i)].push_back(i);
  }
  for (auto& [root, members] : classes) {
    bool disjoint = true;
    for (std::size_t a = 0; a < members.size() && disjoint; ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        if (tracklets[members[a]].overlaps(tracklets[members[b]])) {
          disjoint = false;
          break;
        }
      }
    }
    if (disjoint) {
      std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
        return tracklets[a].first_t < tracklets[b].first_t;
      });
      out.chained.push_back(members);
    } else {
      out.ambiguous.push_back(members);
    }
  }
  if (!unlabelled.empty()) out.ambiguous.push_back(unlabelled);
  return out;
}

std::map<StationId, StationId> LinkageResult::successors() const {
  std::map<StationId, StationId> out;
  for (const auto& h : chains) {
    for (std::size_t i = 0; i + 1 < h.chain.size(); ++i) out[h.chain[i]] = h.chain[i + 1];
  }
  return out;
}

nlohmann::json LinkageResult::to_json() const {
  nlohmann::json j;
  j["chains"] = nlohmann::json::array();
  for (const auto& h : chains) {
    nlohmann::json ids = nlohmann::json::array();
    for (const auto& id : h.chain) ids.push_back(id.to_string());
    std::string scope(psim::to_string(h.chain.front().scope));
    j["chains"].push_back({{"station_ids", ids}, {"score", h.score}, {"scope", scope}});
  }
  j["gaps"] = nlohmann::json::array();
  for (const auto& g : gaps) {
    nlohmann::json ends = nlohmann::json::array(), starts = nlohmann::json::array();
    for (const auto& id : g.ends) ends.push_back(id.to_string());
    for (const auto& id : g.starts) starts.push_back(id.to_string());
    nlohmann::json matrix = nlohmann::json::array();
    for (const auto& row : g.cost) {
      nlohmann::json r = nlohmann::json::array();
      for (double c : row) {
        if (std::isfinite(c)) r.push_back(c);
        else r.push_back(nullptr);
      }
      matrix.push_back(r);
    }
    nlohmann::json pairs = nlohmann::json::array();
    for (std::size_t i = 0; i < g.end_to_start.size(); ++i) {
      if (g.end_to_start[i]) {
        pairs.push_back({g.ends[i].to_string(), g.starts[*g.end_to_start[i]].to_string()});
      }
    }
    j["gaps"].push_back({{"ends", ends}, {"starts", starts}, {"cost", matrix},
                         {"links", pairs}, {"total_cost", g.total_cost}});
  }
  return j;
}

namespace {

// Kinematic linking inside one ambiguous class. Adds successor links.
void link_class(const std::vector<Tracklet>& all, const std::vector<std::size_t>& members,
                const MotionModel& model, std::map<std::size_t, std::size_t>& next,
                std::map<std::size_t, double>& link_score, LinkageResult& result) {
  std::size_t n = members.size();
  // Node k is member k as an end, node n + k the same member as a start.
  UnionFind uf(2 * n);
  bool any = false;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      double c = link_cost(all[members[a]], all[members[b]], model);
      if (std::isfinite(c) && c <= 2.0 * model.no_match_cost) {
        uf.unite(a, n + b);
        any = true;
      }
    }
  }
  if (!any) return;
  std::map<std::size_t, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
  for (std::size_t k = 0; k < 2 * n; ++k) {
    std::size_t root = uf.find(k);
    if (k < n) groups[root].first.push_back(members[k]);
    else groups[root].second.push_back(members[k - n]);
  }
  for (auto& [root, sides] : groups) {
    auto& [ends, starts] = sides;
    if (ends.empty() || starts.empty()) continue;
    std::vector<Tracklet> e, s;
    for (auto i : ends) e.push_back(all[i]);
    for (auto i : starts) s.push_back(all[i]);
    GapAssignment gap = associate_across_gap(e, s, model);
    // Map sorted ids back to tracklet indices.
    std::map<StationId, std::size_t> index;
    for (auto i : ends) index[all[i].station_id] = i;
    for (auto i : starts) index[all[i].station_id] = i;
    for (std::size_t r = 0; r < gap.ends.size(); ++r) {
      if (!gap.end_to_start[r]) continue;
      std::size_t from = index[gap.ends[r]];
      std::size_t to = index[gap.starts[*gap.end_to_start[r]]];
      next[from] = to;
      link_score[from] = gap.cost[r][*gap.end_to_start[r]];
    }
    result.gaps.push_back(std::move(gap));
  }
}

}  // namespace

LinkageResult link(const ObservationStore& store, const LinkerOptions& options) {
  LinkageResult result;
  std::vector<Tracklet> all = chain_same_id(store);
  std::map<std::size_t, std::size_t> next;
  std::map<std::size_t, double> link_score;

  for (AppScope scope : {AppScope::kCam, AppScope::kDenm, AppScope::kOther}) {
    std::vector<std::size_t> idx;
    std::vector<Tracklet> scoped;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (all[i].station_id.scope == scope) {
        idx.push_back(i);
        scoped.push_back(all[i]);
      }
    }
    if (scoped.empty()) continue;
    std::vector<std::vector<std::size_t>> ambiguous;
    if (options.semantic) {
      SemanticClasses classes = semantic_match(scoped, options.semantic_tolerance_m);
      for (const auto& chain : classes.chained) {
        for (std::size_t k = 0; k + 1 < chain.size(); ++k) next[idx[chain[k]]] = idx[chain[k + 1]];
      }
      ambiguous = std::move(classes.ambiguous);
    } else {
      std::vector<std::size_t> everyone(scoped.size());
      std::iota(everyone.begin(), everyone.end(), 0);
      ambiguous.push_back(everyone);
    }
    for (auto& members : ambiguous) {
      for (auto& m : members) m = idx[m];
      link_class(all, members, options.motion, next, link_score, result);
    }
  }

  std::vector<bool> has_prev(all.size(), false);
  for (const auto& [from, to] : next) has_prev[to] = true;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (has_prev[i]) continue;
    TrackHypothesis h;
    for (std::size_t cur = i;;) {
      h.chain.push_back(all[cur].station_id);
      auto it = next.find(cur);
      if (it == next.end()) break;
      auto sc = link_score.find(cur);
      if (sc != link_score.end()) h.score += sc->second;
      cur = it->second;
    }
    result.chains.push_back(std::move(h));
  }
  return result;
}

}  // namespace psim::adversary
