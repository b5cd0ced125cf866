#include "psim/adversary/trace_io.hpp"

#include <json.hpp>

namespace psim::adversary {

using nlohmann::json;

std::string trace_line(const TraceRecord& r) {
  json j;
  j["t"] = r.t;
  j["sender_truth_id"] = r.sender_truth_id;
  j["station_id"] = r.station_id.to_string();
  j["scope"] = psim::to_string(r.station_id.scope);
  j["x"] = r.position.x;
  j["y"] = r.position.y;
  j["vx"] = r.velocity.x;
  j["vy"] = r.velocity.y;
  if (r.quasi_ids) {
    j["quasi_ids"] = {{"length", r.quasi_ids->vehicle_length_m},
                      {"width", r.quasi_ids->vehicle_width_m}};
  } else {
    j["quasi_ids"] = nullptr;
  }
  return j.dump();
}

Result<ObservationStore, TraceError> load_trace(std::istream& in) {
  ObservationStore store;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      auto scope = parse_app_scope(j.at("scope").get<std::string>());
      auto value = beaconing::parse_station_value(j.at("station_id").get<std::string>());
      if (!scope || !value) return TraceError{n, "bad station_id or scope"};
      Observation obs;
      obs.t = j.at("t").get<double>();
      obs.station_id = beaconing::StationId{*value, *scope};
      obs.position = {j.at("x").get<double>(), j.at("y").get<double>()};
      obs.velocity = {j.at("vx").get<double>(), j.at("vy").get<double>()};
      const auto& q = j.at("quasi_ids");
      if (!q.is_null()) {
        obs.quasi_ids = beaconing::QuasiIds{q.at("length").get<double>(),
                                            q.at("width").get<double>()};
      }
      store.add(std::move(obs));
    } catch (const json::exception& e) {
      return TraceError{n, e.what()};
    }
  }
  return store;
}

}  // namespace psim::adversary
