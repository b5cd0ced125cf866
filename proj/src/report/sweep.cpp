#include "psim/report/sweep.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "psim/engine/summary.hpp"
#include "psim/report/csv.hpp"

namespace psim::report {

using nlohmann::json;

std::size_t SweepSpec::cells() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return n;
}

bool set_path(json& doc, std::string_view path, const json& value) {
  json* cur = &doc;
  std::size_t pos = 0;
  while (true) {
    std::size_t dot = path.find('.', pos);
    std::string part(path.substr(pos, dot == std::string_view::npos ? path.npos : dot - pos));
    if (part.empty()) return false;
    bool last = dot == std::string_view::npos;
    bool numeric = part.find_first_not_of("0123456789") == std::string::npos;
    json* next = nullptr;
    if (cur->is_array() && numeric) {
      std::size_t idx = std::stoul(part);
      if (idx >= cur->size()) return false;
      next = &(*cur)[idx];
    } else if (cur->is_object() || cur->is_null()) {
      next = &(*cur)[part];
    } else {
      return false;
    }
    if (last) {
      *next = value;
      return true;
    }
    cur = next;
    pos = dot + 1;
  }
}

Result<SweepSpec, std::vector<engine::Violation>> load_sweep(const json& doc,
                                                             const std::filesystem::path& base_dir) {
  std::vector<engine::Violation> out;
  SweepSpec spec;
  if (!doc.is_object()) return std::vector<engine::Violation>{{"<document>", "must be an object"}};
  for (const auto& [key, value] : doc.items()) {
    if (key != "base" && key != "base_path" && key != "axes" && key != "replications" &&
        key != "seed_offsets") {
      out.push_back({key, "unknown field"});
    }
  }
  if (doc.contains("base") == doc.contains("base_path")) {
    out.push_back({"base", "exactly one of base or base_path is required"});
  } else if (doc.contains("base")) {
    spec.base = doc.at("base");
  } else if (!doc.at("base_path").is_string()) {
    out.push_back({"base_path", "must be a string"});
  } else {
    auto p = base_dir / doc.at("base_path").get<std::string>();
    std::ifstream in(p);
    json base = in ? json::parse(in, nullptr, false) : json(json::value_t::discarded);
    if (base.is_discarded()) {
      out.push_back({"base_path", "cannot read scenario " + p.string()});
    } else {
      spec.base = base;
    }
  }
  if (!doc.contains("axes") || !doc.at("axes").is_array() || doc.at("axes").empty()) {
    out.push_back({"axes", "must be a non-empty array"});
  } else {
    for (std::size_t i = 0; i < doc.at("axes").size(); ++i) {
      const auto& a = doc.at("axes")[i];
      std::string f = "axes[" + std::to_string(i) + "]";
      if (!a.is_object() || !a.contains("path") || !a.at("path").is_string() ||
          !a.contains("values") || !a.at("values").is_array() || a.at("values").empty() ||
          a.size() != 2) {
        out.push_back({f, "must be {path: string, values: non-empty array}"});
        continue;
      }
      SweepAxis axis;
      axis.path = a.at("path").get<std::string>();
      for (const auto& v : a.at("values")) axis.values.push_back(v);
      spec.axes.push_back(std::move(axis));
    }
  }
  if (doc.contains("replications")) {
    const auto& r = doc.at("replications");
    if (!r.is_number_integer() || r.get<std::int64_t>() <= 0) {
      out.push_back({"replications", "must be a positive integer"});
    } else {
      spec.replications = r.get<std::size_t>();
    }
  }
  if (doc.contains("seed_offsets")) {
    const auto& s = doc.at("seed_offsets");
    bool ok = s.is_array();
    if (ok) {
      for (const auto& v : s) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) ok = false;
        else spec.seed_offsets.push_back(v.get<std::uint64_t>());
      }
    }
    if (!ok || spec.seed_offsets.size() != spec.replications) {
      out.push_back({"seed_offsets", "must list one non-negative integer per replication"});
    }
  } else {
    for (std::size_t i = 0; i < spec.replications; ++i) spec.seed_offsets.push_back(i);
  }
  if (!out.empty()) return out;
  return spec;
}

Result<SweepSpec, std::vector<engine::Violation>> load_sweep_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::vector<engine::Violation>{{path, "cannot be read"}};
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) return std::vector<engine::Violation>{{path, "not valid JSON"}};
  return load_sweep(doc, std::filesystem::path(path).parent_path());
}

bool SweepResult::all_ok() const {
  for (const auto& r : runs) {
    if (r.status != "ok") return false;
  }
  return true;
}

namespace {

SweepRun prepare(const SweepSpec& spec, std::size_t index, json& doc) {
  SweepRun run;
  run.index = index;
  run.cell = index / spec.replications;
  run.replication = index % spec.replications;
  doc = spec.base;
  std::size_t rem = run.cell;
  std::vector<std::size_t> pick(spec.axes.size());
  for (std::size_t a = spec.axes.size(); a-- > 0;) {
    pick[a] = rem % spec.axes[a].values.size();
    rem /= spec.axes[a].values.size();
  }
  run.status = "ok";
  for (std::size_t a = 0; a < spec.axes.size(); ++a) {
    const auto& v = spec.axes[a].values[pick[a]];
    if (!run.params.empty()) run.params += ";";
    run.params += spec.axes[a].path + "=" + v.dump();
    if (!set_path(doc, spec.axes[a].path, v)) run.status = "bad axis path " + spec.axes[a].path;
  }
  std::uint64_t base_seed = 1;
  if (doc.is_object() && doc.contains("seed") && doc.at("seed").is_number_integer() &&
      doc.at("seed").get<std::int64_t>() >= 0) {
    base_seed = doc.at("seed").get<std::uint64_t>();
  }
  run.seed = base_seed + spec.seed_offsets[run.replication];
  if (doc.is_object()) doc["seed"] = run.seed;
  return run;
}

SweepRun execute(const SweepSpec& spec, std::size_t index) {
  json doc;
  SweepRun run = prepare(spec, index, doc);
  if (run.status != "ok") return run;
  auto cfg = engine::load_scenario(doc);
  if (!cfg) {
    std::string why = "invalid";
    for (const auto& v : cfg.error().violations) why += " " + v.field + ": " + v.constraint + ";";
    run.status = why;
    return run;
  }
  try {
    run.summary = engine::run_scenario(cfg.value(), false).summary;
  } catch (const std::exception& e) {
    run.status = std::string("failed: ") + e.what();
  }
  return run;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, std::size_t parallelism) {
  SweepResult result;
  std::size_t n = spec.total_runs();
  result.runs.resize(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) result.runs[i] = execute(spec, i);
  };
  std::size_t threads = std::max<std::size_t>(1, std::min(parallelism, n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return result;
}

std::vector<std::string> sweep_csv_header() {
  std::vector<std::string> h = {"row_type", "run_index", "cell",   "replication",
                                "seed",     "params",    "status", "config_digest"};
  for (const auto& c : metric_columns()) h.push_back(c.name);
  return h;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = csv_line(sweep_csv_header());
  std::size_t columns = metric_columns().size();
  for (const auto& r : result.runs) {
    std::vector<std::string> row = {"run", std::to_string(r.index), std::to_string(r.cell),
                                    std::to_string(r.replication), std::to_string(r.seed),
                                    r.params, r.status,
                                    r.summary ? r.summary->value("config_digest", "") : ""};
    if (r.summary) {
      for (double v : metric_values(*r.summary)) row.push_back(csv_number(v));
    } else {
      row.insert(row.end(), columns, "");
    }
    out += csv_line(row);
  }
  std::size_t i = 0;
  while (i < result.runs.size()) {
    std::size_t cell = result.runs[i].cell;
    std::vector<std::vector<double>> values(columns);
    std::size_t ok = 0;
    std::string params = result.runs[i].params;
    for (; i < result.runs.size() && result.runs[i].cell == cell; ++i) {
      if (!result.runs[i].summary) continue;
      ++ok;
      auto v = metric_values(*result.runs[i].summary);
      for (std::size_t c = 0; c < columns; ++c) values[c].push_back(v[c]);
    }
    for (const char* kind : {"mean", "std"}) {
      std::vector<std::string> row = {kind, "", std::to_string(cell), "", "", params,
                                      "n=" + std::to_string(ok), ""};
      for (std::size_t c = 0; c < columns; ++c) {
        if (ok == 0) {
          row.push_back("");
        } else {
          row.push_back(csv_number(std::string_view(kind) == "mean" ? mean(values[c])
                                                                   : stddev(values[c])));
        }
      }
      out += csv_line(row);
    }
  }
  return out;
}

}  // namespace psim::report
