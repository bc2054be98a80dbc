#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sacnn/annealer.hpp"
#include "sacnn/error.hpp"
#include "sacnn/pareto.hpp"
#include "sacnn/search_space.hpp"

namespace sacnn {

inline constexpr int kFormatVersion = 1;

/// Writes to a sibling temporary file and renames it into place, so a
/// failed command never leaves a half-written artifact.
inline void atomic_write(const std::filesystem::path &path, const std::string &content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw DataError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush())
      throw DataError("cannot write '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

/// Row labels of the top-k hyperparameter table.
inline std::string display_label(std::string_view domain) {
  static const std::map<std::string, std::string, std::less<>> labels{
      {"kernelCount3", "filter num of win 3"},
      {"kernelCount4", "filter num of win 4"},
      {"kernelCount5", "filter num of win 5"},
      {"activation", "activation function"},
      {"learningRate", "Learning Rate"},
      {"convDropoutRate", "Dropout Rate"},
      {"batchSize", "Batch size"},
      {"unitCount", "fc unit count"},
      {"fcDropoutRate", "fc Dropout Rate"},
  };
  auto it = labels.find(domain);
  return it == labels.end() ? std::string(domain) : it->second;
}

namespace detail {

inline std::ostringstream classic_stream() {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  return os;
}

inline std::string fixed(double v, int digits) {
  auto os = classic_stream();
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

inline void write_row(std::ostream &os, const std::vector<std::string> &cells,
                      const std::vector<std::size_t> &widths) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i)
      os << "  ";
    if (i + 1 == cells.size())
      os << cells[i];
    else
      os << std::left << std::setw(static_cast<int>(widths[i])) << cells[i];
  }
  os << '\n';
}

inline std::string table(const std::vector<std::vector<std::string>> &rows) {
  std::vector<std::size_t> widths;
  for (const auto &r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (widths.size() <= i)
        widths.push_back(0);
      widths[i] = std::max(widths[i], r[i].size());
    }
  auto os = classic_stream();
  for (const auto &r : rows)
    write_row(os, r, widths);
  return os.str();
}

} // namespace detail

/// Human-readable archive: one row per entry (columns = hyperparameters,
/// error_rate, flops, iteration_found), then the top-k section with one row
/// per hyperparameter and one column per rank.
inline std::string archive_text(const SearchSpace &space, const std::vector<ArchiveEntry> &entries,
                                std::size_t top_k, std::string_view title = "archive") {
  auto os = detail::classic_stream();
  os << "# sacnn-archive v" << kFormatVersion << '\n';
  os << "[" << title << "] " << entries.size() << " non-dominated entries\n";
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header;
  for (const auto &d : space.domains())
    header.push_back(d.name());
  header.insert(header.end(), {"error_rate", "flops", "iteration_found"});
  rows.push_back(header);
  for (const auto &e : entries) {
    std::vector<std::string> r;
    for (std::size_t d = 0; d < space.size(); ++d)
      r.push_back(space[d].values()[e.config[d]].text());
    r.push_back(detail::fixed(e.objectives.error_rate, 6));
    r.push_back(std::to_string(e.objectives.flops));
    r.push_back(std::to_string(e.iteration_found));
    rows.push_back(std::move(r));
  }
  os << detail::table(rows);

  const std::size_t k = std::min(top_k, entries.size());
  os << "\n[top-" << top_k << "] sorted by error_rate\n";
  rows.clear();
  std::vector<std::string> top_header{"Hyperparameters"};
  for (std::size_t i = 0; i < k; ++i)
    top_header.push_back("Top" + std::to_string(i + 1));
  rows.push_back(top_header);
  for (std::size_t d = 0; d < space.size(); ++d) {
    std::vector<std::string> r{display_label(space[d].name())};
    for (std::size_t i = 0; i < k; ++i)
      r.push_back(space[d].values()[entries[i].config[d]].text());
    rows.push_back(std::move(r));
  }
  std::vector<std::string> err{"error_rate"}, flops{"flops"};
  for (std::size_t i = 0; i < k; ++i) {
    err.push_back(detail::fixed(entries[i].objectives.error_rate, 6));
    flops.push_back(std::to_string(entries[i].objectives.flops));
  }
  rows.push_back(err);
  rows.push_back(flops);
  os << detail::table(rows);
  return os.str();
}

inline nlohmann::ordered_json config_to_json(const SearchSpace &space, const Configuration &c) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t d = 0; d < space.size(); ++d)
    j[space[d].name()] = space[d].values()[c[d]].text();
  return j;
}

inline nlohmann::ordered_json objectives_to_json(const ObjectiveVector &v) {
  return {{"error_rate", v.error_rate}, {"flops", v.flops}};
}

inline std::string archive_json(const SearchSpace &space, const std::vector<ArchiveEntry> &entries,
                                std::size_t top_k) {
  nlohmann::ordered_json j;
  j["format"] = "sacnn-archive";
  j["version"] = kFormatVersion;
  j["top_k"] = std::min(top_k, entries.size());
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto &e : entries) {
    nlohmann::ordered_json item;
    item["config"] = config_to_json(space, e.config);
    item["error_rate"] = e.objectives.error_rate;
    item["flops"] = e.objectives.flops;
    item["iteration_found"] = e.iteration_found;
    list.push_back(std::move(item));
  }
  j["entries"] = std::move(list);
  return j.dump(2) + "\n";
}

/// Parses archive_json output back into entries.
inline std::vector<ArchiveEntry> archive_from_json(const SearchSpace &space,
                                                   const std::string &text) {
  const auto j = nlohmann::json::parse(text);
  if (j.value("format", "") != "sacnn-archive")
    throw DataError("not an archive file");
  std::vector<ArchiveEntry> out;
  for (const auto &item : j.at("entries")) {
    std::map<std::string, std::string> values;
    for (const auto &[k, v] : item.at("config").items())
      values[k] = v.get<std::string>();
    out.push_back({configuration_from_assignments(space, values),
                   {item.at("error_rate").get<double>(), item.at("flops").get<std::uint64_t>()},
                   item.at("iteration_found").get<std::size_t>()});
  }
  return out;
}

inline nlohmann::ordered_json schedule_to_json(const AnnealingSchedule &s) {
  nlohmann::ordered_json j;
  j["t_init"] = s.t_init;
  j["t_final"] = s.t_final;
  j["cooling_rate"] = s.cooling_rate;
  j["iteration_budget"] = s.iteration_budget;
  j["outer_iterations"] = s.outer_iterations;
  j["inner_iterations"] = s.inner_iterations;
  j["outer_iterations_reported"] = report_one_decimal(s.outer_iterations);
  j["inner_iterations_reported"] = report_one_decimal(s.inner_iterations);
  j["executed_outer"] = s.executed_outer();
  j["executed_inner"] = s.executed_inner();
  return j;
}

inline nlohmann::ordered_json step_to_json(const SearchSpace &space, const StepRecord &r) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(r.kind);
  j["iteration"] = r.iteration;
  j["outer_step"] = r.outer_step;
  j["temperature"] = r.temperature;
  j["delta_f"] = r.delta_f;
  j["probability"] = r.probability;
  j["draw"] = r.draw ? nlohmann::ordered_json(*r.draw) : nlohmann::ordered_json(nullptr);
  j["accepted"] = r.accepted;
  j["archive_action"] = r.archive_action ? nlohmann::ordered_json(to_string(*r.archive_action))
                                         : nlohmann::ordered_json(nullptr);
  j["current_objectives"] = objectives_to_json(r.current_objectives);
  j["candidate_objectives"] = objectives_to_json(r.candidate_objectives);
  j["candidate"] = config_to_json(space, r.candidate);
  if (!r.error.empty())
    j["error"] = r.error;
  return j;
}

/// Line-per-step log: header line, one line per record, closing summary.
inline std::string trace_jsonl(const SearchSpace &space, const RunResult &result) {
  std::string out;
  nlohmann::ordered_json header;
  header["format"] = "sacnn-trace";
  header["version"] = kFormatVersion;
  header["schedule"] = schedule_to_json(result.schedule);
  out += header.dump() + "\n";
  for (const auto &r : result.trace)
    out += step_to_json(space, r).dump() + "\n";
  nlohmann::ordered_json summary;
  summary["summary"] = true;
  summary["stop_reason"] = to_string(result.stop_reason);
  summary["outer_steps_run"] = result.outer_steps_run;
  summary["evaluations"] = result.evaluations;
  summary["archive_size"] = result.archive.size();
  out += summary.dump() + "\n";
  return out;
}

inline std::string calibration_json(const RunResult &result) {
  const auto &c = result.calibration;
  nlohmann::ordered_json j;
  j["format"] = "sacnn-calibration";
  j["version"] = kFormatVersion;
  j["delta_f_ave"] = c.delta_f_ave;
  j["probe_count"] = c.probe_count;
  j["deteriorations"] = c.deteriorations;
  j["p_init"] = c.p_init;
  j["p_final"] = c.p_final;
  j["t_init"] = c.t_init;
  j["t_final"] = c.t_final;
  j["schedule"] = schedule_to_json(result.schedule);
  return j.dump(2) + "\n";
}

} // namespace sacnn
