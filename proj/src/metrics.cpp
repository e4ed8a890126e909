#include "pisrl/metrics.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace pisrl {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<MetricsRow> RunMetrics::phase_rows(const std::string& phase) const {
  std::vector<MetricsRow> out;
  for (const auto& row : rows) {
    if (row.phase == phase) out.push_back(row);
  }
  return out;
}

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out =
      "phase,episode,steps,cumulative_reward,failure,teacher_steps,base_size,"
      "replacements,insertions\n";
  for (const auto& r : rows) {
    out += r.phase;
    out += ',' + std::to_string(r.episode);
    out += ',' + std::to_string(r.steps);
    out += ',' + format_double(r.cumulative_reward);
    out += r.failure ? ",1" : ",0";
    out += ',' + std::to_string(r.teacher_steps);
    out += ',' + std::to_string(r.base_size);
    out += ',' + std::to_string(r.replacements);
    out += ',' + std::to_string(r.insertions);
    out += '\n';
  }
  return out;
}

std::string summary_csv(const std::vector<PhaseSummary>& summaries) {
  std::string out = "phase,episodes,mean_reward,total_failures,final_base_size\n";
  for (const auto& s : summaries) {
    out += s.phase;
    out += ',' + std::to_string(s.episodes);
    out += ',' + format_double(s.mean_reward);
    out += ',' + std::to_string(s.total_failures);
    out += ',' + std::to_string(s.final_base_size);
    out += '\n';
  }
  return out;
}

PhaseSummary summarize(const std::string& phase, const std::vector<MetricsRow>& rows,
                       std::size_t final_base_size) {
  PhaseSummary s;
  s.phase = phase;
  s.episodes = rows.size();
  s.final_base_size = final_base_size;
  double sum = 0.0;
  for (const auto& r : rows) {
    sum += r.cumulative_reward;
    if (r.failure) ++s.total_failures;
  }
  s.mean_reward = rows.empty() ? 0.0 : sum / static_cast<double>(rows.size());
  return s;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace pisrl
