#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pisrl {

// Shortest round-trip decimal form, so equal doubles always print the same
// bytes and reparse exactly.
std::string format_double(double v);

struct MetricsRow {
  std::string phase;
  std::size_t episode = 0;
  std::size_t steps = 0;
  double cumulative_reward = 0.0;
  bool failure = false;
  std::size_t teacher_steps = 0;
  std::size_t base_size = 0;
  std::size_t replacements = 0;
  std::size_t insertions = 0;
};

struct PhaseSummary {
  std::string phase;
  std::size_t episodes = 0;
  double mean_reward = 0.0;
  std::size_t total_failures = 0;
  std::size_t final_base_size = 0;
};

struct RunMetrics {
  std::vector<MetricsRow> rows;
  std::vector<PhaseSummary> summaries;

  std::vector<MetricsRow> phase_rows(const std::string& phase) const;
};

std::string metrics_csv(const std::vector<MetricsRow>& rows);
std::string summary_csv(const std::vector<PhaseSummary>& summaries);

PhaseSummary summarize(const std::string& phase, const std::vector<MetricsRow>& rows,
                       std::size_t final_base_size);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace pisrl
