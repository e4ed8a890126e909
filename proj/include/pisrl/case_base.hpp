#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pisrl/kd_tree.hpp"

namespace pisrl {

using Vec = std::vector<double>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// One stored state/action pair with its value estimate and bookkeeping for
// least-frequently-used eviction.
struct Case {
  Vec state;
  Vec action;
  double value = 0.0;
  std::uint64_t use_count = 0;
  std::uint64_t insert_seq = 0;
};

struct NearestResult {
  std::size_t case_index = 0;
  double distance = 0.0;
};

double distance(const Vec& a, const Vec& b);

// Bounded memory of cases. Nearest-neighbor retrieval answers exactly as a
// linear scan would (ties go to the oldest case); the kd-tree behind it is
// only an accelerator and is rebuilt lazily after eviction or load.
class CaseBase {
 public:
  CaseBase(std::size_t state_dim, std::size_t action_dim, double density_threshold,
           std::uint64_t capacity);

  std::size_t state_dim() const { return state_dim_; }
  std::size_t action_dim() const { return action_dim_; }
  double density_threshold() const { return density_threshold_; }
  std::uint64_t capacity() const { return capacity_; }
  void set_capacity(std::uint64_t capacity);

  std::size_t size() const { return cases_.size(); }
  bool empty() const { return cases_.empty(); }
  const Case& at(std::size_t index) const;
  const std::vector<Case>& cases() const { return cases_; }

  // Monotone counter bumped by every content mutation (insert, replace,
  // set_value, evict, load). Use-count updates do not count.
  std::uint64_t mutation_version() const { return mutation_version_; }

  std::optional<NearestResult> nearest(const Vec& query) const;

  // 0 = known (nearest distance <= density threshold), 1 = unknown.
  // An empty base classifies every state as unknown.
  int classify_risk(const Vec& query) const;

  std::size_t insert(Vec state, Vec action, double value);
  void record_use(std::size_t index);
  void replace(std::size_t index, Vec new_action, double new_value);
  void set_value(std::size_t index, double value);

  // Removes cases in ascending (use_count, insert_seq) order until the
  // capacity bound holds again. Returns how many were removed.
  std::size_t evict_to_capacity();

  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static CaseBase load(std::istream& in);
  static CaseBase load_file(const std::string& path);

 private:
  void check_state_dim(const Vec& v) const;
  void check_action_dim(const Vec& v) const;
  void check_index(std::size_t index) const;
  void rebuild_index() const;

  std::size_t state_dim_;
  std::size_t action_dim_;
  double density_threshold_;
  std::uint64_t capacity_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t mutation_version_ = 0;
  std::vector<Case> cases_;

  mutable KdTree index_;
  mutable bool index_stale_ = false;
};

}  // namespace pisrl
