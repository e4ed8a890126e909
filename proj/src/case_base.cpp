#include "pisrl/case_base.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <system_error>

namespace pisrl {

double distance(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) {
    throw DimensionError("distance: vectors of length " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

CaseBase::CaseBase(std::size_t state_dim, std::size_t action_dim, double density_threshold,
                   std::uint64_t capacity)
    : state_dim_(state_dim),
      action_dim_(action_dim),
      density_threshold_(density_threshold),
      capacity_(capacity),
      index_(state_dim) {
  if (state_dim_ == 0 || action_dim_ == 0) {
    throw DimensionError("case base dimensions must be positive");
  }
  if (!(density_threshold_ > 0.0) || !std::isfinite(density_threshold_)) {
    throw std::invalid_argument("density threshold must be a positive real");
  }
  if (capacity_ == 0) {
    throw std::invalid_argument("capacity must be positive");
  }
}

void CaseBase::set_capacity(std::uint64_t capacity) {
  if (capacity == 0) throw std::invalid_argument("capacity must be positive");
  capacity_ = capacity;
}

const Case& CaseBase::at(std::size_t index) const {
  check_index(index);
  return cases_[index];
}

void CaseBase::check_state_dim(const Vec& v) const {
  if (v.size() != state_dim_) {
    throw DimensionError("expected state of length " + std::to_string(state_dim_) +
                         ", got " + std::to_string(v.size()));
  }
}

void CaseBase::check_action_dim(const Vec& v) const {
  if (v.size() != action_dim_) {
    throw DimensionError("expected action of length " + std::to_string(action_dim_) +
                         ", got " + std::to_string(v.size()));
  }
}

void CaseBase::check_index(std::size_t index) const {
  if (index >= cases_.size()) {
    throw std::out_of_range("case index " + std::to_string(index) + " out of range (size " +
                            std::to_string(cases_.size()) + ")");
  }
}

void CaseBase::rebuild_index() const {
  std::vector<KdTree::Item> items;
  items.reserve(cases_.size());
  for (std::size_t i = 0; i < cases_.size(); ++i) {
    items.push_back(KdTree::Item{cases_[i].state, i, cases_[i].insert_seq});
  }
  index_.assign(std::move(items));
  index_stale_ = false;
}

std::optional<NearestResult> CaseBase::nearest(const Vec& query) const {
  check_state_dim(query);
  if (cases_.empty()) return std::nullopt;
  if (index_stale_) rebuild_index();
  const KdTree::Result r = index_.nearest(query);
  return NearestResult{r.payload, std::sqrt(r.distance_sq)};
}

int CaseBase::classify_risk(const Vec& query) const {
  const auto n = nearest(query);
  if (!n) return 1;
  return n->distance <= density_threshold_ ? 0 : 1;
}

std::size_t CaseBase::insert(Vec state, Vec action, double value) {
  check_state_dim(state);
  check_action_dim(action);
  Case c;
  c.state = std::move(state);
  c.action = std::move(action);
  c.value = value;
  c.use_count = 0;
  c.insert_seq = next_seq_++;
  const std::size_t idx = cases_.size();
  cases_.push_back(std::move(c));
  if (!index_stale_) index_.insert(cases_.back().state, idx, cases_.back().insert_seq);
  ++mutation_version_;
  return idx;
}

void CaseBase::record_use(std::size_t index) {
  check_index(index);
  ++cases_[index].use_count;
}

void CaseBase::replace(std::size_t index, Vec new_action, double new_value) {
  check_index(index);
  check_action_dim(new_action);
  cases_[index].action = std::move(new_action);
  cases_[index].value = new_value;
  ++mutation_version_;
}

void CaseBase::set_value(std::size_t index, double value) {
  check_index(index);
  cases_[index].value = value;
  ++mutation_version_;
}

std::size_t CaseBase::evict_to_capacity() {
  if (cases_.size() <= capacity_) return 0;
  const std::size_t excess = cases_.size() - static_cast<std::size_t>(capacity_);
  std::vector<std::size_t> order(cases_.size());
  std::iota(order.begin(), order.end(), 0);
  // Least-frequently-used first; oldest insertion breaks ties.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cases_[a].use_count != cases_[b].use_count)
      return cases_[a].use_count < cases_[b].use_count;
    return cases_[a].insert_seq < cases_[b].insert_seq;
  });
  std::vector<bool> drop(cases_.size(), false);
  for (std::size_t i = 0; i < excess; ++i) drop[order[i]] = true;
  std::vector<Case> kept;
  kept.reserve(capacity_);
  for (std::size_t i = 0; i < cases_.size(); ++i) {
    if (!drop[i]) kept.push_back(std::move(cases_[i]));
  }
  cases_ = std::move(kept);
  index_stale_ = true;
  ++mutation_version_;
  return excess;
}

namespace {

void append_double(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

struct LineTokens {
  const std::string& line;
  std::size_t pos = 0;
  std::size_t line_no;

  std::string_view next(const char* what) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    if (pos >= line.size()) throw ParseError(line_no, std::string("missing ") + what);
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ') ++pos;
    return std::string_view(line).substr(start, pos - start);
  }

  bool exhausted() {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    return pos >= line.size();
  }

  double real(const char* what) {
    const auto tok = next(what);
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw ParseError(line_no, std::string("bad real for ") + what + ": '" +
                                    std::string(tok) + "'");
    }
    if (!std::isfinite(v)) {
      throw ParseError(line_no, std::string("non-finite value for ") + what);
    }
    return v;
  }

  std::uint64_t integer(const char* what) {
    const auto tok = next(what);
    std::uint64_t v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw ParseError(line_no, std::string("bad integer for ") + what + ": '" +
                                    std::string(tok) + "'");
    }
    return v;
  }

  void keyword(const char* kw) {
    const auto tok = next(kw);
    if (tok != kw) {
      throw ParseError(line_no, std::string("expected '") + kw + "', got '" +
                                    std::string(tok) + "'");
    }
  }
};

}  // namespace

void CaseBase::save(std::ostream& out) const {
  std::string buf;
  buf += "PISRL-CB 1\n";
  buf += "theta ";
  append_double(buf, density_threshold_);
  buf += " capacity " + std::to_string(capacity_);
  buf += " n " + std::to_string(state_dim_);
  buf += " m " + std::to_string(action_dim_);
  buf += '\n';
  for (const Case& c : cases_) {
    for (double v : c.state) {
      append_double(buf, v);
      buf += ' ';
    }
    for (double v : c.action) {
      append_double(buf, v);
      buf += ' ';
    }
    append_double(buf, c.value);
    buf += ' ' + std::to_string(c.use_count) + ' ' + std::to_string(c.insert_seq) + '\n';
  }
  out << buf;
}

void CaseBase::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  save(out);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

CaseBase CaseBase::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "empty input");
  if (line == "PISRL-CB 1\r") line.pop_back();
  if (line != "PISRL-CB 1") throw ParseError(1, "bad header: '" + line + "'");

  if (!std::getline(in, line)) throw ParseError(2, "missing parameter line");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  LineTokens head{line, 0, 2};
  head.keyword("theta");
  const double theta = head.real("theta");
  head.keyword("capacity");
  const std::uint64_t capacity = head.integer("capacity");
  head.keyword("n");
  const std::uint64_t n = head.integer("n");
  head.keyword("m");
  const std::uint64_t m = head.integer("m");
  if (!head.exhausted()) throw ParseError(2, "trailing tokens on parameter line");
  if (n == 0 || m == 0) throw ParseError(2, "dimensions must be positive");
  if (!(theta > 0.0)) throw ParseError(2, "theta must be positive");
  if (capacity == 0) throw ParseError(2, "capacity must be positive");

  CaseBase base(static_cast<std::size_t>(n), static_cast<std::size_t>(m), theta, capacity);
  std::size_t line_no = 2;
  std::uint64_t max_seq = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    LineTokens row{line, 0, line_no};
    Case c;
    c.state.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) c.state.push_back(row.real("state component"));
    c.action.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) c.action.push_back(row.real("action component"));
    c.value = row.real("value");
    c.use_count = row.integer("use_count");
    c.insert_seq = row.integer("insert_seq");
    if (!row.exhausted()) throw ParseError(line_no, "trailing tokens on case line");
    max_seq = std::max(max_seq, c.insert_seq);
    base.cases_.push_back(std::move(c));
  }
  if (in.bad()) throw ParseError(line_no, "read failure");
  base.next_seq_ = base.cases_.empty() ? 0 : max_seq + 1;
  base.index_stale_ = true;
  ++base.mutation_version_;
  return base;
}

CaseBase CaseBase::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return load(in);
}

}  // namespace pisrl
