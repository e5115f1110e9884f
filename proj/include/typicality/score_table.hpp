#pragma once

#include <compare>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace typicality {

struct PairKey {
  std::string category;
  std::string exemplar;

  auto operator<=>(const PairKey&) const = default;
};

// Predicted typicality per (category, exemplar). A pair is either scored
// with a finite value, marked unscored, or absent; never both scored and
// unscored.
class ScoreTable {
 public:
  explicit ScoreTable(std::string method) : method_(std::move(method)) {}

  const std::string& method() const { return method_; }
  void rename(std::string method) { method_ = std::move(method); }

  // Throws ValidationError on a non-finite value. Clears any unscored mark.
  void set(const std::string& category, const std::string& exemplar, double score);
  void mark_unscored(const std::string& category, const std::string& exemplar);

  std::optional<double> score(const std::string& category,
                              const std::string& exemplar) const;
  bool is_unscored(const std::string& category, const std::string& exemplar) const;

  const std::map<PairKey, double>& scores() const { return scores_; }
  const std::set<PairKey>& unscored() const { return unscored_; }

  // Scored entries of one category, in exemplar order.
  std::vector<std::pair<std::string, double>> category_scores(const std::string& category) const;
  std::vector<std::string> categories() const;

  bool operator==(const ScoreTable&) const = default;

 private:
  std::string method_;
  std::map<PairKey, double> scores_;
  std::set<PairKey> unscored_;
};

// CSV `method,category,exemplar,score`; unscored pairs carry an empty score.
void write_score_csv(const std::vector<ScoreTable>& tables, std::ostream& out);
void write_score_csv(const ScoreTable& table, const std::filesystem::path& path);

// Reads one or more tables (grouped by method, in order of first appearance).
std::vector<ScoreTable> read_score_csv(std::istream& in, const std::string& source);
std::vector<ScoreTable> read_score_csv(const std::filesystem::path& path);

}  // namespace typicality
