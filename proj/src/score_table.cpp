#include "typicality/score_table.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "typicality/errors.hpp"
#include "typicality/text.hpp"

namespace typicality {

void ScoreTable::set(const std::string& category, const std::string& exemplar, double score) {
  if (!std::isfinite(score)) {
    throw ValidationError("non-finite score for (" + category + ", " + exemplar + ") in " +
                          method_);
  }
  PairKey key{category, exemplar};
  unscored_.erase(key);
  scores_[std::move(key)] = score;
}

void ScoreTable::mark_unscored(const std::string& category, const std::string& exemplar) {
  PairKey key{category, exemplar};
  scores_.erase(key);
  unscored_.insert(std::move(key));
}

std::optional<double> ScoreTable::score(const std::string& category,
                                        const std::string& exemplar) const {
  auto it = scores_.find(PairKey{category, exemplar});
  if (it == scores_.end()) return std::nullopt;
  return it->second;
}

bool ScoreTable::is_unscored(const std::string& category, const std::string& exemplar) const {
  return unscored_.contains(PairKey{category, exemplar});
}

std::vector<std::pair<std::string, double>> ScoreTable::category_scores(
    const std::string& category) const {
  std::vector<std::pair<std::string, double>> out;
  for (auto it = scores_.lower_bound(PairKey{category, ""});
       it != scores_.end() && it->first.category == category; ++it) {
    out.emplace_back(it->first.exemplar, it->second);
  }
  return out;
}

std::vector<std::string> ScoreTable::categories() const {
  std::set<std::string> names;
  for (const auto& [key, _] : scores_) names.insert(key.category);
  for (const auto& key : unscored_) names.insert(key.category);
  return {names.begin(), names.end()};
}

void write_score_csv(const std::vector<ScoreTable>& tables, std::ostream& out) {
  out << "method,category,exemplar,score\n";
  for (const ScoreTable& table : tables) {
    const std::string method = text::quote_field(table.method(), ',');
    // Merge scored and unscored entries so each table is emitted in key order.
    auto s = table.scores().begin();
    auto u = table.unscored().begin();
    while (s != table.scores().end() || u != table.unscored().end()) {
      const bool take_scored =
          u == table.unscored().end() || (s != table.scores().end() && s->first < *u);
      const PairKey& key = take_scored ? s->first : *u;
      out << method << ',' << text::quote_field(key.category, ',') << ','
          << text::quote_field(key.exemplar, ',') << ',';
      if (take_scored) {
        out << text::format_double(s->second);
        ++s;
      } else {
        ++u;
      }
      out << '\n';
    }
  }
}

void write_score_csv(const ScoreTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_score_csv(std::vector<ScoreTable>{table}, out);
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<ScoreTable> read_score_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty score file", source, 1);
  ++line_no;
  if (text::trim(line) != "method,category,exemplar,score") {
    throw ParseError("expected header method,category,exemplar,score", source, line_no);
  }
  std::vector<ScoreTable> tables;
  std::map<std::string, std::size_t> index;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    std::vector<std::string> fields;
    try {
      fields = text::split_delimited(line, ',');
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), source, line_no);
    }
    if (fields.size() != 4) throw ParseError("expected 4 fields", source, line_no);
    auto [it, inserted] = index.try_emplace(fields[0], tables.size());
    if (inserted) tables.emplace_back(fields[0]);
    ScoreTable& table = tables[it->second];
    if (table.score(fields[1], fields[2]) || table.is_unscored(fields[1], fields[2])) {
      throw ParseError("duplicate pair (" + fields[1] + ", " + fields[2] + ")", source, line_no);
    }
    if (text::trim(fields[3]).empty()) {
      table.mark_unscored(fields[1], fields[2]);
      continue;
    }
    double value = 0.0;
    if (!text::parse_double(fields[3], value) || !std::isfinite(value)) {
      throw ParseError("bad score '" + fields[3] + "'", source, line_no);
    }
    table.set(fields[1], fields[2], value);
  }
  return tables;
}

std::vector<ScoreTable> read_score_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_score_csv(in, path.string());
}

}  // namespace typicality
