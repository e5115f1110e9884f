#include "typicality/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <unordered_map>

#include "typicality/errors.hpp"
#include "typicality/spearman.hpp"
#include "typicality/text.hpp"

namespace typicality::dataset {

const Exemplar* Category::find(std::string_view word) const {
  for (const Exemplar& e : exemplars) {
    if (e.word == word) return &e;
  }
  return nullptr;
}

TypicalityDataset::TypicalityDataset(std::string name, std::vector<Category> categories,
                                     SourceProtocol protocol)
    : name_(std::move(name)), categories_(std::move(categories)), protocol_(protocol) {
  std::set<std::string_view> names;
  for (const Category& c : categories_) {
    if (!names.insert(c.name).second) {
      throw ValidationError(name_ + ": duplicate category '" + c.name + "'");
    }
    if (c.exemplars.empty()) {
      throw ValidationError(name_ + ": category '" + c.name + "' has no exemplars");
    }
    std::set<std::string_view> words;
    for (const Exemplar& e : c.exemplars) {
      if (!words.insert(e.word).second) {
        throw ValidationError(name_ + ": duplicate pair (" + c.name + ", " + e.word + ")");
      }
      if (!std::isfinite(e.human_score)) {
        throw ValidationError(name_ + ": non-finite score for (" + c.name + ", " + e.word + ")");
      }
    }
  }
}

const Category* TypicalityDataset::find(std::string_view category) const {
  for (const Category& c : categories_) {
    if (c.name == category) return &c;
  }
  return nullptr;
}

std::size_t TypicalityDataset::total_exemplars() const {
  std::size_t n = 0;
  for (const Category& c : categories_) n += c.exemplars.size();
  return n;
}

VocabFilter VocabFilter::from_words(std::string method_name,
                                    std::unordered_set<std::string> words) {
  auto shared = std::make_shared<const std::unordered_set<std::string>>(std::move(words));
  return VocabFilter{std::move(method_name), [shared](std::string_view w) {
                       return shared->contains(std::string(w));
                     }};
}

VocabFilter VocabFilter::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocabulary file " + path.string());
  std::unordered_set<std::string> words;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const auto tokens = text::split_ws(line);
    if (tokens.empty()) continue;
    if (first && tokens.size() == 2) {
      std::size_t a = 0, b = 0;
      if (text::parse_size(tokens[0], a) && text::parse_size(tokens[1], b)) {
        first = false;
        continue;
      }
    }
    first = false;
    words.insert(text::normalize_word(tokens[0]));
  }
  return from_words(path.stem().string(), std::move(words));
}

TypicalityDataset parse_norms(std::istream& in, const std::string& source,
                              const LoadOptions& options) {
  const char delim = options.format == NormsFormat::csv ? ',' : '\t';
  std::string line;
  std::size_t line_no = 0;

  auto fields_of = [&](const std::string& l) {
    try {
      return text::split_delimited(l, delim);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), source, line_no);
    }
  };

  // Header: first non-blank line.
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!text::trim(line).empty()) {
      header = fields_of(line);
      break;
    }
  }
  if (header.empty()) throw ParseError("empty norms file", source, line_no);

  std::optional<std::size_t> col_category, col_exemplar, col_score;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string h = text::normalize_word(header[i]);
    if (h == "category") col_category = i;
    else if (h == "exemplar") col_exemplar = i;
    else if (h == "score") col_score = i;
  }
  if (!col_category || !col_exemplar || !col_score) {
    throw ParseError("header must name columns category, exemplar, score", source, line_no);
  }
  const std::size_t needed = std::max({*col_category, *col_exemplar, *col_score}) + 1;

  std::vector<Category> categories;
  std::unordered_map<std::string, std::size_t> category_index;
  std::set<std::pair<std::string, std::string>> seen;
  const double sign = options.direction == ScoreDirection::higher_is_typical ? 1.0 : -1.0;

  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    const auto fields = fields_of(line);
    if (fields.size() < needed) {
      throw ParseError("expected at least " + std::to_string(needed) + " fields, got " +
                           std::to_string(fields.size()),
                       source, line_no);
    }
    std::string category = text::normalize_word(fields[*col_category]);
    std::string exemplar = text::normalize_word(fields[*col_exemplar]);
    if (category.empty() || exemplar.empty()) {
      throw ParseError("empty category or exemplar", source, line_no);
    }
    double score = 0.0;
    if (!text::parse_double(fields[*col_score], score) || !std::isfinite(score)) {
      throw ParseError("bad score '" + fields[*col_score] + "'", source, line_no);
    }
    if (!seen.emplace(category, exemplar).second) {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": duplicate pair (" +
                            category + ", " + exemplar + ")");
    }
    auto [it, inserted] = category_index.try_emplace(category, categories.size());
    if (inserted) categories.push_back(Category{category, {}});
    // Adding 0.0 turns -0.0 into +0.0 so writes stay canonical.
    categories[it->second].exemplars.push_back(Exemplar{std::move(exemplar), sign * score + 0.0});
    ++rows;
  }
  if (rows == 0) throw ParseError("norms file has no data rows", source, line_no);

  std::string name = options.name.value_or(std::filesystem::path(source).stem().string());
  return TypicalityDataset(std::move(name), std::move(categories), options.protocol);
}

TypicalityDataset load_norms(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open norms file " + path.string());
  LoadOptions resolved = options;
  if (!resolved.name) resolved.name = path.stem().string();
  return parse_norms(in, path.string(), resolved);
}

void write_norms(const TypicalityDataset& ds, std::ostream& out, NormsFormat format) {
  const char delim = format == NormsFormat::csv ? ',' : '\t';
  out << "category" << delim << "exemplar" << delim << "score\n";
  for (const Category& c : ds.categories()) {
    for (const Exemplar& e : c.exemplars) {
      out << text::quote_field(c.name, delim) << delim << text::quote_field(e.word, delim)
          << delim << text::format_double(e.human_score) << '\n';
    }
  }
}

void write_norms(const TypicalityDataset& ds, const std::filesystem::path& path,
                 NormsFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_norms(ds, out, format);
  if (!out) throw IoError("write failed: " + path.string());
}

TypicalityDataset preprocess(const TypicalityDataset& ds, std::span<const VocabFilter> filters,
                             std::size_t min_exemplars) {
  if (min_exemplars < 1) throw std::invalid_argument("preprocess: min_exemplars must be >= 1");
  std::vector<Category> kept;
  for (const Category& c : ds.categories()) {
    Category out{c.name, {}};
    for (const Exemplar& e : c.exemplars) {
      if (text::is_multiword(e.word) || text::has_punctuation(e.word)) continue;
      const bool in_all = std::all_of(filters.begin(), filters.end(), [&](const VocabFilter& f) {
        return f.in_vocabulary(e.word);
      });
      if (in_all) out.exemplars.push_back(e);
    }
    if (out.exemplars.size() >= min_exemplars) kept.push_back(std::move(out));
  }
  if (kept.empty()) {
    throw EmptyDatasetError(ds.name() + ": preprocessing removed every category");
  }
  return TypicalityDataset(ds.name(), std::move(kept), ds.protocol());
}

std::vector<AgreementRow> inter_dataset_agreement(const TypicalityDataset& a,
                                                  const TypicalityDataset& b) {
  std::vector<AgreementRow> rows;
  for (const Category& ca : a.categories()) {
    const Category* cb = b.find(ca.name);
    if (cb == nullptr) continue;
    // Sorted by word so the result does not depend on argument order.
    std::map<std::string_view, std::pair<double, double>> shared;
    for (const Exemplar& e : ca.exemplars) {
      if (const Exemplar* other = cb->find(e.word)) {
        shared.emplace(e.word, std::make_pair(e.human_score, other->human_score));
      }
    }
    std::vector<double> x, y;
    for (const auto& [_, scores] : shared) {
      x.push_back(scores.first);
      y.push_back(scores.second);
    }
    rows.push_back(AgreementRow{ca.name, eval::spearman(x, y), shared.size()});
  }
  std::sort(rows.begin(), rows.end(),
            [](const AgreementRow& l, const AgreementRow& r) { return l.category < r.category; });
  return rows;
}

}  // namespace typicality::dataset
