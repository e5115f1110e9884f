#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace typicality::dataset {

enum class SourceProtocol { pair_rating, sentence_rating };

// Whether a larger raw score means "more typical". Loading normalizes every
// dataset to higher-is-more-typical, so downstream code never needs to know.
enum class ScoreDirection { higher_is_typical, lower_is_typical };

enum class NormsFormat { csv, tsv };

struct Exemplar {
  std::string word;
  double human_score = 0.0;
};

struct Category {
  std::string name;
  std::vector<Exemplar> exemplars;

  const Exemplar* find(std::string_view word) const;
};

// Human typicality norms. Construction validates: unique category names,
// at least one exemplar per category, unique exemplars within a category,
// finite scores. Immutable afterwards.
class TypicalityDataset {
 public:
  TypicalityDataset(std::string name, std::vector<Category> categories,
                    SourceProtocol protocol = SourceProtocol::pair_rating);

  const std::string& name() const { return name_; }
  SourceProtocol protocol() const { return protocol_; }
  const std::vector<Category>& categories() const { return categories_; }
  const Category* find(std::string_view category) const;
  std::size_t total_exemplars() const;

 private:
  std::string name_;
  std::vector<Category> categories_;
  SourceProtocol protocol_;
};

// Membership test for one method's fixed vocabulary. The predicate must be
// pure.
struct VocabFilter {
  std::string method_name;
  std::function<bool(std::string_view)> in_vocabulary;

  static VocabFilter from_words(std::string method_name, std::unordered_set<std::string> words);
  // One entry per line; the first whitespace-separated token is the word.
  // A `n dim` header line, as in text vector files, is skipped.
  static VocabFilter from_file(const std::filesystem::path& path);
};

struct LoadOptions {
  NormsFormat format = NormsFormat::csv;
  ScoreDirection direction = ScoreDirection::higher_is_typical;
  SourceProtocol protocol = SourceProtocol::pair_rating;
  // Defaults to the file stem.
  std::optional<std::string> name;
};

// Expects a header naming the columns category, exemplar and score (any
// order, extra columns ignored). Words are trimmed, lowercased and NFC
// normalized. Rows keep file order within each category; categories are
// ordered by first appearance.
TypicalityDataset load_norms(const std::filesystem::path& path, const LoadOptions& options = {});
TypicalityDataset parse_norms(std::istream& in, const std::string& source,
                              const LoadOptions& options = {});

// Writes `category,exemplar,score` (tab-separated for tsv).
void write_norms(const TypicalityDataset& ds, std::ostream& out,
                 NormsFormat format = NormsFormat::csv);
void write_norms(const TypicalityDataset& ds, const std::filesystem::path& path,
                 NormsFormat format = NormsFormat::csv);

// Drops multi-word exemplars, exemplars with punctuation, and exemplars out
// of vocabulary for any filter; then drops categories left with fewer than
// min_exemplars. Throws EmptyDatasetError when nothing survives.
TypicalityDataset preprocess(const TypicalityDataset& ds, std::span<const VocabFilter> filters,
                             std::size_t min_exemplars);

struct AgreementRow {
  std::string category;
  std::optional<double> rho;  // undefined below three shared exemplars
  std::size_t n = 0;
};

// Spearman between the two datasets' scores on the shared exemplars of
// each shared category. Rows are sorted by category name.
std::vector<AgreementRow> inter_dataset_agreement(const TypicalityDataset& a,
                                                  const TypicalityDataset& b);

}  // namespace typicality::dataset
