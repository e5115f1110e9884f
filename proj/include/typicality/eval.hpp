#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "typicality/counts.hpp"
#include "typicality/dataset.hpp"
#include "typicality/score_table.hpp"
#include "typicality/spearman.hpp"
#include "typicality/wordnet.hpp"

namespace typicality::eval {

struct CategoryResult {
  std::string category;
  std::optional<double> rho;  // undefined below three common pairs or with constant ranks
  std::size_t n = 0;          // pairs scored by the method and present in the dataset
};

struct EvalReport {
  std::string method;
  std::vector<CategoryResult> per_category;  // dataset category order
  std::optional<double> mean_rho;            // unweighted, over defined rhos only

  const CategoryResult* find(const std::string& category) const;
};

EvalReport evaluate(const ScoreTable& table, const dataset::TypicalityDataset& ds);

// Corpus count of the exemplar word; words without a count are unscored.
ScoreTable frequency_scores(const dataset::TypicalityDataset& ds, const WordCounts& counts,
                            const std::string& method = "Frequency");

struct FlaggedCategory {
  std::string method;
  std::string category;

  bool operator==(const FlaggedCategory&) const = default;
};

// Per table and category, z = (s - mean) / population std over the pairs
// that table scored in that category; the ensemble score is the sum of z
// across tables. A pair missing or unscored in any table is unscored. A
// table whose category scores have zero variance contributes 0 there and is
// reported through `flagged`. Throws std::invalid_argument for fewer than
// two tables. The method name joins the inputs with " + ".
ScoreTable zscore_ensemble(std::span<const ScoreTable> tables,
                           std::vector<FlaggedCategory>* flagged = nullptr);

struct ComplementarityRow {
  std::string category;
  std::optional<double> inter_rho;  // Spearman between the two methods' scores
  std::size_t n_shared = 0;
  std::optional<double> rho_a;
  std::optional<double> rho_b;
  std::optional<double> rho_ensemble;
  std::optional<double> avg_gain;  // ((ens - rho_a) + (ens - rho_b)) / 2
};

struct ComplementarityReport {
  std::string method_a;
  std::string method_b;
  std::vector<ComplementarityRow> rows;
  // Spearman between inter_rho and avg_gain over categories where both exist.
  std::optional<double> summary_rho;
};

ComplementarityReport complementarity(const ScoreTable& a, const ScoreTable& b,
                                      const dataset::TypicalityDataset& ds);

struct ReportPair {
  EvalReport with_wsd;
  EvalReport without_wsd;
};

struct PolysemyRow {
  std::string category;
  std::vector<std::optional<double>> gains;  // one per report pair
  std::size_t category_synsets = 0;          // all parts of speech
  double mean_exemplar_synsets = 0.0;
};

struct PolysemyReport {
  std::vector<std::string> labels;  // "<with> - <without>" per report pair
  std::vector<PolysemyRow> rows;
};

// Synset counts use morphological lookup over all parts of speech.
PolysemyReport polysemy_gain_report(const dataset::TypicalityDataset& ds,
                                    std::span<const ReportPair> report_pairs,
                                    const wordnet::SynsetGraph& g);

// ---------------------------------------------------------------------------
// Output

// `method,category,rho,n` per category, then one `(mean)` row per report
// whose n counts the categories with a defined rho.
void write_eval_csv(std::span<const EvalReport> reports, std::ostream& out);

// Methods as rows, datasets as columns, mean rho to three decimals.
struct DatasetReports {
  std::string dataset;
  std::vector<EvalReport> reports;
};
void write_summary_markdown(std::span<const DatasetReports> columns, std::ostream& out);

// Per-category rho table, methods as columns.
void write_category_markdown(std::span<const EvalReport> reports, std::ostream& out);

void write_complementarity_csv(const ComplementarityReport& report, std::ostream& out);
void write_complementarity_markdown(const ComplementarityReport& report, std::ostream& out);

void write_polysemy_csv(const PolysemyReport& report, std::ostream& out);

void write_agreement_csv(std::span<const dataset::AgreementRow> rows, std::ostream& out);

}  // namespace typicality::eval
