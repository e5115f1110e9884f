#include "typicality/lmmethods.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "typicality/errors.hpp"
#include "typicality/vecmethods.hpp"

namespace typicality::lm {
namespace {

using embedstore::MaskedPredictionRecord;
using embedstore::MaskVariant;

bool starts_with_vowel(std::string_view word) {
  return std::string_view("aeiouAEIOU").find(word.front()) != std::string_view::npos;
}

double product(const MaskedPredictionRecord& r) {
  if (r.probs.empty()) {
    throw ValidationError("record " + r.sentence_id + " has an empty subtoken list");
  }
  double p = 1.0;
  for (double x : r.probs) p *= x;
  return p;
}

double ordered_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

// Products per dataset pair for records of one variant.
std::map<PairKey, std::vector<double>> collect(std::span<const MaskedPredictionRecord> records,
                                               MaskVariant variant,
                                               const dataset::TypicalityDataset& ds,
                                               bool single_record) {
  std::map<PairKey, std::vector<double>> by_pair;
  for (const auto& r : records) {
    if (r.variant != variant) continue;
    const dataset::Category* c = ds.find(r.category);
    if (c == nullptr || c->find(r.exemplar) == nullptr) continue;
    auto& products = by_pair[PairKey{r.category, r.exemplar}];
    if (single_record && !products.empty()) {
      throw ValidationError("more than one " + std::string(embedstore::to_string(variant)) +
                            " record for (" + r.category + ", " + r.exemplar + ")");
    }
    products.push_back(product(r));
  }
  return by_pair;
}

ScoreTable to_table(const std::string& method, const dataset::TypicalityDataset& ds,
                    const std::map<PairKey, std::vector<double>>& by_pair) {
  ScoreTable table(method);
  for (const auto& c : ds.categories()) {
    for (const auto& e : c.exemplars) {
      auto it = by_pair.find(PairKey{c.name, e.word});
      if (it == by_pair.end()) {
        table.mark_unscored(c.name, e.word);
      } else {
        table.set(c.name, e.word, ordered_mean(it->second));
      }
    }
  }
  return table;
}

}  // namespace

TaxonomicSentence taxonomic_sentence(std::string_view exemplar, std::string_view category) {
  if (exemplar.empty() || category.empty()) {
    throw std::invalid_argument("taxonomic_sentence: empty word");
  }
  std::string text = starts_with_vowel(exemplar) ? "An " : "A ";
  text += exemplar;
  text += starts_with_vowel(category) ? " is an " : " is a ";
  text += category;
  text += '.';
  return {std::string(exemplar), std::string(category), std::move(text)};
}

ScoreTable mlm_typicality(std::span<const MaskedPredictionRecord> records, MaskVariant variant,
                          const dataset::TypicalityDataset& ds) {
  if (variant == MaskVariant::misra) {
    throw std::invalid_argument("mlm_typicality reads category_context or taxonomic records");
  }
  const bool taxonomic = variant == MaskVariant::taxonomic;
  return to_table(taxonomic ? "BERT-MLM-Taxo" : "BERT-MLM", ds,
                  collect(records, variant, ds, taxonomic));
}

ScoreTable misra_typicality(std::span<const MaskedPredictionRecord> records,
                            const dataset::TypicalityDataset& ds) {
  return to_table("Misra", ds, collect(records, MaskVariant::misra, ds, true));
}

ScoreTable sentemb_typicality(const embedstore::SentenceEmbeddings& embeddings, std::size_t layer,
                              const dataset::TypicalityDataset& ds) {
  if (layer >= embeddings.n_layers) {
    throw LookupError("layer " + std::to_string(layer) + " out of range [0, " +
                      std::to_string(embeddings.n_layers) + ")");
  }
  const auto row = [&](const embedstore::SentenceEmbeddingRecord& r) -> Eigen::VectorXd {
    return r.vectors.row(static_cast<Eigen::Index>(layer)).transpose().cast<double>();
  };

  std::map<std::pair<std::string, std::string>, Eigen::VectorXd> originals;
  for (const auto& r : embeddings.records) {
    if (!r.substituted_exemplar) originals.emplace(std::pair{r.category, r.sentence_id}, row(r));
  }

  std::map<PairKey, std::vector<double>> by_pair;
  for (const auto& r : embeddings.records) {
    if (!r.substituted_exemplar) continue;
    auto orig = originals.find({r.category, r.sentence_id});
    if (orig == originals.end()) {
      throw ValidationError("substituted record for sentence '" + r.sentence_id + "' in '" +
                            r.category + "' has no original");
    }
    const dataset::Category* c = ds.find(r.category);
    if (c == nullptr || c->find(*r.substituted_exemplar) == nullptr) continue;
    double sim = 0.0;
    try {
      sim = vec::cosine(orig->second, row(r));
    } catch (const std::invalid_argument&) {
      throw ValidationError("zero sentence vector for '" + r.sentence_id + "' in '" + r.category +
                            "'");
    }
    by_pair[PairKey{r.category, *r.substituted_exemplar}].push_back(sim);
  }
  return to_table("BERT-SentEmb", ds, by_pair);
}

}  // namespace typicality::lm
