#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "typicality/dataset.hpp"
#include "typicality/embedstore.hpp"
#include "typicality/score_table.hpp"

namespace typicality::lm {

struct TaxonomicSentence {
  std::string exemplar;
  std::string category;
  std::string text;
};

// "A robin is a bird." / "An apple is a fruit.": "an" exactly when the next
// word starts with a, e, i, o or u. Throws std::invalid_argument on an
// empty word.
TaxonomicSentence taxonomic_sentence(std::string_view exemplar, std::string_view category);

// Mean over a pair's sentences of the product of its subtoken
// probabilities. Only records of `variant` (category_context or taxonomic)
// are read; records for pairs outside `ds` are ignored and pairs without
// records are unscored. The taxonomic variant requires at most one record
// per pair. Products are taken in double precision and averaged in
// ascending order, so the result does not depend on record order.
ScoreTable mlm_typicality(std::span<const embedstore::MaskedPredictionRecord> records,
                          embedstore::MaskVariant variant, const dataset::TypicalityDataset& ds);

// Mean over sentences of cos(original, substituted) at `layer`. Throws
// ValidationError for a substituted record without an original and
// LookupError for a layer out of range.
ScoreTable sentemb_typicality(const embedstore::SentenceEmbeddings& embeddings, std::size_t layer,
                              const dataset::TypicalityDataset& ds);

// P(category | taxonomic sentence): the product of the single misra record's
// probabilities for each pair.
ScoreTable misra_typicality(std::span<const embedstore::MaskedPredictionRecord> records,
                            const dataset::TypicalityDataset& ds);

}  // namespace typicality::lm
