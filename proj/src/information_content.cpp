#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "typicality/errors.hpp"
#include "typicality/text.hpp"
#include "typicality/wordnet.hpp"

namespace typicality::wordnet {

ICTable ICTable::from_counts(const SynsetGraph& g, const WordCounts& word_counts,
                             std::string* warning) {
  const std::size_t n = g.size();
  std::vector<double> own(n, 0.0);
  for (const auto& [word, count] : word_counts) {
    if (!(count >= 0.0) || !std::isfinite(count)) {
      throw ValidationError("word count for '" + word + "' must be finite and non-negative");
    }
    if (count == 0.0) continue;
    const auto senses = g.synsets_of(word, PartOfSpeech::noun);
    if (senses.empty()) continue;
    const double share = count / static_cast<double>(senses.size());
    for (SynsetIndex s : senses) own[s] += share;
  }

  ICTable table;
  table.counts_.assign(n, 0.0);
  for (SynsetIndex s = 0; s < n; ++s) {
    if (own[s] == 0.0) continue;
    table.total_ += own[s];
    for (SynsetIndex a : g.ancestors(s)) table.counts_[a] += own[s];
  }
  if (table.total_ == 0.0 && warning != nullptr) {
    *warning = "no counted word maps to a noun synset; IC comes from smoothing only";
  }

  table.ic_.resize(n);
  const double denom = table.total_ + 1.0;
  for (SynsetIndex s = 0; s < n; ++s) {
    // counts never exceed total, so the ratio is at most 1 and IC >= 0
    table.ic_[s] = -std::log((table.counts_[s] + 1.0) / denom) + 0.0;
  }
  return table;
}

ICTable ICTable::from_values(const SynsetGraph& g,
                             const std::vector<std::pair<std::string, double>>& ic_by_id,
                             double fallback) {
  ICTable table;
  table.counts_.assign(g.size(), 0.0);
  table.ic_.assign(g.size(), fallback);
  for (const auto& [id, value] : ic_by_id) {
    if (!std::isfinite(value) || value < 0.0) {
      throw ValidationError("IC for " + id + " must be finite and non-negative");
    }
    table.ic_[g.index_of(id)] = value;
  }
  return table;
}

void ICTable::write_tsv(const SynsetGraph& g, std::ostream& out) const {
  for (SynsetIndex s = 0; s < g.size(); ++s) {
    if (g.synset(s).pos != PartOfSpeech::noun) continue;
    out << g.synset(s).id << '\t' << text::format_double(ic_[s]) << '\n';
  }
}

ICTable ICTable::read_tsv(const SynsetGraph& g, std::istream& in, const std::string& source) {
  std::vector<std::pair<std::string, double>> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(text::trim(line), '\t');
    double value = 0.0;
    if (fields.size() != 2 || !text::parse_double(fields[1], value)) {
      throw ParseError("expected synset_id<TAB>ic", source, line_no);
    }
    if (!g.find(fields[0])) throw ParseError("unknown synset " + fields[0], source, line_no);
    values.emplace_back(fields[0], value);
  }
  return from_values(g, values);
}

}  // namespace typicality::wordnet
