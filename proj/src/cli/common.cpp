#include "common.hpp"

#include <fstream>

#include "typicality/text.hpp"

namespace typicality::cli::detail {

std::string error_type(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const EmptyDatasetError*>(&e)) return "EmptyDatasetError";
  if (dynamic_cast<const ValidationError*>(&e)) return "ValidationError";
  if (dynamic_cast<const IoError*>(&e)) return "IoError";
  if (dynamic_cast<const FormatError*>(&e)) return "FormatError";
  if (dynamic_cast<const IntegrityError*>(&e)) return "IntegrityError";
  if (dynamic_cast<const LookupError*>(&e)) return "LookupError";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "InvalidArgument";
  return "InternalError";
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  for (const std::string& item : text::split(value, ',')) {
    const auto t = text::trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

dataset::NormsFormat parse_format(std::string_view value) {
  if (value == "csv") return dataset::NormsFormat::csv;
  if (value == "tsv") return dataset::NormsFormat::tsv;
  throw ConfigError("format must be csv or tsv, got '" + std::string(value) + "'");
}

dataset::ScoreDirection parse_direction(std::string_view value) {
  if (value == "higher") return dataset::ScoreDirection::higher_is_typical;
  if (value == "lower") return dataset::ScoreDirection::lower_is_typical;
  throw ConfigError("direction must be higher or lower, got '" + std::string(value) + "'");
}

wordnet::LemmaLookup parse_lookup(std::string_view value) {
  if (value == "exact") return wordnet::LemmaLookup::exact;
  if (value == "morphological") return wordnet::LemmaLookup::morphological;
  throw ConfigError("lookup must be exact or morphological, got '" + std::string(value) + "'");
}

bool parse_wordnet_method(std::string_view name, wordnet::Measure& measure,
                          wordnet::WsdMode& wsd) {
  for (auto m : {wordnet::Measure::lin, wordnet::Measure::path}) {
    for (auto w : {wordnet::WsdMode::maxsim, wordnet::WsdMode::average}) {
      if (wordnet::method_name(m, w) == name) {
        measure = m;
        wsd = w;
        return true;
      }
    }
  }
  return false;
}

std::string embed_method_name(std::string_view selector) {
  if (selector == "avg") return "BERT-Avg";
  if (selector == "mpro") return "BERT-MPro";
  throw ConfigError("embedding method must be avg or mpro, got '" + std::string(selector) + "'");
}

std::string baseline_method_name(std::string_view selector) {
  if (selector == "frequency") return "Frequency";
  if (selector == "static") return "W2V";
  if (selector == "ppmi-svd") return "PPMI-SVD";
  throw ConfigError("baseline must be frequency, static or ppmi-svd, got '" +
                    std::string(selector) + "'");
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace typicality::cli::detail
