#pragma once

// Helpers shared by the subcommands and the declarative runner.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "typicality/cli.hpp"
#include "typicality/dataset.hpp"
#include "typicality/score_table.hpp"
#include "typicality/wordnet.hpp"

namespace typicality::cli::detail {

// Class name of a library exception, for structured error output.
std::string error_type(const std::exception& e);

std::vector<std::string> split_list(std::string_view value);

dataset::NormsFormat parse_format(std::string_view value);
dataset::ScoreDirection parse_direction(std::string_view value);
wordnet::LemmaLookup parse_lookup(std::string_view value);

// WNIC / WNSP / WNIC-noWSD / WNSP-noWSD.
bool parse_wordnet_method(std::string_view name, wordnet::Measure& measure, wordnet::WsdMode& wsd);

// Canonical method names for the short selectors used in configs and flags.
std::string embed_method_name(std::string_view selector);     // avg, mpro
std::string baseline_method_name(std::string_view selector);  // frequency, static, ppmi-svd

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace typicality::cli::detail
