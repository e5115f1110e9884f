#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "typicality/dataset.hpp"
#include "typicality/errors.hpp"
#include "typicality/wordnet.hpp"

namespace typicality::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;

// Bad flags, malformed or incomplete run configuration, missing inputs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Entry point shared by the executable and the tests. Errors are reported
// on `err` as one JSON object per line.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------------------
// Declarative runs

struct RunConfig {
  std::filesystem::path base_dir;  // relative paths resolve against this
  std::vector<std::string> stages;  // canonical order
  std::filesystem::path output_dir;
  std::size_t workers = 1;

  // [dataset]
  std::filesystem::path dataset;
  dataset::LoadOptions load;
  std::size_t min_exemplars = 1;
  std::vector<std::filesystem::path> vocab;

  // [wordnet]
  std::optional<std::filesystem::path> wordnet_dir;
  std::optional<std::filesystem::path> ic_table;
  std::optional<std::filesystem::path> ic_counts;
  std::vector<std::string> wordnet_methods;  // WNIC, WNSP, WNIC-noWSD, WNSP-noWSD
  wordnet::LemmaLookup lookup = wordnet::LemmaLookup::exact;
  bool virtual_root = true;

  // [embed]
  std::optional<std::filesystem::path> store;
  std::vector<std::string> embed_methods;  // avg, mpro
  std::size_t layer = 10;
  int max_k = 15;
  std::optional<std::uint64_t> seed;

  // [lm]
  std::optional<std::filesystem::path> mlm, taxo, misra, sentemb;
  std::size_t sentemb_layer = 12;

  // [baseline]
  std::vector<std::string> baseline_methods;  // frequency, static, ppmi-svd
  std::optional<std::filesystem::path> counts, vectors, cooccurrence;
  int svd_dim = 300;
  std::optional<std::uint64_t> svd_seed;

  // [ensemble] each entry lists the member method names
  std::vector<std::vector<std::string>> ensembles;

  // [analyze]
  std::optional<std::pair<std::string, std::string>> complementarity;
  std::vector<std::pair<std::string, std::string>> polysemy;  // (with, without)
  std::optional<std::filesystem::path> agreement_with;
  dataset::LoadOptions agreement_load;  // defaults to the main dataset's options

  // `section.key=value` lines of the effective configuration, sorted; the
  // run summary hashes this text.
  std::string canonical;
};

// Reads an INI file, applies `section.key=value` overrides, and validates:
// known keys only, explicit seeds for seeded methods, referenced inputs
// present. Throws ConfigError.
RunConfig load_run_config(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides = {});

// Executes the configured stages and writes all outputs plus
// run_summary.json. Throws on the first failing stage, naming it.
void execute(const RunConfig& config, std::ostream& log);

// Wraps a failure with the stage it happened in.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::exception& cause);
  const std::string& stage() const { return stage_; }
  const std::string& cause_type() const { return cause_type_; }
  bool config_error() const { return config_error_; }

 private:
  std::string stage_;
  std::string cause_type_;
  bool config_error_ = false;
};

// Lowercase, with runs of other characters collapsed to '-': file stem for a
// method's score table.
std::string method_slug(std::string_view method);

}  // namespace typicality::cli
