#include <cctype>
#include <fstream>
#include <sstream>

#include "typicality/errors.hpp"
#include "typicality/text.hpp"
#include "typicality/wordnet.hpp"

namespace typicality::wordnet {
namespace {

const char* file_suffix(PartOfSpeech pos) {
  switch (pos) {
    case PartOfSpeech::noun: return "noun";
    case PartOfSpeech::verb: return "verb";
    case PartOfSpeech::adj: return "adj";
    case PartOfSpeech::adv: return "adv";
  }
  return "";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

bool is_offset(std::string_view s) {
  return s.size() == 8 && s.find_first_not_of("0123456789") == std::string_view::npos;
}

std::string make_id(std::string_view offset, PartOfSpeech pos) {
  return std::string(offset) + "-" + pos_letter(pos);
}

// Adjective lemmas may carry a syntactic marker such as "(a)" or "(ip)".
std::string strip_marker(std::string lemma) {
  if (!lemma.empty() && lemma.back() == ')') {
    if (auto open = lemma.rfind('('); open != std::string::npos) lemma.erase(open);
  }
  return lemma;
}

std::string lowercase_ascii(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct PendingPointer {
  std::string source;
  std::size_t byte_offset;
  SynsetIndex from;
  std::string target_id;
  bool hypernym;
};

struct Line {
  std::string_view text;
  std::size_t byte_offset;
  // Offset the line would have with CRLF line ends turned into LF. Copies
  // converted to CRLF keep the offsets of the original LF release.
  std::size_t lf_offset;
  std::size_t number;
};

template <typename Fn>
void for_each_line(std::string_view content, Fn fn) {
  std::size_t pos = 0, number = 0, stripped = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view text = content.substr(pos, end - pos);
    const bool crlf = !text.empty() && text.back() == '\r';
    if (crlf) text.remove_suffix(1);
    fn(Line{text, pos, pos - stripped, ++number});
    stripped += crlf;
    pos = end + 1;
  }
}

void parse_data_file(const std::filesystem::path& path, PartOfSpeech file_pos,
                     SynsetGraph::Builder& builder, std::vector<PendingPointer>& pointers) {
  const std::string content = read_file(path);
  const std::string source = path.string();
  for_each_line(content, [&](const Line& line) {
    if (line.text.empty() || line.text.starts_with("  ")) return;  // licence header
    auto fail = [&](const std::string& what) -> void {
      throw ParseError(what, source, std::nullopt, line.byte_offset);
    };
    const std::string_view record = line.text.substr(0, line.text.find(" | "));
    const std::vector<std::string> tok = text::split_ws(record);
    if (tok.size() < 6) fail("truncated synset record");
    if (!is_offset(tok[0])) fail("malformed synset offset '" + tok[0] + "'");
    const std::size_t offset = std::stoul(tok[0]);
    if (offset != line.byte_offset && offset != line.lf_offset) {
      fail("synset offset " + tok[0] + " does not match its byte position");
    }
    const auto ss_type = tok[2].size() == 1 ? pos_from_letter(tok[2][0]) : std::nullopt;
    if (!ss_type || *ss_type != file_pos) fail("unexpected synset type '" + tok[2] + "'");

    std::size_t w_cnt = 0;
    try {
      std::size_t used = 0;
      w_cnt = std::stoul(tok[3], &used, 16);
      if (used != tok[3].size()) throw std::invalid_argument("hex");
    } catch (const std::exception&) {
      fail("malformed word count '" + tok[3] + "'");
    }
    if (w_cnt == 0) fail("synset without words");
    std::size_t k = 4;
    if (tok.size() < k + 2 * w_cnt + 1) fail("truncated word list");
    std::vector<std::string> lemmas;
    for (std::size_t w = 0; w < w_cnt; ++w, k += 2) {
      lemmas.push_back(lowercase_ascii(strip_marker(tok[k])));
    }
    std::size_t p_cnt = 0;
    if (!text::parse_size(tok[k], p_cnt)) fail("malformed pointer count '" + tok[k] + "'");
    ++k;
    if (tok.size() < k + 4 * p_cnt) fail("truncated pointer list");

    SynsetIndex index = 0;
    try {
      index = builder.add_synset(make_id(tok[0], file_pos), file_pos, std::move(lemmas));
    } catch (const ValidationError& e) {
      fail(e.what());
    }
    for (std::size_t p = 0; p < p_cnt; ++p, k += 4) {
      const std::string& symbol = tok[k];
      const std::string& target = tok[k + 1];
      const std::string& target_pos = tok[k + 2];
      const std::string& source_target = tok[k + 3];
      std::optional<PartOfSpeech> tpos;
      if (target_pos.size() == 1) tpos = pos_from_letter(target_pos[0]);
      if (!is_offset(target) || !tpos) fail("malformed pointer '" + symbol + " " + target + " " + target_pos + "'");
      if (source_target.size() != 4 ||
          source_target.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos) {
        fail("malformed pointer source/target field '" + source_target + "'");
      }
      const bool hypernym = file_pos == PartOfSpeech::noun && *tpos == PartOfSpeech::noun &&
                            (symbol == "@" || symbol == "@i");
      pointers.push_back(
          PendingPointer{source, line.byte_offset, index, make_id(target, *tpos), hypernym});
    }
  });
}

void parse_index_file(const std::filesystem::path& path, PartOfSpeech file_pos,
                      SynsetGraph::Builder& builder) {
  const std::string content = read_file(path);
  const std::string source = path.string();
  for_each_line(content, [&](const Line& line) {
    if (line.text.empty() || line.text.starts_with("  ")) return;
    auto fail = [&](const std::string& what) -> void {
      throw ParseError(what, source, line.number);
    };
    const std::vector<std::string> tok = text::split_ws(line.text);
    if (tok.size() < 6) fail("truncated index record");
    std::size_t synset_cnt = 0, p_cnt = 0;
    if (!text::parse_size(tok[2], synset_cnt)) fail("malformed synset count");
    if (!text::parse_size(tok[3], p_cnt)) fail("malformed pointer count");
    const std::size_t first_offset = 4 + p_cnt + 2;
    if (tok.size() != first_offset + synset_cnt) fail("index record length mismatch");
    const std::string lemma = lowercase_ascii(tok[0]);
    for (std::size_t i = first_offset; i < tok.size(); ++i) {
      if (!is_offset(tok[i])) fail("malformed synset offset '" + tok[i] + "'");
      auto synset = builder.find(make_id(tok[i], file_pos));
      if (!synset) fail("index entry '" + lemma + "' names missing synset " + tok[i]);
      builder.add_index_entry(lemma, file_pos, *synset);
    }
  });
}

void parse_exception_file(const std::filesystem::path& path, PartOfSpeech pos,
                          SynsetGraph::Builder& builder) {
  const std::string content = read_file(path);
  for_each_line(content, [&](const Line& line) {
    std::vector<std::string> tok = text::split_ws(line.text);
    if (tok.size() < 2) return;
    std::string inflected = std::move(tok.front());
    tok.erase(tok.begin());
    builder.add_exception(pos, std::move(inflected), std::move(tok));
  });
}

}  // namespace

SynsetGraph parse_wordnet(const std::filesystem::path& directory) {
  if (!std::filesystem::is_directory(directory)) {
    throw IoError("WordNet directory not found: " + directory.string());
  }
  for (PartOfSpeech pos : kAllPos) {
    for (const char* prefix : {"data.", "index."}) {
      const auto path = directory / (std::string(prefix) + file_suffix(pos));
      if (!std::filesystem::is_regular_file(path)) throw IoError("missing " + path.string());
    }
  }

  SynsetGraph::Builder builder;
  builder.use_index_files();
  std::vector<PendingPointer> pointers;
  for (PartOfSpeech pos : kAllPos) {
    parse_data_file(directory / (std::string("data.") + file_suffix(pos)), pos, builder, pointers);
  }
  for (const PendingPointer& p : pointers) {
    auto target = builder.find(p.target_id);
    if (!target) {
      throw ParseError("pointer to missing synset " + p.target_id, p.source, std::nullopt,
                       p.byte_offset);
    }
    if (p.hypernym) builder.add_hypernym(p.from, *target);
  }
  for (PartOfSpeech pos : kAllPos) {
    parse_index_file(directory / (std::string("index.") + file_suffix(pos)), pos, builder);
    const auto exc = directory / (std::string(file_suffix(pos)) + ".exc");
    if (std::filesystem::is_regular_file(exc)) parse_exception_file(exc, pos, builder);
  }
  return std::move(builder).build();
}

}  // namespace typicality::wordnet
