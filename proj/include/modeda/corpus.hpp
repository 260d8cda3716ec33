#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "modeda/errors.hpp"

namespace modeda {

namespace detail {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c;
}

// Reads all lines, tolerating CRLF. Throws ParseError if the file cannot be
// opened.
inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::string pad_id(std::size_t row) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu", row);
  return buf;
}

}  // namespace detail

class StopwordList {
 public:
  StopwordList() = default;

  StopwordList(std::initializer_list<std::string_view> words) {
    for (auto w : words) insert(w);
  }

  // One lowercase word per line; blank lines skipped, interior whitespace is
  // a format error.
  static StopwordList load(const std::string& path) {
    StopwordList list;
    auto lines = detail::read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      std::string_view w = detail::trim(lines[i]);
      if (w.empty()) continue;
      if (w.find(' ') != std::string_view::npos || w.find('\t') != std::string_view::npos)
        throw ParseError(path, i + 1, "expected one word per line");
      list.insert(w);
    }
    return list;
  }

  void insert(std::string_view word) {
    std::string w(word);
    for (char& c : w) c = detail::ascii_lower(c);
    words_.insert(std::move(w));
  }

  bool contains(const std::string& word) const { return words_.count(word) > 0; }
  std::size_t size() const { return words_.size(); }
  const std::unordered_set<std::string>& words() const { return words_; }

 private:
  std::unordered_set<std::string> words_;
};

// Normalizes raw text for augmentation and featurization:
//   - lowercase ASCII
//   - whole whitespace-delimited spans dropped when they are URLs
//     (http://, https://, www.) or @-mentions
//   - leading '#' stripped from hashtags
//   - every byte outside [a-z0-9'] dropped (non-ASCII included)
//   - runs of >3 identical characters collapsed to 3
//   - single-space separated output, no leading/trailing space
// Idempotent: clean_text(clean_text(x)) == clean_text(x).
inline std::string clean_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  const std::size_t n = raw.size();
  while (i < n) {
    if (detail::is_space(raw[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && !detail::is_space(raw[j])) ++j;
    std::string span(raw.substr(i, j - i));
    i = j;
    for (char& c : span) c = detail::ascii_lower(c);
    std::string_view sv = span;
    if (sv.starts_with("http://") || sv.starts_with("https://") || sv.starts_with("www."))
      continue;
    if (sv.front() == '@') continue;
    while (!sv.empty() && sv.front() == '#') sv.remove_prefix(1);
    std::string kept;
    kept.reserve(sv.size());
    std::size_t run = 0;
    for (char c : sv) {
      bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'';
      if (!ok) continue;
      if (!kept.empty() && kept.back() == c) {
        if (run >= 3) continue;
        ++run;
      } else {
        run = 1;
      }
      kept.push_back(c);
    }
    if (kept.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += kept;
  }
  return out;
}

// Whitespace-splits already-cleaned text; optionally drops stopwords.
inline std::vector<std::string> tokenize(std::string_view text, const StopwordList& stopwords,
                                         bool drop_stopwords) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (detail::is_space(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && !detail::is_space(text[j])) ++j;
    std::string tok(text.substr(i, j - i));
    i = j;
    if (drop_stopwords && stopwords.contains(tok)) continue;
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

inline std::vector<std::string> tokenize(std::string_view text) {
  return tokenize(text, StopwordList{}, false);
}

// Strict-majority vote over annotator labels. No majority -> nullopt.
inline std::optional<std::string> merge_annotations(const std::vector<std::string>& labels) {
  if (labels.empty()) throw std::invalid_argument("merge_annotations: no labels");
  std::map<std::string, std::size_t> counts;
  for (const auto& l : labels) ++counts[l];
  for (const auto& [label, count] : counts)
    if (2 * count > labels.size()) return label;
  return std::nullopt;
}

struct Document {
  std::string id;
  std::string raw_text;
  std::string clean_text;
  std::vector<std::string> tokens;
  std::string label;  // empty = unlabeled

  bool labeled() const { return !label.empty(); }
};

inline Document make_document(std::string id, std::string raw, const StopwordList& stopwords,
                              bool drop_stopwords, std::string label) {
  Document d;
  d.id = std::move(id);
  d.raw_text = std::move(raw);
  d.clean_text = clean_text(d.raw_text);
  d.tokens = tokenize(d.clean_text, stopwords, drop_stopwords);
  d.label = std::move(label);
  return d;
}

class Corpus {
 public:
  std::vector<Document> documents;
  std::set<std::string> label_set;

  void add(Document doc) {
    if (!ids_.insert(doc.id).second)
      throw std::invalid_argument("duplicate document id: " + doc.id);
    if (!doc.label.empty()) label_set.insert(doc.label);
    documents.push_back(std::move(doc));
  }

  bool has_id(const std::string& id) const { return ids_.count(id) > 0; }
  std::size_t size() const { return documents.size(); }

 private:
  std::unordered_set<std::string> ids_;
};

enum class CorpusFormat { tsv, jsonl };

inline CorpusFormat parse_corpus_format(std::string_view s) {
  if (s == "tsv") return CorpusFormat::tsv;
  if (s == "jsonl") return CorpusFormat::jsonl;
  throw std::invalid_argument("unknown corpus format: " + std::string(s));
}

// TSV rows are `label<TAB>text` (first tab splits; text may contain tabs).
// JSONL objects carry "text" plus optional "id"/"label". Missing ids are
// synthesized from the 1-based record number, zero-padded to six digits.
inline Corpus load_corpus(const std::string& path, CorpusFormat format,
                          const StopwordList& stopwords = {}, bool drop_stopwords = false) {
  Corpus corpus;
  auto lines = detail::read_lines(path);
  std::size_t records = 0;
  if (format == CorpusFormat::tsv) {
    for (std::size_t li = 0; li < lines.size(); ++li) {
      const std::string& line = lines[li];
      auto pos = line.find('\t');
      if (pos == std::string::npos)
        throw ParseError(path, li + 1, "expected label<TAB>text");
      std::string label = line.substr(0, pos);
      std::string text = line.substr(pos + 1);
      if (detail::trim(text).empty())
        throw ParseError(path, li + 1, "blank text field");
      ++records;
      corpus.add(make_document(detail::pad_id(records), std::move(text), stopwords,
                               drop_stopwords, std::move(label)));
    }
  } else {
    for (std::size_t li = 0; li < lines.size(); ++li) {
      if (detail::trim(lines[li]).empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(lines[li]);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path, li + 1, std::string("invalid json: ") + e.what());
      }
      if (!j.is_object()) throw ParseError(path, li + 1, "expected a json object");
      if (!j.contains("text") || !j["text"].is_string())
        throw ParseError(path, li + 1, "missing string field \"text\"");
      std::string text = j["text"].get<std::string>();
      if (detail::trim(text).empty()) throw ParseError(path, li + 1, "blank text field");
      std::string id, label;
      if (j.contains("id")) {
        if (!j["id"].is_string()) throw ParseError(path, li + 1, "field \"id\" must be a string");
        id = j["id"].get<std::string>();
      }
      if (j.contains("label")) {
        if (!j["label"].is_string())
          throw ParseError(path, li + 1, "field \"label\" must be a string");
        label = j["label"].get<std::string>();
      }
      ++records;
      if (id.empty()) id = detail::pad_id(records);
      if (corpus.has_id(id)) throw ParseError(path, li + 1, "duplicate document id: " + id);
      corpus.add(make_document(std::move(id), std::move(text), stopwords, drop_stopwords,
                               std::move(label)));
    }
  }
  if (records == 0) throw ParseError(path + ": no records");
  return corpus;
}

inline void save_corpus(const Corpus& corpus, const std::string& path, CorpusFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  if (format == CorpusFormat::tsv) {
    for (const auto& d : corpus.documents) out << d.label << '\t' << d.raw_text << '\n';
  } else {
    for (const auto& d : corpus.documents) {
      nlohmann::json j;
      j["id"] = d.id;
      if (!d.label.empty()) j["label"] = d.label;
      j["text"] = d.raw_text;
      out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    }
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace modeda
