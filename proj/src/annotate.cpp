#include "ellda/annotate.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace ellda {

namespace {

std::string uri_tail(const std::string& uri) {
  auto pos = uri.find_last_of('/');
  return pos == std::string::npos ? uri : uri.substr(pos + 1);
}

double parse_number_field(const nlohmann::json& v, const char* name) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      size_t used = 0;
      std::string s = v.get<std::string>();
      double d = std::stod(s, &used);
      if (used == s.size()) return d;
    } catch (const std::exception&) {
    }
  }
  throw ResponseParseError(0, std::string("field ") + name + " is not numeric");
}

}  // namespace

std::vector<EntityAnnotation> parse_spotlight_response(const std::string& body) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ResponseParseError(e.byte, e.what());
  }
  if (!root.is_object())
    throw ResponseParseError(0, "response root is not an object");

  std::vector<EntityAnnotation> out;
  auto it = root.find("Resources");
  if (it == root.end() || it->is_null()) return out;
  if (!it->is_array())
    throw ResponseParseError(0, "Resources is not an array");

  for (const auto& r : *it) {
    if (!r.is_object())
      throw ResponseParseError(0, "Resources entry is not an object");
    if (!r.contains("@URI") || !r["@URI"].is_string())
      throw ResponseParseError(0, "Resources entry missing @URI");
    EntityAnnotation a;
    a.entity_id = uri_tail(r["@URI"].get<std::string>());
    a.surface_form =
        r.contains("@surfaceForm") && r["@surfaceForm"].is_string()
            ? r["@surfaceForm"].get<std::string>()
            : "";
    a.offset = r.contains("@offset")
                   ? static_cast<int>(parse_number_field(r["@offset"], "@offset"))
                   : 0;
    a.confidence =
        r.contains("@similarityScore")
            ? parse_number_field(r["@similarityScore"], "@similarityScore")
            : 0.0;
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<EntityAnnotation> SpotlightClient::annotate(
    const std::string& doc_id, const std::string& raw_text) const {
  std::string host = endpoint;
  // httplib wants scheme://host:port without a path.
  std::string base_path;
  auto scheme_end = host.find("://");
  auto path_start = host.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start != std::string::npos) {
    base_path = host.substr(path_start);
    if (base_path == "/") base_path.clear();
    host = host.substr(0, path_start);
  }

  httplib::Params params{{"text", raw_text},
                         {"confidence", std::to_string(confidence)}};
  if (!support.empty()) params.emplace("support", support);
  if (!types.empty()) params.emplace("types", types);
  httplib::Headers headers{{"Accept", "application/json"}};

  std::string last_error;
  int backoff_ms = 100;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
      backoff_ms *= 2;
    }
    httplib::Client client(host);
    client.set_read_timeout(30, 0);
    auto res = client.Post((base_path + "/rest/annotate").c_str(), headers,
                           params);
    if (!res) {
      last_error = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "server status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw RemoteError(doc_id, "annotate failed with status " +
                                    std::to_string(res->status));
    return parse_spotlight_response(res->body);
  }
  throw RemoteError(doc_id, "annotate failed after retries: " + last_error);
}

Gazetteer load_gazetteer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open gazetteer: " + path);
  Gazetteer gaz;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("malformed gazetteer line: " + line);
    std::string surface = to_lower(line.substr(0, tab));
    std::string entity = line.substr(tab + 1);
    if (first && surface == "surface_form") {  // optional header row
      first = false;
      continue;
    }
    first = false;
    gaz[surface] = entity;
  }
  return gaz;
}

namespace {

struct Word {
  size_t begin;
  size_t end;  // one past last char
  std::string lower;
};

std::vector<Word> split_words(const std::string& text) {
  std::vector<Word> words;
  size_t i = 0;
  while (i < text.size()) {
    if (!std::isalpha(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    size_t begin = i;
    std::string lower;
    while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) {
      lower += static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
      ++i;
    }
    words.push_back({begin, i, std::move(lower)});
  }
  return words;
}

bool word_matches(const std::string& text_word, const std::string& phrase_word) {
  if (text_word == phrase_word) return true;
  // plain plural of the phrase word
  return text_word.size() == phrase_word.size() + 1 && text_word.back() == 's' &&
         text_word.compare(0, phrase_word.size(), phrase_word) == 0;
}

}  // namespace

std::vector<EntityAnnotation> annotate_gazetteer(const std::string& raw_text,
                                                 const Gazetteer& gazetteer) {
  // Phrases indexed by first word, longest first.
  std::unordered_map<std::string, std::vector<std::pair<std::vector<std::string>,
                                                        const std::string*>>>
      by_first;
  for (const auto& [surface, entity] : gazetteer) {
    std::vector<std::string> parts;
    std::istringstream ss(surface);
    std::string w;
    while (ss >> w) parts.push_back(w);
    if (parts.empty()) continue;
    by_first[parts.front()].emplace_back(std::move(parts), &entity);
  }
  for (auto& [first, phrases] : by_first)
    std::sort(phrases.begin(), phrases.end(),
              [](const auto& a, const auto& b) {
                if (a.first.size() != b.first.size())
                  return a.first.size() > b.first.size();
                return a.first < b.first;
              });

  auto words = split_words(raw_text);
  std::vector<EntityAnnotation> out;
  size_t i = 0;
  while (i < words.size()) {
    size_t matched_len = 0;
    const std::string* matched_entity = nullptr;
    for (const auto& [first, phrases] : by_first) {
      if (!word_matches(words[i].lower, first)) continue;
      for (const auto& [parts, entity] : phrases) {
        if (i + parts.size() > words.size()) continue;
        bool ok = true;
        for (size_t j = 0; j < parts.size(); ++j)
          if (!word_matches(words[i + j].lower, parts[j])) {
            ok = false;
            break;
          }
        if (ok && (parts.size() > matched_len ||
                   (parts.size() == matched_len && matched_entity &&
                    *entity < *matched_entity))) {
          matched_len = parts.size();
          matched_entity = entity;
        }
      }
    }
    if (matched_entity) {
      EntityAnnotation a;
      a.entity_id = *matched_entity;
      a.offset = static_cast<int>(words[i].begin);
      a.surface_form = raw_text.substr(words[i].begin,
                                       words[i + matched_len - 1].end - words[i].begin);
      a.confidence = 1.0;
      out.push_back(std::move(a));
      i += matched_len;
    } else {
      ++i;
    }
  }
  return out;
}

AnnotationMap filter_annotations(const AnnotationMap& annotations,
                                 const FilterPolicy& policy, int corpus_size) {
  if (corpus_size < 1) throw std::invalid_argument("corpus_size must be >= 1");

  // Pass 1: confidence and blocklist.
  AnnotationMap pass1;
  for (const auto& [doc_id, anns] : annotations) {
    auto& out = pass1[doc_id];
    for (const auto& a : anns) {
      if (a.confidence < policy.min_confidence) continue;
      if (policy.blocklist.count(a.entity_id)) continue;
      out.push_back(a);
    }
  }

  // Pass 2: document-frequency cut over the surviving annotations.
  std::unordered_map<std::string, int> df;
  for (const auto& [doc_id, anns] : pass1) {
    std::unordered_set<std::string> seen;
    for (const auto& a : anns)
      if (seen.insert(a.entity_id).second) ++df[a.entity_id];
  }
  AnnotationMap out;
  for (const auto& [doc_id, anns] : pass1) {
    auto& kept = out[doc_id];
    for (const auto& a : anns)
      if (static_cast<double>(df[a.entity_id]) / corpus_size <=
          policy.max_doc_fraction)
        kept.push_back(a);
  }
  return out;
}

std::unordered_set<std::string> load_blocklist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open blocklist: " + path);
  std::unordered_set<std::string> set;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    set.insert(line);
  }
  return set;
}

namespace {

// Surface forms can contain tabs or newlines (a match can span a line
// break in the source text), so they are escaped in the TSV artifacts.
std::string escape_field(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    switch (s[++i]) {
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: out += s[i];
    }
  }
  return out;
}

std::string format_confidence(double c) {
  std::ostringstream ss;
  ss.precision(17);
  ss << c;
  return ss.str();
}

EntityAnnotation parse_annotation_fields(const std::vector<std::string>& f,
                                         size_t start, const std::string& line) {
  if (f.size() < start + 4)
    throw std::runtime_error("malformed annotation line: " + line);
  EntityAnnotation a;
  a.entity_id = f[start];
  a.offset = std::stoi(f[start + 1]);
  a.confidence = std::stod(f[start + 2]);
  a.surface_form = unescape_field(f[start + 3]);
  return a;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void save_annotations(const std::vector<EntityAnnotation>& annotations,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write annotations: " + path);
  for (const auto& a : annotations)
    out << a.entity_id << "\t" << a.offset << "\t" << format_confidence(a.confidence)
        << "\t" << escape_field(a.surface_form) << "\n";
}

std::vector<EntityAnnotation> load_annotations(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open annotations: " + path);
  std::vector<EntityAnnotation> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out.push_back(parse_annotation_fields(split_tabs(line), 0, line));
  }
  return out;
}

void save_annotation_map(const AnnotationMap& map, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write annotations: " + path);
  for (const auto& [doc_id, anns] : map)
    for (const auto& a : anns)
      out << doc_id << "\t" << a.entity_id << "\t" << a.offset << "\t"
          << format_confidence(a.confidence) << "\t" << escape_field(a.surface_form)
          << "\n";
}

AnnotationMap load_annotation_map(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open annotations: " + path);
  AnnotationMap map;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split_tabs(line);
    if (f.size() < 5) throw std::runtime_error("malformed annotation line: " + line);
    map[f[0]].push_back(parse_annotation_fields(f, 1, line));
  }
  return map;
}

}  // namespace ellda
