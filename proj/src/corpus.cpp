#include "ellda/corpus.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace ellda {

int Vocabulary::index(const std::string& term) const {
  auto it = index_.find(term);
  return it == index_.end() ? -1 : it->second;
}

long long Vocabulary::frequency(const std::string& term) const {
  int i = index(term);
  return i < 0 ? 0 : counts_[i];
}

int Vocabulary::add(const std::string& term, long long count) {
  auto it = index_.find(term);
  if (it != index_.end()) {
    counts_[it->second] += count;
    return it->second;
  }
  int idx = static_cast<int>(terms_.size());
  terms_.push_back(term);
  counts_.push_back(count);
  index_.emplace(term, idx);
  return idx;
}

const Document* Corpus::find(const std::string& doc_id) const {
  for (const auto& d : documents)
    if (d.doc_id == doc_id) return &d;
  return nullptr;
}

namespace {

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<ManifestEntry> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("manifest is empty: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  char sep = line.find('\t') != std::string::npos ? '\t' : ',';
  auto header = split_fields(line, sep);
  if (header.size() < 3 || header[0] != "filename" || header[1] != "doc_id" ||
      header[2] != "party")
    throw std::runtime_error("manifest header must be filename,doc_id,party");

  std::vector<ManifestEntry> entries;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split_fields(line, sep);
    if (f.size() < 3)
      throw std::runtime_error("malformed manifest line: " + line);
    entries.push_back({f[0], f[1], f[2]});
  }
  return entries;
}

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs,
                            int min_count,
                            std::vector<std::vector<int>>* encoded) {
  if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");

  std::unordered_map<std::string, long long> freq;
  for (const auto& doc : docs)
    for (const auto& t : doc) ++freq[t];

  Vocabulary vocab;
  // First-occurrence order over the document stream.
  for (const auto& doc : docs)
    for (const auto& t : doc)
      if (freq[t] >= min_count && vocab.index(t) < 0) vocab.add(t, freq[t]);

  bool any_tokens = false;
  for (const auto& doc : docs)
    if (!doc.empty()) any_tokens = true;
  if (any_tokens && vocab.size() == 0)
    throw std::runtime_error("empty vocabulary: all terms below min_count");

  if (encoded) {
    encoded->clear();
    encoded->reserve(docs.size());
    for (const auto& doc : docs) {
      std::vector<int> ids;
      ids.reserve(doc.size());
      for (const auto& t : doc) {
        int i = vocab.index(t);
        if (i >= 0) ids.push_back(i);
      }
      encoded->push_back(std::move(ids));
    }
  }
  return vocab;
}

Corpus load_corpus(const std::string& corpus_dir, const std::string& manifest_path,
                   const StopwordSet& stopwords, const Stemmer& stemmer,
                   int min_count) {
  auto entries = load_manifest(manifest_path);
  if (entries.empty()) throw std::runtime_error("manifest lists no documents");

  std::unordered_set<std::string> seen;
  Corpus corpus;
  std::vector<std::vector<std::string>> token_docs;
  for (const auto& e : entries) {
    if (!seen.insert(e.doc_id).second)
      throw std::runtime_error("duplicate doc_id in manifest: " + e.doc_id);
    std::string path = corpus_dir + "/" + e.filename;
    std::string text;
    try {
      text = read_file(path);
    } catch (const std::exception&) {
      throw std::runtime_error("manifest references missing file: " + path);
    }
    Document doc;
    doc.doc_id = e.doc_id;
    doc.party = e.party;
    doc.raw_text = std::move(text);
    corpus.documents.push_back(std::move(doc));
    token_docs.push_back(
        tokenize_and_normalize(corpus.documents.back().raw_text, stopwords, stemmer));
  }

  std::vector<std::vector<int>> encoded;
  corpus.vocabulary = build_vocabulary(token_docs, min_count, &encoded);
  for (size_t i = 0; i < corpus.documents.size(); ++i)
    corpus.documents[i].tokens = std::move(encoded[i]);
  return corpus;
}

void save_corpus_snapshot(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write snapshot: " + path);
  out << "ellda-corpus 1\n";
  out << "vocab " << corpus.vocabulary.size() << "\n";
  for (int i = 0; i < corpus.vocabulary.size(); ++i)
    out << corpus.vocabulary.term(i) << " "
        << corpus.vocabulary.frequency(corpus.vocabulary.term(i)) << "\n";
  out << "docs " << corpus.size() << "\n";
  for (const auto& d : corpus.documents) {
    out << d.doc_id << "\t" << d.party << "\t";
    for (size_t i = 0; i < d.tokens.size(); ++i) {
      if (i) out << ' ';
      out << d.tokens[i];
    }
    out << "\n";
  }
}

Corpus load_corpus_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path);
  std::string tag;
  int version = 0;
  in >> tag >> version;
  if (tag != "ellda-corpus" || version != 1)
    throw std::runtime_error("not an ellda corpus snapshot: " + path);

  std::string kw;
  int v = 0;
  in >> kw >> v;
  if (kw != "vocab") throw std::runtime_error("snapshot missing vocab block");
  Corpus corpus;
  for (int i = 0; i < v; ++i) {
    std::string term;
    long long count;
    in >> term >> count;
    corpus.vocabulary.add(term, count);
  }

  int n = 0;
  in >> kw >> n;
  if (kw != "docs") throw std::runtime_error("snapshot missing docs block");
  std::string line;
  std::getline(in, line);  // consume rest of the "docs" line
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("snapshot truncated at document " + std::to_string(i));
    auto f = split_fields(line, '\t');
    if (f.size() != 3)
      throw std::runtime_error("malformed snapshot document line: " + line);
    Document doc;
    doc.doc_id = f[0];
    doc.party = f[1];
    std::istringstream ids(f[2]);
    int id;
    while (ids >> id) {
      if (id < 0 || id >= corpus.vocabulary.size())
        throw std::runtime_error("snapshot token index out of range");
      doc.tokens.push_back(id);
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace ellda
