#ifndef ELLDA_CORPUS_HPP
#define ELLDA_CORPUS_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include "ellda/text.hpp"

namespace ellda {

struct Document {
  std::string doc_id;
  std::string party;
  std::string raw_text;
  std::vector<int> tokens;  // vocabulary indices
};

// Dense term<->index bijection with corpus frequencies.
class Vocabulary {
 public:
  int size() const { return static_cast<int>(terms_.size()); }
  const std::string& term(int index) const { return terms_.at(index); }
  int index(const std::string& term) const;        // -1 if absent
  long long frequency(const std::string& term) const;
  int add(const std::string& term, long long count);

 private:
  std::vector<std::string> terms_;
  std::vector<long long> counts_;
  std::unordered_map<std::string, int> index_;
};

struct Corpus {
  std::vector<Document> documents;
  Vocabulary vocabulary;

  int size() const { return static_cast<int>(documents.size()); }
  const Document* find(const std::string& doc_id) const;
};

struct ManifestEntry {
  std::string filename;
  std::string doc_id;
  std::string party;
};

// Tab- or comma-delimited, header row "filename<sep>doc_id<sep>party".
std::vector<ManifestEntry> load_manifest(const std::string& path);

// One plain-text file per document, manifest order preserved. Missing files
// and duplicate doc_ids are fatal.
Corpus load_corpus(const std::string& corpus_dir, const std::string& manifest_path,
                   const StopwordSet& stopwords, const Stemmer& stemmer,
                   int min_count = 1);

// Terms with corpus frequency >= min_count, indices in first-occurrence
// order; documents are re-encoded with sub-threshold terms dropped.
Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs,
                            int min_count,
                            std::vector<std::vector<int>>* encoded = nullptr);

// Line-oriented snapshot: vocabulary block, then one line per document.
void save_corpus_snapshot(const Corpus& corpus, const std::string& path);
Corpus load_corpus_snapshot(const std::string& path);

}  // namespace ellda

#endif
