#ifndef ELLDA_ANNOTATE_HPP
#define ELLDA_ANNOTATE_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ellda/corpus.hpp"

namespace ellda {

struct EntityAnnotation {
  std::string entity_id;     // final path segment of the KB URI
  std::string surface_form;
  int offset = 0;            // character position in raw_text
  double confidence = 1.0;   // in [0,1]

  bool operator==(const EntityAnnotation&) const = default;
};

// doc_id -> annotations, ordered by doc_id for deterministic iteration.
using AnnotationMap = std::map<std::string, std::vector<EntityAnnotation>>;

struct FilterPolicy {
  double min_confidence = 0.1;             // boundary kept: only strictly-below drops
  std::unordered_set<std::string> blocklist;
  double max_doc_fraction = 0.8;           // df/N above this drops the entity
};

// Retryable transport-level failure (connection refused, 5xx, ...).
class RemoteError : public std::runtime_error {
 public:
  RemoteError(const std::string& doc_id, const std::string& what)
      : std::runtime_error(what), doc_id_(doc_id) {}
  const std::string& doc_id() const { return doc_id_; }

 private:
  std::string doc_id_;
};

// Malformed response body; byte_offset points at the failing position.
class ResponseParseError : public std::runtime_error {
 public:
  ResponseParseError(size_t byte_offset, const std::string& what)
      : std::runtime_error(what), byte_offset_(byte_offset) {}
  size_t byte_offset() const { return byte_offset_; }

 private:
  size_t byte_offset_;
};

// Parses a Spotlight-style JSON body: {"Resources":[{"@URI":..., "@surfaceForm":...,
// "@offset":..., "@similarityScore":...}, ...]}. Unknown fields ignored; a missing
// Resources key means zero annotations.
std::vector<EntityAnnotation> parse_spotlight_response(const std::string& body);

struct SpotlightClient {
  std::string endpoint;       // e.g. http://localhost:2222
  double confidence = 0.0;    // passed through as the service's confidence field
  std::string support;        // optional pass-through parameters
  std::string types;
  int max_retries = 3;

  // POST /rest/annotate with form fields text, confidence. Throws RemoteError
  // on transport/status failure and ResponseParseError on a bad body; neither
  // leaves partial annotations anywhere.
  std::vector<EntityAnnotation> annotate(const std::string& doc_id,
                                         const std::string& raw_text) const;
};

// surface form (lowercase phrase) -> entity_id
using Gazetteer = std::unordered_map<std::string, std::string>;

Gazetteer load_gazetteer(const std::string& path);

// Case-insensitive longest-match-first scan at word boundaries; matches are
// non-overlapping and each gets confidence 1.0. A text word also matches a
// phrase word when it is its plain "s" plural.
std::vector<EntityAnnotation> annotate_gazetteer(const std::string& raw_text,
                                                 const Gazetteer& gazetteer);

// Confidence filter (keep >= min), then blocklist, then document-frequency
// cut computed over the post-filter map. Order is fixed.
AnnotationMap filter_annotations(const AnnotationMap& annotations,
                                 const FilterPolicy& policy, int corpus_size);

// One entity_id per line, '#' comments ignored.
std::unordered_set<std::string> load_blocklist(const std::string& path);

// Per-document cache files: entity_id \t offset \t confidence \t surface_form.
void save_annotations(const std::vector<EntityAnnotation>& annotations,
                      const std::string& path);
std::vector<EntityAnnotation> load_annotations(const std::string& path);

// Combined artifact: doc_id \t entity_id \t offset \t confidence \t surface_form.
void save_annotation_map(const AnnotationMap& map, const std::string& path);
AnnotationMap load_annotation_map(const std::string& path);

}  // namespace ellda

#endif
