#ifndef ELLDA_LABELS_HPP
#define ELLDA_LABELS_HPP

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "ellda/annotate.hpp"

namespace ellda {

struct EntityScore {
  std::string entity_id;
  int tf = 0;          // annotation occurrences within the document
  int df = 0;          // documents containing the entity
  double idf = 0.0;    // ln(N/df)
  double score = 0.0;  // tf * idf
};

struct LabelAssignment {
  std::string doc_id;
  std::vector<std::string> labels;  // descending score, <= k entries
  std::vector<double> scores;       // parallel to labels
};

// entity_id <-> dense topic index over the union of all label sets.
class LabelSpace {
 public:
  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int index) const { return labels_.at(index); }
  int index(const std::string& label) const;  // -1 if absent
  int add(const std::string& label);

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
};

// tf = per-document annotation count, df over documents, idf = ln(N/df),
// score = tf * idf. Input must already be filtered.
std::map<std::string, std::vector<EntityScore>> compute_entity_tfidf(
    const AnnotationMap& annotations, int corpus_size);

// Top-k entities per document by (score desc, entity_id asc); zero-score
// entities are excluded. Documents left with no labels get an empty
// assignment (they cannot take part in labeled inference).
std::vector<LabelAssignment> select_labels(
    const std::map<std::string, std::vector<EntityScore>>& scores, int k = 5);

// Union of all labels, indices in first-occurrence order over the
// assignment list.
LabelSpace build_label_space(const std::vector<LabelAssignment>& assignments);

// Label artifact: doc_id then up to k entity:score pairs, tab-separated.
// Editable by hand before inference.
void save_label_assignments(const std::vector<LabelAssignment>& assignments,
                            const std::string& path);
std::vector<LabelAssignment> load_label_assignments(const std::string& path);

}  // namespace ellda

#endif
