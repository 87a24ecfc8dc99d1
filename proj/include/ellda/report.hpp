#ifndef ELLDA_REPORT_HPP
#define ELLDA_REPORT_HPP

#include <string>
#include <vector>

#include "ellda/labels.hpp"
#include "ellda/sampler.hpp"

namespace ellda {

struct StandardTopicEntry {
  double proportion = 0.0;
  std::vector<std::string> words;

  bool operator==(const StandardTopicEntry&) const = default;
};

struct LabeledTopicEntry {
  std::string label;
  double proportion = 0.0;

  bool operator==(const LabeledTopicEntry&) const = default;
};

// One comparison row per document: tf-idf entity ranking,
// standard LDA topics with word lists, entity-labeled topics.
struct PartyReport {
  std::string doc_id;
  std::string party;
  std::vector<std::string> entity_ranking;
  std::vector<StandardTopicEntry> standard_topics;
  std::vector<LabeledTopicEntry> labeled_topics;

  bool operator==(const PartyReport&) const = default;
};

enum class ReportFormat { markdown, csv, jsonl };

ReportFormat parse_report_format(const std::string& name);

// Entries strictly above the threshold, descending by proportion (ties by
// topic index).
std::vector<std::pair<int, double>> threshold_topics(
    const std::vector<double>& theta_row, double threshold = 0.10);

// Sparse variant used with loaded model files.
std::vector<std::pair<int, double>> threshold_topics(
    const std::vector<std::pair<int, double>>& theta_row,
    double threshold = 0.10);

struct ReportConfig {
  double threshold = 0.10;
  int words_per_topic = 20;
};

// Builds one PartyReport per document from the two model artifacts and the
// label assignments. Throws if the models disagree with the corpus on
// doc_ids.
std::vector<PartyReport> build_reports(const TopicModelFile& standard_model,
                                       const TopicModelFile& labeled_model,
                                       const std::vector<LabelAssignment>& assignments,
                                       const Corpus& corpus,
                                       const ReportConfig& config);

struct ReportSummary {
  int n_docs = 0;
  int label_count = 0;    // L
  int standard_topics = 0;  // K
  std::string standard_config;
  std::string labeled_config;
  double threshold = 0.0;
};

ReportSummary build_summary(const TopicModelFile& standard_model,
                            const TopicModelFile& labeled_model,
                            const Corpus& corpus, const ReportConfig& config);

void write_markdown_report(const std::vector<PartyReport>& reports,
                           const ReportSummary& summary,
                           const std::string& path);
// CSV columns: doc_id, column, rank, name, proportion. `column` is one of
// entity_ranking / standard_lda / labeled_lda.
void write_csv_report(const std::vector<PartyReport>& reports,
                      const std::string& path);
std::vector<PartyReport> read_csv_report(const std::string& path);

void write_jsonl_report(const std::vector<PartyReport>& reports,
                        const std::string& path);
std::vector<PartyReport> read_jsonl_report(const std::string& path);

}  // namespace ellda

#endif
