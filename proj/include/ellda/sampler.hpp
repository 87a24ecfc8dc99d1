#ifndef ELLDA_SAMPLER_HPP
#define ELLDA_SAMPLER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ellda/corpus.hpp"
#include "ellda/labels.hpp"

namespace ellda {

struct InferenceConfig {
  double alpha = -1.0;   // <= 0 means the 50/K default
  double beta = 0.01;
  int iterations = 1000;
  int burn_in = 200;
  std::uint64_t seed = 42;

  double resolved_alpha(int num_topics) const {
    return alpha > 0.0 ? alpha : 50.0 / num_topics;
  }
};

// Collapsed Gibbs state. Standard LDA is the special case where every
// document's admissible set is the full topic range.
struct SamplerState {
  int num_topics = 0;
  int vocab_size = 0;
  std::vector<std::vector<int>> docs;     // token word ids, per document
  std::vector<std::vector<int>> z;        // per doc, per token position
  std::vector<std::vector<int>> n_dk;     // doc x topic
  std::vector<int> n_kw;                  // word-major: index w * K + k
  std::vector<long long> n_k;             // per-topic totals
  std::vector<std::vector<int>> allowed;  // per doc, sorted topic ids

  int topic_word(int topic, int word) const {
    return n_kw[static_cast<size_t>(word) * num_topics + topic];
  }
};

struct TopicModel {
  std::string mode;  // "standard" or "labeled"
  int num_topics = 0;
  double alpha = 0.0;
  double beta = 0.0;
  int iterations = 0;
  int burn_in = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> doc_ids;
  std::vector<std::vector<double>> theta;  // doc x topic, rows sum to 1
  std::vector<std::vector<double>> phi;    // topic x word, rows sum to 1
  std::vector<std::string> topic_names;    // entity_id or "topic_<k>"
};

// splitmix64-based generator: identical sequences on every platform.
class SamplerRng {
 public:
  explicit SamplerRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();                // [0, 1)
  int uniform_int(int bound);      // [0, bound)

 private:
  std::uint64_t state_;
};

// Uniform topic draw from each document's allowed set; count tables are
// built to match z. An empty allowed set is fatal.
SamplerState init_state(const Corpus& corpus,
                        const std::vector<std::vector<int>>& allowed,
                        int num_topics, SamplerRng& rng);

// One full sweep: each token resampled from the collapsed conditional
// p(k) proportional to (n_dk + alpha)(n_kw + beta)/(n_k + V*beta),
// restricted to allowed[d].
void gibbs_sweep(SamplerState& state, double alpha, double beta, SamplerRng& rng);

// Point estimates from the current counts. Labeled-mode theta carries mass
// only on the document's allowed topics, renormalized over that set.
TopicModel estimate_model(const SamplerState& state,
                          const std::vector<std::string>& doc_ids,
                          const InferenceConfig& config, bool labeled);

struct InferenceMode {
  bool labeled = false;
  int num_topics = 0;                       // standard mode K
  const LabelSpace* label_space = nullptr;  // labeled mode
  const std::vector<LabelAssignment>* assignments = nullptr;
};

// init, `iterations` sweeps, estimate. In labeled mode documents without
// labels are skipped during sampling and report a uniform theta row.
TopicModel run_inference(const Corpus& corpus, const InferenceMode& mode,
                         const InferenceConfig& config);

// Highest-phi terms for one topic, ties broken lexicographically. n > V
// returns all terms.
std::vector<std::string> top_words(const TopicModel& model,
                                   const Vocabulary& vocabulary, int topic,
                                   int n);

// Test helper: recomputes every count table from z and checks the
// allowed-set restriction. Throws on any inconsistency.
void validate_state(const SamplerState& state);

// Model artifact: header, theta block, phi block (top words per topic).
void save_topic_model(const TopicModel& model, const Vocabulary& vocabulary,
                      const std::string& path, int words_per_topic = 20);

struct TopicModelFile {
  std::string mode;
  int num_topics = 0;
  double alpha = 0.0;
  double beta = 0.0;
  int iterations = 0;
  int burn_in = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> doc_ids;
  // sparse theta rows: (topic index, proportion)
  std::vector<std::vector<std::pair<int, double>>> theta;
  std::vector<std::string> topic_names;
  std::vector<std::vector<std::pair<std::string, double>>> top_words;
};

TopicModelFile load_topic_model(const std::string& path);

}  // namespace ellda

#endif
