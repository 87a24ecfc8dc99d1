#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "ellda/sampler.hpp"

using namespace ellda;

namespace {

Corpus make_corpus(const std::vector<std::vector<int>>& docs, int vocab_size) {
  Corpus corpus;
  for (int w = 0; w < vocab_size; ++w)
    corpus.vocabulary.add("w" + std::to_string(w), 1);
  for (size_t d = 0; d < docs.size(); ++d) {
    Document doc;
    doc.doc_id = "d" + std::to_string(d);
    doc.party = "p" + std::to_string(d);
    doc.tokens = docs[d];
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

// The two-topic, two-word instance whose conditional is known in closed
// form: resampling doc0's first token must leave behind n_d = (1, 0),
// n_{0,w0} = 1, n_0 = 2, topic 1 empty, giving p = (2/3, 1/3).
SamplerState make_hand_instance() {
  SamplerState state;
  state.num_topics = 2;
  state.vocab_size = 2;
  state.docs = {{0, 1}, {0}};
  state.z = {{0, 0}, {0}};
  state.allowed = {{0, 1}, {0}};
  state.n_dk = {{2, 0}, {1, 0}};
  state.n_kw = {2, 0, 1, 0};  // word-major: w0:(2,0) w1:(1,0)
  state.n_k = {3, 0};
  return state;
}

}  // namespace

TEST_CASE("init assigns every token within the allowed set") {
  Corpus corpus = make_corpus({{0, 1, 2, 0}, {1, 2}}, 3);
  SamplerRng rng(1);
  SamplerState state = init_state(corpus, {{3}, {0, 2}}, 4, rng);
  for (int z : state.z[0]) CHECK(z == 3);
  for (int z : state.z[1]) CHECK((z == 0 || z == 2));
  validate_state(state);
}

TEST_CASE("init rejects an empty allowed set, naming the document") {
  Corpus corpus = make_corpus({{0}}, 1);
  SamplerRng rng(1);
  CHECK_THROWS_WITH_AS(init_state(corpus, {{}}, 2, rng),
                       doctest::Contains("d0"), std::runtime_error);
}

TEST_CASE("init is deterministic under a fixed seed") {
  Corpus corpus = make_corpus({{0, 1, 2, 1, 0}, {2, 2, 1}}, 3);
  SamplerRng rng1(99), rng2(99);
  SamplerState a = init_state(corpus, {{0, 1, 2}, {0, 1, 2}}, 3, rng1);
  SamplerState b = init_state(corpus, {{0, 1, 2}, {0, 1, 2}}, 3, rng2);
  CHECK(a.z == b.z);
}

TEST_CASE("hand-computed conditional: empirical draw frequencies") {
  SamplerRng rng(4242);
  int n_trials = 100000;
  int topic0 = 0;
  for (int t = 0; t < n_trials; ++t) {
    SamplerState state = make_hand_instance();
    gibbs_sweep(state, 1.0, 1.0, rng);
    validate_state(state);
    if (state.z[0][0] == 0) ++topic0;
  }
  double freq = double(topic0) / n_trials;
  CHECK(freq == doctest::Approx(2.0 / 3.0).epsilon(0.015));
}

TEST_CASE("singleton allowed set pins the assignment") {
  Corpus corpus = make_corpus({{0, 1, 0, 1}}, 2);
  SamplerRng rng(5);
  SamplerState state = init_state(corpus, {{3}}, 4, rng);
  for (int sweep = 0; sweep < 10; ++sweep) {
    gibbs_sweep(state, 0.5, 0.1, rng);
    for (int z : state.z[0]) CHECK(z == 3);
  }
}

TEST_CASE("sweeps conserve counts and respect the allowed sets") {
  Corpus corpus = make_corpus({{0, 1, 2, 3, 0, 1}, {2, 3, 4}, {4, 0}}, 5);
  SamplerRng rng(7);
  SamplerState state = init_state(corpus, {{0, 1}, {1, 2}, {0, 2}}, 3, rng);
  for (int sweep = 0; sweep < 50; ++sweep) {
    gibbs_sweep(state, 0.3, 0.05, rng);
    validate_state(state);  // recomputes all tables from z
    long long total = 0;
    for (long long c : state.n_k) total += c;
    CHECK(total == 6 + 3 + 2);
  }
}

TEST_CASE("single topic gives theta = [1.0]") {
  Corpus corpus = make_corpus({{0, 1, 1}}, 2);
  InferenceMode mode;
  mode.num_topics = 1;
  InferenceConfig config;
  config.iterations = 3;
  config.burn_in = 1;
  TopicModel model = run_inference(corpus, mode, config);
  REQUIRE(model.theta.size() == 1);
  CHECK(model.theta[0][0] == doctest::Approx(1.0));
}

TEST_CASE("theta follows the smoothed count formula") {
  SamplerState state;
  state.num_topics = 2;
  state.vocab_size = 2;
  state.docs = {{0, 0, 0, 1}};
  state.z = {{0, 0, 0, 1}};
  state.allowed = {{0, 1}};
  state.n_dk = {{3, 1}};
  state.n_kw = {3, 0, 0, 1};
  state.n_k = {3, 1};
  InferenceConfig config;
  config.alpha = 0.5;
  TopicModel model = estimate_model(state, {"d0"}, config, false);
  CHECK(model.theta[0][0] == doctest::Approx(0.7));
  CHECK(model.theta[0][1] == doctest::Approx(0.3));
}

TEST_CASE("phi follows the smoothed count formula") {
  SamplerState state;
  state.num_topics = 1;
  state.vocab_size = 2;
  state.docs = {{0, 0}};
  state.z = {{0, 0}};
  state.allowed = {{0}};
  state.n_dk = {{2}};
  state.n_kw = {2, 0};
  state.n_k = {2};
  InferenceConfig config;
  config.beta = 0.5;
  TopicModel model = estimate_model(state, {"d0"}, config, false);
  CHECK(model.phi[0][0] == doctest::Approx(2.5 / 3.0));
  CHECK(model.phi[0][1] == doctest::Approx(0.5 / 3.0));
}

TEST_CASE("theta and phi rows are normalized distributions") {
  Corpus corpus = make_corpus({{0, 1, 2, 3}, {3, 2, 1}, {0, 0, 2}}, 4);
  InferenceMode mode;
  mode.num_topics = 3;
  InferenceConfig config;
  config.iterations = 20;
  config.burn_in = 5;
  TopicModel model = run_inference(corpus, mode, config);
  for (const auto& row : model.theta) {
    double sum = 0;
    for (double v : row) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
  for (const auto& row : model.phi) {
    double sum = 0;
    for (double v : row) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
}

TEST_CASE("identical seeds give bitwise-identical models") {
  Corpus corpus = make_corpus({{0, 1, 2, 3, 1}, {3, 2, 0}, {1, 1, 2}}, 4);
  InferenceMode mode;
  mode.num_topics = 4;
  InferenceConfig config;
  config.iterations = 30;
  config.burn_in = 10;
  config.seed = 77;
  TopicModel a = run_inference(corpus, mode, config);
  TopicModel b = run_inference(corpus, mode, config);
  CHECK(a.theta == b.theta);
  CHECK(a.phi == b.phi);
  config.seed = 78;
  TopicModel c = run_inference(corpus, mode, config);
  CHECK(a.theta != c.theta);
}

TEST_CASE("labeled mode with full label sets reproduces standard mode") {
  Corpus corpus = make_corpus({{0, 1, 2, 3, 1}, {3, 2, 0}, {1, 1, 2}}, 4);
  const int k = 3;

  InferenceMode std_mode;
  std_mode.num_topics = k;
  InferenceConfig config;
  config.iterations = 25;
  config.burn_in = 5;
  config.alpha = 0.4;
  TopicModel std_model = run_inference(corpus, std_mode, config);

  // Every document labeled with every label, in label-space order.
  std::vector<LabelAssignment> assignments;
  for (const auto& d : corpus.documents)
    assignments.push_back({d.doc_id, {"L0", "L1", "L2"}, {3, 2, 1}});
  LabelSpace space = build_label_space(assignments);
  InferenceMode lab_mode;
  lab_mode.labeled = true;
  lab_mode.label_space = &space;
  lab_mode.assignments = &assignments;
  TopicModel lab_model = run_inference(corpus, lab_mode, config);

  // Identical trajectory: phi comes from the same count tables bit for bit;
  // theta goes through an algebraically equal but differently ordered sum.
  CHECK(std_model.phi == lab_model.phi);
  REQUIRE(std_model.theta.size() == lab_model.theta.size());
  for (size_t d = 0; d < std_model.theta.size(); ++d)
    for (int t = 0; t < k; ++t)
      CHECK(std_model.theta[d][t] ==
            doctest::Approx(lab_model.theta[d][t]).epsilon(1e-12));
}

TEST_CASE("labeled theta carries mass only on the document's labels") {
  Corpus corpus = make_corpus({{0, 1, 0}, {2, 3}, {1, 3}}, 4);
  std::vector<LabelAssignment> assignments = {{"d0", {"A", "B"}, {2, 1}},
                                              {"d1", {"B", "C"}, {2, 1}},
                                              {"d2", {"C"}, {1}}};
  LabelSpace space = build_label_space(assignments);
  InferenceMode mode;
  mode.labeled = true;
  mode.label_space = &space;
  mode.assignments = &assignments;
  InferenceConfig config;
  config.iterations = 15;
  config.burn_in = 5;
  TopicModel model = run_inference(corpus, mode, config);
  CHECK(model.theta[0][space.index("C")] == 0.0);
  CHECK(model.theta[2][space.index("A")] == 0.0);
  CHECK(model.theta[2][space.index("B")] == 0.0);
  double sum = 0;
  for (double v : model.theta[0]) sum += v;
  CHECK(sum == doctest::Approx(1.0));
  CHECK(model.topic_names[space.index("A")] == "A");
}

TEST_CASE("top_words ranks by phi with lexicographic ties") {
  Corpus corpus = make_corpus({{0}}, 3);
  TopicModel model;
  model.num_topics = 1;
  model.phi = {{0.2, 0.6, 0.2}};
  CHECK(top_words(model, corpus.vocabulary, 0, 1) ==
        std::vector<std::string>{"w1"});
  // uniform row: lexicographic order decides
  model.phi = {{1.0 / 3, 1.0 / 3, 1.0 / 3}};
  CHECK(top_words(model, corpus.vocabulary, 0, 2) ==
        std::vector<std::string>{"w0", "w1"});
  // n beyond V returns the whole vocabulary
  CHECK(top_words(model, corpus.vocabulary, 0, 10).size() == 3);
}

TEST_CASE("model file round-trips through the loader") {
  Corpus corpus = make_corpus({{0, 1, 2, 0}, {2, 1}}, 3);
  InferenceMode mode;
  mode.num_topics = 2;
  InferenceConfig config;
  config.iterations = 10;
  config.burn_in = 2;
  config.seed = 5;
  TopicModel model = run_inference(corpus, mode, config);

  auto path = std::filesystem::temp_directory_path() / "ellda_model_test.txt";
  save_topic_model(model, corpus.vocabulary, path.string(), 3);
  TopicModelFile loaded = load_topic_model(path.string());
  CHECK(loaded.mode == "standard");
  CHECK(loaded.num_topics == 2);
  CHECK(loaded.alpha == model.alpha);
  CHECK(loaded.beta == model.beta);
  CHECK(loaded.seed == 5);
  REQUIRE(loaded.doc_ids == model.doc_ids);
  for (size_t d = 0; d < loaded.theta.size(); ++d)
    for (auto [k, p] : loaded.theta[d])
      CHECK(p == model.theta[d][k]);  // full-precision text round-trip
  REQUIRE(loaded.top_words.size() == 2);
  CHECK(loaded.top_words[0].size() == 3);
  CHECK(loaded.topic_names[0] == "topic_0");
  std::filesystem::remove(path);
}
