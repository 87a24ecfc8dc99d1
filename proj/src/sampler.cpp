#include "ellda/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ellda {

std::uint64_t SamplerRng::next() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SamplerRng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

int SamplerRng::uniform_int(int bound) {
  return static_cast<int>(uniform() * bound);
}

SamplerState init_state(const Corpus& corpus,
                        const std::vector<std::vector<int>>& allowed,
                        int num_topics, SamplerRng& rng) {
  if (allowed.size() != corpus.documents.size())
    throw std::invalid_argument("allowed size must match document count");

  SamplerState state;
  state.num_topics = num_topics;
  state.vocab_size = corpus.vocabulary.size();
  size_t n_docs = corpus.documents.size();
  state.docs.resize(n_docs);
  state.z.resize(n_docs);
  state.n_dk.assign(n_docs, std::vector<int>(num_topics, 0));
  state.n_kw.assign(static_cast<size_t>(state.vocab_size) * num_topics, 0);
  state.n_k.assign(num_topics, 0);
  state.allowed = allowed;

  for (size_t d = 0; d < n_docs; ++d) {
    const auto& doc = corpus.documents[d];
    if (state.allowed[d].empty())
      throw std::runtime_error("document has empty allowed topic set: " +
                               doc.doc_id);
    std::sort(state.allowed[d].begin(), state.allowed[d].end());
    for (int k : state.allowed[d])
      if (k < 0 || k >= num_topics)
        throw std::runtime_error("allowed topic out of range for document: " +
                                 doc.doc_id);
    state.docs[d] = doc.tokens;
    state.z[d].resize(doc.tokens.size());
    for (size_t i = 0; i < doc.tokens.size(); ++i) {
      int k = state.allowed[d][rng.uniform_int(
          static_cast<int>(state.allowed[d].size()))];
      state.z[d][i] = k;
      ++state.n_dk[d][k];
      ++state.n_kw[static_cast<size_t>(doc.tokens[i]) * num_topics + k];
      ++state.n_k[k];
    }
  }
  return state;
}

void gibbs_sweep(SamplerState& state, double alpha, double beta,
                 SamplerRng& rng) {
  const int K = state.num_topics;
  const double vbeta = state.vocab_size * beta;

  thread_local std::vector<double> inv_nk;
  thread_local std::vector<double> cum;
  inv_nk.resize(K);
  cum.resize(K);
  for (int k = 0; k < K; ++k) inv_nk[k] = 1.0 / (state.n_k[k] + vbeta);

  for (size_t d = 0; d < state.docs.size(); ++d) {
    const auto& tokens = state.docs[d];
    auto& zd = state.z[d];
    auto& ndk = state.n_dk[d];
    const auto& allow = state.allowed[d];
    const bool full = static_cast<int>(allow.size()) == K;

    for (size_t i = 0; i < tokens.size(); ++i) {
      const int w = tokens[i];
      const int old_k = zd[i];
      int* row = &state.n_kw[static_cast<size_t>(w) * K];

      --ndk[old_k];
      --row[old_k];
      --state.n_k[old_k];
      inv_nk[old_k] = 1.0 / (state.n_k[old_k] + vbeta);

      int new_k;
      if (full) {
        double total = 0.0;
        for (int k = 0; k < K; ++k) {
          total += (ndk[k] + alpha) * (row[k] + beta) * inv_nk[k];
          cum[k] = total;
        }
        const double u = rng.uniform() * total;
        new_k = K - 1;
        for (int k = 0; k < K; ++k)
          if (u < cum[k]) {
            new_k = k;
            break;
          }
      } else {
        double total = 0.0;
        const int m = static_cast<int>(allow.size());
        for (int j = 0; j < m; ++j) {
          const int k = allow[j];
          total += (ndk[k] + alpha) * (row[k] + beta) * inv_nk[k];
          cum[j] = total;
        }
        const double u = rng.uniform() * total;
        int pick = m - 1;
        for (int j = 0; j < m; ++j)
          if (u < cum[j]) {
            pick = j;
            break;
          }
        new_k = allow[pick];
      }

      zd[i] = new_k;
      ++ndk[new_k];
      ++row[new_k];
      ++state.n_k[new_k];
      inv_nk[new_k] = 1.0 / (state.n_k[new_k] + vbeta);
    }
  }
}

TopicModel estimate_model(const SamplerState& state,
                          const std::vector<std::string>& doc_ids,
                          const InferenceConfig& config, bool labeled) {
  const int K = state.num_topics;
  const int V = state.vocab_size;
  const double alpha = config.resolved_alpha(K);
  const double beta = config.beta;

  TopicModel model;
  model.mode = labeled ? "labeled" : "standard";
  model.num_topics = K;
  model.alpha = alpha;
  model.beta = beta;
  model.iterations = config.iterations;
  model.burn_in = config.burn_in;
  model.seed = config.seed;
  model.doc_ids = doc_ids;

  model.theta.resize(state.docs.size());
  for (size_t d = 0; d < state.docs.size(); ++d) {
    auto& row = model.theta[d];
    row.assign(K, 0.0);
    if (labeled) {
      double z = 0.0;
      for (int k : state.allowed[d]) z += state.n_dk[d][k] + alpha;
      for (int k : state.allowed[d]) row[k] = (state.n_dk[d][k] + alpha) / z;
    } else {
      const double len = static_cast<double>(state.docs[d].size());
      const double denom = len + K * alpha;
      for (int k = 0; k < K; ++k) row[k] = (state.n_dk[d][k] + alpha) / denom;
    }
  }

  model.phi.assign(K, std::vector<double>(V, 0.0));
  for (int k = 0; k < K; ++k) {
    const double denom = static_cast<double>(state.n_k[k]) + V * beta;
    for (int w = 0; w < V; ++w)
      model.phi[k][w] = (state.topic_word(k, w) + beta) / denom;
  }
  return model;
}

TopicModel run_inference(const Corpus& corpus, const InferenceMode& mode,
                         const InferenceConfig& config) {
  SamplerRng rng(config.seed);

  if (!mode.labeled) {
    const int K = mode.num_topics;
    if (K < 1) throw std::invalid_argument("standard mode requires K >= 1");
    std::vector<int> all(K);
    for (int k = 0; k < K; ++k) all[k] = k;
    std::vector<std::vector<int>> allowed(corpus.documents.size(), all);
    SamplerState state = init_state(corpus, allowed, K, rng);
    const double alpha = config.resolved_alpha(K);
    for (int it = 0; it < config.iterations; ++it)
      gibbs_sweep(state, alpha, config.beta, rng);
    std::vector<std::string> ids;
    for (const auto& d : corpus.documents) ids.push_back(d.doc_id);
    TopicModel model = estimate_model(state, ids, config, false);
    for (int k = 0; k < K; ++k)
      model.topic_names.push_back("topic_" + std::to_string(k));
    return model;
  }

  if (!mode.label_space || !mode.assignments)
    throw std::invalid_argument("labeled mode requires label space and assignments");
  const int L = mode.label_space->size();
  if (L < 1) throw std::runtime_error("labeled mode with empty label space");

  // Documents without labels are excluded from sampling.
  std::map<std::string, const LabelAssignment*> by_doc;
  for (const auto& a : *mode.assignments) by_doc[a.doc_id] = &a;

  Corpus sub;
  sub.vocabulary = corpus.vocabulary;
  std::vector<std::vector<int>> allowed;
  std::vector<bool> participates(corpus.documents.size(), false);
  for (size_t d = 0; d < corpus.documents.size(); ++d) {
    auto it = by_doc.find(corpus.documents[d].doc_id);
    if (it == by_doc.end() || it->second->labels.empty()) continue;
    std::vector<int> topics;
    for (const auto& label : it->second->labels) {
      int idx = mode.label_space->index(label);
      if (idx < 0)
        throw std::runtime_error("label not in label space: " + label);
      topics.push_back(idx);
    }
    participates[d] = true;
    sub.documents.push_back(corpus.documents[d]);
    allowed.push_back(std::move(topics));
  }
  if (sub.documents.empty())
    throw std::runtime_error("no document has labels; labeled inference impossible");

  SamplerState state = init_state(sub, allowed, L, rng);
  const double alpha = config.resolved_alpha(L);
  for (int it = 0; it < config.iterations; ++it)
    gibbs_sweep(state, alpha, config.beta, rng);

  std::vector<std::string> sub_ids;
  for (const auto& d : sub.documents) sub_ids.push_back(d.doc_id);
  TopicModel sub_model = estimate_model(state, sub_ids, config, true);

  // Expand back to the full corpus; excluded documents get a uniform row.
  TopicModel model = sub_model;
  model.doc_ids.clear();
  model.theta.clear();
  size_t s = 0;
  for (size_t d = 0; d < corpus.documents.size(); ++d) {
    model.doc_ids.push_back(corpus.documents[d].doc_id);
    if (participates[d]) {
      model.theta.push_back(std::move(sub_model.theta[s++]));
    } else {
      model.theta.emplace_back(L, 1.0 / L);
    }
  }
  for (int k = 0; k < L; ++k)
    model.topic_names.push_back(mode.label_space->label(k));
  return model;
}

std::vector<std::string> top_words(const TopicModel& model,
                                   const Vocabulary& vocabulary, int topic,
                                   int n) {
  if (topic < 0 || topic >= model.num_topics)
    throw std::out_of_range("topic index out of range");
  const auto& row = model.phi.at(topic);
  std::vector<int> idx(row.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (row[a] != row[b]) return row[a] > row[b];
    return vocabulary.term(a) < vocabulary.term(b);
  });
  if (n > static_cast<int>(idx.size())) n = static_cast<int>(idx.size());
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(vocabulary.term(idx[i]));
  return out;
}

void validate_state(const SamplerState& state) {
  const int K = state.num_topics;
  std::vector<std::vector<int>> ndk(state.docs.size(), std::vector<int>(K, 0));
  std::vector<int> nkw(state.n_kw.size(), 0);
  std::vector<long long> nk(K, 0);
  for (size_t d = 0; d < state.docs.size(); ++d) {
    if (state.z[d].size() != state.docs[d].size())
      throw std::runtime_error("z length mismatch");
    for (size_t i = 0; i < state.docs[d].size(); ++i) {
      int k = state.z[d][i];
      int w = state.docs[d][i];
      if (!std::binary_search(state.allowed[d].begin(), state.allowed[d].end(), k))
        throw std::runtime_error("assignment outside allowed set");
      ++ndk[d][k];
      ++nkw[static_cast<size_t>(w) * K + k];
      ++nk[k];
    }
  }
  if (ndk != state.n_dk) throw std::runtime_error("n_dk inconsistent with z");
  if (nkw != state.n_kw) throw std::runtime_error("n_kw inconsistent with z");
  if (nk != state.n_k) throw std::runtime_error("n_k inconsistent with z");
}

namespace {

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

}  // namespace

void save_topic_model(const TopicModel& model, const Vocabulary& vocabulary,
                      const std::string& path, int words_per_topic) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model: " + path);
  out << "ellda-model 1\n";
  out << "mode " << model.mode << "\n";
  out << "topics " << model.num_topics << "\n";
  out << "alpha " << fmt(model.alpha) << "\n";
  out << "beta " << fmt(model.beta) << "\n";
  out << "iterations " << model.iterations << "\n";
  out << "burn_in " << model.burn_in << "\n";
  out << "seed " << model.seed << "\n";

  out << "theta " << model.doc_ids.size() << "\n";
  for (size_t d = 0; d < model.doc_ids.size(); ++d) {
    out << model.doc_ids[d] << "\t";
    bool first = true;
    for (int k = 0; k < model.num_topics; ++k) {
      if (model.theta[d][k] <= 0.0) continue;
      if (!first) out << ' ';
      out << k << ':' << fmt(model.theta[d][k]);
      first = false;
    }
    out << "\n";
  }

  out << "phi " << model.num_topics << "\n";
  for (int k = 0; k < model.num_topics; ++k) {
    auto words = top_words(model, vocabulary, k, words_per_topic);
    out << model.topic_names[k] << "\t";
    for (size_t i = 0; i < words.size(); ++i) {
      if (i) out << ' ';
      out << words[i] << ':' << fmt(model.phi[k][vocabulary.index(words[i])]);
    }
    out << "\n";
  }
}

TopicModelFile load_topic_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model: " + path);
  std::string tag;
  int version = 0;
  in >> tag >> version;
  if (tag != "ellda-model" || version != 1)
    throw std::runtime_error("not an ellda model file: " + path);

  TopicModelFile m;
  std::string kw;
  in >> kw >> m.mode;
  in >> kw >> m.num_topics;
  in >> kw >> m.alpha;
  in >> kw >> m.beta;
  in >> kw >> m.iterations;
  in >> kw >> m.burn_in;
  in >> kw >> m.seed;

  int n_docs = 0;
  in >> kw >> n_docs;
  if (kw != "theta") throw std::runtime_error("model missing theta block");
  std::string line;
  std::getline(in, line);
  for (int d = 0; d < n_docs; ++d) {
    if (!std::getline(in, line))
      throw std::runtime_error("model theta block truncated");
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("malformed theta line: " + line);
    m.doc_ids.push_back(line.substr(0, tab));
    std::istringstream ss(line.substr(tab + 1));
    std::vector<std::pair<int, double>> row;
    std::string pair;
    while (ss >> pair) {
      auto colon = pair.find(':');
      row.emplace_back(std::stoi(pair.substr(0, colon)),
                       std::stod(pair.substr(colon + 1)));
    }
    m.theta.push_back(std::move(row));
  }

  int n_topics = 0;
  in >> kw >> n_topics;
  if (kw != "phi") throw std::runtime_error("model missing phi block");
  std::getline(in, line);
  for (int k = 0; k < n_topics; ++k) {
    if (!std::getline(in, line))
      throw std::runtime_error("model phi block truncated");
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("malformed phi line: " + line);
    m.topic_names.push_back(line.substr(0, tab));
    std::istringstream ss(line.substr(tab + 1));
    std::vector<std::pair<std::string, double>> words;
    std::string pair;
    while (ss >> pair) {
      auto colon = pair.find_last_of(':');
      words.emplace_back(pair.substr(0, colon),
                         std::stod(pair.substr(colon + 1)));
    }
    m.top_words.push_back(std::move(words));
  }
  return m;
}

}  // namespace ellda
