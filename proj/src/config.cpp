#include "ellda/config.hpp"

#include "ellda/report.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ellda {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::runtime_error("invalid boolean for " + key + ": " + v);
}

}  // namespace

PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);

  PipelineConfig c;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               " is not key = value: " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    std::string full = section + "." + key;

    try {
      if (full == "paths.corpus_dir") c.corpus_dir = value;
      else if (full == "paths.manifest") c.manifest = value;
      else if (full == "paths.stopwords") c.stopwords = value;
      else if (full == "paths.gazetteer") c.gazetteer = value;
      else if (full == "paths.blocklist") c.blocklist = value;
      else if (full == "paths.cache_dir") c.cache_dir = value;
      else if (full == "paths.output_dir") c.output_dir = value;
      else if (full == "ingest.min_count") c.min_count = std::stoi(value);
      else if (full == "linking.endpoint") c.endpoint = value;
      else if (full == "linking.offline") c.offline = parse_bool(value, full);
      else if (full == "linking.min_confidence") c.min_confidence = std::stod(value);
      else if (full == "linking.max_doc_fraction") c.max_doc_fraction = std::stod(value);
      else if (full == "linking.support") c.spotlight_support = value;
      else if (full == "linking.types") c.spotlight_types = value;
      else if (full == "linking.max_concurrent_requests")
        c.max_concurrent_requests = std::stoi(value);
      else if (full == "labels.k") c.label_k = std::stoi(value);
      else if (full == "standard.topics") c.standard_topics = std::stoi(value);
      else if (full == "standard.alpha") c.standard.alpha = std::stod(value);
      else if (full == "standard.beta") c.standard.beta = std::stod(value);
      else if (full == "standard.iterations") c.standard.iterations = std::stoi(value);
      else if (full == "standard.burn_in") c.standard.burn_in = std::stoi(value);
      else if (full == "standard.seed") c.standard.seed = std::stoull(value);
      else if (full == "labeled.alpha") c.labeled.alpha = std::stod(value);
      else if (full == "labeled.beta") c.labeled.beta = std::stod(value);
      else if (full == "labeled.iterations") c.labeled.iterations = std::stoi(value);
      else if (full == "labeled.burn_in") c.labeled.burn_in = std::stoi(value);
      else if (full == "labeled.seed") c.labeled.seed = std::stoull(value);
      else if (full == "report.threshold") c.report_threshold = std::stod(value);
      else if (full == "report.format") c.report_format = value;
      else if (full == "report.words_per_topic") c.words_per_topic = std::stoi(value);
      else throw std::runtime_error("unknown config key: " + full);
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("invalid value for " + full + ": " + value);
    }
  }

  if (const char* env = std::getenv("ELLDA_ENDPOINT")) c.endpoint = env;
  if (const char* env = std::getenv("ELLDA_CACHE_DIR")) c.cache_dir = env;
  return c;
}

void validate_config(const PipelineConfig& c) {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::runtime_error("invalid config field " + field + ": " + why);
  };
  if (c.corpus_dir.empty()) fail("paths.corpus_dir", "missing");
  if (c.manifest.empty()) fail("paths.manifest", "missing");
  if (c.min_count < 1) fail("ingest.min_count", "must be >= 1");
  if (c.min_confidence < 0.0 || c.min_confidence > 1.0)
    fail("linking.min_confidence", "must be in [0,1]");
  if (c.max_doc_fraction <= 0.0 || c.max_doc_fraction > 1.0)
    fail("linking.max_doc_fraction", "must be in (0,1]");
  if (c.max_concurrent_requests < 1)
    fail("linking.max_concurrent_requests", "must be >= 1");
  if (!c.offline && c.endpoint.empty())
    fail("linking.endpoint", "required unless offline");
  if (c.offline && c.gazetteer.empty())
    fail("paths.gazetteer", "required in offline mode");
  if (c.label_k < 1) fail("labels.k", "must be >= 1");
  if (c.standard_topics < 1) fail("standard.topics", "must be >= 1");
  const std::pair<const char*, const InferenceConfig*> modes[] = {
      {"standard", &c.standard}, {"labeled", &c.labeled}};
  for (auto [name, ic] : modes) {
    if (ic->beta <= 0.0) fail(std::string(name) + ".beta", "must be > 0");
    if (ic->iterations < 1) fail(std::string(name) + ".iterations", "must be >= 1");
    if (ic->burn_in < 0 || ic->burn_in >= ic->iterations)
      fail(std::string(name) + ".burn_in", "must be in [0, iterations)");
  }
  if (c.report_threshold < 0.0) fail("report.threshold", "must be >= 0");
  parse_report_format(c.report_format);  // throws on unknown
  if (c.words_per_topic < 1) fail("report.words_per_topic", "must be >= 1");
}

std::string hash_bytes(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream ss;
  ss << std::hex;
  ss.width(16);
  ss.fill('0');
  ss << h;
  return ss.str();
}

std::string hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash missing file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return hash_bytes(ss.str());
}

void save_artifact_meta(const ArtifactMeta& meta,
                        const std::string& artifact_path) {
  std::ofstream out(artifact_path + ".meta", std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write meta for: " + artifact_path);
  out << "config_hash " << meta.config_hash << "\n";
  out << "upstream_hash " << meta.upstream_hash << "\n";
  out << "seed " << meta.seed << "\n";
  out << "timestamp " << meta.timestamp << "\n";
}

std::optional<ArtifactMeta> load_artifact_meta(const std::string& artifact_path) {
  std::ifstream in(artifact_path + ".meta", std::ios::binary);
  if (!in) return std::nullopt;
  ArtifactMeta meta;
  std::string key;
  std::string line;
  while (std::getline(in, line)) {
    auto sp = line.find(' ');
    if (sp == std::string::npos) continue;
    key = line.substr(0, sp);
    std::string value = line.substr(sp + 1);
    if (key == "config_hash") meta.config_hash = value;
    else if (key == "upstream_hash") meta.upstream_hash = value;
    else if (key == "seed") meta.seed = std::stoull(value);
    else if (key == "timestamp") meta.timestamp = value;
  }
  return meta;
}

}  // namespace ellda
