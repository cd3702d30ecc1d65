#include "lsanb/model_io.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "lsanb/error.hpp"

namespace lsanb {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void format_error(const std::string& msg) { throw Error(ErrorKind::kFormat, msg); }

std::string encode_matrix(const Eigen::MatrixXd& m) {
  return encode_doubles(std::span<const double>(m.data(), static_cast<std::size_t>(m.size())));
}

Eigen::MatrixXd decode_matrix(const json& j, Eigen::Index rows, Eigen::Index cols, const char* what) {
  const auto values = decode_doubles(j.get<std::string>());
  if (static_cast<Eigen::Index>(values.size()) != rows * cols) {
    format_error(fmt::format("{}: expected {} values, found {}", what, rows * cols, values.size()));
  }
  Eigen::MatrixXd m(rows, cols);
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

json count_triples(const std::vector<std::vector<std::int64_t>>& table) {
  json out = json::array();
  for (std::size_t c = 0; c < table.size(); ++c) {
    for (std::size_t t = 0; t < table[c].size(); ++t) {
      if (table[c][t] != 0) out.push_back(json::array({c, t, table[c][t]}));
    }
  }
  return out;
}

std::vector<std::vector<std::int64_t>> count_table(const json& triples, std::size_t classes,
                                                   std::size_t terms) {
  std::vector<std::vector<std::int64_t>> table(classes, std::vector<std::int64_t>(terms, 0));
  for (const auto& t : triples) {
    const auto c = t.at(0).get<std::size_t>();
    const auto k = t.at(1).get<std::size_t>();
    if (c >= classes || k >= terms) format_error("count triple out of range");
    table[c][k] = t.at(2).get<std::int64_t>();
  }
  return table;
}

json nb_to_json(const NbModel& nb) {
  json j;
  j["log_prior"] = encode_doubles(nb.log_prior);
  j["features"] = nb.num_features();
  if (nb.config.event_model == EventModel::kGaussian) {
    j["gauss_mean"] = encode_matrix(nb.gauss_mean);
    j["gauss_var"] = encode_matrix(nb.gauss_var);
  } else {
    j["log_word_prob"] = encode_matrix(nb.log_word_prob);
    if (nb.config.event_model == EventModel::kBernoulli) {
      j["log_word_absent"] = encode_matrix(nb.log_word_absent);
      j["absent_total"] = encode_matrix(nb.absent_total);
    }
  }
  const auto& st = nb.stats;
  json stats;
  stats["docs_in_class"] = st.docs_in_class;
  stats["docs_total"] = st.docs_total;
  stats["num_classes"] = st.num_classes;
  stats["words_in_class"] = st.words_in_class;
  stats["words_total"] = st.words_total;
  stats["docs_with_term"] = count_triples(st.docs_with_term);
  stats["term_count"] = count_triples(st.term_count);
  j["stats"] = std::move(stats);
  return j;
}

NbModel nb_from_json(const json& j, const PipelineConfig& config, std::vector<std::string> names) {
  NbModel nb;
  nb.config = config.nb;
  nb.class_names = std::move(names);
  const auto l = static_cast<Eigen::Index>(nb.class_names.size());
  const auto features = j.at("features").get<Eigen::Index>();
  nb.log_prior = decode_doubles(j.at("log_prior").get<std::string>());
  if (static_cast<Eigen::Index>(nb.log_prior.size()) != l) format_error("log_prior size differs from classes");
  if (nb.config.event_model == EventModel::kGaussian) {
    nb.gauss_mean = decode_matrix(j.at("gauss_mean"), l, features, "gauss_mean");
    nb.gauss_var = decode_matrix(j.at("gauss_var"), l, features, "gauss_var");
  } else {
    nb.log_word_prob = decode_matrix(j.at("log_word_prob"), l, features, "log_word_prob");
    if (nb.config.event_model == EventModel::kBernoulli) {
      nb.log_word_absent = decode_matrix(j.at("log_word_absent"), l, features, "log_word_absent");
      nb.absent_total = decode_matrix(j.at("absent_total"), l, 1, "absent_total");
    }
  }
  const auto& s = j.at("stats");
  auto& st = nb.stats;
  st.docs_in_class = s.at("docs_in_class").get<std::vector<std::int64_t>>();
  st.docs_total = s.at("docs_total").get<std::int64_t>();
  st.num_classes = s.at("num_classes").get<std::int64_t>();
  st.words_in_class = s.at("words_in_class").get<std::vector<std::int64_t>>();
  st.words_total = s.at("words_total").get<std::int64_t>();
  if (nb.config.event_model != EventModel::kGaussian) {
    st.docs_with_term = count_table(s.at("docs_with_term"), nb.class_names.size(),
                                    static_cast<std::size_t>(features));
    st.term_count = count_table(s.at("term_count"), nb.class_names.size(),
                                static_cast<std::size_t>(features));
  }
  return nb;
}

json model_body(const TrainedModel& m) {
  json j;
  j["format"] = "lsanb-model";
  j["format_version"] = kModelFormatVersion;
  j["config"] = to_json(m.config);
  j["class_names"] = m.class_names;
  j["vocabulary"] = m.vocab.terms();
  json tfidf;
  tfidf["n_train"] = m.tfidf.n_train;
  tfidf["doc_freq"] = m.tfidf.doc_freq;
  j["tfidf"] = std::move(tfidf);
  j["removed_outliers"] = m.removed_outliers;
  if (m.space) {
    json lsa;
    lsa["rank"] = m.space->rank();
    lsa["terms"] = m.space->terms();
    lsa["sigma"] = encode_matrix(m.space->sigma);
    lsa["u"] = encode_matrix(m.space->u);
    j["lsa"] = std::move(lsa);
  } else {
    j["lsa"] = nullptr;
  }
  j["selected_terms"] = m.selected_terms;
  j["nb"] = nb_to_json(m.nb);
  return j;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::kIo, "sha256 failed");
  }
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

std::string encode_doubles(std::span<const double> values) {
  std::string bytes;
  bytes.reserve(values.size() * 8);
  for (double v : values) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
  }
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<double> decode_doubles(std::string_view base64) {
  if (base64.size() % 4 != 0) format_error("base64 payload has bad length");
  std::string bytes(3 * (base64.size() / 4), '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(bytes.data()),
                                reinterpret_cast<const unsigned char*>(base64.data()),
                                static_cast<int>(base64.size()));
  if (n < 0) format_error("invalid base64 payload");
  // EVP_DecodeBlock keeps the padding bytes.
  std::size_t len = static_cast<std::size_t>(n);
  if (!base64.empty() && base64.back() == '=') --len;
  if (base64.size() >= 2 && base64[base64.size() - 2] == '=') --len;
  if (len % 8 != 0) format_error("base64 payload is not a whole number of doubles");
  std::vector<double> out(len / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i * 8 + b])) << (8 * b);
    }
    out[i] = std::bit_cast<double>(bits);
  }
  return out;
}

std::string model_digest(const TrainedModel& model) { return sha256_hex(model_body(model).dump()); }

std::string serialize_model(const TrainedModel& model) {
  json j = model_body(model);
  j["digest"] = sha256_hex(j.dump());
  return j.dump(1) + "\n";
}

TrainedModel deserialize_model(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    format_error(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "lsanb-model") format_error("not an lsanb model file");
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      format_error(fmt::format("unsupported model format version {} (expected {})", version,
                               kModelFormatVersion));
    }
    const std::string stored = j.at("digest").get<std::string>();
    j.erase("digest");
    if (sha256_hex(j.dump()) != stored) format_error("model digest mismatch: file is corrupt");

    TrainedModel m;
    m.config = pipeline_config_from_json(j.at("config"));
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
    m.vocab = Vocabulary(j.at("vocabulary").get<std::vector<std::string>>());
    m.tfidf.n_train = j.at("tfidf").at("n_train").get<std::size_t>();
    m.tfidf.doc_freq = j.at("tfidf").at("doc_freq").get<std::vector<std::size_t>>();
    m.tfidf.form = m.config.idf;
    if (m.tfidf.doc_freq.size() != m.vocab.size()) format_error("doc_freq size differs from vocabulary");
    m.removed_outliers = j.at("removed_outliers").get<std::vector<std::string>>();
    if (!j.at("lsa").is_null()) {
      const auto& lsa = j.at("lsa");
      const auto f = lsa.at("rank").get<Eigen::Index>();
      const auto terms = lsa.at("terms").get<Eigen::Index>();
      LsaSpace space;
      space.sigma = decode_matrix(lsa.at("sigma"), f, 1, "sigma");
      space.u = decode_matrix(lsa.at("u"), terms, f, "u");
      space.v.resize(0, f);
      m.space = std::move(space);
    }
    m.selected_terms = j.at("selected_terms").get<std::vector<std::size_t>>();
    for (std::size_t t : m.selected_terms) {
      if (t >= m.vocab.size()) format_error("selected term out of range");
    }
    m.nb = nb_from_json(j.at("nb"), m.config, m.class_names);
    return m;
  } catch (const nlohmann::json::exception& e) {
    format_error(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << serialize_model(model);
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

TrainedModel load_model(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_model(ss.str());
}

}  // namespace lsanb
