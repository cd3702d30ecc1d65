#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsanb/pipeline.hpp"

namespace lsanb {

inline constexpr int kModelFormatVersion = 1;

// JSON text; dense arrays are base64 little-endian IEEE-754 doubles, sparse
// count tables are [class, term, count] triples. The trailing "digest" field
// is the SHA-256 of the compact dump of every other field.
std::string serialize_model(const TrainedModel& model);
// Rejects unknown format versions and digest mismatches with FormatError.
TrainedModel deserialize_model(std::string_view text);

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

std::string model_digest(const TrainedModel& model);

std::string sha256_hex(std::string_view data);
std::string encode_doubles(std::span<const double> values);
std::vector<double> decode_doubles(std::string_view base64);

}  // namespace lsanb
