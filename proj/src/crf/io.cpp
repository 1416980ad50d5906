#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "refparse/crf.hpp"
#include "refparse/error.hpp"

namespace refparse::crf {

namespace {

constexpr std::string_view kFormatName = "refparse-crf";

std::vector<double> read_weights(const nlohmann::json& j, const char* key, std::size_t expected) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_array()) throw ModelFormatError(std::string("model file lacks '") + key + "'");
  if (it->size() != expected) {
    throw ModelFormatError(std::string("'") + key + "' has " + std::to_string(it->size()) + " entries, expected " +
                           std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& v : *it) {
    if (!v.is_number()) throw ModelFormatError(std::string("non-numeric weight in '") + key + "'");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ModelFormatError(std::string("non-finite weight in '") + key + "'");
    out.push_back(x);
  }
  return out;
}

}  // namespace

std::string save_model(const CrfModel& model) {
  nlohmann::ordered_json j;
  j["format"] = kFormatName;
  j["version"] = kModelFormatVersion;
  auto& labels = j["labels"] = nlohmann::ordered_json::array();
  for (Label l : model.labels()) labels.push_back(std::string(to_string(l)));
  j["features"] = std::vector<std::string>(model.vectorizer().names().begin(), model.vectorizer().names().end());
  const auto w = model.weights();
  const std::size_t e = model.shape().emission_size();
  j["emission_weights"] = std::vector<double>(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(e));
  j["transition_weights"] = std::vector<double>(w.begin() + static_cast<std::ptrdiff_t>(e), w.end());
  j["lambda"] = model.lambda();
  return j.dump();
}

CrfModel load_model(std::string_view bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelFormatError(std::string("corrupt model file: ") + e.what());
  }
  if (!j.is_object() || j.value("format", std::string()) != kFormatName) {
    throw ModelFormatError("not a refparse CRF model file");
  }
  const auto version = j.find("version");
  if (version == j.end() || !version->is_number_integer()) throw ModelFormatError("model file lacks a version");
  if (version->get<long long>() != kModelFormatVersion) {
    throw ModelFormatError("incompatible model format version " + std::to_string(version->get<long long>()) +
                           " (this build reads version " + std::to_string(kModelFormatVersion) + ")");
  }

  try {
    std::vector<Label> labels;
    for (const auto& l : j.at("labels")) {
      const auto parsed = parse_label(l.get<std::string>());
      if (!parsed) throw ModelFormatError("unknown label '" + l.get<std::string>() + "'");
      labels.push_back(*parsed);
    }
    auto names = j.at("features").get<std::vector<std::string>>();
    const double lambda = j.at("lambda").get<double>();
    CrfModel model(FeatureVectorizer(std::move(names)), std::move(labels), lambda);
    const Shape shape = model.shape();
    const auto emission = read_weights(j, "emission_weights", shape.emission_size());
    const auto transition = read_weights(j, "transition_weights", shape.labels * shape.labels);
    auto w = model.weights();
    std::copy(emission.begin(), emission.end(), w.begin());
    std::copy(transition.begin(), transition.end(), w.begin() + static_cast<std::ptrdiff_t>(emission.size()));
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("malformed model file: ") + e.what());
  } catch (const ModelFormatError&) {
    throw;
  } catch (const Error& e) {
    throw ModelFormatError(std::string("invalid model: ") + e.what());
  }
}

void save_model_file(const CrfModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file '" + path + "'");
  out << save_model(model);
  if (!out) throw Error("failed writing model file '" + path + "'");
}

CrfModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_model(ss.str());
}

}  // namespace refparse::crf
