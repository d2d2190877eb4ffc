#include "tensor_io.hpp"

#include "error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace fcg {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& msg) {
  throw Error(ErrorCode::ParseError, "tensor file: " + msg);
}

int read_positive_int(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer()) {
    parse_fail(std::string("missing integer field '") + key + "'");
  }
  const auto v = doc[key].get<long long>();
  if (v < 1 || v > (1 << 30)) parse_fail(std::string("field '") + key + "' out of range");
  return static_cast<int>(v);
}

}  // namespace

SymTensor parse_tensor_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(e.what());
  }
  if (!doc.is_object()) parse_fail("top level must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "order" && key != "dim" && key != "entries") parse_fail("unknown field '" + key + "'");
  }
  const int order = read_positive_int(doc, "order");
  const int dim = read_positive_int(doc, "dim");
  if (order < 2) parse_fail("order must be >= 2");
  if (!doc.contains("entries") || !doc["entries"].is_array()) parse_fail("missing 'entries' array");

  std::vector<TensorEntry> entries;
  entries.reserve(doc["entries"].size());
  for (const auto& e : doc["entries"]) {
    if (!e.is_object() || !e.contains("idx") || !e.contains("val") || e.size() != 2) {
      parse_fail("each entry must be {\"idx\": [...], \"val\": number}");
    }
    const auto& idx = e["idx"];
    const auto& val = e["val"];
    if (!idx.is_array() || static_cast<int>(idx.size()) != order) {
      parse_fail("idx must be a list of " + std::to_string(order) + " integers");
    }
    if (!val.is_number()) parse_fail("val must be a number");
    TensorEntry t;
    t.value = val.get<double>();
    if (!std::isfinite(t.value)) parse_fail("val must be finite");
    for (const auto& i : idx) {
      if (!i.is_number_integer()) parse_fail("idx must contain integers");
      const auto v = i.get<long long>();
      if (!t.index.empty() && v < t.index.back() + 1) parse_fail("idx must be sorted non-decreasing");
      if (v < 1 || v > dim) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "tensor file: index " + std::to_string(v) + " outside [1, " +
                        std::to_string(dim) + "]");
      }
      t.index.push_back(static_cast<int>(v - 1));
    }
    entries.push_back(std::move(t));
  }
  return SymTensor::dense(order, dim, entries);
}

SymTensor load_tensor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open tensor file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_tensor_json(ss.str());
}

std::string tensor_to_json(const SymTensor& t) {
  const SymTensor dense = t.expanded();
  json entries = json::array();
  for (std::size_t k = 0; k < dense.unique_count(); ++k) {
    json idx = json::array();
    for (int i : dense.unique_index(k)) idx.push_back(i + 1);
    entries.push_back({{"idx", std::move(idx)}, {"val", dense.unique_value(k)}});
  }
  json doc = {{"order", t.order()}, {"dim", t.dim()}, {"entries", std::move(entries)}};
  return doc.dump();
}

void save_tensor_file(const SymTensor& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write tensor file '" + path + "'");
  out << tensor_to_json(t) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

}  // namespace fcg
