// Copyright 2026 The mateval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mateval/sample_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mateval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kProperties = "Properties";
constexpr std::string_view kBiodegradation = "Biodegradation";

class Reader {
 public:
  Reader(ParseMode mode, std::vector<std::string>* diagnostics)
      : mode_(mode), diagnostics_(diagnostics) {}

  bool strict() const { return mode_ == ParseMode::kStrict; }

  // Strict mode throws; lenient mode records the repair and returns.
  void reject(const std::string& what, const std::string& field) {
    if (strict()) throw SchemaError(what, field);
    if (diagnostics_) diagnostics_->push_back(what);
  }

  Field text_value(const json& v, const std::string& field) {
    if (v.is_null()) return std::nullopt;
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    reject("field '" + field + "' must be a string or null", field);
    return std::nullopt;
  }

  std::optional<double> number(const json& v, const std::string& field) {
    double out = 0.0;
    if (v.is_number()) {
      out = v.get<double>();
    } else if (v.is_string()) {
      std::string s = v.get<std::string>();
      const auto first = s.find_first_not_of(" \t");
      const auto last = s.find_last_not_of(" \t");
      if (first == std::string::npos) {
        reject("empty coordinate in '" + field + "'", field);
        return std::nullopt;
      }
      s = s.substr(first, last - first + 1);
      const char* begin = s.data();
      if (!s.empty() && s.front() == '+') ++begin;
      const auto res = std::from_chars(begin, s.data() + s.size(), out);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        reject("non-numeric coordinate '" + s + "' in '" + field + "'", field);
        return std::nullopt;
      }
    } else {
      reject("coordinate in '" + field + "' must be a number", field);
      return std::nullopt;
    }
    if (!std::isfinite(out)) {
      reject("non-finite coordinate in '" + field + "'", field);
      return std::nullopt;
    }
    return out;
  }

  // Returns nullopt when the curve had to be dropped (lenient mode only).
  std::optional<PointSeq> points(const json& data, const std::string& field) {
    PointSeq out;
    if (data.is_null()) return out;
    if (data.is_string() && !normalize_field(data.get<std::string>())) {
      return out;
    }
    if (!data.is_array()) {
      reject("'" + field + "' must be a list of [x, y] pairs", field);
      return std::nullopt;
    }
    for (const auto& p : data) {
      if (!p.is_array() || p.size() != 2) {
        reject("'" + field + "' entries must be 2-element arrays", field);
        return std::nullopt;
      }
      const auto x = number(p[0], field);
      const auto y = number(p[1], field);
      if (!x || !y) return std::nullopt;
      out.push_back({*x, *y});
    }
    return out;
  }

  bool headers(const json& h, const std::string& field, Curve& curve) {
    if (h.is_null()) return true;
    if (!h.is_array() || h.size() != 2) {
      reject("'" + field + "' must be a 2-element array", field);
      return false;
    }
    const auto x = text_value(h[0], field);
    const auto y = text_value(h[1], field);
    curve.x_header = normalize_field(x).value_or("");
    curve.y_header = normalize_field(y).value_or("");
    return true;
  }

  std::optional<Curve> pnc_curve(const json& j) {
    const std::string field(kProperties);
    if (!j.is_object()) {
      reject("each entry of 'Properties' must be an object", field);
      return std::nullopt;
    }
    Curve curve;
    bool have_name = false;
    const json* headers_json = nullptr;
    const json* data_json = nullptr;
    for (const auto& [key, value] : j.items()) {
      if (key == "property name") {
        const auto name = text_value(value, key);
        const auto cat = name ? parse_category(*name) : std::nullopt;
        if (!cat || !category_allowed(Domain::kPNC, *cat)) {
          reject("unknown property name '" + name.value_or("null") + "'",
                 key);
          return std::nullopt;
        }
        curve.category = *cat;
        have_name = true;
      } else if (key == "headers" || (!strict() && key == "header")) {
        headers_json = &value;
      } else if (key == "data") {
        data_json = &value;
      } else {
        reject("unknown property key '" + key + "'", key);
      }
    }
    if (!have_name) {
      reject("property is missing 'property name'", "property name");
      return std::nullopt;
    }
    if (headers_json && !headers(*headers_json, "headers", curve))
      return std::nullopt;
    if (data_json) {
      auto pts = points(*data_json, "data");
      if (!pts) return std::nullopt;
      curve.points = std::move(*pts);
    }
    return curve;
  }

  std::optional<Curve> pbd_curve(const json& j) {
    const std::string field(kBiodegradation);
    if (j.is_null()) return std::nullopt;
    if (!j.is_object()) {
      reject("'Biodegradation' must be an object or null", field);
      return std::nullopt;
    }
    Curve curve;
    curve.category = PropertyCategory::kBiodegradation;
    bool any = false;
    for (const auto& [key, value] : j.items()) {
      if (key == "header" || (!strict() && key == "headers")) {
        if (!headers(value, "header", curve)) return std::nullopt;
        any = any || !value.is_null();
      } else if (key == "data") {
        auto pts = points(value, "data");
        if (!pts) return std::nullopt;
        curve.points = std::move(*pts);
        any = true;
      } else {
        reject("unknown biodegradation key '" + key + "'", key);
      }
    }
    if (!any) return std::nullopt;
    return curve;
  }

 private:
  ParseMode mode_;
  std::vector<std::string>* diagnostics_;
};

bool is_percentage_key(std::string_view key) {
  return key == "Filler Mass" || key == "Filler Volume";
}

json::array_t points_json(const PointSeq& pts) {
  json::array_t out;
  for (const auto& p : pts) out.push_back(json::array({p.x, p.y}));
  return out;
}

}  // namespace

SampleRecord sample_from_json(const json& j, Domain domain, ParseMode mode,
                              std::vector<std::string>* diagnostics) {
  Reader reader(mode, diagnostics);
  if (!j.is_object()) {
    throw SchemaError("sample must be a JSON object", "");
  }
  SampleRecord sample{empty_composition(domain), {}};
  for (const auto& [key, value] : j.items()) {
    if (domain == Domain::kPNC && key == kProperties) {
      if (value.is_null()) continue;
      if (!value.is_array()) {
        reader.reject("'Properties' must be a list", key);
        continue;
      }
      for (const auto& entry : value) {
        if (auto curve = reader.pnc_curve(entry))
          sample.properties.push_back(std::move(*curve));
      }
      continue;
    }
    if (domain == Domain::kPBD && key == kBiodegradation) {
      if (auto curve = reader.pbd_curve(value))
        sample.properties.push_back(std::move(*curve));
      continue;
    }
    Field* field = composition_field(sample.composition, key);
    if (!field) {
      reader.reject("unknown field '" + key + "' for " +
                        std::string(domain_name(domain)) + " sample",
                    key);
      continue;
    }
    const Field raw = reader.text_value(value, key);
    *field = is_percentage_key(key) ? normalize_percentage(raw)
                                    : normalize_field(raw);
  }
  return sample;
}

SampleRecord parse_sample_file(std::string_view raw, Domain domain) {
  json j;
  try {
    j = json::parse(raw.begin(), raw.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  return sample_from_json(j, domain, ParseMode::kStrict);
}

nlohmann::ordered_json sample_to_json(const SampleRecord& sample) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& f : composition_fields(sample.composition)) {
    const std::string key(f.key);
    if (f.value->has_value()) {
      out[key] = **f.value;
    } else {
      out[key] = nullptr;
    }
  }
  if (composition_domain(sample.composition) == Domain::kPNC) {
    auto props = nlohmann::ordered_json::array();
    for (const auto& c : sample.properties) {
      nlohmann::ordered_json p = nlohmann::ordered_json::object();
      p["data"] = points_json(c.points);
      p["headers"] = {c.x_header, c.y_header};
      p["property name"] = std::string(category_name(c.category));
      props.push_back(std::move(p));
    }
    out[std::string(kProperties)] = std::move(props);
  } else {
    if (sample.properties.size() > 1) {
      throw ContractError("PBD sample carries more than one curve");
    }
    if (sample.properties.empty()) {
      out[std::string(kBiodegradation)] = nullptr;
    } else {
      const auto& c = sample.properties.front();
      nlohmann::ordered_json b = nlohmann::ordered_json::object();
      b["header"] = {c.x_header, c.y_header};
      b["data"] = points_json(c.points);
      out[std::string(kBiodegradation)] = std::move(b);
    }
  }
  return out;
}

std::string serialize_sample(const SampleRecord& sample) {
  return sample_to_json(sample).dump(4) + "\n";
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("short write to " + path.string());
}

PaperRecord load_paper(const fs::path& dir, Domain domain) {
  PaperRecord paper;
  paper.paper_id = dir.filename().string();
  paper.domain = domain;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("sample_") &&
        name.ends_with(".json")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      paper.samples.push_back(parse_sample_file(read_file(f), domain));
    } catch (const ParseError& e) {
      throw ParseError(f.string() + ": " + e.what(), e.offset());
    } catch (const SchemaError& e) {
      throw SchemaError(f.string() + ": " + e.what(), e.field());
    }
  }
  return paper;
}

std::vector<PaperRecord> load_corpus(const fs::path& root, Domain domain) {
  if (!fs::is_directory(root)) {
    throw Error("corpus directory not found: " + root.string());
  }
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<PaperRecord> out;
  out.reserve(dirs.size());
  for (const auto& d : dirs) out.push_back(load_paper(d, domain));
  return out;
}

void write_paper(const fs::path& root, const PaperRecord& paper) {
  const fs::path dir = root / paper.paper_id;
  fs::create_directories(dir);
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.starts_with("sample_") && name.ends_with(".json"))
      fs::remove(entry.path());
  }
  for (std::size_t i = 0; i < paper.samples.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "sample_%03zu.json", i);
    write_file(dir / name, serialize_sample(paper.samples[i]));
  }
}

}  // namespace mateval
