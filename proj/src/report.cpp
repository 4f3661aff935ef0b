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

#include "mateval/report.hpp"

#include <cstdio>

namespace mateval {

namespace {

using ojson = nlohmann::ordered_json;

ojson columns_json(const ScoreColumns& c) {
  ojson j = ojson::object();
  j["precision"] = c.precision;
  j["recall"] = c.recall;
  j["f1"] = c.f1;
  j["headers"] = c.headers;
  j["curves"] = c.curves;
  j["cas"] = c.cas;
  return j;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void append_row(std::string& out, char d, const std::string& id,
                const ScoreColumns& c) {
  out += id;
  for (double v : {c.precision, c.recall, c.f1, c.headers, c.curves, c.cas}) {
    out += d;
    out += num(v);
  }
  out += '\n';
}

}  // namespace

ojson report_to_json(const CorpusReport& report) {
  ojson j = ojson::object();
  j["fingerprint"] = report.fingerprint;
  j["aggregates"] = columns_json(report.aggregates);
  ojson papers = ojson::array();
  for (const auto& s : report.per_paper) {
    ojson p = ojson::object();
    p["paper_id"] = s.paper_id;
    p["columns"] = columns_json(s.columns);
    p["matched_sample_count"] = s.matched_sample_count;
    p["matched_curve_count"] = s.matched_curve_count;
    p["tp"] = s.tp;
    p["fp"] = s.fp;
    p["fn"] = s.fn;
    p["curve_slots"] = s.curve_slots;
    papers.push_back(std::move(p));
  }
  j["per_paper"] = std::move(papers);
  ojson failures = ojson::array();
  for (const auto& f : report.failures)
    failures.push_back({{"paper_id", f.paper_id}, {"message", f.message}});
  j["failures"] = std::move(failures);
  j["warnings"] = report.warnings;
  return j;
}

std::string report_to_table(const CorpusReport& report, char delimiter) {
  std::string out = "paper_id";
  for (const char* h : {"precision", "recall", "f1", "headers", "curves", "cas"}) {
    out += delimiter;
    out += h;
  }
  out += '\n';
  for (const auto& s : report.per_paper)
    append_row(out, delimiter, s.paper_id, s.columns);
  append_row(out, delimiter, "__aggregate__", report.aggregates);
  return out;
}

}  // namespace mateval
