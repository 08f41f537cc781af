#pragma once

// Pass/fail records emitted by the experiment suites.  A record pins one
// checked quantity: the op that produced it, a short anchor naming the
// identity or example being checked, an FNV-1a digest of the inputs, the
// computed value (absent for verdict-style records such as divergence),
// the expected value when there is one, and the tolerance the comparison
// used.  Reports serialize to JSON (primary) and CSV and are byte-stable
// for a fixed config and seed.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace miso::lab {

struct Record {
  std::string op;
  std::string anchor;
  std::string inputs_digest;
  std::optional<double> value;
  std::optional<double> expected;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;  // free-form verdict text, e.g. "diverges"
};

/// 64-bit FNV-1a over a textual description of a record's inputs.
inline std::string fnv1a_digest(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Report {
  std::vector<Record> records;

  int failed() const {
    int n = 0;
    for (const auto& r : records) n += r.pass ? 0 : 1;
    return n;
  }
  int passed() const { return static_cast<int>(records.size()) - failed(); }

  nlohmann::json to_json() const {
    nlohmann::json out;
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& r : records) {
      nlohmann::json e;
      e["op"] = r.op;
      e["anchor"] = r.anchor;
      e["inputs-digest"] = r.inputs_digest;
      if (r.value) {
        e["value"] = *r.value;
      } else {
        e["value"] = nullptr;
      }
      if (r.expected) {
        e["expected"] = *r.expected;
      } else {
        e["expected"] = nullptr;
      }
      e["tolerance"] = r.tolerance;
      e["pass"] = r.pass;
      e["note"] = r.note;
      recs.push_back(std::move(e));
    }
    out["records"] = std::move(recs);
    out["summary"] = {{"records", records.size()},
                      {"passed", passed()},
                      {"failed", failed()}};
    return out;
  }

  std::string to_json_text() const { return to_json().dump(2) + "\n"; }

  std::string to_csv() const {
    auto field = [](const std::string& s) {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char c : s) {
        if (c == '"') q += '"';
        q += c;
      }
      q += '"';
      return q;
    };
    auto num = [](const std::optional<double>& v) -> std::string {
      if (!v) return "";
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", *v);
      return buf;
    };
    std::string out = "op,anchor,inputs-digest,value,expected,tolerance,pass,note\n";
    for (const auto& r : records) {
      out += field(r.op) + ',' + field(r.anchor) + ',' + r.inputs_digest + ',';
      out += num(r.value) + ',' + num(r.expected) + ',';
      out += num(r.tolerance) + ',';
      out += r.pass ? "true" : "false";
      out += ',' + field(r.note) + '\n';
    }
    return out;
  }
};

}  // namespace miso::lab
