#include "cli/record.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "json.hpp"

namespace seba::cli {

Record& Record::set(std::string key, Value value) {
  fields_.emplace_back(std::move(key), std::move(value));
  return *this;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

namespace {

std::string cell(const Value& v) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(std::uint64_t u) const { return std::to_string(u); }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, v);
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

nlohmann::json to_json(const Value& v) {
  struct Visitor {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(bool b) const { return b; }
    nlohmann::json operator()(std::int64_t i) const { return i; }
    nlohmann::json operator()(std::uint64_t u) const { return u; }
    nlohmann::json operator()(double d) const {
      // JSON has no NaN or infinity.
      if (!std::isfinite(d)) return format_double(d);
      return d;
    }
    nlohmann::json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, v);
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<Record>& records) {
  if (records.empty()) return;
  const auto& head = records.front().fields();
  for (std::size_t i = 0; i < head.size(); ++i) {
    out << (i ? "," : "") << quote(head[i].first);
  }
  out << '\n';
  for (const auto& r : records) {
    const auto& f = r.fields();
    for (std::size_t i = 0; i < f.size(); ++i) {
      out << (i ? "," : "") << quote(cell(f[i].second));
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<Record>& records) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json row = nlohmann::json::object();
    for (const auto& [k, v] : r.fields()) row[k] = to_json(v);
    doc.push_back(std::move(row));
  }
  out << doc.dump(2) << '\n';
}

void write(std::ostream& out, const std::vector<Record>& records, Format format) {
  if (format == Format::csv) {
    write_csv(out, records);
  } else {
    write_json(out, records);
  }
}

}  // namespace seba::cli
