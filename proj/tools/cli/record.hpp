#pragma once

// Flat result rows and their CSV / JSON encodings.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace seba::cli {

/// A cell; monostate is an absent value (empty in CSV, null in JSON).
using Value = std::variant<std::monostate, bool, std::int64_t, std::uint64_t,
                           double, std::string>;

class Record {
 public:
  Record& set(std::string key, Value value);
  const std::vector<std::pair<std::string, Value>>& fields() const noexcept {
    return fields_;
  }

 private:
  std::vector<std::pair<std::string, Value>> fields_;
};

enum class Format { csv, json };

/// Shortest representation that reads back to the same double.
std::string format_double(double v);

/// Header row from the first record's keys, then one line per record.
/// Fields are quoted per RFC 4180 when needed; lines end in "\n".
void write_csv(std::ostream& out, const std::vector<Record>& records);

/// Array of flat objects with keys in sorted order, indented by two spaces.
void write_json(std::ostream& out, const std::vector<Record>& records);

void write(std::ostream& out, const std::vector<Record>& records, Format format);

}  // namespace seba::cli
