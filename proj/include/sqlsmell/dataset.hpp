// ---------------------------------------------------------------------------
// dataset.hpp
//
// Read-only access to application data for profiling. Two backends: an
// SQLite database file and a directory of CSV files (one per table).
// ---------------------------------------------------------------------------
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqlsmell {

struct DatasetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// nullopt is SQL NULL.
using Cell = std::optional<std::string>;
using Row = std::vector<Cell>;

class DatasetAdapter {
 public:
  virtual ~DatasetAdapter() = default;

  virtual std::vector<std::string> tables() = 0;
  virtual std::vector<std::string> columns(const std::string& table) = 0;
  // Declared column types, parallel to columns(); empty strings when the
  // backend has no type information.
  virtual std::vector<std::string> declared_types(const std::string& table) = 0;
  // Calls `visit` for each row in storage order until it returns false.
  virtual void scan(const std::string& table, const std::function<bool(const Row&)>& visit) = 0;
  // Schema DDL stored alongside the data, if any.
  virtual std::vector<std::string> ddl() { return {}; }
  virtual std::string describe() const = 0;
};

std::unique_ptr<DatasetAdapter> open_sqlite(const std::string& path);
std::unique_ptr<DatasetAdapter> open_csv_dir(const std::string& path);
// Directory -> CSV, file with the SQLite header -> SQLite.
std::unique_ptr<DatasetAdapter> open_dataset(const std::string& path);

// RFC 4180 record parsing. An empty unquoted field is NULL; "" is the empty
// string. Throws DatasetError on an unterminated quote.
std::vector<Row> parse_csv(const std::string& text);

}  // namespace sqlsmell
