#include "sqlsmell/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace sqlsmell {

std::vector<Row> parse_csv(const std::string& text) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  bool quoted = false;      // current field was quoted
  bool in_quotes = false;
  bool any = false;         // current record has content
  auto end_field = [&] {
    if (!quoted && field.empty())
      row.push_back(std::nullopt);
    else
      row.push_back(field);
    field.clear();
    quoted = false;
  };
  auto end_record = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
    any = false;
  };
  std::size_t i = 0;
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) i = 3;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty() && !quoted) {
      in_quotes = quoted = any = true;
    } else if (c == ',') {
      end_field();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty() || !row.empty()) end_record();
    } else {
      field += c;
      any = true;
    }
  }
  if (in_quotes) throw DatasetError("csv: unterminated quoted field");
  if (any || !field.empty() || !row.empty()) end_record();
  return rows;
}

namespace {

class CsvAdapter : public DatasetAdapter {
 public:
  explicit CsvAdapter(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
      if (!entry.is_regular_file()) continue;
      std::string ext = entry.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
      if (ext == ".csv") files_[entry.path().stem().string()] = entry.path().string();
    }
    if (ec) throw DatasetError("cannot list " + dir + ": " + ec.message());
  }

  std::vector<std::string> tables() override {
    std::vector<std::string> out;
    for (const auto& [name, path] : files_) out.push_back(name);
    return out;
  }

  std::vector<std::string> columns(const std::string& table) override {
    const auto& rows = load(table);
    std::vector<std::string> out;
    if (rows.empty()) return out;
    for (const auto& c : rows.front()) out.push_back(c.value_or(""));
    return out;
  }

  std::vector<std::string> declared_types(const std::string& table) override {
    return std::vector<std::string>(columns(table).size());
  }

  void scan(const std::string& table, const std::function<bool(const Row&)>& visit) override {
    const auto& rows = load(table);
    if (rows.empty()) return;
    std::size_t width = rows.front().size();
    for (std::size_t r = 1; r < rows.size(); ++r) {
      Row row = rows[r];
      row.resize(width);
      if (!visit(row)) break;
    }
  }

  std::string describe() const override { return "csv:" + dir_; }

 private:
  const std::vector<Row>& load(const std::string& table) {
    auto cached = cache_.find(table);
    if (cached != cache_.end()) return cached->second;
    auto it = files_.find(table);
    if (it == files_.end()) throw DatasetError("no such table: " + table);
    std::ifstream in(it->second, std::ios::binary);
    if (!in) throw DatasetError("cannot read " + it->second);
    std::ostringstream buf;
    buf << in.rdbuf();
    return cache_[table] = parse_csv(buf.str());
  }

  std::string dir_;
  std::map<std::string, std::string> files_;
  std::map<std::string, std::vector<Row>> cache_;
};

}  // namespace

std::unique_ptr<DatasetAdapter> open_csv_dir(const std::string& path) {
  return std::make_unique<CsvAdapter>(path);
}

}  // namespace sqlsmell
