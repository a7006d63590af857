#include "sqlsmell/dataset.hpp"

#include <sqlite3.h>

#include <filesystem>
#include <fstream>

namespace sqlsmell {

namespace {

std::string quote_ident(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class Stmt {
 public:
  Stmt(sqlite3* db, const std::string& sql) {
    if (sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt_, nullptr) != SQLITE_OK)
      throw DatasetError(std::string("sqlite: ") + sqlite3_errmsg(db));
  }
  ~Stmt() { sqlite3_finalize(stmt_); }
  Stmt(const Stmt&) = delete;
  Stmt& operator=(const Stmt&) = delete;

  bool step() {
    int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw DatasetError(std::string("sqlite: ") + sqlite3_errmsg(sqlite3_db_handle(stmt_)));
  }
  int width() const { return sqlite3_column_count(stmt_); }
  Cell cell(int i) const {
    if (sqlite3_column_type(stmt_, i) == SQLITE_NULL) return std::nullopt;
    const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, i));
    return std::string(p ? p : "", static_cast<std::size_t>(sqlite3_column_bytes(stmt_, i)));
  }
  std::string text(int i) const { return cell(i).value_or(""); }

 private:
  sqlite3_stmt* stmt_ = nullptr;
};

class SqliteAdapter : public DatasetAdapter {
 public:
  explicit SqliteAdapter(const std::string& path) : path_(path) {
    if (sqlite3_open_v2(path.c_str(), &db_, SQLITE_OPEN_READONLY, nullptr) != SQLITE_OK) {
      std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
      sqlite3_close(db_);
      throw DatasetError("cannot open " + path + ": " + msg);
    }
  }
  ~SqliteAdapter() override { sqlite3_close(db_); }

  std::vector<std::string> tables() override {
    std::vector<std::string> out;
    Stmt st(db_,
            "SELECT name FROM sqlite_master WHERE type = 'table' AND name NOT LIKE 'sqlite_%' "
            "ORDER BY rowid");
    while (st.step()) out.push_back(st.text(0));
    return out;
  }

  std::vector<std::string> columns(const std::string& table) override {
    return table_info(table, 1);
  }

  std::vector<std::string> declared_types(const std::string& table) override {
    return table_info(table, 2);
  }

  void scan(const std::string& table, const std::function<bool(const Row&)>& visit) override {
    Stmt st(db_, "SELECT * FROM " + quote_ident(table));
    while (st.step()) {
      Row row;
      row.reserve(static_cast<std::size_t>(st.width()));
      for (int i = 0; i < st.width(); ++i) row.push_back(st.cell(i));
      if (!visit(row)) break;
    }
  }

  std::vector<std::string> ddl() override {
    std::vector<std::string> out;
    Stmt st(db_,
            "SELECT sql FROM sqlite_master WHERE type IN ('table', 'index') AND sql IS NOT NULL "
            "AND name NOT LIKE 'sqlite_%' ORDER BY rowid");
    while (st.step()) out.push_back(st.text(0));
    return out;
  }

  std::string describe() const override { return "sqlite:" + path_; }

 private:
  std::vector<std::string> table_info(const std::string& table, int field) {
    std::vector<std::string> out;
    Stmt st(db_, "PRAGMA table_info(" + quote_ident(table) + ")");
    while (st.step()) out.push_back(st.text(field));
    if (out.empty()) throw DatasetError("no such table: " + table);
    return out;
  }

  std::string path_;
  sqlite3* db_ = nullptr;
};

bool has_sqlite_header(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char buf[16] = {};
  in.read(buf, sizeof buf);
  return in.gcount() == 16 && std::string(buf, 15) == "SQLite format 3" && buf[15] == '\0';
}

}  // namespace

std::unique_ptr<DatasetAdapter> open_sqlite(const std::string& path) {
  if (!has_sqlite_header(path)) throw DatasetError(path + " is not an SQLite database");
  return std::make_unique<SqliteAdapter>(path);
}

std::unique_ptr<DatasetAdapter> open_dataset(const std::string& path) {
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) return open_csv_dir(path);
  if (!std::filesystem::exists(path, ec)) throw DatasetError("dataset not found: " + path);
  if (has_sqlite_header(path)) return open_sqlite(path);
  throw DatasetError("unrecognized dataset (expected SQLite file or CSV directory): " + path);
}

}  // namespace sqlsmell
