#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dnls/io.hpp"

namespace dnls::io {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CsvWriter::Impl {
  std::ofstream out;
  std::size_t columns = 0;
  std::size_t filled = 0;
  std::string row;
  std::string path;
};

CsvWriter::CsvWriter(const std::string& path, std::vector<std::string> header) : impl_(new Impl) {
  impl_->out.open(path, std::ios::binary | std::ios::trunc);
  impl_->path = path;
  if (!impl_->out) {
    delete impl_;
    throw ConfigError("csv: cannot write " + path);
  }
  impl_->columns = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) impl_->out << ',';
    impl_->out << header[i];
  }
  impl_->out << '\n';
}

CsvWriter::~CsvWriter() { delete impl_; }

CsvWriter& CsvWriter::cell(double v) { return cell(format_number(v)); }

CsvWriter& CsvWriter::cell(int v) { return cell(std::to_string(v)); }

CsvWriter& CsvWriter::cell(const std::string& v) {
  if (impl_->filled) impl_->row += ',';
  impl_->row += v;
  ++impl_->filled;
  return *this;
}

void CsvWriter::end_row() {
  if (impl_->filled != impl_->columns) {
    throw Error("csv: row has " + std::to_string(impl_->filled) + " cells, header has " +
                std::to_string(impl_->columns) + " (" + impl_->path + ")");
  }
  impl_->out << impl_->row << '\n';
  impl_->row.clear();
  impl_->filled = 0;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ConfigError("csv: no column named " + name);
}

double Table::number(std::size_t row, const std::string& name) const {
  const std::string& cell = rows.at(row).at(column(name));
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || *end != '\0') throw ConfigError("csv: '" + cell + "' is not a number");
  return v;
}

Table read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("csv: cannot read " + path);
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("csv: empty file " + path);
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> row = split(line);
    if (row.size() != t.header.size()) {
      throw ConfigError("csv: ragged row in " + path);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace dnls::io
