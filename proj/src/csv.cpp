#include "lswspec/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "lswspec/errors.hpp"

namespace lswspec {

std::string format_double(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::string path) : path_(std::move(path)) {}

CsvWriter::~CsvWriter()
{
  std::ofstream out(path_, std::ios::binary);
  out << buf_;
}

void CsvWriter::header(const std::vector<std::string>& names)
{
  for (size_t i = 0; i < names.size(); ++i) {
    if (i)
      buf_ += ',';
    buf_ += names[i];
  }
  buf_ += '\n';
}

void CsvWriter::sep()
{
  if (row_open_)
    buf_ += ',';
  row_open_ = true;
}

CsvWriter& CsvWriter::cell(double v)
{
  sep();
  buf_ += format_double(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long v)
{
  sep();
  buf_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::cell(const std::string& v)
{
  sep();
  buf_ += v;
  return *this;
}

void CsvWriter::end_row()
{
  buf_ += '\n';
  row_open_ = false;
}

int CsvTable::column(const std::string& name) const
{
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name)
      return static_cast<int>(i);
  return -1;
}

CsvTable read_csv(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InputError("cannot open CSV file: " + path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    std::vector<std::string> cells;
    size_t pos = 0;
    while (true) {
      const size_t comma = line.find(',', pos);
      cells.push_back(line.substr(pos, comma == std::string::npos
                                         ? std::string::npos
                                         : comma - pos));
      if (comma == std::string::npos)
        break;
      pos = comma + 1;
    }
    if (first) {
      table.header = std::move(cells);
      first = false;
      continue;
    }
    if (cells.size() != table.header.size())
      throw InputError("ragged CSV row in " + path);
    table.rows.push_back(std::move(cells));
  }
  if (first)
    throw InputError("empty CSV file: " + path);
  return table;
}

std::vector<double> read_csv_column(const std::string& path,
                                    const std::string& name)
{
  const CsvTable table = read_csv(path);
  const int col = table.column(name);
  if (col < 0)
    throw InputError("CSV file " + path + " has no column '" + name + "'");
  std::vector<double> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    try {
      out.push_back(std::stod(row[static_cast<size_t>(col)]));
    } catch (const std::exception&) {
      throw InputError("non-numeric cell in " + path);
    }
  }
  return out;
}

} // namespace lswspec
