#pragma once

#include <string>
#include <vector>

namespace lswspec {

//! Minimal CSV writing with deterministic number formatting (%.17g round
//! trips doubles exactly).
class CsvWriter {
public:
  explicit CsvWriter(std::string path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void header(const std::vector<std::string>& names);
  CsvWriter& cell(double v);
  CsvWriter& cell(long v);
  CsvWriter& cell(const std::string& v);
  void end_row();

private:
  void sep();
  std::string path_;
  std::string buf_;
  bool row_open_ = false;
};

std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

//! Reads a CSV written by CsvWriter (no quoting, comma-separated). Throws
//! InputError on ragged rows.
CsvTable read_csv(const std::string& path);

//! Convenience: single numeric column by name.
std::vector<double> read_csv_column(const std::string& path,
                                    const std::string& name);

} // namespace lswspec
