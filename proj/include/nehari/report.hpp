#ifndef NEHARI_REPORT_HPP_
#define NEHARI_REPORT_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "nehari/config.hpp"

namespace nehari {

/// One quantity per line: tag, name, value separated by tabs. Reals use
/// "%.17g" so identical runs give identical bytes.
class Report {
 public:
  Report(const RunConfig& cfg, std::string command);

  void add(const std::string& tag, const std::string& name, double value);
  void add(const std::string& tag, const std::string& name, long long value);
  void add(const std::string& tag, const std::string& name, int value) { add(tag, name, static_cast<long long>(value)); }
  void add(const std::string& tag, const std::string& name, bool value);
  void add(const std::string& tag, const std::string& name, const std::string& value);
  void add(const std::string& tag, const std::string& name, const char* value) { add(tag, name, std::string(value)); }

  const std::vector<std::string>& lines() const { return lines_; }
  std::string text() const;
  void write(std::ostream& os) const { os << text(); }
  /// Writes <dir>/<command>.tsv, creating dir if needed.
  std::string save(const std::string& dir) const;

 private:
  std::string command_;
  std::vector<std::string> lines_;
};

/// node,value rows with a header line.
void write_solution_csv(const std::string& path, const GridFunction& u);
/// Reads node,value rows (an optional header is skipped); the row count must match the grid.
GridFunction read_solution_csv(const std::string& path, const GridPtr& grid);

}  // namespace nehari

#endif  // NEHARI_REPORT_HPP_
