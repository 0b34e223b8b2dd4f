#include "nehari/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nehari/errors.hpp"

namespace nehari {

Report::Report(const RunConfig& cfg, std::string command) : command_(std::move(command)) {
  add("run", "command", command_);
  add("run", "config_hash", hex64(config_hash(cfg)));
  add("run", "seed", static_cast<long long>(cfg.solver.seed));
}

void Report::add(const std::string& tag, const std::string& name, double value) {
  lines_.push_back(tag + '\t' + name + '\t' + format_real(value));
}

void Report::add(const std::string& tag, const std::string& name, long long value) {
  lines_.push_back(tag + '\t' + name + '\t' + std::to_string(value));
}

void Report::add(const std::string& tag, const std::string& name, bool value) {
  lines_.push_back(tag + '\t' + name + '\t' + (value ? "true" : "false"));
}

void Report::add(const std::string& tag, const std::string& name, const std::string& value) {
  lines_.push_back(tag + '\t' + name + '\t' + value);
}

std::string Report::text() const {
  std::string out;
  for (const auto& l : lines_) out += l + '\n';
  return out;
}

std::string Report::save(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / (command_ + ".tsv")).string();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParameterError("cannot write report: " + path);
  write(f);
  return path;
}

void write_solution_csv(const std::string& path, const GridFunction& u) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParameterError("cannot write solution: " + path);
  f << "node,value\n";
  for (int i = 0; i < u.size(); ++i) f << format_real(u.grid().node(i)) << ',' << format_real(u[i]) << '\n';
}

GridFunction read_solution_csv(const std::string& path, const GridPtr& grid) {
  std::ifstream f(path);
  if (!f) throw ParameterError("cannot read function file: " + path);
  std::vector<double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParameterError(path + ":" + std::to_string(lineno) + ": expected node,value");
    try {
      std::size_t used = 0;
      const std::string v = line.substr(comma + 1);
      const double x = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      values.push_back(x);
    } catch (const std::exception&) {
      if (lineno == 1) continue;
      throw ParameterError(path + ":" + std::to_string(lineno) + ": bad value");
    }
  }
  if (static_cast<int>(values.size()) != grid->n())
    throw ParameterError(path + ": " + std::to_string(values.size()) + " rows, grid has " + std::to_string(grid->n()));
  return GridFunction(grid, std::move(values));
}

}  // namespace nehari
