#include "nehari/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "nehari/errors.hpp"

namespace nehari {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ParameterError("bad real value for " + key + ": '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ParameterError("bad integer value for " + key + ": '" + v + "'");
  return out;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_real(key, trim(item)));
  if (out.empty()) throw ParameterError("empty list for " + key);
  return out;
}

template <typename T>
std::string int_text(T v) {
  return std::to_string(v);
}

struct Key {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define NEHARI_REAL(name, field)                                                                   \
  {                                                                                                \
    name, {                                                                                        \
      [](RunConfig& c, const std::string& k, const std::string& v) { c.field = to_real(k, v); },   \
          [](const RunConfig& c) { return format_real(c.field); }                                  \
    }                                                                                              \
  }
#define NEHARI_INT(name, field, type)                                                                  \
  {                                                                                                    \
    name, {                                                                                            \
      [](RunConfig& c, const std::string& k, const std::string& v) {                                   \
        c.field = static_cast<type>(to_int(k, v));                                                     \
      },                                                                                               \
          [](const RunConfig& c) { return int_text(c.field); }                                         \
    }                                                                                                  \
  }

const std::map<std::string, Key>& keys() {
  static const std::map<std::string, Key> table = {
      NEHARI_REAL("params.s", params.s),
      NEHARI_REAL("params.p", params.p),
      NEHARI_REAL("params.q", params.q),
      NEHARI_REAL("params.mu", params.mu),
      NEHARI_INT("params.N", params.N, int),
      NEHARI_REAL("grid.a", a),
      NEHARI_REAL("grid.b", b),
      NEHARI_INT("grid.n", n, int),
      {"bubble.eps_ladder",
       {[](RunConfig& c, const std::string& k, const std::string& v) { c.eps_ladder = to_list(k, v); },
        [](const RunConfig& c) {
          std::string s;
          for (std::size_t i = 0; i < c.eps_ladder.size(); ++i) s += (i ? "," : "") + format_real(c.eps_ladder[i]);
          return s;
        }}},
      NEHARI_REAL("bubble.delta", delta),
      NEHARI_REAL("bubble.eps", eps),
      {"bubble.profile",
       {[](RunConfig& c, const std::string&, const std::string& v) { c.profile = parse_profile_kind(v); },
        [](const RunConfig& c) { return std::string(to_string(c.profile)); }}},
      NEHARI_INT("solver.seed", solver.seed, std::uint64_t),
      NEHARI_INT("solver.max_iters", solver.max_iters, int),
      NEHARI_REAL("solver.tol_res", solver.tol_res),
      NEHARI_INT("solver.max_restarts", solver.max_restarts, int),
      NEHARI_REAL("solver.tol_cross", tol_cross),
      NEHARI_INT("sobolev.iters", sobolev_iters, int),
      NEHARI_INT("check.samples", samples, int),
      NEHARI_REAL("scan.a_max", scan_a_max),
      NEHARI_REAL("scan.b_max", scan_b_max),
      NEHARI_INT("scan.counts", scan_counts, int),
      {"output.dir",
       {[](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; },
        [](const RunConfig& c) { return c.out_dir; }}},
  };
  return table;
}

#undef NEHARI_REAL
#undef NEHARI_INT

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

GridPtr RunConfig::grid() const { return build_grid(a, b, n, params); }

std::map<std::string, std::string> RunConfig::entries() const {
  std::map<std::string, std::string> out;
  for (const auto& [k, key] : keys()) {
    if (k == "output.dir") continue;
    out[k] = key.get(*this);
  }
  return out;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = keys().find(key);
  if (it == keys().end()) throw ParameterError("unknown config key: " + key);
  try {
    it->second.set(cfg, key, value);
  } catch (const ParameterError&) {
    throw;
  } catch (const Error& e) {
    throw ParameterError(key + ": " + e.what());
  }
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ParameterError("override must be key=value: " + assignment);
  apply_setting(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParameterError("line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParameterError("cannot read config: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::uint64_t config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
  };
  for (const auto& [k, v] : cfg.entries()) {
    feed(k);
    feed("=");
    feed(v);
    feed("\n");
  }
  return h;
}

}  // namespace nehari
