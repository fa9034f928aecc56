#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bajd/ergodicity.hpp"
#include "bajd/simulate.hpp"
#include "bajd/transition.hpp"

namespace bajd {

/// A file could not be opened, parsed, or written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// shortest round-trip decimal representation
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

}  // namespace detail

/// Reads {"a":..., "theta":..., "sigma":..., "c":..., "d":...}.
inline BajdParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open params file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("cannot parse params file " + path.string() + ": " + e.what());
  }
  BajdParams p{};
  try {
    p.a = j.at("a").get<double>();
    p.theta = j.at("theta").get<double>();
    p.sigma = j.at("sigma").get<double>();
    p.c = j.at("c").get<double>();
    p.d = j.at("d").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("params file " + path.string() + " is missing a field: " + e.what());
  }
  detail::check_params(p);
  return p;
}

inline void save_params(const std::filesystem::path& path, const BajdParams& p) {
  nlohmann::json j{{"a", p.a}, {"theta", p.theta}, {"sigma", p.sigma}, {"c", p.c}, {"d", p.d}};
  auto out = detail::open_for_write(path);
  out << j.dump(2) << "\n";
}

inline void write_density_csv(const std::filesystem::path& path, const DensityGrid& grid) {
  auto out = detail::open_for_write(path);
  out << "y,density\n";
  for (std::size_t i = 0; i < grid.ys.size(); ++i) {
    out << detail::format_double(grid.ys[i]) << "," << detail::format_double(grid.values[i])
        << "\n";
  }
}

inline DensityGrid read_density_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open density file: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "y,density") {
    throw IoError("unexpected density CSV header in " + path.string());
  }
  DensityGrid grid{};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("malformed row in " + path.string());
    grid.ys.push_back(std::stod(line.substr(0, comma)));
    grid.values.push_back(std::stod(line.substr(comma + 1)));
  }
  return grid;
}

inline void write_density_json(const std::filesystem::path& path, const DensityGrid& grid) {
  nlohmann::json j{{"t", grid.t}, {"x", grid.x}, {"y", grid.ys}, {"density", grid.values}};
  auto out = detail::open_for_write(path);
  out << j.dump(2) << "\n";
}

inline void write_samples_csv(const std::filesystem::path& path,
                              const std::vector<double>& values) {
  auto out = detail::open_for_write(path);
  out << "value\n";
  for (double v : values) out << detail::format_double(v) << "\n";
}

inline void write_samples_json(const std::filesystem::path& path,
                               const std::vector<double>& values) {
  nlohmann::json j{{"value", values}};
  auto out = detail::open_for_write(path);
  out << j.dump(2) << "\n";
}

inline void write_path_csv(const std::filesystem::path& path, const PathRecord& record) {
  auto out = detail::open_for_write(path);
  out << "time,state\n";
  for (std::size_t i = 0; i < record.times.size(); ++i) {
    out << detail::format_double(record.times[i]) << ","
        << detail::format_double(record.states[i]) << "\n";
  }
}

inline void write_jumps_csv(const std::filesystem::path& path, const PathRecord& record) {
  auto out = detail::open_for_write(path);
  out << "time,size\n";
  for (std::size_t i = 0; i < record.jump_times.size(); ++i) {
    out << detail::format_double(record.jump_times[i]) << ","
        << detail::format_double(record.jump_sizes[i]) << "\n";
  }
}

inline void write_tv_csv(const std::filesystem::path& path, const std::vector<double>& ts,
                         const std::vector<double>& tvs) {
  auto out = detail::open_for_write(path);
  out << "t,tv\n";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out << detail::format_double(ts[i]) << "," << detail::format_double(tvs[i]) << "\n";
  }
}

inline nlohmann::json ergodicity_report(const BajdParams& p, const DriftCertificate& cert,
                                        const std::vector<double>& xs,
                                        const std::vector<DecayFit>& fits) {
  nlohmann::json j;
  j["params"] = {{"a", p.a}, {"theta", p.theta}, {"sigma", p.sigma}, {"c", p.c}, {"d", p.d}};
  j["certificate"] = {
      {"gamma", cert.gamma}, {"k", cert.k}, {"M", cert.M}, {"x_star", cert.x_star}};
  j["decay"] = nlohmann::json::array();
  for (std::size_t i = 0; i < fits.size(); ++i) {
    j["decay"].push_back({{"x", xs[i]},
                          {"beta_hat", fits[i].beta_hat},
                          {"c_hat", fits[i].c_hat},
                          {"r2", fits[i].r2},
                          {"t", fits[i].t_grid},
                          {"tv", fits[i].tv_values}});
  }
  return j;
}

}  // namespace bajd
