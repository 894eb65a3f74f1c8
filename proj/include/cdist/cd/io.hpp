#pragma once

// Curve serialization. CSV columns are theta,H,h,CV; '#' lines carry run
// metadata (version, command, seed, rng algorithm) so outputs are
// self-describing. The JSON form mirrors the same fields.

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdist/cd/cd.hpp"
#include "cdist/errors.hpp"
#include "cdist/numeric/rng.hpp"

namespace cdist {

inline constexpr const char* kVersion = "0.1.0";

struct RunMeta {
  std::string command;
  std::uint64_t seed = 0;
  std::string rng_algorithm = num::RngStream::kAlgorithm;
};

inline void write_meta_csv(std::ostream& os, const RunMeta& meta) {
  os << "# cdist " << kVersion << "\n";
  os << "# command: " << meta.command << "\n";
  os << "# seed: " << meta.seed << "\n";
  os << "# rng: " << meta.rng_algorithm << "\n";
}

// Evaluate a CD on a grid and emit theta,H,h,CV rows. h is blank-free: when
// no density is available it falls back to finite differences of H.
inline void write_curve_csv(std::ostream& os, const CD& cd,
                            const std::vector<double>& thetas,
                            const RunMeta& meta) {
  write_meta_csv(os, meta);
  os << "theta,H,h,CV\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    double t = thetas[i];
    double h = cd(t);
    double dens;
    if (cd.has_density()) {
      dens = cd.density(t);
    } else {
      std::size_t lo = i > 0 ? i - 1 : i;
      std::size_t hi = i + 1 < thetas.size() ? i + 1 : i;
      dens = hi > lo ? (cd(thetas[hi]) - cd(thetas[lo])) / (thetas[hi] - thetas[lo])
                     : 0.0;
    }
    os << t << ',' << h << ',' << dens << ',' << confidence_curve(cd, t) << '\n';
  }
}

inline nlohmann::json meta_to_json(const RunMeta& meta) {
  return {{"version", kVersion},
          {"command", meta.command},
          {"seed", meta.seed},
          {"rng", meta.rng_algorithm}};
}

inline nlohmann::json curve_to_json(const CD& cd,
                                    const std::vector<double>& thetas,
                                    const RunMeta& meta) {
  nlohmann::json j;
  j["meta"] = meta_to_json(meta);
  auto& rows = j["curve"];
  rows["theta"] = thetas;
  std::vector<double> hs, cvs;
  hs.reserve(thetas.size());
  cvs.reserve(thetas.size());
  for (double t : thetas) {
    hs.push_back(cd(t));
    cvs.push_back(confidence_curve(cd, t));
  }
  rows["H"] = hs;
  rows["CV"] = cvs;
  return j;
}

// Read a curve written by write_curve_csv (or any CSV with theta,H leading
// columns). Metadata lines and the header row are skipped.
inline GridCurve read_curve_csv(std::istream& is) {
  std::vector<double> thetas, values;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.find("theta") != std::string::npos) continue;
    }
    std::istringstream row(line);
    std::string cell;
    double vals[2];
    for (int c = 0; c < 2; ++c) {
      if (!std::getline(row, cell, ','))
        throw IoError("curve CSV: expected at least two columns");
      try {
        vals[c] = std::stod(cell);
      } catch (const std::exception&) {
        throw IoError("curve CSV: non-numeric cell '" + cell + "'");
      }
    }
    thetas.push_back(vals[0]);
    values.push_back(vals[1]);
  }
  if (thetas.size() < 2) throw IoError("curve CSV: fewer than two data rows");
  return GridCurve(std::move(thetas), std::move(values));
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2 || !(hi > lo)) throw ParameterError("linspace: need n >= 2 and hi > lo");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return out;
}

}  // namespace cdist
