#pragma once

// Embedded reference datasets used by the worked examples and the CLI's
// `datasets` subcommand: the carrier-mileage failure times, the cd4 counts
// (baseline and one-year, in hundreds), and the two-arm gastric cancer
// survival data with censoring flags.

#include <ostream>
#include <string>
#include <vector>

#include "cdist/errors.hpp"

namespace cdist::construct {

inline const std::vector<double>& lawless_mileage() {
  static const std::vector<double> data = {
      162,  200,  271,  320,  393,  508,  539,  629,  706, 777,
      884,  1008, 1101, 1182, 1463, 1603, 1984, 2355, 2880};
  return data;
}

struct Cd4Data {
  std::vector<double> baseline;
  std::vector<double> one_year;
};

inline const Cd4Data& cd4_counts() {
  static const Cd4Data data = {
      {2.12, 4.35, 3.39, 2.51, 4.04, 5.10, 3.77, 3.35, 4.10, 3.35,
       4.15, 3.56, 3.39, 1.88, 2.56, 2.96, 2.49, 3.03, 2.66, 3.00},
      {2.47, 4.61, 5.26, 3.02, 6.36, 5.93, 3.93, 4.09, 4.88, 3.81,
       4.74, 3.29, 5.55, 2.82, 4.23, 3.23, 2.56, 4.31, 4.37, 2.40}};
  return data;
}

struct RawSurvival {
  std::vector<double> times;
  std::vector<bool> events;  // true = failure, false = censored
};

// Combined chemotherapy + radiotherapy arm; 6 of 45 censored.
inline const RawSurvival& gastric_combination() {
  static const RawSurvival data = {
      {0.05, 0.12, 0.12, 0.13, 0.16, 0.20, 0.20, 0.26, 0.28, 0.30, 0.33,
       0.39, 0.46, 0.47, 0.50, 0.51, 0.53, 0.53, 0.54, 0.57, 0.64, 0.64,
       0.70, 0.84, 0.86, 1.10, 1.22, 1.27, 1.33, 1.45, 1.48, 1.55, 1.58,
       1.59, 2.18, 2.34, 3.74, 4.32, 5.64, 6.61, 6.81, 7.66, 7.68, 8.04,
       8.19},
      {true, true, true, true, true, true, true, true, true, true, true,
       true, true, true, true, true, true, true, true, true, true, true,
       true, true, true, true, true, true, true, true, true, true, true,
       true, true, true, true, true, true, false, false, false, false,
       false, false}};
  return data;
}

// Chemotherapy-only arm; 2 of 45 censored.
inline const RawSurvival& gastric_chemotherapy() {
  static const RawSurvival data = {
      {0.00, 0.17, 0.29, 0.35, 0.50, 0.59, 0.68, 0.72, 0.82, 0.82, 0.94,
       0.97, 0.98, 0.98, 1.04, 1.05, 1.05, 1.06, 1.08, 1.12, 1.26, 1.34,
       1.37, 1.43, 1.44, 1.47, 1.54, 1.56, 1.85, 1.85, 2.05, 2.13, 2.15,
       2.18, 2.62, 2.65, 2.74, 3.41, 3.48, 3.89, 4.25, 4.64, 6.47, 7.55,
       8.08},
      {true, true, true, true, true, true, true, true, true, true, true,
       true, true, true, true, true, true, true, true, true, true, true,
       true, true, true, true, true, true, true, true, true, true, true,
       true, true, true, true, true, true, true, true, true, true, false,
       false}};
  return data;
}

inline void write_values_csv(std::ostream& os, const std::vector<double>& values,
                             const std::string& column = "value") {
  os << column << "\n";
  for (double v : values) os << v << "\n";
}

inline void write_survival_csv(std::ostream& os, const RawSurvival& data) {
  os << "time,event\n";
  for (std::size_t i = 0; i < data.times.size(); ++i)
    os << data.times[i] << ',' << (data.events[i] ? 1 : 0) << "\n";
}

inline void write_pairs_csv(std::ostream& os, const Cd4Data& data) {
  os << "baseline,one_year\n";
  for (std::size_t i = 0; i < data.baseline.size(); ++i)
    os << data.baseline[i] << ',' << data.one_year[i] << "\n";
}

}  // namespace cdist::construct
