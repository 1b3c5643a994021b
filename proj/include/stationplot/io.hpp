#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stationplot/types.hpp"

namespace stationplot {

inline constexpr double kBonnSampleRateHz = 173.61;
inline constexpr int kBonnRecordLength = 4097;

// One signed integer amplitude per line, LF-terminated. A record whose
// length differs from the canonical 4097 samples is accepted but reported
// through the warning sink.
Signal load_bonn_record(const std::filesystem::path& path, const std::string& label,
                        WarningSink* warnings = nullptr);

// The inverse of load_bonn_record for integral-valued signals: one integer
// per line with a single trailing newline.
std::string bonn_record_to_text(const Signal& signal);

// Single numeric column, optional header row; `column` selects within
// multi-column files (0-based).
Signal load_csv_record(const std::filesystem::path& path, const std::string& label,
                       int column = 0, double sample_rate = 1.0);

// Every parseable file in the directory, sorted by filename. Extensions are
// not filtered; a file that fails to parse aborts the load with its name.
std::vector<Signal> load_set(const std::filesystem::path& directory,
                             const std::string& label,
                             WarningSink* warnings = nullptr);
std::vector<Signal> load_set_csv(const std::filesystem::path& directory,
                                 const std::string& label, int column = 0,
                                 double sample_rate = 1.0);

}  // namespace stationplot
