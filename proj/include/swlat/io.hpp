#pragma once

// Snapshot container, flat key/value configuration files and trace CSV.
//
// Snapshot layout:
//   8 bytes   magic "SWLATSNP"
//   8 bytes   little-endian uint64, length L of the metadata document
//   L bytes   JSON metadata
//   payload   little-endian binary64, site row-major, component minor;
//             complex values are stored as (re, im) pairs.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "swlat/gauge.hpp"
#include "swlat/lattice.hpp"
#include "swlat/optimize.hpp"

namespace swlat {

inline constexpr int kSnapshotFormatVersion = 1;

enum class SnapshotKind { kScalar, kGauge, kSection, kTwoForm, kGaugeTransform };

const char* to_string(SnapshotKind k);
SnapshotKind snapshot_kind_from_string(const std::string& s);

struct SnapshotMeta {
  int format_version = kSnapshotFormatVersion;
  std::vector<int> dims;
  double h = 1.0;
  SnapshotKind kind = SnapshotKind::kGauge;
  /// Field components per site (complex components count once).
  int components = 0;
  bool complex_values = false;
  std::uint64_t seed = 0;
  /// Large-gauge windings; only for kGaugeTransform.
  std::vector<int> winding;
  /// Free-form tags, e.g. the producing command and iteration.
  std::map<std::string, std::string> info;
};

struct SnapshotData {
  SnapshotMeta meta;
  /// Real numbers in storage order (complex values interleaved).
  std::vector<double> payload;
};

void write_snapshot(const std::string& path, const SnapshotData& snap);
void write_snapshot(std::ostream& os, const SnapshotData& snap);
/// Rejects bad magic, unsupported versions, inconsistent shapes and truncated payloads.
SnapshotData read_snapshot(const std::string& path);
SnapshotData read_snapshot(std::istream& is, const std::string& source = "<stream>");

SnapshotData make_snapshot(const Grid& g, const GaugeField& a, std::uint64_t seed);
SnapshotData make_snapshot(const Grid& g, const SectionField& sigma, std::uint64_t seed);
SnapshotData make_snapshot(const Grid& g, const ScalarField& f, std::uint64_t seed);
SnapshotData make_snapshot(const Grid& g, const TwoFormField& f, std::uint64_t seed);
SnapshotData make_snapshot(const Grid& g, const GaugeTransform& t, std::uint64_t seed);

Grid snapshot_grid(const SnapshotMeta& meta);
GaugeField gauge_from_snapshot(const Grid& g, const SnapshotData& snap);
SectionField section_from_snapshot(const Grid& g, const SnapshotData& snap);
GaugeTransform transform_from_snapshot(const Grid& g, const SnapshotData& snap);

// ---- configuration ------------------------------------------------------------

/// Parsed "key = value" file. Lines starting with '#' and blank lines are
/// ignored, trailing '#' comments are stripped. Keys must be known; duplicates
/// and unknown keys are errors carrying the line number.
class ConfigFile {
 public:
  ConfigFile() = default;

  static ConfigFile parse(std::istream& is, const std::string& source);
  static ConfigFile load(const std::string& path);

  /// Every key accepted in a configuration file.
  static const std::vector<std::string>& known_keys();

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;
  std::vector<int> require_int_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key, const std::vector<double>& fallback) const;

  const std::string& source() const noexcept { return source_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  const Entry* find(const std::string& key) const;
  [[noreturn]] void bad_value(const std::string& key, const Entry& e, const std::string& expected) const;

  std::string source_ = "<config>";
  std::map<std::string, Entry> entries_;
};

// ---- trace CSV ------------------------------------------------------------------

/// Header: iter,energy_total,<term names>,penalty,grad_norm,v_max_violation,step_len,d_star_a_norm,regauged
void write_trace_csv(const std::string& path, Objective form, const std::vector<TraceRow>& trace);
std::string trace_csv(Objective form, const std::vector<TraceRow>& trace);

/// Shortest round-trip decimal for a double.
std::string format_double(double v);

}  // namespace swlat
