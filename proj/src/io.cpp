#include "swlat/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace swlat {

using json = nlohmann::ordered_json;

const char* to_string(SnapshotKind k) {
  switch (k) {
    case SnapshotKind::kScalar: return "scalar";
    case SnapshotKind::kGauge: return "gauge";
    case SnapshotKind::kSection: return "section";
    case SnapshotKind::kTwoForm: return "twoform";
    case SnapshotKind::kGaugeTransform: return "gauge_transform";
  }
  return "unknown";
}

SnapshotKind snapshot_kind_from_string(const std::string& s) {
  for (auto k : {SnapshotKind::kScalar, SnapshotKind::kGauge, SnapshotKind::kSection, SnapshotKind::kTwoForm,
                 SnapshotKind::kGaugeTransform}) {
    if (s == to_string(k)) return k;
  }
  fail(ErrorCode::kFormat, "unknown snapshot field kind '" + s + "'");
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) fail(ErrorCode::kInternal, "double formatting failed");
  return std::string(buf.data(), end);
}

// ---- snapshots ------------------------------------------------------------------

namespace {

constexpr std::array<char, 8> kMagic = {'S', 'W', 'L', 'A', 'T', 'S', 'N', 'P'};

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  else return __builtin_bswap64(v);
}

void put_u64(std::ostream& os, std::uint64_t v) {
  v = to_le(v);
  char bytes[8];
  std::memcpy(bytes, &v, 8);
  os.write(bytes, 8);
}

int expected_components(SnapshotKind kind, int n) {
  switch (kind) {
    case SnapshotKind::kScalar: return 1;
    case SnapshotKind::kGauge: return n;
    case SnapshotKind::kSection: return n;
    case SnapshotKind::kTwoForm: return n * (n - 1) / 2;
    case SnapshotKind::kGaugeTransform: return 1;
  }
  return 0;
}

json meta_to_json(const SnapshotMeta& m) {
  json j;
  j["format_version"] = m.format_version;
  j["n"] = m.dims.size();
  j["dims"] = m.dims;
  j["h"] = m.h;
  j["kind"] = to_string(m.kind);
  j["components"] = m.components;
  j["complex"] = m.complex_values;
  j["seed"] = m.seed;
  if (m.kind == SnapshotKind::kGaugeTransform) j["winding"] = m.winding;
  json info = json::object();
  for (const auto& [k, v] : m.info) info[k] = v;
  j["info"] = info;
  return j;
}

SnapshotMeta meta_from_json(const json& j, const std::string& source) {
  auto need = [&](const char* key) -> const json& {
    if (!j.contains(key)) fail(ErrorCode::kFormat, source + ": snapshot metadata lacks '" + key + "'");
    return j.at(key);
  };
  SnapshotMeta m;
  try {
    m.format_version = need("format_version").get<int>();
    if (m.format_version != kSnapshotFormatVersion) {
      fail(ErrorCode::kFormat, source + ": unsupported snapshot format_version " + std::to_string(m.format_version) +
                                   "; this build reads version " + std::to_string(kSnapshotFormatVersion) +
                                   ". Upgrade swlat to a release that supports it or re-export the file.");
    }
    m.dims = need("dims").get<std::vector<int>>();
    const int n = need("n").get<int>();
    if (n != static_cast<int>(m.dims.size())) {
      fail(ErrorCode::kFormat, source + ": metadata n = " + std::to_string(n) + " disagrees with dims");
    }
    m.h = need("h").get<double>();
    m.kind = snapshot_kind_from_string(need("kind").get<std::string>());
    m.components = need("components").get<int>();
    m.complex_values = need("complex").get<bool>();
    m.seed = need("seed").get<std::uint64_t>();
    if (m.kind == SnapshotKind::kGaugeTransform) m.winding = need("winding").get<std::vector<int>>();
    if (j.contains("info")) {
      for (const auto& [k, v] : j.at("info").items()) m.info[k] = v.get<std::string>();
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kFormat, source + ": malformed snapshot metadata: " + e.what());
  }
  if (m.components != expected_components(m.kind, static_cast<int>(m.dims.size()))) {
    fail(ErrorCode::kFormat, source + ": component count " + std::to_string(m.components) + " does not fit kind " +
                                 to_string(m.kind));
  }
  if (m.complex_values != (m.kind == SnapshotKind::kSection)) {
    fail(ErrorCode::kFormat, source + ": complex flag does not fit kind " + std::string(to_string(m.kind)));
  }
  return m;
}

// Number of doubles in the payload, with overflow detection.
std::uint64_t payload_count(const SnapshotMeta& m, const std::string& source) {
  std::uint64_t count = static_cast<std::uint64_t>(m.components) * (m.complex_values ? 2u : 1u);
  for (int d : m.dims) {
    if (d <= 0) fail(ErrorCode::kFormat, source + ": non-positive grid extent in snapshot");
    if (count > std::numeric_limits<std::uint64_t>::max() / 8 / static_cast<std::uint64_t>(d)) {
      fail(ErrorCode::kFormat, source + ": snapshot dimensions overflow the addressable payload size");
    }
    count *= static_cast<std::uint64_t>(d);
  }
  return count;
}

}  // namespace

void write_snapshot(std::ostream& os, const SnapshotData& snap) {
  const std::string meta = meta_to_json(snap.meta).dump();
  const std::uint64_t count = payload_count(snap.meta, "write_snapshot");
  if (count != snap.payload.size()) {
    fail(ErrorCode::kShapeMismatch, "write_snapshot: payload has " + std::to_string(snap.payload.size()) +
                                         " values, metadata implies " + std::to_string(count));
  }
  os.write(kMagic.data(), kMagic.size());
  put_u64(os, meta.size());
  os.write(meta.data(), static_cast<std::streamsize>(meta.size()));
  for (double v : snap.payload) put_u64(os, std::bit_cast<std::uint64_t>(v));
  if (!os) fail(ErrorCode::kIo, "write_snapshot: stream write failed");
}

void write_snapshot(const std::string& path, const SnapshotData& snap) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  write_snapshot(os, snap);
  os.close();
  if (!os) fail(ErrorCode::kIo, "failed writing '" + path + "'");
}

SnapshotData read_snapshot(std::istream& is, const std::string& source) {
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (is.gcount() != 8 || magic != kMagic) fail(ErrorCode::kFormat, source + ": not a swlat snapshot (bad magic)");

  char len_bytes[8];
  is.read(len_bytes, 8);
  if (is.gcount() != 8) fail(ErrorCode::kFormat, source + ": truncated header");
  std::uint64_t meta_len = 0;
  std::memcpy(&meta_len, len_bytes, 8);
  meta_len = to_le(meta_len);
  if (meta_len > (1u << 24)) fail(ErrorCode::kFormat, source + ": metadata length " + std::to_string(meta_len) + " is implausible");
  std::string meta(meta_len, '\0');
  is.read(meta.data(), static_cast<std::streamsize>(meta_len));
  if (static_cast<std::uint64_t>(is.gcount()) != meta_len) fail(ErrorCode::kFormat, source + ": truncated metadata");

  json j;
  try {
    j = json::parse(meta);
  } catch (const json::exception& e) {
    fail(ErrorCode::kFormat, source + ": metadata is not valid JSON: " + e.what());
  }
  SnapshotData out;
  out.meta = meta_from_json(j, source);
  const std::uint64_t count = payload_count(out.meta, source);
  const std::uint64_t expected_bytes = count * 8;

  std::vector<char> bytes;
  bytes.reserve(expected_bytes);
  std::array<char, 65536> chunk{};
  while (is) {
    is.read(chunk.data(), chunk.size());
    bytes.insert(bytes.end(), chunk.data(), chunk.data() + is.gcount());
    if (bytes.size() > expected_bytes) break;
  }
  if (bytes.size() != expected_bytes) {
    const std::string which = bytes.size() < expected_bytes ? "payload truncated" : "trailing bytes after payload";
    fail(ErrorCode::kFormat, source + ": " + which + ": expected " + std::to_string(expected_bytes) +
                                 " payload bytes, found " + std::to_string(bytes.size()) + (bytes.size() > expected_bytes ? " or more" : ""));
  }
  out.payload.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t v = 0;
    std::memcpy(&v, bytes.data() + i * 8, 8);
    out.payload[i] = std::bit_cast<double>(to_le(v));
  }
  return out;
}

SnapshotData read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorCode::kIo, "cannot open snapshot '" + path + "'");
  return read_snapshot(is, path);
}

namespace {

SnapshotMeta base_meta(const Grid& g, SnapshotKind kind, std::uint64_t seed) {
  SnapshotMeta m;
  m.dims = g.extents();
  m.h = g.spacing();
  m.kind = kind;
  m.components = expected_components(kind, g.dim());
  m.complex_values = kind == SnapshotKind::kSection;
  m.seed = seed;
  return m;
}

template <class Field>
std::vector<double> real_payload(const Field& f) {
  return {f.values().begin(), f.values().end()};
}

void require_meta(const Grid& g, const SnapshotMeta& m, SnapshotKind kind) {
  if (m.kind != kind) {
    fail(ErrorCode::kFormat, std::string("snapshot holds a ") + to_string(m.kind) + " field, expected " + to_string(kind));
  }
  if (m.dims != g.extents() || m.h != g.spacing()) {
    fail(ErrorCode::kShapeMismatch, "snapshot grid does not match the configured grid");
  }
}

}  // namespace

SnapshotData make_snapshot(const Grid& g, const GaugeField& a, std::uint64_t seed) {
  require_shape(g, a, "make_snapshot");
  return {base_meta(g, SnapshotKind::kGauge, seed), real_payload(a)};
}

SnapshotData make_snapshot(const Grid& g, const SectionField& sigma, std::uint64_t seed) {
  require_shape(g, sigma, "make_snapshot");
  SnapshotData s{base_meta(g, SnapshotKind::kSection, seed), {}};
  s.payload.reserve(sigma.size() * 2);
  for (const cplx& v : sigma.values()) {
    s.payload.push_back(v.real());
    s.payload.push_back(v.imag());
  }
  return s;
}

SnapshotData make_snapshot(const Grid& g, const ScalarField& f, std::uint64_t seed) {
  require_shape(g, f, "make_snapshot");
  return {base_meta(g, SnapshotKind::kScalar, seed), real_payload(f)};
}

SnapshotData make_snapshot(const Grid& g, const TwoFormField& f, std::uint64_t seed) {
  require_shape(g, f, "make_snapshot");
  return {base_meta(g, SnapshotKind::kTwoForm, seed), real_payload(f)};
}

SnapshotData make_snapshot(const Grid& g, const GaugeTransform& t, std::uint64_t seed) {
  require_shape(g, t.zeta, "make_snapshot");
  SnapshotData s{base_meta(g, SnapshotKind::kGaugeTransform, seed), real_payload(t.zeta)};
  s.meta.winding = t.winding;
  return s;
}

Grid snapshot_grid(const SnapshotMeta& meta) { return Grid(meta.dims, meta.h); }

GaugeField gauge_from_snapshot(const Grid& g, const SnapshotData& snap) {
  require_meta(g, snap.meta, SnapshotKind::kGauge);
  GaugeField a(g);
  std::copy(snap.payload.begin(), snap.payload.end(), a.values().begin());
  return a;
}

SectionField section_from_snapshot(const Grid& g, const SnapshotData& snap) {
  require_meta(g, snap.meta, SnapshotKind::kSection);
  SectionField s(g);
  for (std::size_t i = 0; i < s.size(); ++i) s.values()[i] = cplx(snap.payload[2 * i], snap.payload[2 * i + 1]);
  return s;
}

GaugeTransform transform_from_snapshot(const Grid& g, const SnapshotData& snap) {
  require_meta(g, snap.meta, SnapshotKind::kGaugeTransform);
  GaugeTransform t = GaugeTransform::identity(g);
  std::copy(snap.payload.begin(), snap.payload.end(), t.zeta.values().begin());
  if (snap.meta.winding.size() != static_cast<std::size_t>(g.dim())) {
    fail(ErrorCode::kFormat, "gauge transform snapshot winding has the wrong length");
  }
  t.winding = snap.meta.winding;
  return t;
}

// ---- configuration ----------------------------------------------------------------

const std::vector<std::string>& ConfigFile::known_keys() {
  static const std::vector<std::string> keys = {
      "grid.n", "grid.dims", "grid.h",
      "run.objective", "run.ric", "run.max_iters", "run.tol_grad", "run.step0", "run.armijo_c",
      "run.backtrack", "run.regauge_every", "run.method", "run.lbfgs_memory", "run.snapshot_every",
      "run.cauchy_k", "run.seed", "run.init", "run.amplitude", "run.sigma_amplitude", "run.init_gauge",
      "run.init_section", "run.write_snapshots",
      "v.lambda0", "v.penalty_weight",
      "output.dir",
      "converge.sizes", "converge.dim", "converge.length", "converge.family", "converge.amplitude_a",
      "converge.amplitude_sigma", "converge.min_order",
      "gradcheck.eps", "gradcheck.samples", "gradcheck.tol", "check.inject_fault",
  };
  return keys;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

template <class T>
bool parse_number(const std::string& s, T& out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& is, const std::string& source) {
  ConfigFile cfg;
  cfg.source_ = source;
  const auto& known = known_keys();
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(line_no);
    if (eq == std::string::npos) fail(ErrorCode::kConfig, where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      fail(ErrorCode::kConfig, where + ": unknown key '" + key + "'");
    }
    if (cfg.entries_.count(key)) {
      fail(ErrorCode::kConfig, where + ": duplicate key '" + key + "' (first set on line " +
                                   std::to_string(cfg.entries_[key].line) + ")");
    }
    if (value.empty()) fail(ErrorCode::kConfig, where + ": key '" + key + "' has an empty value");
    cfg.entries_[key] = Entry{value, line_no};
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorCode::kIo, "cannot read config file '" + path + "'");
  return parse(is, path);
}

void ConfigFile::set(const std::string& key, const std::string& value) {
  const auto& known = known_keys();
  if (std::find(known.begin(), known.end(), key) == known.end()) fail(ErrorCode::kConfig, "unknown key '" + key + "'");
  entries_[key] = Entry{value, 0};
}

const ConfigFile::Entry* ConfigFile::find(const std::string& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

void ConfigFile::bad_value(const std::string& key, const Entry& e, const std::string& expected) const {
  const std::string where = e.line > 0 ? source_ + ":" + std::to_string(e.line) : source_;
  fail(ErrorCode::kConfig, where + ": key '" + key + "' expects " + expected + ", got '" + e.value + "'");
}

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const {
  const Entry* e = find(key);
  return e ? e->value : fallback;
}

std::string ConfigFile::require_string(const std::string& key) const {
  const Entry* e = find(key);
  if (!e) fail(ErrorCode::kConfig, source_ + ": missing required key '" + key + "'");
  return e->value;
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  double v = 0.0;
  if (!parse_number(e->value, v) || !std::isfinite(v)) bad_value(key, *e, "a finite number");
  return v;
}

long long ConfigFile::get_int(const std::string& key, long long fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  long long v = 0;
  if (!parse_number(e->value, v)) bad_value(key, *e, "an integer");
  return v;
}

std::uint64_t ConfigFile::get_uint(const std::string& key, std::uint64_t fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  std::uint64_t v = 0;
  if (!parse_number(e->value, v)) bad_value(key, *e, "a non-negative integer");
  return v;
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1") return true;
  if (e->value == "false" || e->value == "0") return false;
  bad_value(key, *e, "true or false");
}

std::vector<int> ConfigFile::get_int_list(const std::string& key, const std::vector<int>& fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  std::vector<int> out;
  for (const auto& item : split_list(e->value)) {
    int v = 0;
    if (!parse_number(item, v)) bad_value(key, *e, "a comma-separated integer list");
    out.push_back(v);
  }
  return out;
}

std::vector<int> ConfigFile::require_int_list(const std::string& key) const {
  if (!find(key)) fail(ErrorCode::kConfig, source_ + ": missing required key '" + key + "'");
  return get_int_list(key, {});
}

std::vector<double> ConfigFile::get_double_list(const std::string& key, const std::vector<double>& fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(e->value)) {
    double v = 0.0;
    if (!parse_number(item, v) || !std::isfinite(v)) bad_value(key, *e, "a comma-separated number list");
    out.push_back(v);
  }
  return out;
}

// ---- trace CSV ----------------------------------------------------------------------

std::string trace_csv(Objective form, const std::vector<TraceRow>& trace) {
  std::ostringstream os;
  os << "iter,energy_total";
  for (const auto& name : energy_term_names(form)) os << ',' << name;
  os << ",penalty,grad_norm,v_max_violation,step_len,d_star_a_norm,regauged\n";
  for (const auto& r : trace) {
    os << r.iter << ',' << format_double(r.energy_total);
    for (double t : r.energy_terms) os << ',' << format_double(t);
    os << ',' << format_double(r.penalty) << ',' << format_double(r.grad_norm) << ','
       << format_double(r.v_max_violation) << ',' << format_double(r.step_len) << ','
       << format_double(r.d_star_a_norm) << ',' << (r.regauged ? 1 : 0) << '\n';
  }
  return os.str();
}

void write_trace_csv(const std::string& path, Objective form, const std::vector<TraceRow>& trace) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  os << trace_csv(form, trace);
  if (!os) fail(ErrorCode::kIo, "failed writing '" + path + "'");
}

}  // namespace swlat
