#pragma once

// Run configuration and versioned reports (JSON and CSV).

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pvdim/error.hpp"
#include "pvdim/measure.hpp"
#include "pvdim/pisot.hpp"

namespace pvdim {

using json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "pvdim.report/1";

struct RunConfig {
  std::string poly = "golden";  // name or ascending coefficients "a0,a1,...,ad"
  std::string side = "auto";    // alpha | beta | auto
  std::size_t n = 12;
  std::size_t n_max = 12;
  std::size_t state_budget = 20'000'000;
  long bits = 128;
  long bits_cap = 8192;
  std::vector<std::string> measures = {"bernoulli:0.5"};
  std::vector<double> taus = {0.25};
  int eps_from = 1;  // epsilon ladder 2^-eps_from .. 2^-eps_to
  int eps_to = 10;
  std::uint64_t seed = 1;
  std::string format = "json";
  unsigned threads = 1;
  std::size_t k_max = 12;
  std::size_t depth = 18;
  std::size_t samples = 0;  // 0: full enumeration of the attractor
  double beta = 0.0;        // nonzero: scan a plain beta (no PV structure)

  void validate() const {
    if (n == 0 || state_budget == 0 || threads == 0) throw Error(Errc::invalid_argument, "n, budget and threads must be positive");
    if (bits < 32 || bits_cap < bits) throw Error(Errc::invalid_argument, "need 32 <= bits <= bits_cap");
    if (side != "alpha" && side != "beta" && side != "auto") throw Error(Errc::invalid_argument, "side must be alpha, beta or auto");
    if (format != "json" && format != "csv") throw Error(Errc::invalid_argument, "format must be json or csv");
    for (double t : taus)
      if (!(t > 0.0 && t < 0.5)) throw Error(Errc::invalid_argument, "tau values must lie in (0, 0.5)");
    if (eps_from < 0 || eps_to <= eps_from || eps_to > 40) throw Error(Errc::invalid_argument, "bad epsilon ladder");
    for (const auto& m : measures) MeasureSpec::parse(m);
  }

  /// Resolved configuration embedded in reports. The thread budget is left
  /// out: it never changes results.
  json to_json() const {
    return json{{"poly", poly},       {"side", side},   {"n", n},           {"n_max", n_max},
                {"state_budget", state_budget}, {"bits", bits}, {"bits_cap", bits_cap}, {"measures", measures},
                {"taus", taus},       {"eps_from", eps_from}, {"eps_to", eps_to}, {"seed", seed},
                {"format", format},   {"k_max", k_max}, {"depth", depth},   {"samples", samples},
                {"beta", beta}};
  }

  /// Fields present in j override this configuration.
  void merge(const json& j) {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    get("poly", poly);
    get("side", side);
    get("n", n);
    get("n_max", n_max);
    get("state_budget", state_budget);
    get("bits", bits);
    get("bits_cap", bits_cap);
    get("measures", measures);
    get("taus", taus);
    get("eps_from", eps_from);
    get("eps_to", eps_to);
    get("seed", seed);
    get("format", format);
    get("threads", threads);
    get("k_max", k_max);
    get("depth", depth);
    get("samples", samples);
    get("beta", beta);
  }

  void merge_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot read config " + path);
    try {
      merge(json::parse(in));
    } catch (const json::exception& e) {
      throw Error(Errc::invalid_argument, "config " + path + ": " + e.what());
    }
  }

  std::vector<MeasureSpec> measure_specs() const {
    std::vector<MeasureSpec> out;
    for (const auto& m : measures) out.push_back(MeasureSpec::parse(m));
    return out;
  }
};

/// Resolves a polynomial name or coefficient list. Names: golden,
/// tribonacci, table1:K (K = 1..6), family:N (x^N + ... + x - 1).
inline std::pair<PisotNumber, Side> resolve_pisot(const std::string& spec, const std::string& side, mpfr_prec_t bits = kDefaultBits) {
  VerifyOptions opts;
  opts.bits = bits;
  if (spec == "golden") return {verify_pisot(IntPolynomial{-1, -1, 1}, opts), Side::alpha};
  if (spec == "tribonacci") return {verify_pisot(IntPolynomial{-1, -1, -1, 1}, opts), Side::alpha};
  auto catalog_pick = [&](int row, int family) -> std::pair<PisotNumber, Side> {
    for (const auto& r : table1_catalog())
      if (r.row == row && r.family_n == family) return {verify_pisot(to_alpha_side(r.poly, r.side), opts), r.side};
    throw Error(Errc::invalid_argument, "no such Table 1 entry: " + spec);
  };
  if (spec.rfind("table1:", 0) == 0) return catalog_pick(std::stoi(spec.substr(7)), 0);
  if (spec.rfind("family:", 0) == 0) return catalog_pick(7, std::stoi(spec.substr(7)));

  std::vector<BigInt> coeffs;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      coeffs.emplace_back(item);
    } catch (const std::exception&) {
      throw Error(Errc::invalid_argument, "bad coefficient '" + item + "' in '" + spec + "'");
    }
  }
  if (coeffs.size() < 2) throw Error(Errc::invalid_argument, "polynomial '" + spec + "' needs degree >= 1");
  IntPolynomial poly(std::move(coeffs));
  if (side == "alpha") return {verify_pisot(poly, opts), Side::alpha};
  if (side == "beta") return {verify_pisot(to_alpha_side(poly, Side::beta), opts), Side::beta};
  return verify_pisot_auto(poly, opts);
}

// ---------------------------------------------------------------------------

struct ReportTable {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

struct Report {
  std::string kind;
  json config = json::object();
  json summary = json::object();
  ReportTable table;
  std::vector<std::pair<std::string, std::string>> observations;  // (label, text)
  std::vector<std::pair<std::string, bool>> assertions;           // (name, passed)

  bool passed() const {
    for (const auto& a : assertions)
      if (!a.second) return false;
    return true;
  }

  void observe(std::string label, std::string text) { observations.emplace_back(std::move(label), std::move(text)); }
  void assert_that(std::string name, bool ok) { assertions.emplace_back(std::move(name), ok); }

  json to_json() const {
    json obs = json::array(), asserts = json::array(), rows = json::array();
    for (const auto& [l, t] : observations) obs.push_back({{"label", l}, {"text", t}});
    for (const auto& [n, p] : assertions) asserts.push_back({{"name", n}, {"passed", p}});
    for (const auto& r : table.rows) rows.push_back(r);
    return json{{"schema", kReportSchema}, {"kind", kind},
                {"config", config},        {"summary", summary},
                {"table", {{"columns", table.columns}, {"rows", rows}}},
                {"observations", obs},     {"assertions", asserts},
                {"passed", passed()}};
  }

  static Report from_json(const json& j) {
    if (j.value("schema", "") != kReportSchema) throw Error(Errc::invalid_argument, "unknown report schema");
    Report r;
    r.kind = j.at("kind").get<std::string>();
    r.config = j.at("config");
    r.summary = j.at("summary");
    r.table.columns = j.at("table").at("columns").get<std::vector<std::string>>();
    for (const auto& row : j.at("table").at("rows")) r.table.rows.push_back(row.get<std::vector<json>>());
    for (const auto& o : j.at("observations")) r.observe(o.at("label"), o.at("text"));
    for (const auto& a : j.at("assertions")) r.assert_that(a.at("name"), a.at("passed"));
    return r;
  }
};

/// Shortest decimal that reads back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline void write_json(const Report& r, std::ostream& os) { os << r.to_json().dump(2) << '\n'; }

/// Header comment lines, then the table.
inline void write_csv(const Report& r, std::ostream& os) {
  os << "# schema=" << kReportSchema << " kind=" << r.kind << " passed=" << (r.passed() ? "true" : "false") << '\n';
  for (std::size_t i = 0; i < r.table.columns.size(); ++i) os << (i ? "," : "") << r.table.columns[i];
  os << '\n';
  for (const auto& row : r.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
}

/// Parses a CSV written by write_csv back into cells; numbers become JSON
/// numbers, everything else strings.
inline ReportTable read_csv(std::istream& is) {
  ReportTable t;
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < l.size(); ++i) {
      const char c = l[i];
      if (quoted) {
        if (c == '"' && i + 1 < l.size() && l[i + 1] == '"') {
          cur += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cur += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    out.push_back(cur);
    return out;
  };
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line);
    if (header) {
      t.columns = cells;
      header = false;
      continue;
    }
    std::vector<json> row;
    for (const auto& c : cells) {
      if (c.empty()) {
        row.emplace_back(nullptr);
      } else if (c == "true" || c == "false") {
        row.emplace_back(c == "true");
      } else {
        std::int64_t i = 0;
        auto ri = std::from_chars(c.data(), c.data() + c.size(), i);
        if (ri.ec == std::errc() && ri.ptr == c.data() + c.size()) {
          row.emplace_back(i);
          continue;
        }
        double d = 0;
        auto rd = std::from_chars(c.data(), c.data() + c.size(), d);
        if (rd.ec == std::errc() && rd.ptr == c.data() + c.size()) row.emplace_back(d);
        else row.emplace_back(c);
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Writes to path ("-" for stdout) in the given format.
inline void emit_report(const Report& r, const std::string& format, const std::string& path) {
  if (format != "json" && format != "csv") throw Error(Errc::invalid_argument, "format must be json or csv");
  auto write = [&](std::ostream& os) { format == "json" ? write_json(r, os) : write_csv(r, os); };
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot open " + path + " for writing");
  write(out);
  if (!out) throw Error(Errc::io_error, "write to " + path + " failed");
}

/// Integer as a JSON number when it fits, else as a decimal string.
inline json big_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return v.convert_to<std::int64_t>();
  return v.str();
}

}  // namespace pvdim
