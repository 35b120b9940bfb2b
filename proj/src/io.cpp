#include "mfa/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>
#include <utility>

#include "json.hpp"

namespace mfa {

using nlohmann::json;

ParseError::ParseError(ParseErrorKind kind, std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), kind_(kind), line_(line) {}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
bool parse_token(std::string_view tok, T& value) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if constexpr (std::is_floating_point_v<T>) {
    if (!tok.empty() && *first == '+') ++first;
  }
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

struct Triplet {
  std::size_t a = 0;
  std::size_t b = 0;
  double w = 0.0;
  std::size_t line = 0;
};

struct RawListing {
  std::size_t n = 0;
  std::vector<Triplet> rows;
};

// Shared reader for the "n m" + m x "a b w" layout, 1-indexed.
RawListing read_listing(std::istream& in, const char* what) {
  RawListing listing;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (!have_header) {
      std::size_t n = 0, m = 0;
      if (tokens.size() != 2 || !parse_token(tokens[0], n) || !parse_token(tokens[1], m)) {
        throw ParseError(ParseErrorKind::malformed_header, lineno,
                         std::string(what) + " header must be \"<vertices> <entries>\"");
      }
      listing.n = n;
      expected = m;
      listing.rows.reserve(m);
      have_header = true;
      continue;
    }
    Triplet t;
    t.line = lineno;
    if (tokens.size() != 3 || !parse_token(tokens[0], t.a) || !parse_token(tokens[1], t.b) ||
        !parse_token(tokens[2], t.w) || !std::isfinite(t.w)) {
      throw ParseError(ParseErrorKind::malformed_line, lineno,
                       "expected \"<u> <v> <weight>\", got \"" + line + "\"");
    }
    if (listing.rows.size() == expected) {
      throw ParseError(ParseErrorKind::count_mismatch, lineno,
                       "more entries than the header's " + std::to_string(expected));
    }
    if (t.a < 1 || t.a > listing.n || t.b < 1 || t.b > listing.n) {
      throw ParseError(ParseErrorKind::index_out_of_range, lineno,
                       "index outside 1.." + std::to_string(listing.n));
    }
    --t.a;
    --t.b;
    listing.rows.push_back(t);
  }
  if (in.bad()) throw ParseError(ParseErrorKind::io_failure, lineno, "read failure");
  if (!have_header) throw ParseError(ParseErrorKind::malformed_header, lineno + 1, "missing header");
  if (listing.rows.size() != expected) {
    throw ParseError(ParseErrorKind::count_mismatch, lineno + 1,
                     "header promises " + std::to_string(expected) + " entries, found " +
                         std::to_string(listing.rows.size()) + " at end of input");
  }
  return listing;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(ParseErrorKind::io_failure, 0, "cannot open " + path.string());
  return in;
}

const char* objective_name(Objective o) { return o == Objective::cut ? "cut" : "energy"; }

Objective objective_from(const std::string& s) {
  if (s == "cut") return Objective::cut;
  if (s == "energy") return Objective::energy;
  throw ParseError(ParseErrorKind::malformed_line, 0, "unknown objective \"" + s + "\"");
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  auto [ptr, ec] = std::to_chars(buf, buf + 16, v, 16);
  return std::string(static_cast<std::size_t>(16 - (ptr - buf)), '0') + std::string(buf, ptr);
}

std::uint64_t parse_hex64(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(ParseErrorKind::malformed_line, 0, "bad digest \"" + std::string(s) + "\"");
  }
  return v;
}

double parse_number(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  if (!parse_token(s, v)) {
    throw ParseError(ParseErrorKind::malformed_line, 0, "bad number \"" + std::string(s) + "\"");
  }
  return v;
}

template <class T>
T parse_integer(std::string_view s) {
  T v{};
  if (!parse_token(s, v)) {
    throw ParseError(ParseErrorKind::malformed_line, 0, "bad integer \"" + std::string(s) + "\"");
  }
  return v;
}

json number_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double json_number(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

constexpr const char* kCsvHeader =
    "row,amplitude,trial,seed,value,energy,digest,nonconverged_steps,failed,mean,best,std,"
    "n_trials,n_failed";

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

void write_csv(const ResultRecord& r, std::ostream& out) {
  const auto& c = r.config;
  out << "# schema=" << kResultSchema << '\n'
      << "# problem=" << r.problem_id << '\n'
      << "# objective=" << objective_name(r.objective) << '\n'
      << "# solver_version=" << r.solver_version << '\n'
      << "# master_seed=" << r.master_seed << '\n'
      << "# mode=" << c.mode << '\n'
      << "# delta=" << format_number(c.delta) << '\n'
      << "# s_start=" << format_number(c.s_start) << '\n'
      << "# s_end=" << format_number(c.s_end) << '\n'
      << "# ds=" << format_number(c.ds) << '\n'
      << "# dt=" << format_number(c.dt) << '\n'
      << "# inner_tol=" << format_number(c.inner_tol) << '\n'
      << "# inner_max_iter=" << c.inner_max_iter << '\n'
      << "# n_trials=" << c.n_trials << '\n'
      << "# wall_clock_s=" << format_number(r.wall_clock_seconds) << '\n'
      << kCsvHeader << '\n';
  for (const auto& b : r.batches) {
    const auto amp = format_number(b.amplitude);
    for (const auto& t : b.trials) {
      out << "trial," << amp << ',' << t.index << ',' << t.seed << ',' << format_number(t.value)
          << ',' << format_number(t.energy) << ',' << hex64(t.digest) << ','
          << t.nonconverged_steps << ',' << (t.failed ? 1 : 0) << ",,,,,\n";
    }
    out << "summary," << amp << ",,,,,,,," << format_number(b.mean) << ','
        << format_number(b.best) << ',' << format_number(b.std) << ',' << b.trials.size() << ','
        << b.n_failed << '\n';
  }
}

ResultRecord read_csv(std::istream& in) {
  ResultRecord r;
  std::map<std::string, std::string> meta;
  std::string line;
  bool header = false;
  TrialBatchResult* current = nullptr;
  bool closed = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.starts_with("# ")) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    if (!header) {
      if (line != kCsvHeader) throw ParseError(ParseErrorKind::malformed_header, lineno, "bad CSV header");
      header = true;
      continue;
    }
    const auto f = split_commas(line);
    if (f.size() != 14) throw ParseError(ParseErrorKind::malformed_line, lineno, "expected 14 fields");
    // Every batch ends with its summary row.
    if (current == nullptr || closed) {
      r.batches.emplace_back();
      current = &r.batches.back();
      current->amplitude = parse_number(f[1]);
      closed = false;
    }
    if (f[0] == "trial") {
      TrialRecord t;
      t.index = parse_integer<std::size_t>(f[2]);
      t.seed = parse_integer<std::uint64_t>(f[3]);
      t.value = parse_number(f[4]);
      t.energy = parse_number(f[5]);
      t.digest = parse_hex64(f[6]);
      t.nonconverged_steps = parse_integer<std::size_t>(f[7]);
      t.failed = f[8] == "1";
      current->trials.push_back(t);
    } else if (f[0] == "summary") {
      current->mean = parse_number(f[9]);
      current->best = parse_number(f[10]);
      current->std = parse_number(f[11]);
      current->n_failed = parse_integer<std::size_t>(f[13]);
      closed = true;
    } else {
      throw ParseError(ParseErrorKind::malformed_line, lineno, "unknown row kind");
    }
  }
  if (!header) throw ParseError(ParseErrorKind::malformed_header, lineno + 1, "missing CSV header");

  auto get = [&](const char* key) -> std::string {
    const auto it = meta.find(key);
    if (it == meta.end()) throw ParseError(ParseErrorKind::malformed_header, 0, std::string("missing ") + key);
    return it->second;
  };
  if (get("schema") != kResultSchema) {
    throw ParseError(ParseErrorKind::malformed_header, 0, "unsupported schema " + get("schema"));
  }
  r.problem_id = get("problem");
  r.objective = objective_from(get("objective"));
  r.solver_version = get("solver_version");
  r.master_seed = parse_integer<std::uint64_t>(get("master_seed"));
  r.config.mode = get("mode");
  r.config.delta = parse_number(get("delta"));
  r.config.s_start = parse_number(get("s_start"));
  r.config.s_end = parse_number(get("s_end"));
  r.config.ds = parse_number(get("ds"));
  r.config.dt = parse_number(get("dt"));
  r.config.inner_tol = parse_number(get("inner_tol"));
  r.config.inner_max_iter = parse_integer<std::uint64_t>(get("inner_max_iter"));
  r.config.n_trials = parse_integer<std::uint64_t>(get("n_trials"));
  r.wall_clock_seconds = parse_number(get("wall_clock_s"));
  for (auto& b : r.batches) {
    b.objective = r.objective;
    // The CSV does not carry ECDF rows; rebuild them from the trial values.
    std::vector<double> values;
    for (const auto& t : b.trials) {
      if (!t.failed) values.push_back(t.value);
    }
    b.ecdf = empirical_cdf(values);
  }
  return r;
}

void write_json(const ResultRecord& r, std::ostream& out) {
  json doc;
  doc["schema"] = kResultSchema;
  doc["problem"] = r.problem_id;
  doc["objective"] = objective_name(r.objective);
  doc["solver_version"] = r.solver_version;
  doc["master_seed"] = r.master_seed;
  doc["wall_clock_s"] = number_json(r.wall_clock_seconds);
  const auto& c = r.config;
  doc["config"] = {{"mode", c.mode},
                   {"delta", c.delta},
                   {"s_start", c.s_start},
                   {"s_end", c.s_end},
                   {"ds", c.ds},
                   {"dt", c.dt},
                   {"inner_tol", c.inner_tol},
                   {"inner_max_iter", c.inner_max_iter},
                   {"n_trials", c.n_trials}};
  json batches = json::array();
  for (const auto& b : r.batches) {
    json trials = json::array();
    for (const auto& t : b.trials) {
      json jt = {{"index", t.index},
                 {"seed", t.seed},
                 {"value", number_json(t.value)},
                 {"energy", number_json(t.energy)},
                 {"digest", hex64(t.digest)},
                 {"nonconverged_steps", t.nonconverged_steps},
                 {"failed", t.failed}};
      if (t.failed) jt["error"] = t.error;
      trials.push_back(std::move(jt));
    }
    json ecdf = json::array();
    for (const auto& p : b.ecdf) ecdf.push_back({p.value, p.fraction});
    batches.push_back({{"amplitude", b.amplitude},
                       {"n_trials", b.trials.size()},
                       {"n_failed", b.n_failed},
                       {"mean", number_json(b.mean)},
                       {"best", number_json(b.best)},
                       {"std", number_json(b.std)},
                       {"trials", std::move(trials)},
                       {"ecdf", std::move(ecdf)}});
  }
  doc["batches"] = std::move(batches);
  out << doc.dump(2) << '\n';
}

ResultRecord read_json(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(ParseErrorKind::malformed_line, 0, e.what());
  }
  try {
    if (doc.at("schema").get<std::string>() != kResultSchema) {
      throw ParseError(ParseErrorKind::malformed_header, 0, "unsupported schema");
    }
    ResultRecord r;
    r.problem_id = doc.at("problem").get<std::string>();
    r.objective = objective_from(doc.at("objective").get<std::string>());
    r.solver_version = doc.at("solver_version").get<std::string>();
    r.master_seed = doc.at("master_seed").get<std::uint64_t>();
    r.wall_clock_seconds = json_number(doc.at("wall_clock_s"));
    const auto& c = doc.at("config");
    r.config.mode = c.at("mode").get<std::string>();
    r.config.delta = c.at("delta").get<double>();
    r.config.s_start = c.at("s_start").get<double>();
    r.config.s_end = c.at("s_end").get<double>();
    r.config.ds = c.at("ds").get<double>();
    r.config.dt = c.at("dt").get<double>();
    r.config.inner_tol = c.at("inner_tol").get<double>();
    r.config.inner_max_iter = c.at("inner_max_iter").get<std::uint64_t>();
    r.config.n_trials = c.at("n_trials").get<std::uint64_t>();
    for (const auto& jb : doc.at("batches")) {
      TrialBatchResult b;
      b.objective = r.objective;
      b.amplitude = jb.at("amplitude").get<double>();
      b.n_failed = jb.at("n_failed").get<std::size_t>();
      b.mean = json_number(jb.at("mean"));
      b.best = json_number(jb.at("best"));
      b.std = json_number(jb.at("std"));
      for (const auto& jt : jb.at("trials")) {
        TrialRecord t;
        t.index = jt.at("index").get<std::size_t>();
        t.seed = jt.at("seed").get<std::uint64_t>();
        t.value = json_number(jt.at("value"));
        t.energy = json_number(jt.at("energy"));
        t.digest = parse_hex64(jt.at("digest").get<std::string>());
        t.nonconverged_steps = jt.at("nonconverged_steps").get<std::size_t>();
        t.failed = jt.at("failed").get<bool>();
        if (jt.contains("error")) t.error = jt.at("error").get<std::string>();
        b.trials.push_back(std::move(t));
      }
      for (const auto& p : jb.at("ecdf")) b.ecdf.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      r.batches.push_back(std::move(b));
    }
    return r;
  } catch (const json::exception& e) {
    throw ParseError(ParseErrorKind::malformed_line, 0, e.what());
  }
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

WeightedGraph parse_gset(std::istream& in) {
  const auto listing = read_listing(in, "G-set");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<Edge> edges;
  edges.reserve(listing.rows.size());
  for (const auto& t : listing.rows) {
    if (t.a == t.b) {
      throw ParseError(ParseErrorKind::self_loop, t.line, "self-loop at vertex " + std::to_string(t.a + 1));
    }
    if (!seen.emplace(std::min(t.a, t.b), std::max(t.a, t.b)).second) {
      throw ParseError(ParseErrorKind::duplicate_edge, t.line,
                       "duplicate edge " + std::to_string(t.a + 1) + "-" + std::to_string(t.b + 1));
    }
    edges.push_back({t.a, t.b, t.w});
  }
  return WeightedGraph(listing.n, std::move(edges));
}

WeightedGraph read_gset_file(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_gset(in);
}

QuboModel parse_qubo(std::istream& in) {
  const auto listing = read_listing(in, "QUBO");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<QuboEntry> entries;
  for (const auto& t : listing.rows) {
    if (!seen.emplace(std::min(t.a, t.b), std::max(t.a, t.b)).second) {
      throw ParseError(ParseErrorKind::duplicate_edge, t.line,
                       "duplicate entry " + std::to_string(t.a + 1) + "-" + std::to_string(t.b + 1));
    }
    entries.push_back({t.a, t.b, t.w});
  }
  return QuboModel(listing.n, std::move(entries));
}

QuboModel read_qubo_file(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_qubo(in);
}

void write_gset(const WeightedGraph& graph, std::ostream& out) {
  out << graph.vertex_count() << ' ' << graph.edges().size() << '\n';
  for (const auto& e : graph.edges()) {
    out << e.u + 1 << ' ' << e.v + 1 << ' ' << format_number(e.weight) << '\n';
  }
}

void write_results(const ResultRecord& record, ResultFormat format, std::ostream& out) {
  if (format == ResultFormat::csv) {
    write_csv(record, out);
  } else {
    write_json(record, out);
  }
}

ResultRecord read_results(std::istream& in, ResultFormat format) {
  return format == ResultFormat::csv ? read_csv(in) : read_json(in);
}

void write_ecdf_csv(const ResultRecord& record, std::ostream& out) {
  out << "amplitude,value,fraction\n";
  for (const auto& b : record.batches) {
    for (const auto& p : b.ecdf) {
      out << format_number(b.amplitude) << ',' << format_number(p.value) << ','
          << format_number(p.fraction) << '\n';
    }
  }
}

}  // namespace mfa
