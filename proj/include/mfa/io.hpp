#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfa/ensemble.hpp"
#include "mfa/model.hpp"

namespace mfa {

inline constexpr const char* kResultSchema = "mfa-results/1";
inline constexpr const char* kSolverVersion = "0.1.0";

enum class ParseErrorKind {
  malformed_header,
  malformed_line,
  index_out_of_range,
  self_loop,
  duplicate_edge,
  count_mismatch,
  io_failure,
};

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string& message);
  ParseErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
};

/// G-set text: header "n m", then m lines "u v w" with 1-indexed vertices.
/// Vertices are 0-indexed in the returned graph; weights are read as reals.
WeightedGraph parse_gset(std::istream& in);
WeightedGraph read_gset_file(const std::filesystem::path& path);

/// Same layout as G-set with "i j q" entries; i == j sets a diagonal term and
/// an off-diagonal line sets both Q_ij and Q_ji.
QuboModel parse_qubo(std::istream& in);
QuboModel read_qubo_file(const std::filesystem::path& path);

void write_gset(const WeightedGraph& graph, std::ostream& out);

struct SolverEcho {
  std::string mode = "quantum";
  double delta = 1.0;
  double s_start = 0.5;
  double s_end = 1.0;
  double ds = 1e-3;
  double dt = 0.0;
  double inner_tol = 1e-8;
  std::uint64_t inner_max_iter = 200;
  std::uint64_t n_trials = 200;

  friend bool operator==(const SolverEcho&, const SolverEcho&) = default;
};

struct ResultRecord {
  std::string problem_id;
  Objective objective = Objective::cut;
  SolverEcho config;
  std::uint64_t master_seed = 0;
  std::vector<TrialBatchResult> batches;
  double wall_clock_seconds = 0.0;
  std::string solver_version = kSolverVersion;
};

enum class ResultFormat { csv, json };

/// CSV: "# key=value" preamble echoing the configuration, a header row, one
/// row per trial and one summary row per batch. JSON: a single document with
/// a top-level "schema" key. Numbers use shortest round-trip formatting.
void write_results(const ResultRecord& record, ResultFormat format, std::ostream& out);
ResultRecord read_results(std::istream& in, ResultFormat format);

/// "amplitude,value,fraction" rows for plotting cumulative distributions.
void write_ecdf_csv(const ResultRecord& record, std::ostream& out);

std::string format_number(double v);

}  // namespace mfa
