#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kqbh/charts.hpp"

namespace kqbh {

class UnknownCheck : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownSuite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// More than 99% of candidate points were rejected.
class DomainExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- seeded sampling ----

/// SplitMix64 used as a counter-based stream: draw i is
/// mix(seed + (i + 1) * 0x9E3779B97F4A7C15), the same sequence the
/// usual stateful SplitMix64 produces from state = seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : seed_(seed) {}

  static std::uint64_t mix(std::uint64_t z);
  std::uint64_t at(std::uint64_t index) const { return mix(seed_ + (index + 1) * 0x9E3779B97F4A7C15ULL); }
  std::uint64_t next() { return at(counter_++); }
  /// Top 53 bits scaled into [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

enum class DomainId { polar, parabolic };

/// Polar: r in [0.5, 3], phi in [0, 2pi), p_r in [-2, 2], |p_phi| in [0.3, 2].
/// Parabolic: |a|, |b| in [0.5, 2], p_a, p_b in [-2, 2], rejected when |J| < 0.1.
struct SampleDomain {
  DomainId id;
  std::function<bool(const PhasePoint&)> exclude;  // optional extra exclusion
};

/// Draws `count` accepted points. Throws DomainExhausted when more than 99%
/// of candidates are rejected (checked once 100 * count candidates were drawn).
std::vector<PhasePoint> sample_points(const SampleDomain& domain, std::uint64_t seed, int count);

// ---- checks ----

enum class CheckKind { pointwise, trajectory, audit, witness };
/// exact 1e-10 and fd 1e-6 can be overridden; strict 1e-12 and audit 1e-8 are fixed.
enum class Tier { exact, fd, strict, audit, custom };
/// full: the configured sample count; reduced: min(100, configured).
enum class SampleClass { full, reduced };

std::string_view to_string(CheckKind k);
std::string_view to_string(Tier t);

/// Residual at one point, with optional named components for audits.
struct Eval {
  double residual = 0.0;
  std::vector<std::pair<std::string, double>> parts;
};

/// Result of a check that is not a sweep over sampled points.
struct Outcome {
  double residual = 0.0;
  std::optional<PhasePoint> worst_point;
  int samples_run = 1;
  std::vector<std::string> notes;
};

struct CheckSpec {
  std::string id;
  std::string ref;  // the identity being checked, as a formula
  std::string suite;
  CheckKind kind = CheckKind::pointwise;
  Tier tier = Tier::exact;
  double custom_tolerance = 0.0;
  SampleClass samples = SampleClass::full;
  DomainId domain = DomainId::polar;
  std::function<bool(const PhasePoint&)> exclude;
  std::string integrating_factor;  // name of the factor field, when the identity has one
  /// Audit whose discrepancies are findings to be listed, not defects.
  bool finding = false;
  std::string note;  // fixed remark, e.g. how the residual is normalized
  std::function<Eval(const PhasePoint&)> pointwise;
  std::function<Outcome()> single;
};

struct RunConfig {
  int samples = 1000;
  double tol_exact = 1e-10;
  double tol_fd = 1e-6;
  int threads = 1;  // sample evaluation only; results do not depend on it
};

double tolerance_for(const CheckSpec& spec, const RunConfig& cfg);

enum class Status { pass, fail, flagged };
std::string_view to_string(Status s);
Status status_from_string(std::string_view s);

struct CheckReport {
  std::string id;
  std::string ref;
  std::string kind;
  int samples_run = 0;
  double max_abs_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  Status status = Status::fail;
  std::optional<PhasePoint> worst_point;
  std::vector<std::string> notes;

  friend bool operator==(const CheckReport&, const CheckReport&) = default;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  RunConfig config;
  std::vector<CheckReport> checks;
  int passed = 0;
  int failed = 0;
  int flagged = 0;
  double wall_time = 0.0;

  bool ok() const { return failed == 0; }
};

bool operator==(const RunConfig& a, const RunConfig& b);
/// Equality ignores wall time.
bool operator==(const SuiteReport& a, const SuiteReport& b);

/// All registered checks in registry order.
const std::vector<CheckSpec>& registry();
const CheckSpec& find_check(const std::string& id);
const std::vector<std::string>& suite_names();  // calculus, polar, parabolic, flow, all
bool is_suite(const std::string& name);

CheckReport run_check(const CheckSpec& spec, std::uint64_t seed, const RunConfig& cfg = {});
CheckReport run_check(const std::string& id, std::uint64_t seed, const RunConfig& cfg = {});
SuiteReport run_suite(const std::string& suite, std::uint64_t seed, const RunConfig& cfg = {});

/// Named structural claim -> ids of the checks that exercise it.
const std::map<std::string, std::vector<std::string>>& coverage_map();

// registration, one list per area
std::vector<CheckSpec> calculus_checks();
std::vector<CheckSpec> polar_checks();
std::vector<CheckSpec> parabolic_checks();
std::vector<CheckSpec> flow_checks();

}  // namespace kqbh
