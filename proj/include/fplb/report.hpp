#pragma once

#include <string>
#include <vector>

#include "fplb/exact.hpp"
#include "fplb/json_io.hpp"

namespace fplb {

/// A located piece of evidence: what was expected at `location` and what was
/// observed. Scalars are stored as length-1 vectors.
struct Witness {
  std::string location;
  Vector expected;
  Vector actual;
};

/// Structured pass/fail record for one checked claim. A failing report always
/// carries at least one witness, because the only way to fail is `fail()`.
class VerificationReport {
 public:
  VerificationReport(std::string claim, std::string range)
      : claim_(std::move(claim)), range_(std::move(range)) {}

  const std::string& claim() const { return claim_; }
  const std::string& range() const { return range_; }
  bool passed() const { return passed_; }
  const std::vector<Witness>& witnesses() const { return witnesses_; }
  const std::vector<std::string>& notes() const { return notes_; }

  void witness(std::string location, Vector expected, Vector actual);
  void witness(std::string location, const Rational& expected, const Rational& actual);
  void fail(std::string location, Vector expected, Vector actual);
  void fail(std::string location, const Rational& expected, const Rational& actual);
  /// Records a check: passes through as a witness when equal, fails otherwise.
  bool expect_equal(std::string location, const Vector& expected, const Vector& actual);
  bool expect_equal(std::string location, const Rational& expected, const Rational& actual);
  void note(std::string text) { notes_.push_back(std::move(text)); }

  /// First failing witness, or nullptr.
  const Witness* first_failure() const;
  /// Folds another report in as a sub-claim.
  void absorb(const VerificationReport& other);

  Json to_json() const;

 private:
  std::string claim_;
  std::string range_;
  bool passed_ = true;
  std::vector<Witness> witnesses_;
  std::vector<std::size_t> failures_;
  std::vector<std::string> notes_;
};

}  // namespace fplb
