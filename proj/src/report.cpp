#include "fplb/report.hpp"

#include <algorithm>

namespace fplb {

void VerificationReport::witness(std::string location, Vector expected, Vector actual) {
  witnesses_.push_back({std::move(location), std::move(expected), std::move(actual)});
}

void VerificationReport::witness(std::string location, const Rational& expected,
                                 const Rational& actual) {
  witness(std::move(location), Vector{expected}, Vector{actual});
}

void VerificationReport::fail(std::string location, Vector expected, Vector actual) {
  passed_ = false;
  failures_.push_back(witnesses_.size());
  witness(std::move(location), std::move(expected), std::move(actual));
}

void VerificationReport::fail(std::string location, const Rational& expected,
                              const Rational& actual) {
  fail(std::move(location), Vector{expected}, Vector{actual});
}

bool VerificationReport::expect_equal(std::string location, const Vector& expected,
                                      const Vector& actual) {
  if (expected == actual) {
    witness(std::move(location), expected, actual);
    return true;
  }
  fail(std::move(location), expected, actual);
  return false;
}

bool VerificationReport::expect_equal(std::string location, const Rational& expected,
                                      const Rational& actual) {
  return expect_equal(std::move(location), Vector{expected}, Vector{actual});
}

const Witness* VerificationReport::first_failure() const {
  return failures_.empty() ? nullptr : &witnesses_[failures_.front()];
}

void VerificationReport::absorb(const VerificationReport& other) {
  for (std::size_t i = 0; i < other.witnesses_.size(); ++i) {
    const bool failed =
        std::find(other.failures_.begin(), other.failures_.end(), i) != other.failures_.end();
    Witness w = other.witnesses_[i];
    w.location = other.claim_ + ": " + w.location;
    if (failed) {
      fail(std::move(w.location), std::move(w.expected), std::move(w.actual));
    } else {
      witness(std::move(w.location), std::move(w.expected), std::move(w.actual));
    }
  }
  for (const auto& n : other.notes_) notes_.push_back(other.claim_ + ": " + n);
}

namespace {

Json value_json(const Vector& v) {
  if (v.size() == 1) return fplb::to_json(v[0]);
  return fplb::to_json(v);
}

}  // namespace

Json VerificationReport::to_json() const {
  Json ws = Json::array();
  for (std::size_t i = 0; i < witnesses_.size(); ++i) {
    const auto& w = witnesses_[i];
    const bool failed = std::find(failures_.begin(), failures_.end(), i) != failures_.end();
    ws.push_back({{"location", w.location},
                  {"pass", !failed},
                  {"expected", value_json(w.expected)},
                  {"actual", value_json(w.actual)}});
  }
  return Json{{"claim", claim_}, {"range", range_}, {"pass", passed_}, {"witnesses", std::move(ws)},
              {"notes", notes_}};
}

}  // namespace fplb
