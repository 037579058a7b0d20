#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "ubg/algebra.hpp"

namespace ubg {

struct Counterexample {
  std::string clause;
  std::vector<ElementId> ids;
  std::string detail;
};

struct VerificationReport {
  std::string suite;
  std::uint64_t attempted = 0;
  std::uint64_t failed = 0;
  bool sampled = false;
  std::uint64_t seed = 0;
  std::vector<Counterexample> counterexamples;  // first kMaxKept failures
  std::vector<std::string> notes;

  static constexpr std::size_t kMaxKept = 20;

  bool ok() const { return failed == 0; }
  std::uint64_t passed() const { return attempted - failed; }

  template <typename Detail>
  bool check(bool cond, const char* clause, std::vector<ElementId> ids, Detail&& detail) {
    ++attempted;
    if (cond) return true;
    ++failed;
    if (counterexamples.size() < kMaxKept) counterexamples.push_back({clause, std::move(ids), detail()});
    return false;
  }

  void merge(const VerificationReport& other) {
    attempted += other.attempted;
    failed += other.failed;
    sampled = sampled || other.sampled;
    for (const auto& c : other.counterexamples) {
      if (counterexamples.size() < kMaxKept) counterexamples.push_back(c);
    }
    for (const auto& n : other.notes) notes.push_back(other.suite + ": " + n);
  }

  std::string str() const {
    std::ostringstream os;
    os << suite << ": " << (ok() ? "PASS" : "FAIL") << " (" << passed() << "/" << attempted << " checks";
    if (sampled) os << ", sampled with seed " << seed;
    os << ")\n";
    for (const auto& n : notes) os << "  note: " << n << "\n";
    for (const auto& c : counterexamples) {
      os << "  [" << c.clause << "] ids";
      for (auto id : c.ids) os << " " << id;
      os << ": " << c.detail << "\n";
    }
    if (failed > counterexamples.size()) {
      os << "  ... " << failed - counterexamples.size() << " more\n";
    }
    return os.str();
  }
};

}  // namespace ubg
