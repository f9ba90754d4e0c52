#pragma once

// Shared vocabulary: error kinds, verdicts, and bounded-search constants.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace emvkit {

enum class ErrorKind {
  invalid_size,
  invalid_input,
  domain_error,
  bound_exhausted,
  unsupported,
  precondition_violation,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_size: return "invalid-size";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::domain_error: return "domain-error";
    case ErrorKind::bound_exhausted: return "bound-exhausted";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::precondition_violation: return "precondition-violation";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}
  ErrorKind kind() const noexcept { return kind_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

/// Existential searches look this many levels beyond the probe level.
inline constexpr int kSearchSlack = 2;

/// Default bound for universally quantified checks on infinite backends.
inline constexpr int kDefaultBound = 4;

inline int search_level(int level) { return level + kSearchSlack; }

enum class Status {
  pass,
  pass_up_to_bound,
  fail,
  fail_up_to_bound,
  vacuous,
  not_a_competitor,
};

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::pass_up_to_bound: return "pass-up-to-bound";
    case Status::fail: return "fail";
    case Status::fail_up_to_bound: return "fail-up-to-bound";
    case Status::vacuous: return "vacuous";
    case Status::not_a_competitor: return "not-a-competitor";
  }
  return "unknown";
}

/// Outcome of a semi-decision. A failing verdict names the violated clause and
/// carries the concrete elements/indices that witness it.
struct Verdict {
  Status status = Status::pass;
  std::string check;
  std::string clause;
  std::map<std::string, std::string> witness;
  int bound = 0;
  std::string decided_by;
  std::vector<std::string> notes;

  bool ok() const { return status == Status::pass || status == Status::pass_up_to_bound; }
  bool failed() const { return status == Status::fail || status == Status::fail_up_to_bound; }

  static Verdict passing(std::string check, bool exhaustive, int bound, std::string decided_by) {
    Verdict v;
    v.check = std::move(check);
    v.status = exhaustive ? Status::pass : Status::pass_up_to_bound;
    v.bound = exhaustive ? 0 : bound;
    v.decided_by = std::move(decided_by);
    return v;
  }

  static Verdict failing(std::string check, std::string clause,
                         std::map<std::string, std::string> witness, int bound = 0) {
    Verdict v;
    v.check = std::move(check);
    v.status = Status::fail;
    v.clause = std::move(clause);
    v.witness = std::move(witness);
    v.bound = bound;
    return v;
  }
};

/// Folds a sub-verdict into an accumulator: the first failure wins, and any
/// bounded pass demotes an exhaustive pass.
inline void absorb(Verdict& acc, const Verdict& sub) {
  if (!acc.ok()) return;
  if (!sub.ok()) {
    std::string check = acc.check;
    acc = sub;
    if (!check.empty()) acc.check = check;
    return;
  }
  if (sub.status == Status::pass_up_to_bound) {
    acc.status = Status::pass_up_to_bound;
    acc.bound = std::max(acc.bound, sub.bound);
  }
  if (acc.decided_by.empty()) {
    acc.decided_by = sub.decided_by;
  } else if (!sub.decided_by.empty() && acc.decided_by.find(sub.decided_by) == std::string::npos) {
    acc.decided_by += "+" + sub.decided_by;
  }
}

}  // namespace emvkit
