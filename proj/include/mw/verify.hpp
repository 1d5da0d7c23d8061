#pragma once

// Self-check suites run by `mwcg verify`: randomized oracle comparisons,
// exact operation counts and solver invariants at small scale.
//
// A fault can be injected into one primitive to confirm that the suites
// notice; the fault only affects the copies of the primitives used here.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mw {

enum class Fault { none, two_sum, dw_add, normalize_dw, qtw_mul };

std::string_view to_string(Fault f);
std::optional<Fault> parse_fault(std::string_view s);

struct VerifyOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 20240601;
  Fault fault = Fault::none;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::vector<std::string> details;
};

std::vector<std::string> verify_suite_names();

// Runs every suite (or only `only` when non-empty) in a fixed order.
std::vector<SuiteResult> run_verification(const VerifyOptions& opts,
                                          const std::vector<std::string>& only = {});

}  // namespace mw
