#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pnforms/field.hpp"

namespace pnforms::cli {

enum Exit : int { ok = 0, usage = 1, not_witnessed = 2 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inclusive integer range written "a..b" or "a"; "all" is resolved by the caller.
struct IntRange {
  int first = 0;
  int last = 0;
  bool all = false;

  std::vector<int> values() const;
};

/// Throws UsageError for malformed or empty ranges.
IntRange parse_range(const std::string& text, const std::string& option, bool allow_all = false);

enum class Format { table, json, csv };

struct RunConfig {
  std::string subcommand;
  std::string n = "2", p = "0", d = "0", t = "0";
  int s = 0;
  int base = 0;
  FieldSpec field = FieldSpec::prime(101);
  std::size_t trials = 5;
  std::uint64_t seed = 0;
  std::string out;
  std::string verify;  // maxrank: certificate to re-verify
  Format format = Format::table;
  std::size_t threads = 0;
  std::string inject_fault;  // verify-display test hook
};

int cmd_bott(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_h0(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify_display(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_maxrank(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_horace(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses arguments (without the program name) and dispatches. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pnforms::cli
