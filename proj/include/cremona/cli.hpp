#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cremona/error.hpp"

namespace cremona::cli {

// Bad command line: UnknownCommand, UnknownFlag, MissingRequired or BadValue.
// The CLI exits with status 2 on these.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Invocation {
  std::vector<std::string> path;              // e.g. {"orbit", "census"}
  std::map<std::string, std::string> flags;   // name without dashes -> value ("true" for switches)
  bool help = false;
  std::string help_text;

  bool has(const std::string& flag) const { return flags.count(flag) != 0; }
  const std::string& get(const std::string& flag) const;
};

// Arguments exclude the program name.
Invocation parse_invocation(const std::vector<std::string>& args);

// Exit status: 0 success, 1 domain error (error JSON on `err`), 2 usage error.
int execute(const Invocation& inv, std::ostream& out, std::ostream& err);

// parse_invocation + execute with usage errors reported on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Command paths in table order, e.g. "orbit census".
std::vector<std::string> command_names();

}  // namespace cremona::cli
