#ifndef FER_CLI_HPP
#define FER_CLI_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation; `args` excludes the program name.
/// Subcommands: extract, train, predict, evaluate, annotate, gen-synthetic.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// `key=value` lines, `#` comments, blank lines ignored. Throws DataError on a line without '='.
std::map<std::string, std::string> parse_config(std::string_view text);

}  // namespace fer::cli

#endif  // FER_CLI_HPP
