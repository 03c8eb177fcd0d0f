#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sdlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitResource = 2;
inline constexpr int kExitUsage = 64;

/// Parses "a+bi", "a-bi", "bi", "i", "-i" or a plain real; throws a parse error otherwise.
std::complex<double> parse_complex(std::string_view text);
/// A complex literal whose imaginary part is zero.
double parse_real(std::string_view text);

/// Runs one sdlab command; args exclude the program name. Returns the process exit code.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sdlab::cli
