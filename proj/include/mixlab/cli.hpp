#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mixlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPredicate = 1;
inline constexpr int kExitConfig = 2;

// Full command line including the program name. Reports go to --out; the
// one-line summary goes to out, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SelftestCase {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<SelftestCase> run_selftest();

}  // namespace mixlab
