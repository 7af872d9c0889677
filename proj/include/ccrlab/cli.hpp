#pragma once

#include <ostream>

// Command-line front end. Exit status: 0 success, 2 validation or schema
// failure, 3 numerical-check failure, 1 unexpected internal error.
namespace ccrlab::cli {

inline constexpr int kSchemaVersion = 1;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ccrlab::cli
