#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ccrlab/error.hpp"

namespace ccrlab::cli {

using nlohmann::json;

/// Throws kInvalidConfig with "pointer: message".
[[noreturn]] void schema_error(const std::string& pointer, const std::string& message);

json load_json_file(const std::string& path);
std::string load_text_file(const std::string& path);

/// Read access to one config object with a fixed key set; unknown keys are
/// rejected on construction.
class Section {
 public:
  Section(const json& j, std::string pointer, std::initializer_list<std::string_view> allowed);

  const std::string& pointer() const { return pointer_; }
  std::string at(std::string_view key) const { return pointer_ + "/" + std::string(key); }
  bool has(std::string_view key) const { return j_.contains(std::string(key)); }
  /// Null when absent.
  const json& get(std::string_view key) const;
  /// The value, or the parsed file when the value is a path string.
  json object_or_file(std::string_view key) const;

  double number(std::string_view key, double def) const;
  long integer(std::string_view key, long def, long lo, long hi) const;
  bool boolean(std::string_view key, bool def) const;
  std::string text(std::string_view key, const std::string& def) const;
  std::string choice(std::string_view key, const std::string& def, std::initializer_list<std::string_view> allowed) const;
  std::vector<double> numbers(std::string_view key) const;
  void require(bool ok, std::string_view key, const std::string& message) const;

 private:
  json j_;
  std::string pointer_;
};

struct Context {
  std::string name;  // subcommand
  json section;      // config section merged with command-line flags
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> out_dir;
  std::ostream& out;
  std::ostream& err;

  std::string pointer() const { return "/" + name; }
  /// With an output directory the text goes to <out>/<file>; otherwise the
  /// primary report goes to stdout and secondary ones to stderr.
  void emit(const std::string& file, const std::string& text, bool primary) const;
  void emit_json(const std::string& file, const json& j, bool primary) const;
  /// Report skeleton shared by all subcommands.
  json report() const;
  /// Prints the failed check to stderr and returns exit status 3.
  int numerical_failure(const std::string& what) const;
};

/// "%.17g".
std::string fmt17(double v);

/// Re-raises a library error of the given code with the config pointer in front.
template <class F>
auto at_key(const std::string& pointer, ErrorCode code, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() != code) throw;
    std::string what = e.what();
    auto colon = what.find(": ");
    throw Error(code, pointer + ": " + (colon == std::string::npos ? what : what.substr(colon + 2)));
  }
}

int run_algebra(const Context& ctx);
int run_npoint(const Context& ctx);
int run_phase(const Context& ctx);
int run_lattice(const Context& ctx);
int run_kernel(const Context& ctx);
int run_wick(const Context& ctx);
int run_wf(const Context& ctx);
int run_selftest(const Context& ctx);

}  // namespace ccrlab::cli
