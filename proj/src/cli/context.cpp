#include "context.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ccrlab/cli.hpp"

namespace ccrlab::cli {

void schema_error(const std::string& pointer, const std::string& message) {
  throw Error(ErrorCode::kInvalidConfig, pointer + ": " + message);
}

std::string load_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidInput, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json load_json_file(const std::string& path) {
  std::string text = load_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
}

Section::Section(const json& j, std::string pointer, std::initializer_list<std::string_view> allowed)
    : j_(j.is_null() ? json::object() : j), pointer_(std::move(pointer)) {
  if (!j_.is_object()) schema_error(pointer_, "expected an object");
  for (const auto& [k, v] : j_.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) schema_error(at(k), "unknown key");
  }
}

const json& Section::get(std::string_view key) const {
  static const json null;
  auto it = j_.find(std::string(key));
  return it == j_.end() ? null : *it;
}

json Section::object_or_file(std::string_view key) const {
  const json& v = get(key);
  if (v.is_string()) return load_json_file(v.get<std::string>());
  return v;
}

double Section::number(std::string_view key, double def) const {
  const json& v = get(key);
  if (v.is_null()) return def;
  if (!v.is_number()) schema_error(at(key), "expected a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) schema_error(at(key), "expected a finite number");
  return d;
}

long Section::integer(std::string_view key, long def, long lo, long hi) const {
  const json& v = get(key);
  if (v.is_null()) return def;
  if (!v.is_number_integer()) schema_error(at(key), "expected an integer");
  long x = v.get<long>();
  if (x < lo || x > hi) {
    schema_error(at(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + std::to_string(x));
  }
  return x;
}

bool Section::boolean(std::string_view key, bool def) const {
  const json& v = get(key);
  if (v.is_null()) return def;
  if (!v.is_boolean()) schema_error(at(key), "expected true or false");
  return v.get<bool>();
}

std::string Section::text(std::string_view key, const std::string& def) const {
  const json& v = get(key);
  if (v.is_null()) return def;
  if (!v.is_string()) schema_error(at(key), "expected a string");
  return v.get<std::string>();
}

std::string Section::choice(std::string_view key, const std::string& def,
                            std::initializer_list<std::string_view> allowed) const {
  std::string s = text(key, def);
  if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
    std::string list;
    for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    schema_error(at(key), "expected one of " + list + ", got \"" + s + "\"");
  }
  return s;
}

std::vector<double> Section::numbers(std::string_view key) const {
  const json& v = get(key);
  if (!v.is_array() || v.empty()) schema_error(at(key), "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) schema_error(at(key) + "/" + std::to_string(i), "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

void Section::require(bool ok, std::string_view key, const std::string& message) const {
  if (!ok) schema_error(at(key), message);
}

void Context::emit(const std::string& file, const std::string& text, bool primary) const {
  if (!out_dir) {
    (primary ? out : err) << text;
    return;
  }
  std::filesystem::create_directories(*out_dir);
  auto path = *out_dir / file;
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw Error(ErrorCode::kInvalidInput, "cannot write " + path.string());
  out << "wrote " << path.string() << "\n";
}

void Context::emit_json(const std::string& file, const json& j, bool primary) const {
  emit(file, j.dump(2) + "\n", primary);
}

json Context::report() const {
  return {{"schema_version", kSchemaVersion}, {"subcommand", name}, {"config", section}};
}

int Context::numerical_failure(const std::string& what) const {
  err << "numerical check failed: " << what << "\n";
  return 3;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace ccrlab::cli
