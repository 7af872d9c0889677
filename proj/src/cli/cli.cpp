#include "ccrlab/cli.hpp"

#include <functional>
#include <map>

#include "CLI11.hpp"

#include "context.hpp"

namespace ccrlab::cli {
namespace {

constexpr std::string_view kSubcommands[] = {"algebra", "npoint", "phase", "lattice",
                                             "kernel",  "wick",   "wf",    "selftest"};

// Sets flags[a][b]... = v for a key path "a/b". A file path met on the way
// (e.g. --grid FILE before --dt) is replaced by the file's contents.
void set_path(json& flags, const std::string& path, json v) {
  json* node = &flags;
  std::size_t start = 0;
  for (std::size_t slash = path.find('/'); slash != std::string::npos; slash = path.find('/', start)) {
    node = &(*node)[path.substr(start, slash - start)];
    if (node->is_string()) *node = load_json_file(node->get<std::string>());
    start = slash + 1;
  }
  (*node)[path.substr(start)] = std::move(v);
}

// Overlays command-line values on the config section. A nested flag value
// replaces a file path in the section by the file's contents first.
json merge_flags(json section, const json& flags, const std::string& pointer) {
  if (section.is_null()) section = json::object();
  if (!section.is_object()) schema_error(pointer, "expected an object");
  for (const auto& [k, v] : flags.items()) {
    if (v.is_object()) {
      json& target = section[k];
      if (target.is_string()) target = load_json_file(target.get<std::string>());
      if (target.is_null()) target = json::object();
      if (!target.is_object()) schema_error(pointer + "/" + k, "expected an object");
      target = merge_flags(target, v, pointer + "/" + k);
    } else {
      section[k] = v;
    }
  }
  return section;
}

struct TopLevel {
  std::uint64_t seed = 1;
  std::optional<std::string> output_dir;
  json sections = json::object();
};

TopLevel load_config(const std::string& path) {
  TopLevel t;
  if (path.empty()) return t;
  json j = load_json_file(path);
  if (!j.is_object()) schema_error("/", "expected an object");
  if (!j.contains("schema_version")) schema_error("/schema_version", "missing");
  const json& v = j["schema_version"];
  if (!v.is_number_integer() || v.get<long>() != kSchemaVersion) {
    schema_error("/schema_version", "unsupported version " + v.dump() + " (expected " + std::to_string(kSchemaVersion) + ")");
  }
  for (const auto& [k, val] : j.items()) {
    if (k == "schema_version") continue;
    if (k == "seed") {
      if (!val.is_number_unsigned()) schema_error("/seed", "expected a non-negative integer");
      t.seed = val.get<std::uint64_t>();
    } else if (k == "output_dir") {
      if (!val.is_string()) schema_error("/output_dir", "expected a string");
      t.output_dir = val.get<std::string>();
    } else if (std::find(std::begin(kSubcommands), std::end(kSubcommands), k) != std::end(kSubcommands)) {
      if (!val.is_object()) schema_error("/" + k, "expected an object");
      t.sections[k] = val;
    } else {
      schema_error("/" + k, "unknown key");
    }
  }
  return t;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ccr-lab: CCR algebra, quasifree states, free-field kernels and wavefront checks"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  app.footer(
      "Settings come from --config (versioned JSON, one object per subcommand) and are overridden by flags.\n"
      "Exit status: 0 ok, 2 validation or schema failure, 3 numerical-check failure.\n"
      "CCR_LAB_THREADS caps the number of worker threads.");

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  bool selftest_flag = false;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "seed for every randomized step (default 1)");
  app.add_option("--out", out_dir, "directory for report files (default: stdout/stderr)");
  app.add_flag("--selftest", selftest_flag, "run the acceptance checks (same as the selftest subcommand)");

  std::map<std::string, json> flags;
  auto number = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
    std::string name = sub->get_name();
    sub->add_option_function<double>(flag, [&flags, name, key](const double& v) { set_path(flags[name], key, v); }, help);
  };
  auto integer = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
    std::string name = sub->get_name();
    sub->add_option_function<long>(flag, [&flags, name, key](const long& v) { set_path(flags[name], key, v); }, help);
  };
  auto text = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
    std::string name = sub->get_name();
    sub->add_option_function<std::string>(flag, [&flags, name, key](const std::string& v) { set_path(flags[name], key, v); },
                                          help);
  };
  auto boolean = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
    std::string name = sub->get_name();
    sub->add_flag_callback(flag, [&flags, name, key] { set_path(flags[name], key, true); }, help);
  };

  auto* algebra = app.add_subcommand("algebra", "normal forms, products and commutators in the CCR algebra");
  text(algebra, "--form", "form", "pairing form JSON file {n, mode, upper}");
  integer(algebra, "--symplectic", "symplectic", "use the standard symplectic form on this many pairs");
  text(algebra, "--mode", "mode", "exact | float (default exact)");
  text(algebra, "--expr", "expr", "element, e.g. \"2*phi(1)phi(2) + phi(3)\"");
  text(algebra, "--with", "with", "second element for product or commutator");
  text(algebra, "--op", "op", "normal_form | product | commutator (default normal_form)");

  auto* npoint = app.add_subcommand("npoint", "n-point functions and Gram positivity of a quasifree state");
  text(npoint, "--kernel", "kernel", "two-point kernel JSON file {n, mode, entries}");
  text(npoint, "--word", "word", "generator indices, e.g. \"1 2 3 4\"");
  text(npoint, "--expr", "expr", "element to evaluate");

  auto* phase = app.add_subcommand("phase", "one-particle structure, purity, Fock witness, equivalence");
  text(phase, "--mu", "mu", "covariance matrix JSON file (array of rows)");
  text(phase, "--tau", "tau", "symplectic matrix JSON file (default: standard form)");
  text(phase, "--mu2", "mu2", "second covariance for --check equivalence");
  text(phase, "--check", "check", "purity | one-particle | fock | equivalence (default purity)");
  text(phase, "--method", "method", "spectral | square-root (default spectral)");
  integer(phase, "--cutoff", "cutoff", "Fock occupation cutoff (default 4)");
  integer(phase, "--samples", "samples", "random vectors or words to test (default 20)");
  integer(phase, "--random-modes", "random_modes", "draw a random valid covariance with this many modes");
  boolean(phase, "--mixed", "mixed", "with --random-modes, draw a mixed state");
  number(phase, "--tol", "tol", "tolerance of the numerical check");

  auto* lattice = app.add_subcommand("lattice", "1+1 lattice propagator and the pairing E(f, g)");
  text(lattice, "--grid", "grid", "lattice config JSON file");
  integer(lattice, "--nx", "grid/nx", "number of sites");
  integer(lattice, "--steps", "grid/steps", "number of time steps");
  number(lattice, "--a", "grid/a", "lattice spacing");
  number(lattice, "--dt", "grid/dt", "time step (CFL: dt <= a)");
  number(lattice, "--m", "grid/m", "mass");
  text(lattice, "--boundary", "grid/boundary", "periodic | absorbing-pad");
  integer(lattice, "--pad", "grid/pad", "absorbing pad width in sites");
  integer(lattice, "--slice", "slice", "time level for the surface form");
  boolean(lattice, "--write-field", "write_field", "also write E f as a binary field (needs --out)");

  auto* kernel = app.add_subcommand("kernel", "Minkowski vacuum two-point function and Hadamard remainder");
  number(kernel, "--m", "m", "mass (default 1)");
  number(kernel, "--eps", "eps", "fixed regulator eps; 0 extrapolates eps -> 0+ (default 0)");
  number(kernel, "--lambda", "lambda", "Hadamard length scale; 0 means 1/m (default 0)");
  integer(kernel, "--order", "order", "Hadamard parametrix order N (default 3)");
  text(kernel, "--grid", "grid", "default | JSON file {dt: [...], r: [...]}");
  text(kernel, "--quantity", "quantity", "omega2 | remainder (default omega2)");
  number(kernel, "--tol", "tol", "Bessel/Fourier agreement tolerance (default 1e-6)");

  auto* wick = app.add_subcommand("wick", "point-split stress-energy tensor of a smooth two-point function");
  text(wick, "--kernel", "kernel/type", "vacuum | gaussian | constant (default vacuum)");
  number(wick, "--m", "m", "mass (default 1)");
  number(wick, "--xi", "xi", "curvature coupling (default 0)");
  number(wick, "--split-step", "h", "point-split step h (default 1e-2)");
  number(wick, "--tol", "tol", "Richardson error tolerance (default 1e-8)");
  number(wick, "--hx", "hx", "step for the divergence (default 0.05)");

  auto* wf = app.add_subcommand("wf", "wavefront-set relations: classify, sample and compose");
  text(wf, "--mode", "mode", "classify | sample | compose (default classify)");
  text(wf, "--input", "input", "CSV of labelled points to classify");
  text(wf, "--a", "a", "CSV of the first relation for compose");
  text(wf, "--b", "b", "CSV of the second relation for compose");
  text(wf, "--after", "after", "CSV to continue: sample one point per row starting at its (y, k_y)");
  text(wf, "--target", "target", "relation the composite must lie in");
  text(wf, "--relation", "relation", "relation to sample: hadamard | hadamard_past | F_plus | F_minus | delta");
  integer(wf, "--count", "count", "number of samples");
  text(wf, "--convention", "convention", "primed | unprimed (default primed)");

  auto* selftest = app.add_subcommand("selftest", "run the twelve acceptance checks");
  std::vector<long> only;
  selftest->add_option("--only", only, "criterion ids to run (default all)")->delimiter(',');

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    std::string name;
    if (!app.get_subcommands().empty()) {
      name = app.get_subcommands().front()->get_name();
    } else if (selftest_flag) {
      name = "selftest";
    } else {
      err << app.help();
      return 2;
    }
    if (!only.empty()) flags[name]["only"] = only;

    TopLevel top = load_config(config_path);
    json section = merge_flags(top.sections.value(name, json::object()), flags[name], "/" + name);
    Context ctx{name, section, seed.value_or(top.seed), std::nullopt, out, err};
    if (!out_dir.empty()) {
      ctx.out_dir = out_dir;
    } else if (top.output_dir) {
      ctx.out_dir = *top.output_dir;
    }
    static const std::map<std::string, std::function<int(const Context&)>> dispatch = {
        {"algebra", run_algebra}, {"npoint", run_npoint}, {"phase", run_phase}, {"lattice", run_lattice},
        {"kernel", run_kernel},   {"wick", run_wick},     {"wf", run_wf},       {"selftest", run_selftest}};
    return dispatch.at(name)(ctx);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_numerical(e.code()) ? 3 : 2;
  } catch (const json::exception& e) {
    err << "error: JSON: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ccrlab::cli
