#include <algorithm>
#include <cmath>
#include <random>

#include "ccrlab/check.hpp"
#include "ccrlab/microlocal.hpp"
#include "ccrlab/minkowski.hpp"
#include "ccrlab/parallel.hpp"
#include "ccrlab/selftest.hpp"
#include "ccrlab/wick.hpp"
#include "context.hpp"

namespace ccrlab::cli {
namespace {

std::vector<double> ladder(double from, double to, double step) {
  std::vector<double> out;
  for (int k = 0; from + k * step <= to + 1e-12; ++k) out.push_back(from + k * step);
  return out;
}

minkowski::KernelParams kernel_params(const Section& s, bool need_mass) {
  minkowski::KernelParams kp;
  kp.m = s.number("m", 1.0);
  s.require(kp.m >= 0.0, "m", "mass must be >= 0");
  s.require(!need_mass || kp.m > 0.0, "m", "this evaluation needs m > 0");
  kp.lambda = s.number("lambda", 0.0);
  s.require(kp.lambda >= 0.0, "lambda", "must be >= 0 (0 means 1/m)");
  s.require(kp.lambda > 0.0 || kp.m > 0.0, "lambda", "must be set when m = 0");
  kp.order = static_cast<int>(s.integer("order", 3, 0, minkowski::kMaxHadamardOrder));
  return kp;
}

}  // namespace

int run_kernel(const Context& ctx) {
  using namespace minkowski;
  Section s(ctx.section, ctx.pointer(), {"m", "eps", "lambda", "order", "grid", "quantity", "tol"});
  std::string quantity = s.choice("quantity", "omega2", {"omega2", "remainder"});
  KernelParams kp = kernel_params(s, true);
  kp.eps = s.number("eps", 0.0);
  s.require(kp.eps >= 0.0, "eps", "must be >= 0 (0 extrapolates eps -> 0+)");
  s.require(quantity == "omega2" || kp.eps == 0.0, "eps", "the remainder is evaluated at eps = 0");
  double tol = s.number("tol", quantity == "omega2" ? 1e-6 : 1e-10);
  s.require(tol > 0.0, "tol", "must be positive");
  double len = kp.length_scale();

  std::vector<double> dts, rs;
  const json& grid = s.get("grid");
  if (grid.is_null() || grid == "default") {
    if (quantity == "omega2") {
      dts = ladder(-2.0, 2.0, 0.5);
      rs = ladder(0.25, 3.0, 0.25);
    } else {
      dts = ladder(-len, len, 0.25 * len);
      rs = ladder(0.125 * len, 1.5 * len, 0.125 * len);
    }
  } else {
    Section g(s.object_or_file("grid"), s.at("grid"), {"dt", "r"});
    dts = g.numbers("dt");
    rs = g.numbers("r");
    for (double r : rs) g.require(r >= 0.0, "r", "distances must be >= 0");
  }

  std::vector<SeparationPoint> points;
  std::size_t null_points = 0, out_of_range = 0;
  for (double dt : dts)
    for (double r : rs) {
      double sigma = r * r - dt * dt;
      if (std::abs(std::abs(dt) - r) <= 1e-12 * (1.0 + r)) {
        ++null_points;
      } else if (quantity == "remainder" && std::abs(sigma) > 4.0 * len * len) {
        ++out_of_range;
      } else {
        points.push_back({dt, r});
      }
    }

  std::vector<cplx> values(points.size());
  std::vector<double> check(points.size(), 0.0);
  KernelParams shifted = kp;
  shifted.lambda = 2.0 * len;
  parallel_for(points.size(), [&](std::size_t i) {
    const auto& p = points[i];
    if (quantity == "omega2") {
      values[i] = omega2_bessel(p, kp);
      check[i] = std::abs(omega2_fourier(p, kp) - values[i]) / std::abs(values[i]);
    } else {
      values[i] = remainder_w(p, kp);
      check[i] = std::abs(remainder_w(p, shifted) - values[i] - lambda_shift(p, kp, shifted.lambda));
    }
  });

  std::string csv = "dt,r,re,im,abs\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    csv += fmt17(points[i].dt) + "," + fmt17(points[i].r) + "," + fmt17(values[i].real()) + "," +
           fmt17(values[i].imag()) + "," + fmt17(std::abs(values[i])) + "\n";
  }
  ctx.emit("kernel.csv", csv, true);

  double worst = 0.0;
  for (double c : check) worst = nan_max(worst, c);
  bool passed = worst <= tol;
  json rep = ctx.report();
  rep["quantity"] = quantity;
  rep["lambda_effective"] = len;
  rep["points"] = points.size();
  rep["skipped_null"] = null_points;
  rep["skipped_out_of_range"] = out_of_range;
  if (quantity == "omega2") {
    rep["agreement"] = {{"against", "fourier"}, {"max_relative_difference", worst}, {"tol", tol}, {"passed", passed}};
  } else {
    rep["lambda_shift"] = {{"lambda_new", shifted.lambda}, {"max_error", worst}, {"tol", tol}, {"passed", passed}};
  }
  ctx.emit_json("kernel.json", rep, false);
  if (!passed) return ctx.numerical_failure(quantity == "omega2" ? "Bessel/Fourier difference " + fmt17(worst)
                                                                 : "lambda-shift error " + fmt17(worst));
  return 0;
}

int run_wick(const Context& ctx) {
  using namespace wick;
  Section s(ctx.section, ctx.pointer(), {"kernel", "m", "xi", "h", "tol", "hx", "lambda", "order", "points", "div_tol"});
  StressEnergyOptions opts;
  opts.m = s.number("m", 1.0);
  s.require(opts.m >= 0.0, "m", "mass must be >= 0");
  opts.xi = s.number("xi", 0.0);
  opts.h = s.number("h", 1e-2);
  s.require(opts.h > 0.0, "h", "must be positive");
  opts.tol = s.number("tol", 1e-8);
  s.require(opts.tol > 0.0, "tol", "must be positive");
  double hx = s.number("hx", 0.05);
  s.require(hx > 0.0, "hx", "must be positive");
  double div_tol = s.number("div_tol", 1e-8);

  json kernel_json = s.object_or_file("kernel");
  Section k(kernel_json, s.at("kernel"), {"type", "c", "s"});
  std::string type = k.choice("type", "vacuum", {"vacuum", "gaussian", "constant"});
  TwoPointFunction w;
  minkowski::KernelParams kp;
  if (type == "vacuum") {
    k.require(!k.has("c") && !k.has("s"), "c", "the vacuum kernel takes no parameters");
    kp = kernel_params(s, true);
    w = [kp](const Event& x, const Event& y) {
      double r = std::hypot(x[1] - y[1], x[2] - y[2], x[3] - y[3]);
      return minkowski::remainder_w({x[0] - y[0], r}, kp).real();
    };
  } else {
    s.require(!s.has("lambda") && !s.has("order"), s.has("lambda") ? "lambda" : "order", "only used with the vacuum kernel");
    double c = k.number("c", 1.0);
    if (type == "constant") {
      k.require(!k.has("s"), "s", "only used with the gaussian kernel");
      w = [c](const Event&, const Event&) { return c; };
    } else {
      std::vector<double> sv = k.has("s") ? k.numbers("s") : std::vector<double>{0.3, 0.5, 0.2, 0.7};
      k.require(sv.size() == 4, "s", "expected four widths");
      w = [c, sv](const Event& x, const Event& y) {
        double e = 0.0;
        for (std::size_t i = 0; i < 4; ++i) e += sv[i] * (x[i] - y[i]) * (x[i] - y[i]);
        return c * std::exp(-e);
      };
    }
  }

  std::vector<Event> points{{0.0, 0.0, 0.0, 0.0}, {0.5, 0.1, -0.2, 0.3}};
  if (s.has("points")) {
    const json& pj = s.get("points");
    if (!pj.is_array() || pj.empty()) schema_error(s.at("points"), "expected a non-empty array of events");
    points.clear();
    for (std::size_t i = 0; i < pj.size(); ++i) {
      std::string where = s.at("points") + "/" + std::to_string(i);
      if (!pj[i].is_array() || pj[i].size() != 4) schema_error(where, "expected [t, x, y, z]");
      Event e{};
      for (std::size_t c = 0; c < 4; ++c) {
        if (!pj[i][c].is_number()) schema_error(where + "/" + std::to_string(c), "expected a number");
        e[c] = pj[i][c].get<double>();
      }
      points.push_back(e);
    }
  }

  std::vector<StressEnergy> results(points.size());
  std::vector<double> div(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    results[i] = stress_energy(w, points[i], opts);
    div[i] = divergence_residual(w, points[i], opts, hx);
  });

  std::string csv = "x0,x1,x2,x3";
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) csv += ",T" + std::to_string(a) + std::to_string(b);
  csv += ",trace,p_w,error_estimate,div_residual\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::string row;
    for (double v : points[i]) row += fmt17(v) + ",";
    for (const auto& r : results[i].t)
      for (double v : r) row += fmt17(v) + ",";
    row += fmt17(results[i].trace()) + "," + fmt17(results[i].p_w) + "," + fmt17(results[i].error_estimate) + "," +
           fmt17(div[i]);
    csv += row + "\n";
  }
  ctx.emit("wick.csv", csv, true);

  double worst = 0.0;
  for (double d : div) worst = nan_max(worst, d);
  json rep = ctx.report();
  rep["points"] = points.size();
  rep["max_div_residual"] = worst;
  rep["div_tol"] = div_tol;
  if (type == "vacuum") rep["phi2_H"] = phi2_H_expectation(kp);
  bool passed = worst <= div_tol;
  rep["passed"] = passed;
  ctx.emit_json("wick.json", rep, false);
  if (!passed) return ctx.numerical_failure("divergence residual " + fmt17(worst));
  return 0;
}

int run_wf(const Context& ctx) {
  using namespace microlocal;
  Section s(ctx.section, ctx.pointer(),
            {"mode", "input", "a", "b", "after", "target", "relation", "count", "convention", "tol", "scale"});
  std::string mode = s.choice("mode", "classify", {"classify", "sample", "compose"});
  double tol = s.number("tol", 1e-9);
  s.require(tol > 0.0, "tol", "must be positive");
  auto relation = [&](std::string_view key) {
    std::string name = s.text(key, "");
    s.require(!name.empty(), key, "missing");
    try {
      return relation_from_string(name);
    } catch (const Error&) {
      schema_error(s.at(key), "unknown relation \"" + name + "\"");
    }
  };
  auto read_points = [&](std::string_view key) {
    std::string path = s.text(key, "");
    s.require(!path.empty(), key, "missing");
    try {
      return parse_csv(load_text_file(path));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kParse) throw;
      throw Error(ErrorCode::kParse, path + ": " + e.what());
    }
  };
  json rep = ctx.report();

  if (mode == "sample") {
    Relation r = relation("relation");
    double scale = s.number("scale", 5.0);
    s.require(scale > 0.0, "scale", "must be positive");
    std::mt19937_64 rng(ctx.seed);
    std::string csv = "x0,x1,x2,x3,y0,y1,y2,y3,kx0,kx1,kx2,kx3,ky0,ky1,ky2,ky3,label\n";
    std::size_t count = 0;
    if (s.has("after")) {
      // One continuation per row: its (x, k_x) is the row's (y, k_y).
      s.require(!s.has("count"), "count", "not used with after (one continuation per row)");
      for (const auto& row : read_points("after")) {
        auto next = at_key(s.at("after") + "/" + std::to_string(count), ErrorCode::kInvalidInput,
                           [&] { return sample_continuation(row.point, r, rng, scale); });
        csv += to_csv_row(next, r) + "\n";
        ++count;
      }
    } else {
      count = static_cast<std::size_t>(s.integer("count", 100, 1, 10000000));
      for (std::size_t i = 0; i < count; ++i) csv += to_csv_row(sample_relation(r, rng, scale), r) + "\n";
    }
    ctx.emit("wf.csv", csv, true);
    rep["seed"] = ctx.seed;
    rep["relation"] = std::string(to_string(r));
    rep["count"] = count;
    ctx.emit_json("wf.json", rep, false);
    return 0;
  }

  if (mode == "classify") {
    Convention conv = s.choice("convention", "primed", {"primed", "unprimed"}) == "primed" ? Convention::kPrimed
                                                                                            : Convention::kUnprimed;
    auto rows = read_points("input");
    std::string csv = "x0,x1,x2,x3,y0,y1,y2,y3,kx0,kx1,kx2,kx3,ky0,ky1,ky2,ky3,label,member\n";
    std::size_t members = 0;
    json outside = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      bool in = classify_wf_point(rows[i].point, rows[i].label, conv, tol);
      members += in;
      if (!in) outside.push_back(i);
      csv += to_csv_row(rows[i].point, rows[i].label) + "," + (in ? "1" : "0") + "\n";
    }
    ctx.emit("wf.csv", csv, true);
    rep["rows"] = rows.size();
    rep["members"] = members;
    rep["non_members"] = outside;
    ctx.emit_json("wf.json", rep, false);
    if (members != rows.size()) {
      return ctx.numerical_failure(std::to_string(rows.size() - members) + " rows lie outside their labelled relation");
    }
    return 0;
  }

  auto label_of = [&](const std::vector<LabelledPoint>& pts, std::string_view key) {
    s.require(!pts.empty(), key, "no points");
    for (const auto& p : pts) s.require(p.label == pts.front().label, key, "rows must share one relation label");
    return pts.front().label;
  };
  auto a = read_points("a"), b = read_points("b");
  Relation ra = label_of(a, "a"), rb = label_of(b, "b"), target = relation("target");
  std::vector<WFRelationPoint> pa, pb;
  for (const auto& p : a) pa.push_back(p.point);
  for (const auto& p : b) pb.push_back(p.point);
  auto report = compose_check(pa, ra, pb, rb, target, tol);
  rep["source_a"] = std::string(to_string(ra));
  rep["source_b"] = std::string(to_string(rb));
  rep["target"] = std::string(to_string(target));
  rep["composition"] = report.to_json();
  ctx.emit_json("wf.json", rep, true);
  if (!report.passed()) {
    return ctx.numerical_failure(report.vacuous ? "no composable pairs"
                                                : std::to_string(report.violations) + " composites outside the target, " +
                                                      std::to_string(report.rejected_sources) + " rejected sources");
  }
  return 0;
}

int run_selftest(const Context& ctx) {
  Section s(ctx.section, ctx.pointer(), {"only"});
  std::vector<int> ids;
  if (s.has("only")) {
    for (double v : s.numbers("only")) {
      s.require(v == std::floor(v) && v >= 1 && v <= selftest::kCriterionCount, "only",
                "criterion ids lie in 1.." + std::to_string(selftest::kCriterionCount));
      ids.push_back(static_cast<int>(v));
    }
  } else {
    for (int id = 1; id <= selftest::kCriterionCount; ++id) ids.push_back(id);
  }
  json rep = ctx.report();
  rep["seed"] = ctx.seed;
  rep["criteria"] = json::array();
  std::size_t failed = 0;
  for (int id : ids) {
    auto r = selftest::run_criterion(id, ctx.seed);
    ctx.out << selftest::format_line(r) << "\n" << std::flush;
    rep["criteria"].push_back(r.to_json());
    failed += !r.passed;
  }
  rep["passed"] = failed == 0;
  if (ctx.out_dir) ctx.emit_json("selftest.json", rep, false);
  if (failed) return ctx.numerical_failure(std::to_string(failed) + " of " + std::to_string(ids.size()) + " criteria failed");
  return 0;
}

}  // namespace ccrlab::cli
