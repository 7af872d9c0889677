#include "ccrlab/microlocal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "ccrlab/parallel.hpp"

namespace ccrlab::microlocal {

namespace {

constexpr std::array<double, 4> kEta{-1.0, 1.0, 1.0, 1.0};

Vec4 sub(const Vec4& a, const Vec4& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }
Vec4 add_scaled(const Vec4& a, double s, const Vec4& b) {
  return {a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2], a[3] + s * b[3]};
}
Vec4 scaled(double s, const Vec4& a) { return {s * a[0], s * a[1], s * a[2], s * a[3]}; }

double spatial_norm(const Vec4& v) { return std::sqrt(v[1] * v[1] + v[2] * v[2] + v[3] * v[3]); }

bool near_point(const Vec4& a, const Vec4& b, double tol) {
  double size = 1.0 + std::max(euclid_norm(a), euclid_norm(b));
  return euclid_norm(sub(a, b)) <= tol * size;
}

bool near_covector(const Vec4& a, const Vec4& b, double tol) {
  return euclid_norm(sub(a, b)) <= tol * std::max(euclid_norm(a), euclid_norm(b));
}

Vec4 uniform_event(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng), u(rng)};
}

// c (1, n) with n uniform on the sphere and c in [0.5, 2].
Vec4 future_null_covector(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> c(0.5, 2.0);
  Vec4 k{};
  double len = 0.0;
  while (len < 1e-3) {
    k = {0.0, g(rng), g(rng), g(rng)};
    len = spatial_norm(k);
  }
  double s = c(rng);
  return {s, s * k[1] / len, s * k[2] / len, s * k[3] / len};
}

Vec4 nonzero_covector(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec4 k{};
  while (euclid_norm(k) < 1e-3) k = {g(rng), g(rng), g(rng), g(rng)};
  return k;
}

// Future-directed vector parallel to the raised covector.
Vec4 future_tangent(const Vec4& k) {
  Vec4 v = raise(k);
  return v[0] < 0.0 ? scaled(-1.0, v) : v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::kHadamard: return "hadamard";
    case Relation::kHadamardPast: return "hadamard_past";
    case Relation::kFPlus: return "F_plus";
    case Relation::kFMinus: return "F_minus";
    case Relation::kDelta: return "delta";
  }
  return "unknown";
}

Relation relation_from_string(std::string_view s) {
  for (auto r : {Relation::kHadamard, Relation::kHadamardPast, Relation::kFPlus, Relation::kFMinus, Relation::kDelta})
    if (to_string(r) == s) return r;
  throw Error(ErrorCode::kParse, "unknown relation label '" + std::string(s) + "'");
}

WFRelationPoint to_primed(const WFRelationPoint& p) { return {p.x, p.y, p.kx, scaled(-1.0, p.ky)}; }
WFRelationPoint to_unprimed(const WFRelationPoint& p) { return {p.x, p.y, p.kx, scaled(-1.0, p.ky)}; }

double eta(const Vec4& a, const Vec4& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) s += kEta[i] * a[i] * b[i];
  return s;
}

Vec4 raise(const Vec4& k) { return {-k[0], k[1], k[2], k[3]}; }

double euclid_norm(const Vec4& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]); }

bool is_null(const Vec4& k, double tol) {
  double n2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + k[3] * k[3];
  return n2 > 0.0 && std::abs(eta(k, k)) <= tol * n2;
}

bool future_directed(const Vec4& k, double tol) {
  double n = euclid_norm(k);
  return n > 0.0 && k[0] >= spatial_norm(k) - tol * n;
}

bool past_directed(const Vec4& k, double tol) { return future_directed(scaled(-1.0, k), tol); }

bool in_causal_future(const Vec4& x, const Vec4& y, double tol) {
  Vec4 d = sub(x, y);
  double n = euclid_norm(d);
  if (n <= tol * (1.0 + std::max(euclid_norm(x), euclid_norm(y)))) return true;
  return d[0] > 0.0 && d[0] >= spatial_norm(d) - tol * n;
}

double parallel_defect(const Vec4& a, const Vec4& b) {
  double na = euclid_norm(a), nb = euclid_norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  double w = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      double c = a[i] * b[j] - a[j] * b[i];
      w += c * c;
    }
  return std::sqrt(w) / (na * nb);
}

bool geodesic_related(const CotangentPoint& a, const CotangentPoint& b, double tol) {
  if (!is_null(a.k, tol)) return false;
  if (!near_covector(a.k, b.k, tol)) return false;
  if (near_point(a.x, b.x, tol)) return true;
  return parallel_defect(sub(b.x, a.x), raise(a.k)) <= tol;
}

bool classify_wf_point(const WFRelationPoint& p_in, Relation which, Convention c, double tol) {
  WFRelationPoint p = c == Convention::kPrimed ? p_in : to_primed(p_in);
  auto delta = [&] { return euclid_norm(p.kx) > 0.0 && near_point(p.x, p.y, tol) && near_covector(p.kx, p.ky, tol); };
  bool related = geodesic_related({p.x, p.kx}, {p.y, p.ky}, tol);
  switch (which) {
    case Relation::kHadamard: return related && future_directed(p.kx, tol);
    case Relation::kHadamardPast: return related && past_directed(p.kx, tol);
    case Relation::kDelta: return delta();
    case Relation::kFPlus: return delta() || (related && in_causal_future(p.x, p.y, tol));
    case Relation::kFMinus: return delta() || (related && in_causal_future(p.y, p.x, tol));
  }
  return false;
}

nlohmann::json CompositionReport::to_json() const {
  nlohmann::json pairs = nlohmann::json::array();
  for (auto [i, j] : violating_pairs) pairs.push_back({i, j});
  return {{"composable_pairs", composable_pairs},
          {"violations", violations},
          {"violating_pairs", pairs},
          {"rejected_sources", rejected_sources},
          {"vacuous", vacuous},
          {"passed", passed()}};
}

CompositionReport compose_check(const std::vector<WFRelationPoint>& a, Relation source_a,
                                const std::vector<WFRelationPoint>& b, Relation source_b, Relation target,
                                double tol) {
  CompositionReport report;
  std::vector<char> a_ok(a.size()), b_ok(b.size());
  parallel_for(a.size(), [&](std::size_t i) { a_ok[i] = classify_wf_point(a[i], source_a, Convention::kPrimed, tol); });
  parallel_for(b.size(), [&](std::size_t j) { b_ok[j] = classify_wf_point(b[j], source_b, Convention::kPrimed, tol); });
  report.rejected_sources = static_cast<std::size_t>(std::count(a_ok.begin(), a_ok.end(), 0) +
                                                     std::count(b_ok.begin(), b_ok.end(), 0));

  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < b.size(); ++j)
    if (b_ok[j]) order.push_back(j);
  std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) {
    return b[p].x[0] != b[q].x[0] ? b[p].x[0] < b[q].x[0] : p < q;
  });

  struct Local {
    std::size_t pairs = 0;
    std::vector<std::size_t> bad;
  };
  std::vector<Local> local(a.size());
  parallel_for(a.size(), [&](std::size_t i) {
    if (!a_ok[i]) return;
    const auto& p = a[i];
    double slack = tol * (1.0 + euclid_norm(p.y)) + tol;
    auto lo = std::lower_bound(order.begin(), order.end(), p.y[0] - slack,
                               [&](std::size_t j, double v) { return b[j].x[0] < v; });
    for (auto it = lo; it != order.end() && b[*it].x[0] <= p.y[0] + slack; ++it) {
      const auto& r = b[*it];
      if (!near_point(p.y, r.x, tol) || !near_covector(p.ky, r.kx, tol)) continue;
      ++local[i].pairs;
      WFRelationPoint composite{p.x, r.y, p.kx, r.ky};
      if (!classify_wf_point(composite, target, Convention::kPrimed, tol)) local[i].bad.push_back(*it);
    }
  });
  for (std::size_t i = 0; i < a.size(); ++i) {
    report.composable_pairs += local[i].pairs;
    report.violations += local[i].bad.size();
    for (auto j : local[i].bad)
      if (report.violating_pairs.size() < 32) report.violating_pairs.emplace_back(i, j);
  }
  report.vacuous = report.composable_pairs == 0;
  return report;
}

WFRelationPoint sample_relation(Relation r, std::mt19937_64& rng, double scale) {
  Vec4 x = uniform_event(rng, scale);
  if (r == Relation::kDelta) {
    Vec4 k = nonzero_covector(rng);
    return {x, x, k, k};
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec4 k = future_null_covector(rng);
  if (r == Relation::kHadamardPast) k = scaled(-1.0, k);
  if (r == Relation::kFPlus || r == Relation::kFMinus) {
    if (u(rng) < 0.1) {
      Vec4 kd = nonzero_covector(rng);
      return {x, x, kd, kd};
    }
    if (u(rng) < 0.5) k = scaled(-1.0, k);
  }
  WFRelationPoint start{x, x, k, k};
  // Reuse the continuation rule from a point sitting at x.
  WFRelationPoint p = sample_continuation(start, r, rng, scale);
  return p;
}

WFRelationPoint sample_continuation(const WFRelationPoint& a, Relation second, std::mt19937_64& rng, double scale) {
  const Vec4& y = a.y;
  const Vec4& k = a.ky;
  if (second == Relation::kDelta) return {y, y, k, k};
  if (!is_null(k)) throw Error(ErrorCode::kInvalidInput, "continuation along a non-null covector");
  Vec4 v = future_tangent(k);
  std::uniform_real_distribution<double> s(-scale, scale), tau(0.0, scale);
  switch (second) {
    case Relation::kHadamard:
    case Relation::kHadamardPast: return {y, add_scaled(y, s(rng), v), k, k};
    case Relation::kFPlus: return {y, add_scaled(y, -tau(rng), v), k, k};  // y in J+(z)
    case Relation::kFMinus: return {y, add_scaled(y, tau(rng), v), k, k};
    case Relation::kDelta: break;
  }
  return {y, y, k, k};
}

std::string to_csv_row(const WFRelationPoint& p, Relation label) {
  std::string out;
  for (const auto* v : {&p.x, &p.y, &p.kx, &p.ky})
    for (double c : *v) out += fmt(c) + ",";
  out += to_string(label);
  return out;
}

std::vector<LabelledPoint> parse_csv(std::string_view text) {
  std::vector<LabelledPoint> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.rfind("x0", 0) == 0) continue;
    std::array<double, 16> vals{};
    std::size_t pos = 0;
    for (std::size_t f = 0; f < 16; ++f) {
      auto comma = line.find(',', pos);
      if (comma == std::string_view::npos) {
        throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected 16 numbers and a label");
      }
      auto field = line.substr(pos, comma - pos);
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), vals[f]);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ", field " + std::to_string(f + 1) +
                                           ": not a number");
      }
      pos = comma + 1;
    }
    LabelledPoint lp{{}, relation_from_string(line.substr(pos))};
    for (std::size_t i = 0; i < 4; ++i) {
      lp.point.x[i] = vals[i];
      lp.point.y[i] = vals[4 + i];
      lp.point.kx[i] = vals[8 + i];
      lp.point.ky[i] = vals[12 + i];
    }
    out.push_back(lp);
  }
  return out;
}

}  // namespace ccrlab::microlocal
