#include <random>

#include "doctest.h"

#include "ccrlab/microlocal.hpp"

using namespace ccrlab;
using namespace ccrlab::microlocal;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kParse;
}

Vec4 scaled(double s, const Vec4& a) { return {s * a[0], s * a[1], s * a[2], s * a[3]}; }
Vec4 plus(const Vec4& a, const Vec4& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }

constexpr Relation kAll[] = {Relation::kHadamard, Relation::kHadamardPast, Relation::kFPlus, Relation::kFMinus,
                             Relation::kDelta};

}  // namespace

TEST_CASE("null geodesic relation") {
  Vec4 o{0, 0, 0, 0}, k{1, 1, 0, 0};
  // k raised is (-1, 1, 0, 0); the ray through the origin runs along it.
  CHECK(geodesic_related({o, k}, {{2, -2, 0, 0}, k}));
  CHECK(geodesic_related({o, k}, {{-3, 3, 0, 0}, k}));
  CHECK(!geodesic_related({o, k}, {{2, 2, 0, 0}, k}));
  CHECK(!geodesic_related({o, {2, 1, 0, 0}}, {{2, -1, 0, 0}, {2, 1, 0, 0}}));
  CHECK(geodesic_related({o, k}, {o, k}));
  CHECK(!geodesic_related({o, k}, {o, {1, -1, 0, 0}}));
  CHECK(!geodesic_related({o, {1, 0, 0, 0}}, {o, {1, 0, 0, 0}}));
  CHECK(!geodesic_related({o, k}, {{2, -2, 0, 0}, scaled(2.0, k)}));
}

TEST_CASE("covector orientation") {
  CHECK(future_directed({1, 1, 0, 0}));
  CHECK(future_directed({2, 0.5, 0, 0}));
  CHECK(!future_directed({0.5, 1, 0, 0}));
  CHECK(past_directed({-1, 0, 1, 0}));
  CHECK(!future_directed({0, 0, 0, 0}));
  CHECK(in_causal_future({1, 0.5, 0, 0}, {0, 0, 0, 0}));
  CHECK(!in_causal_future({-1, 0, 0, 0}, {0, 0, 0, 0}));
}

TEST_CASE("membership examples") {
  Vec4 x{0.3, -1.0, 2.0, 0.5}, k{1.0, 0.0, 0.6, 0.8};
  Vec4 ell{2.0, 0.0, -1.2, -1.6};  // future-directed, parallel to k raised
  CHECK(classify_wf_point({x, plus(x, ell), k, k}, Relation::kHadamard));
  CHECK(classify_wf_point({x, plus(x, scaled(-1.0, ell)), k, k}, Relation::kHadamard));
  Vec4 kp = scaled(-1.0, k);
  CHECK(!classify_wf_point({x, plus(x, ell), kp, kp}, Relation::kHadamard));
  CHECK(classify_wf_point({x, plus(x, ell), kp, kp}, Relation::kHadamardPast));

  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int i = 0; i < 20; ++i) {
    Vec4 q{g(rng), g(rng), g(rng), g(rng)};
    CHECK(classify_wf_point({x, x, q, scaled(-1.0, q)}, Relation::kDelta, Convention::kUnprimed));
    CHECK(classify_wf_point({x, x, q, q}, Relation::kDelta));
    CHECK(classify_wf_point({x, x, q, q}, Relation::kFPlus));
    CHECK(!classify_wf_point({x, x, q, q}, Relation::kDelta, Convention::kUnprimed));
  }
  CHECK(!classify_wf_point({x, x, {0, 0, 0, 0}, {0, 0, 0, 0}}, Relation::kDelta));

  // Retarded: x in the causal future of y; both covector orientations allowed.
  Vec4 y = plus(x, scaled(-1.0, ell));
  CHECK(classify_wf_point({x, y, k, k}, Relation::kFPlus));
  CHECK(classify_wf_point({x, y, kp, kp}, Relation::kFPlus));
  CHECK(!classify_wf_point({x, y, k, k}, Relation::kFMinus));
  CHECK(classify_wf_point({y, x, k, k}, Relation::kFMinus));

  WFRelationPoint p{x, plus(x, ell), k, k};
  CHECK(classify_wf_point(to_unprimed(p), Relation::kHadamard, Convention::kUnprimed));
  CHECK(to_primed(to_unprimed(p)).ky == p.ky);
}

TEST_CASE("sampled points lie in their relation and the cones are scale invariant") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> lam(0.01, 100.0);
  for (auto r : kAll)
    for (int i = 0; i < 200; ++i) {
      auto p = sample_relation(r, rng);
      CHECK(classify_wf_point(p, r));
      double l = lam(rng);
      CHECK(classify_wf_point({p.x, p.y, scaled(l, p.kx), scaled(l, p.ky)}, r));
    }
}

TEST_CASE("transitivity along one null ray") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    auto a = sample_relation(Relation::kHadamard, rng);
    auto b = sample_continuation(a, Relation::kHadamard, rng);
    CHECK(geodesic_related({a.x, a.kx}, {a.y, a.ky}));
    CHECK(geodesic_related({b.x, b.kx}, {b.y, b.ky}));
    CHECK(geodesic_related({a.x, a.kx}, {b.y, b.ky}));
  }
  auto timelike = WFRelationPoint{{0, 0, 0, 0}, {0, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}};
  CHECK(code_of([&] { sample_continuation(timelike, Relation::kFPlus, rng); }) == ErrorCode::kInvalidInput);
}

TEST_CASE("Hadamard composed with fundamental solutions stays Hadamard") {
  std::mt19937_64 rng(4);
  for (auto f : {Relation::kFPlus, Relation::kFMinus}) {
    std::vector<WFRelationPoint> as, bs;
    for (int i = 0; i < 200; ++i) {
      as.push_back(sample_relation(Relation::kHadamard, rng));
      bs.push_back(sample_continuation(as.back(), f, rng));
    }
    auto rep = compose_check(as, Relation::kHadamard, bs, f, Relation::kHadamard);
    CHECK(rep.passed());
    CHECK(rep.composable_pairs >= 200);
    CHECK(rep.rejected_sources == 0);
    for (std::size_t i = 0; i < as.size(); ++i) CHECK(future_directed(bs[i].ky));

    // Negative control: past-directed k_x.
    std::vector<WFRelationPoint> past, cont;
    for (int i = 0; i < 200; ++i) {
      past.push_back(sample_relation(Relation::kHadamardPast, rng));
      cont.push_back(sample_continuation(past.back(), f, rng));
    }
    auto neg = compose_check(past, Relation::kHadamardPast, cont, f, Relation::kHadamard);
    CHECK(neg.composable_pairs >= 200);
    CHECK(neg.violations == neg.composable_pairs);
    CHECK(!neg.passed());
  }
}

TEST_CASE("the diagonal is the identity for composition") {
  std::mt19937_64 rng(5);
  for (auto f : {Relation::kFPlus, Relation::kFMinus}) {
    std::vector<WFRelationPoint> deltas, fs;
    for (int i = 0; i < 200; ++i) {
      auto b = sample_relation(f, rng);
      fs.push_back(b);
      deltas.push_back({b.x, b.x, b.kx, b.kx});
    }
    auto rep = compose_check(deltas, Relation::kDelta, fs, f, f);
    CHECK(rep.passed());
    CHECK(rep.composable_pairs >= 200);
    auto other = compose_check(deltas, Relation::kDelta, fs, f, f == Relation::kFPlus ? Relation::kFMinus : Relation::kFPlus);
    CHECK(other.violations > 0);
  }
}

TEST_CASE("composition edge cases") {
  std::mt19937_64 rng(6);
  std::vector<WFRelationPoint> as{sample_relation(Relation::kHadamard, rng)};
  std::vector<WFRelationPoint> bs{sample_relation(Relation::kFPlus, rng)};
  auto vac = compose_check(as, Relation::kHadamard, bs, Relation::kFPlus, Relation::kHadamard);
  CHECK(vac.vacuous);
  CHECK(!vac.passed());
  CHECK(vac.to_json()["passed"] == false);

  bs = {sample_continuation(as[0], Relation::kFPlus, rng)};
  as.push_back(sample_relation(Relation::kHadamardPast, rng));
  auto rej = compose_check(as, Relation::kHadamard, bs, Relation::kFPlus, Relation::kHadamard);
  CHECK(rej.rejected_sources == 1);
  CHECK(rej.composable_pairs == 1);
  CHECK(!rej.passed());
}

TEST_CASE("CSV round trip") {
  std::mt19937_64 rng(7);
  std::string text = "x0,x1,x2,x3,y0,y1,y2,y3,kx0,kx1,kx2,kx3,ky0,ky1,ky2,ky3,label\n";
  std::vector<WFRelationPoint> pts;
  for (auto r : kAll) {
    pts.push_back(sample_relation(r, rng));
    text += to_csv_row(pts.back(), r) + "\n";
  }
  auto back = parse_csv(text);
  REQUIRE(back.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(back[i].point.x == pts[i].x);
    CHECK(back[i].point.ky == pts[i].ky);
    CHECK(back[i].label == kAll[i]);
  }
  CHECK(code_of([] { parse_csv("1,2,3\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { parse_csv("0,0,0,0,0,0,0,0,1,1,0,0,1,1,0,0,cone\n"); }) == ErrorCode::kParse);
}
