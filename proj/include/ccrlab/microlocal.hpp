#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ccrlab/error.hpp"

// Wavefront-set relations on flat 3+1 spacetime with eta = diag(-1, 1, 1, 1).
// A covector k is future-directed (k |> 0) when k(v) >= 0 for every
// future-directed causal v, i.e. k_0 >= |k_vec| and k != 0.
namespace ccrlab::microlocal {

using Vec4 = std::array<double, 4>;

struct CotangentPoint {
  Vec4 x{};
  Vec4 k{};
};

/// (x, y, k_x, k_y). Stored in the primed convention WF'(K) = {(x, y, p, q) :
/// (x, y, p, -q) in WF(K)} unless a function says otherwise.
struct WFRelationPoint {
  Vec4 x{}, y{}, kx{}, ky{};
};

enum class Convention { kPrimed, kUnprimed };

/// kHadamardPast is the Hadamard set with k_x past-directed; it is the set of
/// the complex conjugate two-point function and serves as a negative control.
enum class Relation { kHadamard, kHadamardPast, kFPlus, kFMinus, kDelta };

std::string_view to_string(Relation r);
Relation relation_from_string(std::string_view s);

WFRelationPoint to_primed(const WFRelationPoint& p);    // negates k_y
WFRelationPoint to_unprimed(const WFRelationPoint& p);  // negates k_y

double eta(const Vec4& a, const Vec4& b);
Vec4 raise(const Vec4& k);
double euclid_norm(const Vec4& v);

bool is_null(const Vec4& k, double tol = 1e-9);
bool future_directed(const Vec4& k, double tol = 1e-9);
bool past_directed(const Vec4& k, double tol = 1e-9);
/// x - y future-directed causal or zero.
bool in_causal_future(const Vec4& x, const Vec4& y, double tol = 1e-9);

/// Norm of the wedge product a ^ b relative to |a||b| (0 for parallel vectors).
double parallel_defect(const Vec4& a, const Vec4& b);

/// (x, k_x) ~ (y, k_y): k_x null, k_y = k_x, and y - x parallel to k_x raised
/// (any x = y with null k_x qualifies).
bool geodesic_related(const CotangentPoint& a, const CotangentPoint& b, double tol = 1e-9);

/// Membership in the named set for a point given in convention c.
bool classify_wf_point(const WFRelationPoint& p, Relation which, Convention c = Convention::kPrimed,
                       double tol = 1e-9);

struct CompositionReport {
  std::size_t composable_pairs = 0;
  std::size_t violations = 0;
  std::vector<std::pair<std::size_t, std::size_t>> violating_pairs;  // first 32
  std::size_t rejected_sources = 0;
  bool vacuous = false;

  bool passed() const { return !vacuous && violations == 0 && rejected_sources == 0; }
  nlohmann::json to_json() const;
};

/// Composes primed samples a = (x, y, k_x, k_y) in A with b = (y', z, k_y', k_z)
/// in B whenever (y, k_y) matches (y', k_y') to tol, and checks (x, z, k_x, k_z)
/// against target. Samples outside their source relation are counted and
/// skipped. An empty composable set is reported as vacuous, not as a pass.
CompositionReport compose_check(const std::vector<WFRelationPoint>& a, Relation source_a,
                                const std::vector<WFRelationPoint>& b, Relation source_b, Relation target,
                                double tol = 1e-9);

/// Random primed point of the relation: events in [-scale, scale]^4, covector
/// scale in [0.5, 2], geodesic parameter in [-scale, scale].
WFRelationPoint sample_relation(Relation r, std::mt19937_64& rng, double scale = 5.0);

/// Random b in `second` with b's (x, k_x) equal to a's (y, k_y), for primed a.
/// Throws kInvalidInput when k_y is not null and second is not kDelta.
WFRelationPoint sample_continuation(const WFRelationPoint& a, Relation second, std::mt19937_64& rng,
                                    double scale = 5.0);

/// CSV row "x0,...,x3,y0,...,y3,kx0,...,ky3,label" with 17 significant digits.
std::string to_csv_row(const WFRelationPoint& p, Relation label);
struct LabelledPoint {
  WFRelationPoint point;
  Relation label;
};
/// Parses rows written by to_csv_row; a header line starting with "x0" is skipped.
std::vector<LabelledPoint> parse_csv(std::string_view text);

}  // namespace ccrlab::microlocal
