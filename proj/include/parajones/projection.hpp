#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parajones/diagram.hpp"
#include "parajones/laurent.hpp"

namespace parajones {

struct Vec3 {
  double x = 0;
  double y = 0;
  double z = 0;
};

/// One open curve as an ordered polyline; a component whose first and last
/// points coincide exactly is treated as closed.
using Curve3D = std::vector<Vec3>;

/// Plain XYZ text: one "x y z" triple per line, blank line separates
/// components, '#' starts a comment.
std::vector<Curve3D> parse_xyz(const std::string& text);

double bounding_box_diagonal(const std::vector<Curve3D>& curves);

/// Projection onto the plane normal to xi. Irregular projections are
/// reported as rejections (a value, not a failure): near-tangential
/// intersections, crossings within eps of each other (covers triple
/// points), crossings within eps of a polyline vertex or curve endpoint,
/// and depth ties. eps is eps_rel times the bounding-box diagonal.
struct Projection {
  bool rejected = false;
  std::string reason;
  Diagram diagram;
  Vec3 direction;
};

inline constexpr double kDefaultEpsRel = 1e-9;

Projection project(const std::vector<Curve3D>& curves, const Vec3& xi,
                   double eps_rel = kDefaultEpsRel);

struct OpenJonesOptions {
  long samples = 150;
  uint64_t seed = 0;
  int m = 0;        // subdivision depth cap, clamped per projection
  int workers = 1;
  std::optional<Pairing> closure;  // default: each component closes onto itself
  double eps_rel = kDefaultEpsRel;
};

/// Monte Carlo average of (-A^3)^{-Wr} <L_xi^sigma> over uniformly sampled
/// sphere directions. The exact average is numerator / samples; per-exponent
/// mean and Monte Carlo standard error are tracked for statistical checks.
struct OpenJonesResult {
  LaurentPoly numerator;
  long samples = 0;
  long rejections = 0;
  std::map<long, double> coeff_mean;    // by A-exponent
  std::map<long, double> coeff_stderr;
};

OpenJonesResult jones_open(const std::vector<Curve3D>& curves, const OpenJonesOptions& opt);

/// Endpoint labels used by projected diagrams: open component i (0-based,
/// counted over open components only) gets foot 2i+1 and head 2i+2. The
/// default closure pairs each component's own endpoints.
Pairing default_closure_for(const std::vector<Curve3D>& curves);

}  // namespace parajones
