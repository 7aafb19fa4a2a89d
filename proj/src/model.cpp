#include "swarm/model.hpp"

#include <algorithm>
#include <numbers>

namespace swarm {

namespace {

void require(bool ok, const char* field, const char* rule) {
  if (!ok) {
    throw ValidationError(std::string("params.") + field + ": " + rule);
  }
}

// Maps (along, across) coordinates in the migration frame to world offsets.
Vec3 in_frame(const Vec3& u_ref, double along, double across) {
  const Vec3 forward = u_ref.normalized();
  return along * forward + across * lateral_axis(forward);
}

}  // namespace

SwarmParams validated(SwarmParams p) {
  require(p.n >= 1, "n", "at least one robot required");
  require(std::isfinite(p.r) && p.r > 0, "r", "must be > 0");
  require(std::isfinite(p.r_s) && p.r_s > p.r, "r_s", "must be > r");
  require(std::isfinite(p.r_a) && p.r_a > 2 * p.r, "r_a", "must be > 2r");
  require(std::isfinite(p.tau) && p.tau > 0, "tau", "must be > 0");
  require(std::isfinite(p.v_max) && p.v_max >= 0, "v_max", "must be >= 0");
  require(std::isfinite(p.u_max) && p.u_max >= 0, "u_max", "must be >= 0");
  require(std::isfinite(p.k_f) && p.k_f >= 0, "k_f", "must be >= 0");
  require(std::isfinite(p.k_t) && p.k_t >= 0, "k_t", "must be >= 0");
  require(std::isfinite(p.k_i) && p.k_i >= 0, "k_i", "must be >= 0");
  require(std::isfinite(p.k_o) && p.k_o >= 0, "k_o", "must be >= 0");
  require(std::isfinite(p.v_ref) && p.v_ref >= 0, "v_ref", "must be >= 0");
  require(std::isfinite(p.d_ref) && p.d_ref > 0, "d_ref", "must be > 0");
  require(std::isfinite(p.lambda) && p.lambda > 2, "lambda", "must be > 2");
  require(p.u_ref.allFinite(), "u_ref", "must be finite");
  require(std::hypot(p.u_ref.x(), p.u_ref.y()) > 1e-12, "u_ref",
          "must have a horizontal component");
  p.u_ref.normalize();
  return p;
}

FormationConfig make_formation(std::string name, std::vector<Vec3> offsets) {
  for (const auto& delta : offsets) {
    if (!delta.allFinite()) {
      throw ValidationError("formation: non-finite offset");
    }
  }
  if (!offsets.empty()) {
    Vec3 mean = Vec3::Zero();
    double scale = 1.0;
    for (const auto& delta : offsets) {
      mean += delta;
      scale = std::max(scale, delta.lpNorm<Eigen::Infinity>());
    }
    mean /= static_cast<double>(offsets.size());
    // Already centred up to rounding: leave the bits alone so that
    // re-centring a centred config is the identity.
    if (mean.lpNorm<Eigen::Infinity>() > 1e-12 * scale) {
      for (auto& delta : offsets) delta -= mean;
    }
  }
  return {std::move(name), std::move(offsets)};
}

FormationConfig polygon_formation(std::size_t n, double circumradius, const Vec3& u_ref) {
  std::vector<Vec3> offsets;
  offsets.reserve(n);
  if (n == 1) {
    offsets.push_back(Vec3::Zero());
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(n);
      offsets.push_back(in_frame(u_ref, circumradius * std::cos(angle),
                                 circumradius * std::sin(angle)));
    }
  }
  return make_formation(n == 5 ? "pentagon" : "polygon", std::move(offsets));
}

FormationConfig vshape_formation(std::size_t n, double spacing, const Vec3& u_ref,
                                 double depth, double stagger) {
  if (!(std::isfinite(depth) && depth > 0)) {
    throw ValidationError("formation.depth: must be > 0");
  }
  if (!(std::isfinite(stagger) && stagger >= 0)) {
    throw ValidationError("formation.stagger: must be >= 0");
  }
  std::vector<Vec3> offsets;
  offsets.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double row = static_cast<double>((k + 1) / 2);
    const bool left = k % 2 == 1;
    const double back = row * depth * spacing * (left ? 1.0 : 1.0 + stagger);
    offsets.push_back(in_frame(u_ref, -back, (left ? 1.0 : -1.0) * row * spacing));
  }
  return make_formation("v-shape", std::move(offsets));
}

FormationConfig triangle_formation(std::size_t n, double spacing, const Vec3& u_ref) {
  std::vector<Vec3> offsets;
  offsets.reserve(n);
  const double row_depth = spacing * std::sqrt(3.0) / 2.0;
  std::size_t row = 0;
  while (offsets.size() < n) {
    const std::size_t in_row = std::min(row + 1, n - offsets.size());
    for (std::size_t k = 0; k < in_row; ++k) {
      const double across = (static_cast<double>(k) - static_cast<double>(row) / 2.0) * spacing;
      offsets.push_back(in_frame(u_ref, -static_cast<double>(row) * row_depth, across));
    }
    ++row;
  }
  return make_formation("triangle", std::move(offsets));
}

FormationConfig line_formation(std::size_t n, double spacing, const Vec3& u_ref) {
  std::vector<Vec3> offsets;
  offsets.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    offsets.push_back(in_frame(u_ref, -static_cast<double>(k) * spacing, 0.0));
  }
  return make_formation("line", std::move(offsets));
}

FormationConfig named_formation(const std::string& generator, std::size_t n,
                                double spacing, const Vec3& u_ref, double depth,
                                double stagger) {
  if (!(std::isfinite(spacing) && spacing > 0)) {
    throw ValidationError("formation.spacing: must be > 0");
  }
  if (generator == "pentagon") {
    if (n != 5) {
      throw ValidationError("formation.generator: pentagon needs n = 5");
    }
    return polygon_formation(n, spacing, u_ref);
  }
  if (generator == "polygon") return polygon_formation(n, spacing, u_ref);
  if (generator == "v-shape" || generator == "vshape") {
    return vshape_formation(n, spacing, u_ref, depth, stagger);
  }
  if (generator == "triangle") return triangle_formation(n, spacing, u_ref);
  if (generator == "line") return line_formation(n, spacing, u_ref);
  throw ValidationError("formation.generator: unknown generator '" + generator + "'");
}

}  // namespace swarm
