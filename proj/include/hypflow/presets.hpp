#pragma once

// Named initial graphs.

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "hypflow/diagnostics.hpp"
#include "hypflow/errors.hpp"
#include "hypflow/graph_geometry.hpp"
#include "hypflow/io.hpp"
#include "hypflow/sphere_grid.hpp"

namespace hypflow {

struct SpherePreset {
  double r0 = 1.0;
};

/// r0 + a cos(k theta) on circles, r0 + a P_k(cos theta) on axisymmetric grids.
struct PerturbedSpherePreset {
  double r0 = 1.0;
  double amplitude = 0.1;
  int harmonic = 2;
};

struct OffsetSpherePreset {
  double r_sphere = 1.0;
  double z0 = 0.0;
  std::vector<double> z;  // normal coordinates of the center; missing components are 0
};

/// Radial function read from a snapshot file.
struct CustomPreset {
  std::string path;
};

using PresetShape = std::variant<SpherePreset, PerturbedSpherePreset, OffsetSpherePreset, CustomPreset>;

struct PresetSpec {
  PresetShape shape = SpherePreset{};
  int dim = 1;
  int grid_nodes = 256;
  double lambda = -1.0;
  bool require_h_convex = true;  // built-in shapes only
};

/// Legendre polynomial P_k(x) by the three-term recurrence.
inline double legendre(int k, double x) {
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int l = 1; l < k; ++l) {
    const double next = ((2.0 * l + 1.0) * x * cur - l * prev) / (l + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

inline RadialGraph build_preset(const PresetSpec& spec) {
  if (auto* custom = std::get_if<CustomPreset>(&spec.shape)) return read_snapshot(custom->path).graph;

  const LambdaParams params(spec.lambda);
  const GridPtr grid = Grid::for_dimension(spec.dim, spec.grid_nodes);

  auto graph = std::visit(
      [&](const auto& shape) -> RadialGraph {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, SpherePreset>) {
          if (!(shape.r0 > 0.0)) throw ConfigError("sphere radius must be positive");
          return RadialGraph(ScalarField::constant(grid, shape.r0), params);
        } else if constexpr (std::is_same_v<T, PerturbedSpherePreset>) {
          if (!(shape.r0 > 0.0)) throw ConfigError("sphere radius must be positive");
          if (!(std::abs(shape.amplitude) < shape.r0)) {
            throw ConfigError("perturbation amplitude must be smaller than the radius");
          }
          if (shape.harmonic < 0) throw ConfigError("harmonic degree must be nonnegative");
          const bool circle = grid->topology() == Topology::Circle;
          return RadialGraph(ScalarField::sample(grid,
                                                 [&](double th) {
                                                   const double mode =
                                                       circle ? std::cos(shape.harmonic * th)
                                                              : legendre(shape.harmonic, std::cos(th));
                                                   return shape.r0 + shape.amplitude * mode;
                                                 }),
                             params);
        } else if constexpr (std::is_same_v<T, OffsetSpherePreset>) {
          std::vector<double> z(spec.dim + 1, 0.0);
          if (shape.z.size() > z.size()) throw ConfigError("too many offset components");
          std::copy(shape.z.begin(), shape.z.end(), z.begin());
          return offset_sphere_graph(grid, params, shape.r_sphere, shape.z0, z);
        } else {
          throw ConfigError("unreachable preset");
        }
      },
      spec.shape);

  if (spec.require_h_convex) {
    const double margin = h_convexity_margin(graph);
    // Round spheres are h-convex for every radius; large ones only reach margin 0 in rounding.
    const bool sphere = std::holds_alternative<SpherePreset>(spec.shape);
    if (!(margin > 0.0) && !(sphere && margin >= 0.0)) {
      throw ConfigError("preset is not h-convex at this resolution (margin " + std::to_string(margin) +
                        ")");
    }
  }
  return graph;
}

}  // namespace hypflow
