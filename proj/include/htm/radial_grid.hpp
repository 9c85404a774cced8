#pragma once

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace htm {

/// Graded radial mesh on [r_min, 1 - delta_b].
///
/// Cell widths follow a two-sided geometric progression with ratio `grading`
/// in (0, 1]: the smallest cells sit next to both endpoints and widths grow
/// by a factor 1/grading per cell toward the interior. grading = 1 gives a
/// uniform mesh. The inner end resolves log-singular profiles near r = 0,
/// the outer end the weight 1/(1 - r^2)^2.
struct RadialGrid {
  Eigen::VectorXd nodes;  ///< strictly increasing, nodes[0] = r_min, nodes[n-1] = 1 - delta_b
  double r_min = 0.0;
  double delta_b = 0.0;
  double grading = 1.0;

  Eigen::Index size() const { return nodes.size(); }
  double node(Eigen::Index i) const { return nodes(i); }
  double width(Eigen::Index i) const { return nodes(i + 1) - nodes(i); }
  double outer_radius() const { return nodes(nodes.size() - 1); }
  bool same_as(const RadialGrid& other) const;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Builds a graded mesh with n >= 3 nodes and endpoints exactly r_min and
/// 1 - delta_b. Throws std::invalid_argument on bad parameters or if the
/// grading is too strong for the node budget.
GridPtr build_grid(Eigen::Index n, double r_min, double delta_b, double grading);

/// Production defaults: r_min = 1e-10, delta_b = 1e-8, grading chosen so the
/// smallest cells land near r_min / 4; doubling n then refines every scale.
GridPtr default_grid(Eigen::Index n);

/// Grid with the grading ratio solved from a target width for the smallest
/// cells (the endpoint resolution), instead of passing the ratio directly.
GridPtr graded_grid(Eigen::Index n, double r_min, double delta_b, double w_target);

/// Sorted union of a base grid with extra interior nodes (near-duplicates are
/// dropped). The union keeps the base endpoints; the two-sided width
/// monotonicity of built grids is not re-imposed.
GridPtr refine_with(const RadialGrid& base, std::vector<double> extra);

}  // namespace htm
