#pragma once

#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "isodense/common.hpp"

namespace isodense {

/// Uniform-grid domain with Dirichlet exterior, in one or two
/// dimensions.  Nodes sit at window_lo + i h; the mask marks interior
/// unknowns.
struct GridDomain {
  int dim = 2;
  double h = 1.0 / 64.0;
  double window_lo = -1.0;     // same window on every axis
  int nodes_per_axis = 0;
  std::vector<std::uint8_t> mask;  // x-fastest for dim = 2

  int index(int i, int j = 0) const { return j * nodes_per_axis + i; }
  double coord(int i) const { return window_lo + i * h; }
  bool inside(int i, int j = 0) const {
    if (i < 0 || i >= nodes_per_axis) return false;
    if (dim == 2 && (j < 0 || j >= nodes_per_axis)) return false;
    return mask[index(i, j)] != 0;
  }
  int unknowns() const;
  bool connected() const;
};

GridDomain make_interval_domain(double lo, double hi, double h);
GridDomain make_disk_domain(double radius, double h, double margin = 4.0);
GridDomain make_disk_domain_at(double cx, double cy, double radius, double h,
                               double margin = 4.0);
GridDomain make_rect_domain(double x0, double x1, double y0, double y1,
                            double h, double margin = 4.0);

/// Mask JSON: {"h", "window": [lo, hi], "rows": ["0110...", ...]} with
/// rows ordered by increasing y and characters by increasing x (a
/// single row encodes a 1D domain).
std::string to_json(const GridDomain& domain);
GridDomain grid_domain_from_json(const std::string& text);

enum class SignConvention {
  Paper,              // L = Laplacian - 2c <x, grad>
  WeightedLaplacian,  // L = Laplacian + 2c <x, grad>
};

struct AssembledOperator {
  Eigen::SparseMatrix<double> neg_l;  // -L, central differences, Dirichlet
  Eigen::SparseMatrix<double> neg_h;  // similar symmetric form of -L
  std::vector<double> node_x, node_y;
  double h;
};

/// Second-order central-difference assembly of -L and of its
/// ground-state similarity transform -H = -Laplacian + c^2|x|^2 -+ c d
/// (same spectrum, symmetric).  Refuses when 2c max|x| h >= 2, which
/// would flip stencil signs.
AssembledOperator assemble_operator(const GridDomain& domain, double c,
                                    SignConvention convention);

struct EigenResult {
  double lambda1 = 0.0;
  int iterations = 0;
  double residual = 0.0;
  double h = 0.0;
};

struct Lambda1Options {
  bool use_symmetrized = true;  // inverse-iterate on -H instead of -L
  double residual_tol = 1e-8;
  double inner_tol = 1e-10;
  int max_iterations = 400;
};

/// Smallest eigenvalue of -L by inverse power iteration with a
/// deterministic all-ones start.
EigenResult lambda1(const GridDomain& domain, double c,
                    SignConvention convention, const Lambda1Options& opts = {});

/// Weighted volume of the domain for exp(c|x|^2): grid summation.
double weighted_volume_grid(const GridDomain& domain, double c);

struct FaberKrahnResult {
  double lambda_domain;
  double lambda_ball;
  double ball_radius;
  bool holds;     // lambda_domain >= lambda_ball - tolerance
  bool equality;  // within tolerance and the domain matches the ball
  double tolerance;
};

/// Compares lambda1 of the domain against the centered ball of equal
/// weighted volume at matched h.
FaberKrahnResult faber_krahn_compare(const GridDomain& domain, double c,
                                     SignConvention convention,
                                     const Lambda1Options& opts = {});

}  // namespace isodense
