#include "isodense/spectral.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <queue>

#include <nlohmann/json.hpp>

#include "isodense/numerics.hpp"

namespace isodense {

using json = nlohmann::ordered_json;

int GridDomain::unknowns() const {
  int n = 0;
  for (std::uint8_t m : mask) n += m != 0;
  return n;
}

bool GridDomain::connected() const {
  const int total = unknowns();
  if (total == 0) return true;
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::queue<int> queue;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) {
      queue.push(static_cast<int>(i));
      seen[i] = 1;
      break;
    }
  }
  int reached = 0;
  while (!queue.empty()) {
    const int idx = queue.front();
    queue.pop();
    ++reached;
    const int i = idx % nodes_per_axis;
    const int j = idx / nodes_per_axis;
    const int di[] = {1, -1, 0, 0};
    const int dj[] = {0, 0, 1, -1};
    const int dirs = dim == 2 ? 4 : 2;
    for (int d = 0; d < dirs; ++d) {
      const int ii = i + di[d], jj = j + dj[d];
      if (!inside(ii, jj)) continue;
      const int nidx = index(ii, jj);
      if (!seen[nidx]) {
        seen[nidx] = 1;
        queue.push(nidx);
      }
    }
  }
  return reached == total;
}

GridDomain make_interval_domain(double lo, double hi, double h) {
  GridDomain d;
  d.dim = 1;
  d.h = h;
  d.window_lo = lo;
  d.nodes_per_axis = static_cast<int>(std::llround((hi - lo) / h)) + 1;
  d.mask.assign(d.nodes_per_axis, 0);
  for (int i = 0; i < d.nodes_per_axis; ++i) {
    const double x = d.coord(i);
    if (x > lo && x < hi) d.mask[i] = 1;
  }
  return d;
}

namespace {
GridDomain make_planar_window(double extent, double h) {
  GridDomain d;
  d.dim = 2;
  d.h = h;
  const int half = static_cast<int>(std::ceil(extent / h));
  d.window_lo = -half * h;
  d.nodes_per_axis = 2 * half + 1;
  d.mask.assign(static_cast<std::size_t>(d.nodes_per_axis) * d.nodes_per_axis,
                0);
  return d;
}
}  // namespace

GridDomain make_disk_domain(double radius, double h, double margin) {
  return make_disk_domain_at(0.0, 0.0, radius, h, margin);
}

GridDomain make_disk_domain_at(double cx, double cy, double radius, double h,
                               double margin) {
  const double extent =
      std::max(std::abs(cx), std::abs(cy)) + radius + margin * h;
  GridDomain d = make_planar_window(extent, h);
  for (int j = 0; j < d.nodes_per_axis; ++j)
    for (int i = 0; i < d.nodes_per_axis; ++i) {
      const double x = d.coord(i) - cx, y = d.coord(j) - cy;
      if (x * x + y * y < radius * radius) d.mask[d.index(i, j)] = 1;
    }
  return d;
}

GridDomain make_rect_domain(double x0, double x1, double y0, double y1,
                            double h, double margin) {
  const double extent =
      std::max({std::abs(x0), std::abs(x1), std::abs(y0), std::abs(y1)});
  GridDomain d = make_planar_window(extent + margin * h, h);
  for (int j = 0; j < d.nodes_per_axis; ++j)
    for (int i = 0; i < d.nodes_per_axis; ++i) {
      const double x = d.coord(i), y = d.coord(j);
      if (x > x0 && x < x1 && y > y0 && y < y1) d.mask[d.index(i, j)] = 1;
    }
  return d;
}

std::string to_json(const GridDomain& domain) {
  json j;
  j["h"] = domain.h;
  j["window"] = {domain.window_lo,
                 domain.window_lo + (domain.nodes_per_axis - 1) * domain.h};
  json rows = json::array();
  const int nrows = domain.dim == 2 ? domain.nodes_per_axis : 1;
  for (int r = 0; r < nrows; ++r) {
    std::string bits(domain.nodes_per_axis, '0');
    for (int i = 0; i < domain.nodes_per_axis; ++i)
      if (domain.mask[domain.index(i, r)]) bits[i] = '1';
    rows.push_back(bits);
  }
  j["rows"] = std::move(rows);
  return j.dump(2);
}

GridDomain grid_domain_from_json(const std::string& text) {
  const json j = json::parse(text);
  GridDomain d;
  d.h = j.at("h").get<double>();
  d.window_lo = j.at("window").at(0).get<double>();
  const auto& rows = j.at("rows");
  if (rows.empty()) throw std::invalid_argument("mask needs at least one row");
  d.dim = rows.size() == 1 ? 1 : 2;
  d.nodes_per_axis = static_cast<int>(rows.at(0).get<std::string>().size());
  if (d.dim == 2 && static_cast<int>(rows.size()) != d.nodes_per_axis)
    throw std::invalid_argument("2D mask must be square");
  d.mask.assign(static_cast<std::size_t>(d.nodes_per_axis) *
                    (d.dim == 2 ? d.nodes_per_axis : 1),
                0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string bits = rows.at(r).get<std::string>();
    if (static_cast<int>(bits.size()) != d.nodes_per_axis)
      throw std::invalid_argument("ragged mask rows");
    for (int i = 0; i < d.nodes_per_axis; ++i)
      if (bits[i] == '1') d.mask[d.index(i, static_cast<int>(r))] = 1;
  }
  return d;
}

// ---------------------------------------------------------------------------

AssembledOperator assemble_operator(const GridDomain& domain, double c,
                                    SignConvention convention) {
  const int n_axis = domain.nodes_per_axis;
  const int d = domain.dim;
  const double h = domain.h;
  const double drift_sign = convention == SignConvention::Paper ? -1.0 : 1.0;

  // Numbering of interior unknowns.
  std::vector<int> number(domain.mask.size(), -1);
  AssembledOperator op;
  op.h = h;
  int count = 0;
  const int nrows = d == 2 ? n_axis : 1;
  double max_abs_coord = 0.0;
  for (int j = 0; j < nrows; ++j)
    for (int i = 0; i < n_axis; ++i)
      if (domain.mask[domain.index(i, j)]) {
        number[domain.index(i, j)] = count++;
        op.node_x.push_back(domain.coord(i));
        op.node_y.push_back(d == 2 ? domain.coord(j) : 0.0);
        max_abs_coord = std::max(
            {max_abs_coord, std::abs(domain.coord(i)),
             d == 2 ? std::abs(domain.coord(j)) : 0.0});
      }
  if (count == 0) throw std::invalid_argument("empty domain mask");
  if (2.0 * c * max_abs_coord * h >= 2.0)
    throw std::invalid_argument(
        "stencil stability violated: need h < " +
        std::to_string(1.0 / std::max(c * max_abs_coord, 1e-300)));

  std::vector<Eigen::Triplet<double>> tl, th;
  tl.reserve(count * (2 * d + 1));
  th.reserve(count * (2 * d + 1));
  const double inv_h2 = 1.0 / (h * h);
  for (int j = 0; j < nrows; ++j) {
    for (int i = 0; i < n_axis; ++i) {
      const int row = number[domain.index(i, j)];
      if (row < 0) continue;
      const double x = domain.coord(i);
      const double y = d == 2 ? domain.coord(j) : 0.0;
      const double r2 = x * x + y * y;
      // -L = -Laplacian - drift_sign 2c<x,grad>.
      tl.emplace_back(row, row, 2.0 * d * inv_h2);
      // Ground-state transform of L = Laplacian - grad W . grad with
      // W = -drift_sign c|x|^2 gives -H = -Laplacian + c^2|x|^2
      // + drift_sign c d, sharing the Dirichlet spectrum of -L.
      th.emplace_back(row, row,
                      2.0 * d * inv_h2 + c * c * r2 + drift_sign * c * d);
      struct Nb {
        int i, j;
        double coord;
      };
      const Nb nbs[] = {{i + 1, j, x}, {i - 1, j, x}, {i, j + 1, y},
                        {i, j - 1, y}};
      for (int k = 0; k < 2 * d; ++k) {
        const Nb& nb = nbs[k];
        if (!domain.inside(nb.i, nb.j)) continue;
        const int col = number[domain.index(nb.i, nb.j)];
        const double dir = (k % 2 == 0) ? 1.0 : -1.0;  // forward/backward
        // -L neighbor: -1/h^2 - drift_sign * 2c coord * dir/(2h).
        tl.emplace_back(row, col,
                        -inv_h2 - drift_sign * c * nb.coord * dir / h);
        th.emplace_back(row, col, -inv_h2);
      }
    }
  }
  op.neg_l.resize(count, count);
  op.neg_l.setFromTriplets(tl.begin(), tl.end());
  op.neg_h.resize(count, count);
  op.neg_h.setFromTriplets(th.begin(), th.end());
  return op;
}

namespace {

template <typename Solver>
EigenResult inverse_iterate(const Eigen::SparseMatrix<double>& A,
                            Solver& solver, const Lambda1Options& opts,
                            double h) {
  const int n = static_cast<int>(A.rows());
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  x.normalize();
  EigenResult res;
  res.h = h;
  double lambda = 0.0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    Eigen::VectorXd z = solver.solve(x);
    z.normalize();
    const Eigen::VectorXd az = A * z;
    lambda = z.dot(az);
    const double residual = (az - lambda * z).norm();
    res.iterations = it;
    res.residual = residual;
    res.lambda1 = lambda;
    if (residual <= opts.residual_tol * std::max(1.0, std::abs(lambda)))
      return res;
    x = z;
  }
  throw NumericError("inverse power iteration did not converge",
                     res.residual);
}

}  // namespace

EigenResult lambda1(const GridDomain& domain, double c,
                    SignConvention convention, const Lambda1Options& opts) {
  const AssembledOperator op = assemble_operator(domain, c, convention);
  if (opts.use_symmetrized) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(op.neg_h);
    if (solver.info() != Eigen::Success)
      throw NumericError("sparse factorization failed", 0.0);
    return inverse_iterate(op.neg_h, solver, opts, domain.h);
  }
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  solver.analyzePattern(op.neg_l);
  solver.factorize(op.neg_l);
  if (solver.info() != Eigen::Success)
    throw NumericError("sparse LU factorization failed", 0.0);
  return inverse_iterate(op.neg_l, solver, opts, domain.h);
}

double weighted_volume_grid(const GridDomain& domain, double c) {
  double total = 0.0;
  const int nrows = domain.dim == 2 ? domain.nodes_per_axis : 1;
  const double cell = std::pow(domain.h, domain.dim);
  for (int j = 0; j < nrows; ++j)
    for (int i = 0; i < domain.nodes_per_axis; ++i) {
      if (!domain.mask[domain.index(i, j)]) continue;
      const double x = domain.coord(i);
      const double y = domain.dim == 2 ? domain.coord(j) : 0.0;
      total += cell * std::exp(c * (x * x + y * y));
    }
  return total;
}

FaberKrahnResult faber_krahn_compare(const GridDomain& domain, double c,
                                     SignConvention convention,
                                     const Lambda1Options& opts) {
  if (domain.dim != 2)
    throw std::invalid_argument("faber_krahn_compare expects a planar domain");
  const double volume = weighted_volume_grid(domain, c);
  auto ball_volume = [&](double R) {
    return integrate(
        [&](double r) { return 2.0 * M_PI * r * std::exp(c * r * r); }, 0.0,
        R, {1e-13, 48, true});
  };
  double hi = 1.0;
  while (ball_volume(hi) < volume) hi *= 2.0;
  const double radius =
      bisect([&](double r) { return ball_volume(r) - volume; }, 0.0, hi,
             1e-12);
  const GridDomain ball = make_disk_domain(radius, domain.h);

  FaberKrahnResult res;
  res.ball_radius = radius;
  res.lambda_domain = lambda1(domain, c, convention, opts).lambda1;
  res.lambda_ball = lambda1(ball, c, convention, opts).lambda1;
  // Both rasterizations carry O(h) eigenvalue error of matching sign.
  res.tolerance = 2.0 * res.lambda_ball * domain.h;
  res.holds = res.lambda_domain >= res.lambda_ball - res.tolerance;

  // Equality requires a matching shape, measured by mask difference.
  if (std::abs(res.lambda_domain - res.lambda_ball) <= res.tolerance) {
    long diff_cells = 0;
    const int n = std::max(domain.nodes_per_axis, ball.nodes_per_axis);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double x0 = domain.window_lo + i * domain.h;
        const double y0 = domain.window_lo + j * domain.h;
        const bool in_dom =
            i < domain.nodes_per_axis && j < domain.nodes_per_axis &&
            domain.mask[domain.index(i, j)];
        const bool in_ball = x0 * x0 + y0 * y0 < radius * radius;
        diff_cells += in_dom != in_ball;
      }
    const double diff_area = diff_cells * domain.h * domain.h;
    res.equality = diff_area <= 8.0 * domain.h * (2.0 * M_PI * radius + 1.0);
  } else {
    res.equality = false;
  }
  return res;
}

}  // namespace isodense
