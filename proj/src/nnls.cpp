#include "wavetrans/nnls.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <vector>

namespace wavetrans {

NnlsResult nnls(const Mat& a, const Vec& b, int max_iterations) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  require(b.size() == m, errc::dimension_mismatch, "nnls rhs length mismatch");
  if (max_iterations <= 0) max_iterations = 10 * n;

  NnlsResult result;
  result.x = Vec::Zero(n);
  std::vector<bool> passive(n, false);
  int n_passive = 0;

  Vec residual = b;
  Vec w = a.transpose() * residual;
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     a.cwiseAbs().colwise().sum().maxCoeff() * std::max(m, n);

  auto solve_passive = [&](Vec& z) {
    Mat ap(m, n_passive);
    std::vector<int> cols;
    cols.reserve(n_passive);
    for (int i = 0; i < n; ++i)
      if (passive[i]) {
        ap.col(static_cast<int>(cols.size())) = a.col(i);
        cols.push_back(i);
      }
    const Vec zp = ap.colPivHouseholderQr().solve(b);
    z = Vec::Zero(n);
    for (size_t k = 0; k < cols.size(); ++k) z(cols[k]) = zp(static_cast<int>(k));
  };

  while (n_passive < n) {
    // Most positive dual coordinate among the active set.
    int candidate = -1;
    double w_max = tol;
    for (int i = 0; i < n; ++i) {
      if (!passive[i] && w(i) > w_max) {
        w_max = w(i);
        candidate = i;
      }
    }
    if (candidate < 0) break;  // KKT satisfied
    passive[candidate] = true;
    ++n_passive;

    for (;;) {
      if (++result.iterations > max_iterations)
        fail(errc::nnls_nonconvergence,
             "active-set iteration cap " + std::to_string(max_iterations) + " exceeded");
      Vec z;
      solve_passive(z);
      bool feasible = true;
      for (int i = 0; i < n; ++i)
        if (passive[i] && z(i) <= 0.0) feasible = false;
      if (feasible) {
        result.x = z;
        break;
      }
      // Step toward z until the first passive coordinate hits zero.
      double step = 1.0;
      for (int i = 0; i < n; ++i)
        if (passive[i] && z(i) <= 0.0)
          step = std::min(step, result.x(i) / (result.x(i) - z(i)));
      result.x += step * (z - result.x);
      for (int i = 0; i < n; ++i) {
        if (passive[i] && result.x(i) <= tol) {
          result.x(i) = 0.0;
          passive[i] = false;
          --n_passive;
        }
      }
    }
    residual = b - a * result.x;
    w = a.transpose() * residual;
  }

  result.residual_norm = (b - a * result.x).norm();
  return result;
}

int numerical_rank(const Mat& a, double rel_threshold) {
  Eigen::BDCSVD<Mat> svd(a);
  const Vec s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  const double tol = rel_threshold * s(0);
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++rank;
  return rank;
}

}  // namespace wavetrans
