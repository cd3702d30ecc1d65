#include "lsanb/dense_svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "lsanb/error.hpp"

namespace lsanb {

namespace {

constexpr int kMaxSweeps = 75;

inline double with_sign(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// In place on a (m x n, m >= n): a becomes U, w the singular values, v the
// right singular vectors. Unsorted.
void golub_kahan(Eigen::MatrixXd& a, Eigen::VectorXd& w, Eigen::MatrixXd& v) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  const double eps = std::numeric_limits<double>::epsilon();
  w.setZero(n);
  v.setZero(n, n);
  std::vector<double> rv1(static_cast<std::size_t>(n), 0.0);

  double g = 0.0;
  double scale = 0.0;
  double anorm = 0.0;
  Eigen::Index l = 0;

  // Householder reduction to upper bidiagonal form.
  for (Eigen::Index i = 0; i < n; ++i) {
    l = i + 1;
    rv1[i] = scale * g;
    g = 0.0;
    double s = 0.0;
    scale = 0.0;
    if (i < m) {
      for (Eigen::Index k = i; k < m; ++k) scale += std::abs(a(k, i));
      if (scale != 0.0) {
        for (Eigen::Index k = i; k < m; ++k) {
          a(k, i) /= scale;
          s += a(k, i) * a(k, i);
        }
        double f = a(i, i);
        g = -with_sign(std::sqrt(s), f);
        const double h = f * g - s;
        a(i, i) = f - g;
        for (Eigen::Index j = l; j < n; ++j) {
          s = 0.0;
          for (Eigen::Index k = i; k < m; ++k) s += a(k, i) * a(k, j);
          f = s / h;
          for (Eigen::Index k = i; k < m; ++k) a(k, j) += f * a(k, i);
        }
        for (Eigen::Index k = i; k < m; ++k) a(k, i) *= scale;
      }
    }
    w(i) = scale * g;
    g = 0.0;
    s = 0.0;
    scale = 0.0;
    if (i < m && i != n - 1) {
      for (Eigen::Index k = l; k < n; ++k) scale += std::abs(a(i, k));
      if (scale != 0.0) {
        for (Eigen::Index k = l; k < n; ++k) {
          a(i, k) /= scale;
          s += a(i, k) * a(i, k);
        }
        const double f = a(i, l);
        g = -with_sign(std::sqrt(s), f);
        const double h = f * g - s;
        a(i, l) = f - g;
        for (Eigen::Index k = l; k < n; ++k) rv1[k] = a(i, k) / h;
        for (Eigen::Index j = l; j < m; ++j) {
          s = 0.0;
          for (Eigen::Index k = l; k < n; ++k) s += a(j, k) * a(i, k);
          for (Eigen::Index k = l; k < n; ++k) a(j, k) += s * rv1[k];
        }
        for (Eigen::Index k = l; k < n; ++k) a(i, k) *= scale;
      }
    }
    anorm = std::max(anorm, std::abs(w(i)) + std::abs(rv1[i]));
  }

  // Right-hand transformations.
  l = n;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (i < n - 1) {
      if (g != 0.0) {
        for (Eigen::Index j = l; j < n; ++j) v(j, i) = (a(i, j) / a(i, l)) / g;
        for (Eigen::Index j = l; j < n; ++j) {
          double s = 0.0;
          for (Eigen::Index k = l; k < n; ++k) s += a(i, k) * v(k, j);
          for (Eigen::Index k = l; k < n; ++k) v(k, j) += s * v(k, i);
        }
      }
      for (Eigen::Index j = l; j < n; ++j) v(i, j) = v(j, i) = 0.0;
    }
    v(i, i) = 1.0;
    g = rv1[i];
    l = i;
  }

  // Left-hand transformations.
  for (Eigen::Index i = std::min(m, n) - 1; i >= 0; --i) {
    l = i + 1;
    g = w(i);
    for (Eigen::Index j = l; j < n; ++j) a(i, j) = 0.0;
    if (g != 0.0) {
      g = 1.0 / g;
      for (Eigen::Index j = l; j < n; ++j) {
        double s = 0.0;
        for (Eigen::Index k = l; k < m; ++k) s += a(k, i) * a(k, j);
        const double f = (s / a(i, i)) * g;
        for (Eigen::Index k = i; k < m; ++k) a(k, j) += f * a(k, i);
      }
      for (Eigen::Index j = i; j < m; ++j) a(j, i) *= g;
    } else {
      for (Eigen::Index j = i; j < m; ++j) a(j, i) = 0.0;
    }
    a(i, i) += 1.0;
  }

  // Diagonalize the bidiagonal form.
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    for (int sweep = 1;; ++sweep) {
      bool cancel = true;
      Eigen::Index nm = 0;
      for (l = k; l >= 0; --l) {
        nm = l - 1;
        if (l == 0 || std::abs(rv1[l]) <= eps * anorm) {
          cancel = false;
          break;
        }
        if (std::abs(w(nm)) <= eps * anorm) break;
      }
      if (cancel) {
        double c = 0.0;
        double s = 1.0;
        for (Eigen::Index i = l; i <= k; ++i) {
          const double f = s * rv1[i];
          rv1[i] = c * rv1[i];
          if (std::abs(f) <= eps * anorm) break;
          g = w(i);
          double h = std::hypot(f, g);
          w(i) = h;
          h = 1.0 / h;
          c = g * h;
          s = -f * h;
          for (Eigen::Index j = 0; j < m; ++j) {
            const double y = a(j, nm);
            const double z = a(j, i);
            a(j, nm) = y * c + z * s;
            a(j, i) = z * c - y * s;
          }
        }
      }
      double z = w(k);
      if (l == k) {
        if (z < 0.0) {
          w(k) = -z;
          v.col(k) = -v.col(k);
        }
        break;
      }
      if (sweep == kMaxSweeps) {
        throw Error(ErrorKind::kNonConvergence,
                    "dense SVD: no convergence after " + std::to_string(kMaxSweeps) + " sweeps");
      }
      double x = w(l);
      nm = k - 1;
      double y = w(nm);
      g = rv1[nm];
      double h = rv1[k];
      double f = ((y - z) * (y + z) + (g - h) * (g + h)) / (2.0 * h * y);
      g = std::hypot(f, 1.0);
      f = ((x - z) * (x + z) + h * ((y / (f + with_sign(g, f))) - h)) / x;
      double c = 1.0;
      double s = 1.0;
      for (Eigen::Index j = l; j <= nm; ++j) {
        const Eigen::Index i = j + 1;
        g = rv1[i];
        y = w(i);
        h = s * g;
        g = c * g;
        z = std::hypot(f, h);
        rv1[j] = z;
        c = f / z;
        s = h / z;
        f = x * c + g * s;
        g = g * c - x * s;
        h = y * s;
        y *= c;
        for (Eigen::Index jj = 0; jj < n; ++jj) {
          const double vx = v(jj, j);
          const double vz = v(jj, i);
          v(jj, j) = vx * c + vz * s;
          v(jj, i) = vz * c - vx * s;
        }
        z = std::hypot(f, h);
        w(j) = z;
        if (z != 0.0) {
          z = 1.0 / z;
          c = f * z;
          s = h * z;
        }
        f = c * g + s * y;
        x = c * y - s * g;
        for (Eigen::Index jj = 0; jj < m; ++jj) {
          const double ay = a(jj, j);
          const double az = a(jj, i);
          a(jj, j) = ay * c + az * s;
          a(jj, i) = az * c - ay * s;
        }
      }
      rv1[l] = 0.0;
      rv1[k] = f;
      w(k) = x;
    }
  }
}

}  // namespace

DenseSvd dense_svd(const Eigen::MatrixXd& a) {
  const bool transposed = a.rows() < a.cols();
  Eigen::MatrixXd work = transposed ? Eigen::MatrixXd(a.transpose()) : a;
  Eigen::VectorXd w;
  Eigen::MatrixXd v;
  if (work.cols() > 0) golub_kahan(work, w, v);

  const Eigen::Index p = work.cols();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return w(x) > w(y); });

  DenseSvd out;
  Eigen::MatrixXd& left = transposed ? out.v : out.u;
  Eigen::MatrixXd& right = transposed ? out.u : out.v;
  left.resize(work.rows(), p);
  right.resize(v.rows(), p);
  out.sigma.resize(p);
  for (Eigen::Index k = 0; k < p; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    left.col(k) = work.col(src);
    right.col(k) = v.col(src);
    out.sigma(k) = w(src);
  }
  return out;
}

}  // namespace lsanb
