#pragma once

// Brute-force census of inscribed triangles at a fixed pose, independent of
// the Newton machinery: sweep the base vertex over the curve, intersect the
// ray towards vertex 1 with the curve, and look for sign changes of the
// radial defect of vertex 2.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using RadiusFn = std::function<double(double)>;

struct PlanarTriangle {
  double theta0 = 0.0;
  double lambda = 0.0;
  Eigen::Vector2d q0, q1, q2;
};

inline Eigen::Vector2d curve_point(const RadiusFn& r, double theta) {
  return r(theta) * Eigen::Vector2d(std::cos(theta), std::sin(theta));
}

// Signed radial defect: positive outside the curve.
inline double defect(const RadiusFn& r, const Eigen::Vector2d& p) {
  return p.norm() - r(std::atan2(p.y(), p.x()));
}

// All lambda > 0 with c + lambda d on the curve.
inline std::vector<double> ray_hits(const RadiusFn& r, const Eigen::Vector2d& c, const Eigen::Vector2d& d,
                                    double lambda_max, int samples) {
  std::vector<double> hits;
  const double h = lambda_max / samples;
  double a = 1e-7 * lambda_max;
  double fa = defect(r, c + a * d);
  for (int i = 1; i <= samples; ++i) {
    const double b = i * h;
    const double fb = defect(r, c + b * d);
    if ((fa < 0) != (fb < 0)) {
      double lo = a, hi = b, flo = fa;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = defect(r, c + mid * d);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      hits.push_back(0.5 * (lo + hi));
    }
    a = b;
    fa = fb;
  }
  return hits;
}

class PlanarCensus {
 public:
  // w1, w2: offsets of vertices 1 and 2 from vertex 0 per unit scale, already
  // rotated by the pose.
  PlanarCensus(RadiusFn r, Eigen::Vector2d w1, Eigen::Vector2d w2, double r_max, int theta_samples = 2048,
               int ray_samples = 400)
      : r_(std::move(r)), w1_(w1), w2_(w2), theta_samples_(theta_samples), ray_samples_(ray_samples) {
    lambda_max_ = 2.2 * r_max / w1_.norm();
  }

  std::vector<PlanarTriangle> solve() const {
    const double step = 2.0 * std::numbers::pi / theta_samples_;
    std::vector<std::vector<double>> hits(static_cast<std::size_t>(theta_samples_ + 1));
    for (int i = 0; i <= theta_samples_; ++i) hits[i] = hits_at(i * step);
    std::vector<PlanarTriangle> out;
    for (int i = 0; i < theta_samples_; ++i) {
      const double ta = i * step;
      const double tb = (i + 1) * step;
      const auto& a = hits[i];
      const auto& b = hits[i + 1];
      const auto pa = partners(a, b);
      const auto pb = partners(b, a);
      for (std::size_t j = 0; j < a.size(); ++j) {
        if (pa[j] < 0 || pb[pa[j]] != static_cast<int>(j)) continue;
        const double la = a[j];
        const double lb = b[pa[j]];
        const double fa = f(ta, la);
        if ((fa < 0) == (f(tb, lb) < 0)) continue;
        out.push_back(refine(ta, tb, la, lb, fa));
      }
      // A pair of hits born (or dying) between samples along a tangential
      // ray: opposite signs across the pair mean a solution at the fold.
      fold_roots(tb, b, pb, pa, out);
      fold_roots(ta, a, pa, pb, out);
    }
    return out;
  }

 private:
  // Index of the nearest hit in `to` for each hit in `from`, or -1 when it is
  // too far to be the same branch.
  std::vector<int> partners(const std::vector<double>& from, const std::vector<double>& to) const {
    std::vector<int> out(from.size(), -1);
    for (std::size_t j = 0; j < from.size(); ++j) {
      double gap = 0.05 * lambda_max_;
      for (std::size_t m = 0; m < to.size(); ++m) {
        if (std::abs(to[m] - from[j]) < gap) {
          gap = std::abs(to[m] - from[j]);
          out[j] = static_cast<int>(m);
        }
      }
    }
    return out;
  }

  void fold_roots(double theta0, const std::vector<double>& hits, const std::vector<int>& mine,
                  const std::vector<int>& theirs, std::vector<PlanarTriangle>& out) const {
    const auto unpaired = [&](std::size_t j) { return mine[j] < 0 || theirs[mine[j]] != static_cast<int>(j); };
    for (std::size_t j = 0; j + 1 < hits.size(); ++j) {
      if (!unpaired(j) || !unpaired(j + 1)) continue;
      if ((f(theta0, hits[j]) < 0) == (f(theta0, hits[j + 1]) < 0)) continue;
      PlanarTriangle t;
      t.theta0 = theta0;
      t.lambda = 0.5 * (hits[j] + hits[j + 1]);
      t.q0 = curve_point(r_, theta0);
      t.q1 = t.q0 + t.lambda * w1_;
      t.q2 = t.q0 + t.lambda * w2_;
      out.push_back(t);
      ++j;
    }
  }

  std::vector<double> hits_at(double theta0) const {
    return ray_hits(r_, curve_point(r_, theta0), w1_, lambda_max_, ray_samples_);
  }

  double f(double theta0, double lambda) const {
    return defect(r_, curve_point(r_, theta0) + lambda * w2_);
  }

  // Hit on the same branch: nearest lambda to the previous one.
  double follow(double theta0, double lambda_guess) const {
    const auto hits = hits_at(theta0);
    double best = lambda_guess;
    double gap = INFINITY;
    for (double h : hits) {
      if (std::abs(h - lambda_guess) < gap) {
        gap = std::abs(h - lambda_guess);
        best = h;
      }
    }
    return best;
  }

  PlanarTriangle refine(double lo, double hi, double llo, double lhi, double flo) const {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double lmid = follow(mid, 0.5 * (llo + lhi));
      const double fm = f(mid, lmid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        llo = lmid;
        flo = fm;
      } else {
        hi = mid;
        lhi = lmid;
      }
    }
    PlanarTriangle t;
    t.theta0 = 0.5 * (lo + hi);
    t.lambda = follow(t.theta0, 0.5 * (llo + lhi));
    t.q0 = curve_point(r_, t.theta0);
    t.q1 = t.q0 + t.lambda * w1_;
    t.q2 = t.q0 + t.lambda * w2_;
    return t;
  }

  RadiusFn r_;
  Eigen::Vector2d w1_, w2_;
  int theta_samples_;
  int ray_samples_;
  double lambda_max_ = 0.0;
};

}  // namespace oracle
