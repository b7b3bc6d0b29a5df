#pragma once

// Second-order fast marching on a uniform 2D grid for |∇T| = s(x, y).
// Independent of the ray solver; used only as a test oracle.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

namespace oracle {

class FastMarching2D {
 public:
  FastMarching2D(double x0, double y0, double h, int n, std::function<double(double, double)> slowness)
      : x0_(x0), y0_(y0), h_(h), n_(n), s_(std::move(slowness)) {}

  // Travel times from (sx, sy). Nodes within init_radius of the source are
  // seeded with straight-line times using the mean slowness along the segment.
  void solve(double sx, double sy, double init_radius) {
    const double inf = std::numeric_limits<double>::infinity();
    T_.assign(static_cast<std::size_t>(n_) * n_, inf);
    state_.assign(T_.size(), 0);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    for (int j = 0; j < n_; ++j)
      for (int i = 0; i < n_; ++i) {
        const double x = x0_ + i * h_, y = y0_ + j * h_;
        const double d = std::hypot(x - sx, y - sy);
        if (d > init_radius) continue;
        double acc = 0.0;
        const int m = 16;
        for (int q = 0; q < m; ++q) {
          const double u = (q + 0.5) / m;
          acc += s_(sx + u * (x - sx), sy + u * (y - sy));
        }
        T_[id(i, j)] = d * acc / m;
        state_[id(i, j)] = 2;
      }
    for (int j = 0; j < n_; ++j)
      for (int i = 0; i < n_; ++i)
        if (state_[id(i, j)] == 2) push_neighbours(i, j, heap);
    while (!heap.empty()) {
      const auto [t, k] = heap.top();
      heap.pop();
      if (state_[k] == 2 || t > T_[k]) continue;
      state_[k] = 2;
      push_neighbours(k % n_, k / n_, heap);
    }
  }

  // Bilinear interpolation of the solved field.
  double at(double x, double y) const {
    const double u = (x - x0_) / h_, v = (y - y0_) / h_;
    const int i = std::clamp(static_cast<int>(std::floor(u)), 0, n_ - 2);
    const int j = std::clamp(static_cast<int>(std::floor(v)), 0, n_ - 2);
    const double a = u - i, b = v - j;
    return (1 - a) * (1 - b) * T_[id(i, j)] + a * (1 - b) * T_[id(i + 1, j)] + (1 - a) * b * T_[id(i, j + 1)] +
           a * b * T_[id(i + 1, j + 1)];
  }

 private:
  int id(int i, int j) const { return j * n_ + i; }

  template <class Heap>
  void push_neighbours(int i, int j, Heap& heap) {
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d) {
      const int a = i + di[d], b = j + dj[d];
      if (a < 0 || b < 0 || a >= n_ || b >= n_ || state_[id(a, b)] == 2) continue;
      const double t = update(a, b);
      if (t < T_[id(a, b)]) {
        T_[id(a, b)] = t;
        heap.push({t, id(a, b)});
      }
    }
  }

  // One-sided upwind value along one axis: (coefficient, rhs) of α(T − β)² terms.
  bool axis_term(int i, int j, int axis, double& alpha, double& beta) const {
    const double inf = std::numeric_limits<double>::infinity();
    double best = inf;
    alpha = 0.0;
    beta = 0.0;
    for (int sgn : {-1, 1}) {
      const int a1 = axis == 0 ? i + sgn : i, b1 = axis == 0 ? j : j + sgn;
      if (a1 < 0 || b1 < 0 || a1 >= n_ || b1 >= n_ || state_[id(a1, b1)] != 2) continue;
      const double t1 = T_[id(a1, b1)];
      const int a2 = axis == 0 ? i + 2 * sgn : i, b2 = axis == 0 ? j : j + 2 * sgn;
      double al = 1.0, be = t1;
      if (a2 >= 0 && b2 >= 0 && a2 < n_ && b2 < n_ && state_[id(a2, b2)] == 2 && T_[id(a2, b2)] <= t1) {
        // Second-order: (3T − 4T1 + T2)/2h
        al = 9.0 / 4.0;
        be = (4.0 * t1 - T_[id(a2, b2)]) / 3.0;
      }
      if (t1 < best) {
        best = t1;
        alpha = al;
        beta = be;
      }
    }
    return best < inf;
  }

  double update(int i, int j) const {
    const double f = s_(x0_ + i * h_, y0_ + j * h_) * h_;
    double ax, bx, ay, by;
    const bool hx = axis_term(i, j, 0, ax, bx), hy = axis_term(i, j, 1, ay, by);
    auto single = [&](double a, double b) { return b + f / std::sqrt(a); };
    if (hx && hy) {
      // ax(T−bx)² + ay(T−by)² = f²
      const double A = ax + ay, B = -2.0 * (ax * bx + ay * by), C = ax * bx * bx + ay * by * by - f * f;
      const double disc = B * B - 4.0 * A * C;
      if (disc >= 0.0) {
        const double t = (-B + std::sqrt(disc)) / (2.0 * A);
        if (t >= std::max(bx, by)) return t;
      }
      return std::min(single(ax, bx), single(ay, by));
    }
    if (hx) return single(ax, bx);
    if (hy) return single(ay, by);
    return std::numeric_limits<double>::infinity();
  }

  double x0_, y0_, h_;
  int n_;
  std::function<double(double, double)> s_;
  std::vector<double> T_;
  std::vector<char> state_;
};

}  // namespace oracle
