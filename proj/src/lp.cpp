#include "mahler/lp.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "mahler/errors.hpp"

namespace mahler {

namespace {

struct ExactZero {
  bool zero(const Rational& x) const { return x == 0; }
  bool pos(const Rational& x) const { return x > 0; }
  bool neg(const Rational& x) const { return x < 0; }
  bool less(const Rational& a, const Rational& b) const { return a < b; }
};

struct RealZero {
  Real eps;
  bool zero(const Real& x) const { return boost::multiprecision::abs(x) <= eps; }
  bool pos(const Real& x) const { return x > eps; }
  bool neg(const Real& x) const { return x < -eps; }
  bool less(const Real& a, const Real& b) const { return a < b - eps; }
};

template <class T>
T abs_value(const T& x) {
  return x < 0 ? T(-x) : x;
}

template <class T, class Z>
class Tableau {
 public:
  Tableau(const L1Problem<T>& p, Z z) : z_(std::move(z)), n_(p.variables()), m_(p.rows()) {
    if (static_cast<int>(p.a.size()) != m_) throw ValidationError("constraint matrix and right-hand side disagree");
    for (const auto& w : p.weights) {
      if (w < 0) throw ValidationError("L1 weights must be nonnegative");
    }
    cols_ = 2 * n_ + m_;
    t_.assign(static_cast<size_t>(m_), std::vector<T>(static_cast<size_t>(cols_ + 1), T(0)));
    flipped_.assign(static_cast<size_t>(m_), false);
    for (int r = 0; r < m_; ++r) {
      const auto& row = p.a[static_cast<size_t>(r)];
      if (static_cast<int>(row.size()) != n_) throw ValidationError("constraint row has wrong length");
      const bool flip = p.b[static_cast<size_t>(r)] < 0;
      flipped_[static_cast<size_t>(r)] = flip;
      auto& tr = t_[static_cast<size_t>(r)];
      for (int j = 0; j < n_; ++j) {
        const T v = flip ? T(-row[static_cast<size_t>(j)]) : row[static_cast<size_t>(j)];
        tr[static_cast<size_t>(j)] = v;
        tr[static_cast<size_t>(j + n_)] = -v;
      }
      tr[static_cast<size_t>(2 * n_ + r)] = T(1);
      tr[static_cast<size_t>(cols_)] = flip ? T(-p.b[static_cast<size_t>(r)]) : p.b[static_cast<size_t>(r)];
    }
    basis_.resize(static_cast<size_t>(m_));
    for (int r = 0; r < m_; ++r) basis_[static_cast<size_t>(r)] = 2 * n_ + r;
    weights_ = p.weights;
  }

  LpResult<T> solve(const L1Problem<T>& p) {
    // phase 1: minimize the artificial sum
    std::vector<T> c1(static_cast<size_t>(cols_), T(0));
    for (int r = 0; r < m_; ++r) c1[static_cast<size_t>(2 * n_ + r)] = T(1);
    set_costs(c1);
    run(cols_);
    T infeas = -d_[static_cast<size_t>(cols_)];
    T scale(1);
    for (const auto& x : p.b) scale += abs_value(x);
    if (z_.pos(infeas / scale)) throw ValidationError("L1 problem has inconsistent constraints");
    drive_out_artificials();

    // phase 2
    std::vector<T> c2(static_cast<size_t>(cols_), T(0));
    for (int j = 0; j < n_; ++j) {
      c2[static_cast<size_t>(j)] = weights_[static_cast<size_t>(j)];
      c2[static_cast<size_t>(j + n_)] = weights_[static_cast<size_t>(j)];
    }
    set_costs(c2);
    run(2 * n_);

    LpResult<T> out;
    out.pivots = pivots_;
    std::vector<T> value(static_cast<size_t>(cols_), T(0));
    for (int r = 0; r < m_; ++r) value[static_cast<size_t>(basis_[static_cast<size_t>(r)])] = t_[static_cast<size_t>(r)][static_cast<size_t>(cols_)];
    out.y.resize(static_cast<size_t>(n_));
    out.objective = T(0);
    for (int j = 0; j < n_; ++j) {
      out.y[static_cast<size_t>(j)] = value[static_cast<size_t>(j)] - value[static_cast<size_t>(j + n_)];
      out.objective += weights_[static_cast<size_t>(j)] * abs_value(out.y[static_cast<size_t>(j)]);
    }
    out.dual.resize(static_cast<size_t>(m_));
    out.dual_bound = T(0);
    for (int r = 0; r < m_; ++r) {
      T pi = -d_[static_cast<size_t>(2 * n_ + r)];
      if (flipped_[static_cast<size_t>(r)]) pi = -pi;
      out.dual[static_cast<size_t>(r)] = pi;
      out.dual_bound += p.b[static_cast<size_t>(r)] * pi;
    }
    out.dual_infeasibility = T(0);
    for (int j = 0; j < n_; ++j) {
      T s(0);
      for (int r = 0; r < m_; ++r) s += p.a[static_cast<size_t>(r)][static_cast<size_t>(j)] * out.dual[static_cast<size_t>(r)];
      const T excess = abs_value(s) - weights_[static_cast<size_t>(j)];
      if (excess > out.dual_infeasibility) out.dual_infeasibility = excess;
    }
    return out;
  }

 private:
  void set_costs(const std::vector<T>& c) {
    cost_ = c;
    d_.assign(static_cast<size_t>(cols_ + 1), T(0));
    for (int j = 0; j <= cols_; ++j) {
      T acc = j < cols_ ? c[static_cast<size_t>(j)] : T(0);
      for (int r = 0; r < m_; ++r) {
        const T& cb = c[static_cast<size_t>(basis_[static_cast<size_t>(r)])];
        if (cb != 0) acc -= cb * t_[static_cast<size_t>(r)][static_cast<size_t>(j)];
      }
      d_[static_cast<size_t>(j)] = acc;
    }
  }

  void pivot(int r, int c) {
    auto& pr = t_[static_cast<size_t>(r)];
    const T piv = pr[static_cast<size_t>(c)];
    for (auto& x : pr) x /= piv;
    auto eliminate = [&](std::vector<T>& row) {
      const T f = row[static_cast<size_t>(c)];
      if (f == 0) return;
      for (int j = 0; j <= cols_; ++j) {
        if (pr[static_cast<size_t>(j)] != 0) row[static_cast<size_t>(j)] -= f * pr[static_cast<size_t>(j)];
      }
      row[static_cast<size_t>(c)] = T(0);
    };
    for (int i = 0; i < m_; ++i) {
      if (i != r) eliminate(t_[static_cast<size_t>(i)]);
    }
    eliminate(d_);
    basis_[static_cast<size_t>(r)] = c;
    ++pivots_;
  }

  // Bland's rule: least entering index, ties in the ratio test to the least basic index.
  void run(int allowed_cols) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (z_.neg(d_[static_cast<size_t>(j)])) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return;
      int leave = -1;
      T best(0);
      for (int r = 0; r < m_; ++r) {
        const T& a = t_[static_cast<size_t>(r)][static_cast<size_t>(enter)];
        if (!z_.pos(a)) continue;
        const T ratio = t_[static_cast<size_t>(r)][static_cast<size_t>(cols_)] / a;
        if (leave < 0 || z_.less(ratio, best) ||
            (!z_.less(best, ratio) && basis_[static_cast<size_t>(r)] < basis_[static_cast<size_t>(leave)])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) throw InternalError("L1 problem is unbounded");
      pivot(leave, enter);
      if (pivots_ > 100000) throw InternalError("simplex pivot limit exceeded");
    }
  }

  void drive_out_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (basis_[static_cast<size_t>(r)] < 2 * n_) continue;
      for (int j = 0; j < 2 * n_; ++j) {
        if (!z_.zero(t_[static_cast<size_t>(r)][static_cast<size_t>(j)])) {
          pivot(r, j);
          break;
        }
      }
    }
  }

  Z z_;
  int n_;
  int m_;
  int cols_ = 0;
  std::vector<std::vector<T>> t_;
  std::vector<T> d_;
  std::vector<T> cost_;
  std::vector<T> weights_;
  std::vector<int> basis_;
  std::vector<bool> flipped_;
  int pivots_ = 0;
};

}  // namespace

LpResult<Rational> solve_simplex(const L1Problem<Rational>& p) {
  Tableau<Rational, ExactZero> t(p, ExactZero{});
  return t.solve(p);
}

LpResult<Real> solve_simplex(const L1Problem<Real>& p, const Real& eps) {
  Tableau<Real, RealZero> t(p, RealZero{eps});
  return t.solve(p);
}

Real simplex_epsilon() {
  return boost::multiprecision::pow(Real(2), -static_cast<long>(working_precision_bits() * 3 / 4));
}

CertifiedLp solve_certified(const L1Problem<Real>& p, const std::vector<Ball>& b) {
  L1Problem<Real> mid = p;
  mid.b.clear();
  for (const auto& x : b) mid.b.push_back(x.mid());
  CertifiedLp out{Ball(), solve_simplex(mid, simplex_epsilon())};
  const auto& s = out.solution;
  Real err = boost::multiprecision::abs(s.objective - s.dual_bound);
  for (size_t i = 0; i < b.size(); ++i) err += boost::multiprecision::abs(s.dual[i]) * b[i].rad();
  Real ynorm(0);
  for (const auto& y : s.y) ynorm += boost::multiprecision::abs(y);
  err += s.dual_infeasibility * ynorm;
  err += unit_roundoff() * (boost::multiprecision::abs(s.objective) + 1) * (p.variables() + p.rows());
  out.value = Ball(s.objective, err);
  return out;
}

// -- subgradient ------------------------------------------------------------

SubgradientResult solve_subgradient(const L1Problem<double>& p, const SubgradientOptions& opts) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  const int n = p.variables();
  const int m = p.rows();
  MatrixXd a(m, n);
  VectorXd b(m);
  VectorXd w(n);
  for (int i = 0; i < m; ++i) {
    b(i) = p.b[static_cast<size_t>(i)];
    for (int j = 0; j < n; ++j) a(i, j) = p.a[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }
  for (int j = 0; j < n; ++j) w(j) = p.weights[static_cast<size_t>(j)];

  auto objective = [&](const VectorXd& y) { return w.cwiseProduct(y.cwiseAbs()).sum(); };

  const MatrixXd pinv = a.completeOrthogonalDecomposition().pseudoInverse();
  const MatrixXd proj = MatrixXd::Identity(n, n) - pinv * a;
  VectorXd y = pinv * b;
  const double scale = std::max({y.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff(), 1e-300});

  SubgradientResult out;
  VectorXd best = y;
  double best_f = objective(y);
  const double stall = 1e-12 * std::max(w.norm(), 1e-300);
  int t = 0;
  for (; t < opts.iterations; ++t) {
    VectorXd g(n);
    for (int j = 0; j < n; ++j) g(j) = y(j) > 0 ? w(j) : (y(j) < 0 ? -w(j) : 0.0);
    VectorXd pg = proj * g;
    const double norm = pg.norm();
    // a projected subgradient this small is rounding noise; 0 is a subgradient there
    if (norm < stall) break;
    y -= (opts.step * scale / (t + 1)) * (pg / norm);
    y -= pinv * (a * y - b);
    const double f = objective(y);
    if (f < best_f) {
      best_f = f;
      best = y;
    }
  }
  out.iterations = t;

  if (opts.polish) {
    for (int round = 0; round < 2; ++round) {
      for (double theta = 1e-2; theta >= 1e-10; theta /= 10) {
        std::vector<int> zeroed;
        for (int j = 0; j < n; ++j) {
          if (w(j) > 0 && std::abs(best(j)) <= theta * scale) zeroed.push_back(j);
        }
        MatrixXd mm(m + static_cast<int>(zeroed.size()), n);
        VectorXd rhs(mm.rows());
        mm.topRows(m) = a;
        rhs.head(m) = b;
        for (size_t k = 0; k < zeroed.size(); ++k) {
          mm.row(m + static_cast<int>(k)).setZero();
          mm(m + static_cast<int>(k), zeroed[k]) = 1;
          rhs(m + static_cast<int>(k)) = 0;
        }
        const MatrixXd mp = mm.completeOrthogonalDecomposition().pseudoInverse();
        VectorXd cand = best - mp * (mm * best - rhs);
        const double res = (mm * cand - rhs).cwiseAbs().maxCoeff();
        if (res > 1e-11 * std::max(1.0, scale)) continue;
        const double f = objective(cand);
        if (f < best_f) {
          best_f = f;
          best = cand;
        }
      }
    }
  }
  out.objective = best_f;
  out.y.assign(best.data(), best.data() + n);
  out.feasibility = m > 0 ? (a * best - b).cwiseAbs().maxCoeff() : 0.0;
  return out;
}

}  // namespace mahler
