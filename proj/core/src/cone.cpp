#include "chernlab/cone.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include "chernlab/error.hpp"

namespace chernlab {

std::string to_string(OrthantExtremum::Method m) {
  return m == OrthantExtremum::Method::ExactFacial ? "exact-facial" : "multistart";
}

std::string to_string(SbcResult::Status s) {
  return s == SbcResult::Status::Finite ? "finite" : "unbounded_below";
}

namespace {

RealMatrix symmetric_part(const RealMatrix& M) { return 0.5 * (M + M.transpose()); }

std::vector<int> support_of(const RealVector& v) {
  std::vector<int> s;
  const double cut = 1e-12 * std::max(1.0, v.cwiseAbs().maxCoeff());
  for (int i = 0; i < v.size(); ++i)
    if (v(i) > cut) s.push_back(i);
  return s;
}

void update(OrthantExtremum& out, bool& first, const RealMatrix& S, const RealVector& v) {
  const double q = v.dot(S * v);
  if (first || q < out.min_val) {
    out.min_val = q;
    out.argmin = v;
  }
  if (first || q > out.max_val) {
    out.max_val = q;
    out.argmax = v;
  }
  first = false;
}

// Every local extremum of the quotient restricted to the orthant sits in the
// relative interior of some face, where it is an eigenvector of the principal
// submatrix on that face. Enumerating faces therefore finds the global ones.
void facial_enumeration(const RealMatrix& S, const std::vector<int>& coords, OrthantExtremum& out,
                        bool& first) {
  const int m = static_cast<int>(coords.size());
  const int n = static_cast<int>(S.rows());
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> face;
    for (int b = 0; b < m; ++b)
      if (mask & (1u << b)) face.push_back(coords[b]);
    const int k = static_cast<int>(face.size());
    RealMatrix sub(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) sub(a, b) = S(face[a], face[b]);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(sub);
    for (int c = 0; c < k; ++c) {
      RealVector w = es.eigenvectors().col(c);
      if (w.sum() < 0) w = -w;
      const double tiny = 1e-12 * w.cwiseAbs().maxCoeff();
      if (w.minCoeff() < -tiny) continue;
      RealVector v = RealVector::Zero(n);
      for (int a = 0; a < k; ++a) v(face[a]) = std::max(0.0, w(a));
      const double nv = v.norm();
      if (!(nv > 0)) continue;
      update(out, first, S, v / nv);
    }
  }
}

// Euclidean projection onto {x >= 0, sum x = 1}.
RealVector project_simplex(const RealVector& y) {
  const int n = static_cast<int>(y.size());
  std::vector<double> u(y.data(), y.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0, theta = 0.0;
  for (int i = 0; i < n; ++i) {
    css += u[i];
    const double t = (css - 1.0) / (i + 1);
    if (u[i] - t > 0) theta = t;
  }
  return (y.array() - theta).max(0.0).matrix();
}

// Local minimum of x^T S x / x^T x over the simplex.
RealVector descend_quotient(const RealMatrix& S, RealVector x, int iters) {
  auto q = [&](const RealVector& v) { return v.dot(S * v) / v.squaredNorm(); };
  double step = 1.0 / std::max(1e-12, S.cwiseAbs().maxCoeff());
  double fx = q(x);
  for (int it = 0; it < iters; ++it) {
    const double nn = x.squaredNorm();
    const RealVector grad = 2.0 * (S * x - fx * x) / nn;
    bool moved = false;
    for (int bt = 0; bt < 30; ++bt) {
      const RealVector y = project_simplex(x - step * grad);
      const double fy = q(y);
      if (fy < fx - 1e-15 * std::abs(fx)) {
        x = y;
        fx = fy;
        step *= 1.5;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return x;
}

}  // namespace

OrthantExtremum orthant_rayleigh_extrema_multistart(const RealMatrix& M, int n_starts,
                                                    std::uint64_t seed) {
  const int n = static_cast<int>(M.rows());
  if (n < 1 || M.cols() != n) throw Error(ErrorKind::DimensionError, "orthant extrema need a square matrix");
  const RealMatrix S = symmetric_part(M);
  OrthantExtremum out;
  out.method = OrthantExtremum::Method::Multistart;
  bool first = true;
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);

  std::vector<RealVector> starts;
  starts.push_back(RealVector::Constant(n, 1.0 / n));
  for (int i = 0; i < n; ++i) starts.push_back(RealVector::Unit(n, i));
  for (int s = 0; s < n_starts; ++s) {
    RealVector x(n);
    for (int i = 0; i < n; ++i) x(i) = expo(rng);
    starts.push_back(x / x.sum());
  }
  for (const auto& x0 : starts) {
    const RealVector lo = descend_quotient(S, x0, 500);
    const RealVector hi = descend_quotient(-S, x0, 500);
    update(out, first, S, lo / lo.norm());
    update(out, first, S, hi / hi.norm());
  }
  // Exact answers on random small coordinate subsets never hurt.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  const int k = std::min(n, kExactFacialMaxDim);
  for (int s = 0; s < n_starts; ++s) {
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<int> coords(idx.begin(), idx.begin() + k);
    std::sort(coords.begin(), coords.end());
    facial_enumeration(S, coords, out, first);
  }
  out.min_face = support_of(out.argmin);
  out.max_face = support_of(out.argmax);
  return out;
}

OrthantExtremum orthant_rayleigh_extrema(const RealMatrix& M) {
  const int n = static_cast<int>(M.rows());
  if (n < 1 || M.cols() != n) throw Error(ErrorKind::DimensionError, "orthant extrema need a square matrix");
  if (!M.allFinite()) throw Error(ErrorKind::NonFiniteValue, "orthant extrema of a non-finite matrix");
  if (n > kExactFacialMaxDim) return orthant_rayleigh_extrema_multistart(M);
  const RealMatrix S = symmetric_part(M);
  OrthantExtremum out;
  bool first = true;
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  facial_enumeration(S, all, out, first);
  out.min_face = support_of(out.argmin);
  out.max_face = support_of(out.argmax);
  return out;
}

// ---------------------------------------------------------------------------
// Frame search

namespace {

int generator_size(int n) { return n * n; }

// Packs n^2 reals into a skew-Hermitian matrix: diagonal i*p, and for k < l the
// pair (a, b) gives X(k, l) = a + ib, X(l, k) = -a + ib.
ComplexMatrix skew_from(const RealVector& p, int n) {
  ComplexMatrix X = ComplexMatrix::Zero(n, n);
  int c = 0;
  for (int k = 0; k < n; ++k) X(k, k) = Complex(0.0, p(c++));
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      const double a = p(c++), b = p(c++);
      X(k, l) = Complex(a, b);
      X(l, k) = Complex(-a, b);
    }
  return X;
}

struct SearchOutcome {
  double value = std::numeric_limits<double>::infinity();
  RealVector params;
  bool exhausted = false;
};

// Minimizes f over generator space; f may signal early termination by
// returning -infinity.
SearchOutcome coordinate_search(const std::function<double(const RealVector&)>& f, int n,
                                const FrameSearchConfig& cfg) {
  if (cfg.n_starts < 1) throw Error(ErrorKind::BadParams, "frame search needs n_starts >= 1");
  const int d = generator_size(n);
  if (n == 1) {
    // A unit phase leaves every frame matrix unchanged.
    SearchOutcome one;
    one.params = RealVector::Zero(d);
    one.value = f(one.params);
    return one;
  }
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SearchOutcome best;
  for (int s = 0; s <= cfg.n_starts; ++s) {
    RealVector p = RealVector::Zero(d);
    if (s > 0)
      for (int i = 0; i < d; ++i) p(i) = gauss(rng);
    double fp = f(p);
    double step = 0.5;
    int it = 0;
    for (; it < cfg.max_iter && step >= cfg.step_tol && std::isfinite(fp); ++it) {
      bool improved = false;
      for (int i = 0; i < d && std::isfinite(fp); ++i) {
        for (double dir : {1.0, -1.0}) {
          RealVector q = p;
          q(i) += dir * step;
          const double fq = f(q);
          if (fq < fp) {
            p = q;
            fp = fq;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (it >= cfg.max_iter && step >= cfg.step_tol) best.exhausted = true;
    if (fp < best.value || best.params.size() == 0) {
      best.value = fp;
      best.params = p;
    }
    if (fp == -std::numeric_limits<double>::infinity()) break;
  }
  return best;
}

}  // namespace

RbcBounds rbc_bounds(const ChernCurvatureTensor& R, const HermitianForm& g,
                     const FrameSearchConfig& cfg) {
  const int n = R.dim();
  if (g.dim() != n) throw Error(ErrorKind::DimensionMismatch, "rbc_bounds");
  if (!g.is_positive_definite()) throw Error(ErrorKind::NotPositiveDefinite, "rbc_bounds metric");
  const UnitaryFrame base = gram_unitary_frame(g);
  auto frame_at = [&](const RealVector& p) { return base.rotated(unitary_exp(skew_from(p, n))); };
  auto extremum_at = [&](const RealVector& p) {
    return orthant_rayleigh_extrema(curvature_in_frame(R, frame_at(p)).R_mat);
  };

  const SearchOutcome lo = coordinate_search([&](const RealVector& p) { return extremum_at(p).min_val; }, n, cfg);
  const SearchOutcome hi = coordinate_search([&](const RealVector& p) { return -extremum_at(p).max_val; }, n, cfg);

  RbcBounds out;
  out.frame_inf = frame_at(lo.params);
  out.frame_sup = frame_at(hi.params);
  out.at_inf = extremum_at(lo.params);
  out.at_sup = extremum_at(hi.params);
  out.inf = out.at_inf.min_val;
  out.sup = out.at_sup.max_val;
  out.heuristic = n >= 2;
  if (lo.exhausted || hi.exhausted) {
    out.warnings.push_back("SearchBudgetExhausted: frame search hit max_iter; bounds are the best found");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ordered-cone quotient

double sbc_value(const RealMatrix& M, const RealVector& v) {
  const int n = static_cast<int>(M.rows());
  if (M.cols() != n || v.size() != n) throw Error(ErrorKind::DimensionError, "sbc_value sizes");
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) s += M(a, c) * v(c) / v(a);
  return s;
}

namespace {

// Gap coordinates: v_i = exp(sum_{m >= i} s_m), s in R^{n-1}_+, so v_n = 1.
RealVector v_from_gaps(const RealVector& s) {
  const int n = static_cast<int>(s.size()) + 1;
  RealVector v(n);
  double acc = 0.0;
  v(n - 1) = 1.0;
  for (int i = n - 2; i >= 0; --i) {
    acc += s(i);
    v(i) = std::exp(acc);
  }
  return v;
}

// Objective restricted to pairs (a, c) accepted by `keep`, with its gradient
// in gap coordinates. d/ds_m of v_c / v_a is (1[m >= c] - 1[m >= a]) v_c / v_a.
template <class Keep>
double gap_objective(const RealMatrix& M, const RealVector& s, RealVector* grad, Keep keep) {
  const int n = static_cast<int>(M.rows());
  const RealVector v = v_from_gaps(s);
  double f = 0.0;
  if (grad) grad->setZero(n - 1);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      if (!keep(a, c)) continue;
      const double t = M(a, c) * v(c) / v(a);
      f += t;
      if (grad && a != c) {
        const int lo = std::min(a, c), hi = std::max(a, c);
        const double sign = c < a ? 1.0 : -1.0;
        for (int m = lo; m < hi; ++m) (*grad)(m) += sign * t;
      }
    }
  return f;
}

template <class Obj>
RealVector box_descent(Obj obj, RealVector s, double box, int iters, const std::vector<bool>& frozen) {
  const int d = static_cast<int>(s.size());
  RealVector g(d);
  double fs = obj(s, &g);
  double step = 0.1;
  for (int it = 0; it < iters; ++it) {
    for (int m = 0; m < d; ++m)
      if (frozen[m]) g(m) = 0.0;
    const double gn = g.cwiseAbs().maxCoeff();
    if (!(gn > 0)) break;
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt) {
      RealVector t = (s - (step / gn) * g).cwiseMax(0.0).cwiseMin(box);
      for (int m = 0; m < d; ++m)
        if (frozen[m]) t(m) = s(m);
      RealVector gt(d);
      const double ft = obj(t, &gt);
      if (ft < fs - 1e-14 * std::max(1.0, std::abs(fs))) {
        s = t;
        fs = ft;
        g = gt;
        step = std::min(step * 2.0, box);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return s;
}

}  // namespace

SbcResult sbc_infimum(const RealMatrix& M, const SbcOptions& opt) {
  const int n = static_cast<int>(M.rows());
  if (n < 1 || M.cols() != n) throw Error(ErrorKind::DimensionError, "sbc_infimum needs a square matrix");
  if (!M.allFinite()) throw Error(ErrorKind::NonFiniteValue, "sbc_infimum of a non-finite matrix");
  SbcResult out;
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if (n == 1) {
    out.inf_val = M(0, 0);
    out.arg = RealVector::Ones(1);
    out.margin = std::numeric_limits<double>::infinity();
    return out;
  }
  const int d = n - 1;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  auto make_starts = [&](const std::vector<bool>& frozen) {
    std::vector<RealVector> st;
    st.push_back(RealVector::Zero(d));
    for (int m = 0; m < d; ++m) {
      RealVector e = RealVector::Zero(d);
      e(m) = opt.box;
      st.push_back(e);
    }
    st.push_back(RealVector::Constant(d, opt.box));
    for (int k = 0; k < opt.n_starts; ++k) {
      RealVector s(d);
      for (int m = 0; m < d; ++m) s(m) = opt.box * unif(rng) * unif(rng);
      st.push_back(s);
    }
    for (auto& s : st)
      for (int m = 0; m < d; ++m)
        if (frozen[m]) s(m) = 0.0;
    return st;
  };

  // Leading coefficient of e^t when v_1..v_j are all scaled by e^t:
  //   c_j(v) = sum_{c <= j < a} M(a, c) v_c / v_a   (0-based j = gap index - 1)
  // c_j is e^{s_j} times a function of the other gaps, so its sign is decided
  // with s_j held at zero.
  double worst = std::numeric_limits<double>::infinity();
  int worst_gap = -1;
  RealVector worst_base;
  for (int j = 0; j < d; ++j) {
    auto keep = [j](int a, int c) { return c <= j && j < a; };
    auto obj = [&](const RealVector& s, RealVector* g) { return gap_objective(M, s, g, keep); };
    std::vector<bool> frozen(d, false);
    frozen[j] = true;
    for (const RealVector& s0 : make_starts(frozen)) {
      const RealVector s = box_descent(obj, s0, opt.box, opt.max_iter, frozen);
      const double cj = obj(s, nullptr) / scale;
      if (cj < worst) {
        worst = cj;
        worst_gap = j;
        worst_base = s;
      }
    }
  }
  out.margin = worst;

  if (worst < -opt.unbounded_tol) {
    out.status = SbcResult::Status::UnboundedBelow;
    out.gap_index = worst_gap + 1;
    worst_base(worst_gap) = opt.box;
    out.base = v_from_gaps(worst_base);
    out.inf_val = -std::numeric_limits<double>::infinity();
    out.arg = out.base;
    return out;
  }
  out.marginal = worst < opt.marginal_tol;

  auto all = [](int, int) { return true; };
  auto obj = [&](const RealVector& s, RealVector* g) { return gap_objective(M, s, g, all); };
  const std::vector<bool> none(d, false);
  double best = std::numeric_limits<double>::infinity();
  RealVector best_s;
  for (const RealVector& s0 : make_starts(none)) {
    const RealVector s = box_descent(obj, s0, opt.box, opt.max_iter, none);
    const double f = obj(s, nullptr);
    if (f < best) {
      best = f;
      best_s = s;
    }
  }
  out.arg = v_from_gaps(best_s);
  out.inf_val = sbc_value(M, out.arg);
  if ((best_s.array() >= opt.box * (1.0 - 1e-9)).any()) {
    out.warnings.push_back("infimum approached at the edge of the gap search box; value is an upper bound");
  }
  return out;
}

double sbc_certificate_value(const RealMatrix& M, const SbcResult& r, double t) {
  if (r.status != SbcResult::Status::UnboundedBelow) {
    throw Error(ErrorKind::BadParams, "no divergence certificate on a finite result");
  }
  RealVector v = r.base;
  for (int i = 0; i < r.gap_index; ++i) v(i) *= std::exp(t);
  return sbc_value(M, v);
}

SbcFrameResult sbc_bound(const ChernCurvatureTensor& R, const HermitianForm& g,
                         const FrameSearchConfig& cfg, const SbcOptions& opt) {
  const int n = R.dim();
  if (g.dim() != n) throw Error(ErrorKind::DimensionMismatch, "sbc_bound");
  if (!g.is_positive_definite()) throw Error(ErrorKind::NotPositiveDefinite, "sbc_bound metric");
  const UnitaryFrame base = gram_unitary_frame(g);
  auto frame_at = [&](const RealVector& p) { return base.rotated(unitary_exp(skew_from(p, n))); };
  auto result_at = [&](const RealVector& p) { return sbc_infimum(curvature_in_frame(R, frame_at(p)).R_mat, opt); };

  const SearchOutcome found = coordinate_search(
      [&](const RealVector& p) {
        const SbcResult r = result_at(p);
        return r.status == SbcResult::Status::UnboundedBelow ? -std::numeric_limits<double>::infinity()
                                                             : r.inf_val;
      },
      n, cfg);

  SbcFrameResult out;
  out.frame = frame_at(found.params);
  out.best = result_at(found.params);
  out.heuristic = n >= 2;
  if (found.exhausted) {
    out.warnings.push_back("SearchBudgetExhausted: frame search hit max_iter; bound is the best found");
  }
  return out;
}

double sbc_along_map(const RealMatrix& M, const RealVector& lambda) {
  const int n = static_cast<int>(M.rows());
  if (M.cols() != n || lambda.size() != n) throw Error(ErrorKind::DimensionError, "sbc_along_map sizes");
  for (int i = 0; i < n; ++i) {
    if (!(lambda(i) > 0.0)) throw Error(ErrorKind::ZeroSingularValue, "singular values must be positive");
    if (i > 0 && lambda(i) > lambda(i - 1)) {
      throw Error(ErrorKind::BadParams, "singular values must be ordered nonincreasing");
    }
  }
  return sbc_value(M, lambda.array().square().matrix());
}

}  // namespace chernlab
