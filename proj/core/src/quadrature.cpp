#include "fracrte/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>

#include "fracrte/errors.hpp"
#include "fracrte/legendre.hpp"
#include "fracrte/parallel.hpp"

namespace fracrte {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDefaultKMax = 64.0;
constexpr int kMaxGeometricPanels = 200;
constexpr int kMappedPanels = 40;

const GaussRule& cached_rule(int n) {
  static std::mutex m;
  static std::map<int, GaussRule> rules;
  std::lock_guard lock(m);
  auto it = rules.find(n);
  if (it == rules.end()) it = rules.emplace(n, gauss_legendre(n)).first;
  return it->second;
}

// Vector-valued integrand: raw(k, out) fills m values; the tail routines
// multiply by cos(kx) or sin(kx) themselves.
using RawFn = std::function<void(double, std::span<double>)>;

void check_finite(std::span<const double> v, const char* where, double k) {
  for (double e : v)
    if (!std::isfinite(e))
      throw QuadratureError(std::string(where) + ": non-finite integrand near k=" + std::to_string(k));
}

// acc += int_a^b trig(k x) raw(k) dk, with trig = cos or sin (or 1 for x = 0).
void panel(const RawFn& raw, std::size_t m, double a, double b, int points, double x, bool use_sin,
           std::span<double> acc, std::span<double> scratch) {
  const GaussRule& r = cached_rule(points);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const double k = mid + half * r.nodes[i];
    raw(k, scratch);
    const double w = half * r.weights[i] * (use_sin ? std::sin(k * x) : std::cos(k * x));
    for (std::size_t j = 0; j < m; ++j) acc[j] += w * scratch[j];
  }
}

// int_a^inf trig(k x) raw(k) dk for x != 0, added into out. zero_offset places
// the alignment zeros at (j + zero_offset) pi / |x|.
void oscillatory_tail(const RawFn& raw, std::size_t m, double a, double x, bool use_sin, const QuadratureSpec& spec,
                      std::span<double> out) {
  const double half_period = kPi / std::abs(x);
  const double zero_offset = use_sin ? 0.0 : 0.5;
  const int pts = spec.nodes_per_halfperiod;
  std::vector<double> sum(m, 0.0), scratch(m);

  // Algebraic region: panels grow until they span a half period.
  int guard = 0;
  while (half_period > 0.5 * a) {
    const double b = std::min(1.5 * a, a + half_period);
    panel(raw, m, a, b, pts, x, use_sin, sum, scratch);
    check_finite(sum, "fourier_inversion tail", b);
    a = b;
    if (++guard > kMaxGeometricPanels)
      throw QuadratureError("fourier_inversion: geometric tail did not reach the oscillatory regime");
  }

  const double z0 = (std::ceil(a / half_period - zero_offset) + zero_offset) * half_period;
  if (z0 > a) panel(raw, m, a, z0, pts, x, use_sin, sum, scratch);
  a = z0;

  const int n_terms = std::max(4, 2 * spec.acceleration_order + 2);
  std::vector<std::vector<double>> partial(m, std::vector<double>(n_terms));
  for (int p = 0; p < n_terms; ++p) {
    panel(raw, m, a, a + half_period, pts, x, use_sin, sum, scratch);
    check_finite(sum, "fourier_inversion tail", a);
    a += half_period;
    for (std::size_t j = 0; j < m; ++j) partial[j][p] = sum[j];
  }
  for (std::size_t j = 0; j < m; ++j) {
    const double est = spec.acceleration_order == 0 ? partial[j].back() : wynn_epsilon(partial[j]);
    if (!std::isfinite(est)) {
      std::ostringstream os;
      os << "fourier_inversion: epsilon acceleration diverged (x=" << x << ", last partial sums "
         << partial[j][n_terms - 2] << ", " << partial[j][n_terms - 1] << ")";
      throw QuadratureError(os.str());
    }
    out[j] += est;
  }
}

// int_K^inf raw(k) dk through k = K/u on dyadic u-panels.
void mapped_tail(const RawFn& raw, std::size_t m, double kmax, std::span<double> out) {
  std::vector<double> sum(m, 0.0), scratch(m);
  const GaussRule& r = cached_rule(32);
  double hi = 1.0;
  for (int p = 0; p < kMappedPanels; ++p) {
    const double lo = 0.5 * hi, half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      const double u = mid + half * r.nodes[i];
      raw(kmax / u, scratch);
      const double w = half * r.weights[i] * kmax / (u * u);
      for (std::size_t j = 0; j < m; ++j) sum[j] += w * scratch[j];
    }
    hi = lo;
  }
  check_finite(sum, "fourier_inversion tail", kmax);
  for (std::size_t j = 0; j < m; ++j) out[j] += sum[j];
}

RawFn mollified(const RawFn& raw, double eps) {
  if (eps <= 0.0) return raw;
  return [raw, eps](double k, std::span<double> out) {
    raw(k, out);
    const double damp = std::exp(-0.5 * eps * eps * k * k);
    for (double& v : out) v *= damp;
  };
}

// Largest k touched by oscillatory_tail(.., a, x, ..).
double oscillatory_tail_extent(double a, double x, bool use_sin, const QuadratureSpec& spec) {
  const double half_period = kPi / std::abs(x);
  const double zero_offset = use_sin ? 0.0 : 0.5;
  while (half_period > 0.5 * a) a = std::min(1.5 * a, a + half_period);
  const double z0 = (std::ceil(a / half_period - zero_offset) + zero_offset) * half_period;
  return std::max(a, z0) + std::max(4, 2 * spec.acceleration_order + 2) * half_period;
}

/// Piecewise Chebyshev-Lobatto interpolant of a smooth vector integrand on
/// [a, b], shared by the per-x tails so each point of an output grid costs a
/// few interpolations instead of fresh integrand evaluations. Panels start
/// dyadic and are bisected until check points between the nodes agree to a
/// relative 1e-11 or stop improving (noise); if a panel is still unresolved
/// at the depth cap, ok() is false and callers evaluate the integrand
/// directly. Outside [a, b] it forwards to raw.
class TailInterpolant {
 public:
  static constexpr int kDegree = 16;

  TailInterpolant(RawFn raw, std::size_t m, double a, double b) : raw_(std::move(raw)), m_(m) {
    struct Todo {
      double lo, hi, parent_err, root_err;
      int depth;
    };
    std::vector<Todo> todo;
    for (double lo = a; lo < b; lo *= 2.0) todo.push_back({lo, std::min(2.0 * lo, b), 1.0, 1.0, 0});
    constexpr int kMaxDepth = 6;
    constexpr int kCheck[] = {1, 5, 10, 14};
    constexpr std::size_t kPer = kDegree + 1 + std::size(kCheck);
    while (!todo.empty()) {
      Eigen::MatrixXd vals(m_, todo.size() * kPer);
      parallel_for(todo.size() * kPer, [&](std::size_t idx) {
        const Todo& t = todo[idx / kPer];
        const std::size_t j = idx % kPer;
        const double c = j <= static_cast<std::size_t>(kDegree)
                             ? std::cos(kPi * static_cast<double>(j) / kDegree)
                             : std::cos(kPi * (kCheck[j - kDegree - 1] + 0.5) / kDegree);
        raw_(0.5 * (t.lo + t.hi) + 0.5 * (t.hi - t.lo) * c,
             std::span<double>(vals.col(static_cast<Eigen::Index>(idx)).data(), m_));
      });
      check_finite(std::span<const double>(vals.data(), static_cast<std::size_t>(vals.size())), "tail interpolant", a);
      std::vector<Todo> next;
      std::vector<double> out(m_);
      for (std::size_t p = 0; p < todo.size(); ++p) {
        const Todo& t = todo[p];
        Panel pn{t.lo, t.hi, vals.middleCols(static_cast<Eigen::Index>(p * kPer), kDegree + 1)};
        // Worst check-point error relative to the panel scale of each component.
        double err = 0.0;
        for (std::size_t c = 0; c < std::size(kCheck); ++c) {
          const double u = std::cos(kPi * (kCheck[c] + 0.5) / kDegree);
          eval_panel(pn, 0.5 * (pn.a + pn.b) + 0.5 * (pn.b - pn.a) * u, out);
          const auto truth = vals.col(static_cast<Eigen::Index>(p * kPer + kDegree + 1 + c));
          for (std::size_t j = 0; j < m_; ++j) {
            const double scale = pn.vals.row(static_cast<Eigen::Index>(j)).cwiseAbs().maxCoeff();
            const double d = std::abs(out[j] - truth[static_cast<Eigen::Index>(j)]);
            if (d > 0.0) err = std::max(err, scale > 0.0 ? d / scale : 1.0);
          }
        }
        // Smooth data gains ~2^-17 per bisection; an error that stops
        // shrinking is evaluation noise (the integrand is a cancelling sum of
        // modal terms at large k), which direct evaluation carries as well.
        const double root = t.depth == 0 ? err : t.root_err;
        const bool noise = t.depth > 0 && err <= 1e-2 &&
                           (err > 0.25 * t.parent_err || (t.depth == kMaxDepth && err > 1e-6 * root));
        if (err <= 1e-11 || noise) {
          panels_.push_back(std::move(pn));
        } else if (t.depth == kMaxDepth) {
          ok_ = false;
          return;
        } else {
          const double mid = 0.5 * (t.lo + t.hi);
          next.push_back({t.lo, mid, err, root, t.depth + 1});
          next.push_back({mid, t.hi, err, root, t.depth + 1});
        }
      }
      todo = std::move(next);
    }
    std::sort(panels_.begin(), panels_.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
    lo_ = a;
    hi_ = b;
  }

  bool ok() const { return ok_; }

  void operator()(double k, std::span<double> out) const {
    if (!(k >= lo_ && k <= hi_)) {
      raw_(k, out);
      return;
    }
    auto it = std::upper_bound(panels_.begin(), panels_.end(), k, [](double v, const Panel& p) { return v < p.a; });
    eval_panel(*std::prev(it), k, out);
  }

 private:
  struct Panel {
    double a, b;
    Eigen::MatrixXd vals;  // m x (kDegree + 1), node j at cos(pi j / kDegree)
  };

  void eval_panel(const Panel& p, double k, std::span<double> out) const {
    // Barycentric formula for Chebyshev-Lobatto nodes.
    const double u = (2.0 * k - p.a - p.b) / (p.b - p.a);
    double den = 0.0;
    std::fill(out.begin(), out.end(), 0.0);
    for (int j = 0; j <= kDegree; ++j) {
      const double d = u - std::cos(kPi * j / kDegree);
      if (d == 0.0) {
        for (std::size_t i = 0; i < m_; ++i) out[i] = p.vals(static_cast<Eigen::Index>(i), j);
        return;
      }
      double w = (j % 2 ? -1.0 : 1.0) / d;
      if (j == 0 || j == kDegree) w *= 0.5;
      den += w;
      for (std::size_t i = 0; i < m_; ++i) out[i] += w * p.vals(static_cast<Eigen::Index>(i), j);
    }
    for (double& v : out) v /= den;
  }

  RawFn raw_;
  std::size_t m_;
  std::vector<Panel> panels_;
  double lo_ = 0.0, hi_ = 0.0;
  bool ok_ = true;
};

bool tail_needed(const QuadratureSpec& spec, double kmax) {
  // The mollifier alone kills the tail once exp(-(eps K)^2/2) < 1e-16.
  return spec.tail_mode == TailMode::accelerated && !(spec.mollifier_width * kmax > 8.6);
}

double head_width(double kmax, double max_abs_x) {
  return max_abs_x > 0.0 ? std::min(kPi / max_abs_x, kmax / 64.0) : kmax / 64.0;
}

// [0, kmax] panels no wider than width, with the first panel split
// geometrically towards k = 0: spectra carry their own structure at small k
// (diffusive scale 1/sqrt(D t^a), k_c) that a wide panel cannot resolve.
Nodes head_nodes(double kmax, double width, int points, std::span<const double> breakpoints) {
  constexpr int kGradedPanels = 12;
  std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
  const double first = std::min(width, kmax);
  for (int j = 1; j <= kGradedPanels; ++j) cuts.push_back(std::ldexp(first, -j));
  return composite_gauss(0.0, kmax, width, points, cuts);
}

}  // namespace

const char* to_string(TailMode m) { return m == TailMode::none ? "none" : "accelerated"; }

TailMode tail_mode_from_string(const std::string& s) {
  if (s == "none") return TailMode::none;
  if (s == "accelerated") return TailMode::accelerated;
  throw ConfigError("unknown tail mode '" + s + "' (expected none or accelerated)");
}

void QuadratureSpec::validate() const {
  if (!(k_max >= 0.0) || !std::isfinite(k_max)) throw ConfigError("k_max must be finite and non-negative");
  if (nodes_per_halfperiod < 8) throw ConfigError("nodes_per_halfperiod must be at least 8");
  if (acceleration_order < 0 || acceleration_order > 12) throw ConfigError("acceleration_order must lie in [0, 12]");
  if (!(mollifier_width >= 0.0) || !std::isfinite(mollifier_width))
    throw ConfigError("mollifier_width must be finite and non-negative");
}

double wynn_epsilon(std::span<const double> s) {
  if (s.empty()) throw DomainError("wynn_epsilon: no partial sums");
  const std::size_t n = s.size();
  // prev = column j-1, cur = column j.
  std::vector<double> prev(n + 1, 0.0), cur(s.begin(), s.end());
  double best = s.back();
  for (std::size_t col = 1; col < n; ++col) {
    std::vector<double> next(n - col);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const double d = cur[i + 1] - cur[i];
      if (d == 0.0 || !std::isfinite(d)) return col % 2 == 1 ? cur[i + 1] : best;
      next[i] = prev[i + 1] + 1.0 / d;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (col % 2 == 0) best = cur.back();
  }
  return best;
}

void append_gauss(double a, double b, int points, Nodes& out) {
  const GaussRule& r = cached_rule(points);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    out.k.push_back(mid + half * r.nodes[i]);
    out.w.push_back(half * r.weights[i]);
  }
}

Nodes composite_gauss(double a, double b, double max_width, int points_per_panel, std::span<const double> breakpoints) {
  if (!(b > a)) throw DomainError("composite_gauss: empty interval");
  if (!(max_width > 0.0)) throw DomainError("composite_gauss: panel width must be positive");
  std::vector<double> cuts{a};
  for (double c : breakpoints)
    if (c > a && c < b) cuts.push_back(c);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Nodes out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    const int panels = std::max(1, static_cast<int>(std::ceil(len / max_width - 1e-12)));
    const double h = len / panels;
    for (int p = 0; p < panels; ++p) append_gauss(cuts[i] + p * h, cuts[i] + (p + 1) * h, points_per_panel, out);
  }
  return out;
}

double fourier_inversion(const std::function<cplx(double)>& f, double x, const QuadratureSpec& spec,
                         std::span<const double> breakpoints) {
  spec.validate();
  if (!std::isfinite(x)) throw DomainError("fourier_inversion: x must be finite");
  const double kmax = spec.k_max > 0.0 ? spec.k_max : kDefaultKMax;
  const double eps = spec.mollifier_width;
  auto damp = [eps](double k) { return eps > 0.0 ? std::exp(-0.5 * eps * eps * k * k) : 1.0; };

  const Nodes head = head_nodes(kmax, head_width(kmax, std::abs(x)), spec.nodes_per_halfperiod, breakpoints);
  double sum = 0.0;
  bool complex_valued = false;
  for (std::size_t i = 0; i < head.k.size(); ++i) {
    const cplx v = f(head.k[i]) * damp(head.k[i]);
    complex_valued = complex_valued || v.imag() != 0.0;
    sum += head.w[i] * (std::cos(head.k[i] * x) * v.real() - std::sin(head.k[i] * x) * v.imag());
  }
  check_finite(std::span<const double>(&sum, 1), "fourier_inversion", kmax);

  if (tail_needed(spec, kmax)) {
    RawFn re = [&](double k, std::span<double> out) { out[0] = f(k).real() * damp(k); };
    double tail = 0.0;
    if (x == 0.0) {
      mapped_tail(re, 1, kmax, std::span<double>(&tail, 1));
    } else {
      oscillatory_tail(re, 1, kmax, x, false, spec, std::span<double>(&tail, 1));
      if (complex_valued) {
        RawFn im = [&](double k, std::span<double> out) { out[0] = -f(k).imag() * damp(k); };
        oscillatory_tail(im, 1, kmax, x, true, spec, std::span<double>(&tail, 1));
      }
    }
    sum += tail;
  }
  return sum / kPi;
}

Eigen::MatrixXd cosine_inversion(const SpectrumFn& f, std::size_t m, std::span<const double> x_grid,
                                 const QuadratureSpec& spec, std::span<const double> breakpoints) {
  spec.validate();
  if (!(spec.k_max > 0.0)) throw ConfigError("cosine_inversion: k_max must be resolved before the call");
  const double kmax = spec.k_max;
  double max_abs_x = 0.0;
  for (double x : x_grid) {
    if (!std::isfinite(x)) throw DomainError("cosine_inversion: x must be finite");
    max_abs_x = std::max(max_abs_x, std::abs(x));
  }
  const RawFn raw = mollified(f, spec.mollifier_width);

  const Nodes head = head_nodes(kmax, head_width(kmax, max_abs_x), spec.nodes_per_halfperiod, breakpoints);
  const std::size_t nk = head.k.size();
  Eigen::MatrixXd table(m, nk);
  parallel_for(nk, [&](std::size_t i) {
    std::span<double> col(table.col(i).data(), m);
    raw(head.k[i], col);
    check_finite(col, "cosine_inversion", head.k[i]);
  });

  Eigen::MatrixXd result = Eigen::MatrixXd::Zero(m, x_grid.size());
  const bool with_tail = tail_needed(spec, kmax);
  RawFn tail_raw = raw;
  std::optional<TailInterpolant> shared;
  if (with_tail && x_grid.size() > 1) {
    double end = kmax;
    for (double x : x_grid)
      end = std::max(end, x == 0.0 ? std::ldexp(kmax, kMappedPanels) : oscillatory_tail_extent(kmax, x, false, spec));
    shared.emplace(raw, m, kmax, end);
    if (shared->ok()) tail_raw = [&shared](double k, std::span<double> out) { (*shared)(k, out); };
  }
  parallel_for(x_grid.size(), [&](std::size_t ix) {
    const double x = x_grid[ix];
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
    for (std::size_t i = 0; i < nk; ++i) acc += (head.w[i] * std::cos(head.k[i] * x)) * table.col(i);
    if (with_tail) {
      std::span<double> out(acc.data(), m);
      if (x == 0.0)
        mapped_tail(tail_raw, m, kmax, out);
      else
        oscillatory_tail(tail_raw, m, kmax, x, false, spec, out);
    }
    result.col(ix) = acc / kPi;
  });
  return result;
}

}  // namespace fracrte
