#include "caputo/adaptive.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "caputo/error.hpp"

namespace caputo {

namespace {

// Kronrod abscissae on [-1, 1]; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  double abs_value;
};

double checked(const std::function<double(double)>& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream os;
    os << "integrand is not finite at " << x;
    throw OracleFailure(os.str());
  }
  return y;
}

Segment gauss_kronrod(const std::function<double(double)>& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = checked(f, center);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  double abs_sum = kKronrodWeights[7] * std::abs(fc);
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double f1 = checked(f, center - dx);
    const double f2 = checked(f, center + dx);
    kronrod += kKronrodWeights[j] * (f1 + f2);
    abs_sum += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * std::abs(half)};
}

bool by_error(const Segment& a, const Segment& b) { return a.error < b.error; }

}  // namespace

IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                     const AdaptiveOptions& options) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw InvalidParameter("integration limits must be finite");
  if (!(options.abs_tol >= 0.0) || !(options.rel_tol >= 0.0) || options.max_intervals == 0) {
    throw InvalidParameter("invalid adaptive integration options");
  }
  if (lo == hi) return {0.0, 0.0, 0, 0};


  if (options.initial_pieces == 0 || options.initial_pieces > options.max_intervals) {
    throw InvalidParameter("initial_pieces must be in [1, max_intervals]");
  }
  std::vector<Segment> heap;
  const double width = (hi - lo) / static_cast<double>(options.initial_pieces);
  for (std::size_t i = 0; i < options.initial_pieces; ++i) {
    const double a = lo + width * static_cast<double>(i);
    const double b = i + 1 == options.initial_pieces ? hi : lo + width * static_cast<double>(i + 1);
    heap.push_back(gauss_kronrod(f, a, b));
  }
  std::make_heap(heap.begin(), heap.end(), by_error);
  std::size_t evaluations = 15 * heap.size();
  constexpr double kRoundingFactor = 50.0 * std::numeric_limits<double>::epsilon();

  auto totals = [&heap] {
    double value = 0.0, error = 0.0, abs_value = 0.0;
    for (const Segment& s : heap) {
      value += s.value;
      error += s.error;
      abs_value += s.abs_value;
    }
    return std::array<double, 3>{value, error, abs_value};
  };

  auto [value, error, abs_value] = totals();
  while (true) {
    const double target =
        std::max({options.abs_tol, options.rel_tol * std::abs(value), kRoundingFactor * abs_value});
    if (error <= target) break;
    if (heap.size() >= options.max_intervals) {
      std::ostringstream os;
      os << "adaptive integration on [" << lo << ", " << hi << "] stopped at error " << error
         << " above target " << target << " after " << heap.size() << " intervals";
      throw OracleFailure(os.str());
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > std::min(worst.lo, worst.hi) && mid < std::max(worst.lo, worst.hi))) {
      throw OracleFailure("adaptive integration exhausted floating-point resolution");
    }
    heap.push_back(gauss_kronrod(f, worst.lo, mid));
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(gauss_kronrod(f, mid, worst.hi));
    std::push_heap(heap.begin(), heap.end(), by_error);
    evaluations += 30;
    const auto t = totals();
    value = t[0];
    error = t[1];
    abs_value = t[2];
  }
  return {value, error, heap.size(), evaluations};
}

}  // namespace caputo
