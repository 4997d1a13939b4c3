#include "flaglab/growth.hpp"

#include <algorithm>
#include <cmath>

#include "flaglab/errors.hpp"

namespace flaglab {

namespace {

// Neumaier's variant of compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

std::vector<double> norms_of(const std::vector<OrbitRecord>& records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.kappa.norm());
  return out;
}

}  // namespace

double poincare_partial_sum(const std::vector<double>& norms, double s) {
  if (!(s >= 0.0)) throw InvalidInput("exponent must be nonnegative");
  std::vector<double> terms;
  terms.reserve(norms.size());
  for (double t : norms) terms.push_back(std::exp(-s * t));
  // Summing in a fixed order makes the result independent of input order.
  std::sort(terms.begin(), terms.end());
  CompensatedSum acc;
  for (double t : terms) acc.add(t);
  return acc.value();
}

double poincare_partial_sum(const std::vector<OrbitRecord>& records, double s) {
  return poincare_partial_sum(norms_of(records), s);
}

GrowthReport estimate_delta(const std::vector<double>& norms, double bin_width, const WindowPolicy& window) {
  if (!(bin_width > 0.0)) throw InvalidInput("bin width must be positive");
  if (!(window.drop_low >= 0 && window.drop_high >= 0 && window.drop_low + window.drop_high < 1.0))
    throw InvalidInput("fit window drops must be nonnegative and sum below 1");
  if (norms.size() < kMinRecordsForFit)
    throw TooFewRecords("need at least " + std::to_string(kMinRecordsForFit) + " records, got " +
                        std::to_string(norms.size()));
  std::vector<double> sorted = norms;
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front(), hi = sorted.back();
  if (!(hi - lo > bin_width)) throw TooFewRecords("all records fall in one bin; fit is degenerate");

  GrowthReport rep;
  rep.bin_width = bin_width;
  rep.sample_size = norms.size();
  for (double t = lo; t <= hi + 1e-12; t += bin_width) {
    rep.edges.push_back(t);
    rep.cumulative.push_back(
        static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin()));
  }
  const double range = hi - lo;
  rep.fit_window = {lo + window.drop_low * range, hi - window.drop_high * range};
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < rep.edges.size(); ++i) {
    const double t = rep.edges[i];
    if (t < rep.fit_window.first || t > rep.fit_window.second || rep.cumulative[i] == 0) continue;
    xs.push_back(t);
    ys.push_back(std::log(static_cast<double>(rep.cumulative[i])));
  }
  if (xs.size() < 3) throw TooFewRecords("fit window holds fewer than 3 bins; fit is degenerate");
  const LineFit fit = least_squares(xs, ys);
  rep.delta_hat = std::max(0.0, fit.slope);
  rep.fit_residual = fit.residual;
  return rep;
}

GrowthReport estimate_delta(const std::vector<OrbitRecord>& records, double bin_width, const WindowPolicy& window) {
  GrowthReport rep = estimate_delta(norms_of(records), bin_width, window);
  for (const auto& r : records) ++rep.counts_by_radius[r.length()];
  return rep;
}

LimitConeSample limit_cone_sample(const std::vector<OrbitRecord>& records, double norm_floor, double gap_tol) {
  if (records.empty()) throw InvalidInput("no records");
  LimitConeSample out;
  for (const auto& r : records) {
    const double nk = r.kappa.norm();
    if (nk < norm_floor) continue;
    out.cartan.push_back(make_sorted_cartan(r.kappa.coords() / nk));
    if (is_loxodromic(r.matrix, gap_tol)) {
      const CartanVector l = jordan_projection(r.matrix);
      out.jordan.push_back(make_sorted_cartan(l.coords() / l.norm()));
    }
  }
  out.empty = out.cartan.empty();
  return out;
}

std::vector<IndicatorPoint> growth_indicator_estimate(const std::vector<OrbitRecord>& records, const Vector& direction,
                                                      const std::vector<double>& angles, double bin_width,
                                                      const WindowPolicy& window) {
  std::vector<IndicatorPoint> out;
  for (std::size_t a = 0; a < angles.size(); ++a) {
    const Cone cone = Cone::make(direction, angles[a]);
    std::vector<double> inside;
    for (const auto& r : records)
      if (cone.contains(r.kappa)) inside.push_back(r.kappa.norm());
    IndicatorPoint p;
    p.angle = angles[a];
    p.sample_size = inside.size();
    try {
      p.tau_hat = estimate_delta(inside, bin_width, window).delta_hat;
    } catch (const TooFewRecords& e) {
      p.error = "angle[" + std::to_string(a) + "]: " + e.what();
    }
    out.push_back(p);
  }
  return out;
}

DefectStats subadditivity_defect(const std::vector<GroupElement>& elements, std::size_t pair_budget,
                                 std::uint64_t seed, int histogram_bins) {
  DefectStats st;
  if (elements.empty() || pair_budget == 0) return st;
  std::vector<Vector> kappas;
  for (const auto& g : elements) kappas.push_back(cartan_projection(g).coords());
  std::vector<double> defects;
  auto eval = [&](std::size_t i, std::size_t j) {
    const Vector k = cartan_projection(elements[i] * elements[j]).coords();
    defects.push_back((k - kappas[i] - kappas[j]).norm());
  };
  const std::size_t m = elements.size();
  if (m * m <= pair_budget) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) eval(i, j);
  } else {
    Rng rng(seed);
    for (std::size_t p = 0; p < pair_budget; ++p) eval(rng.next() % m, rng.next() % m);
  }
  st.pairs = defects.size();
  CompensatedSum sum;
  for (double d : defects) {
    st.max_defect = std::max(st.max_defect, d);
    sum.add(d);
  }
  st.mean_defect = sum.value() / static_cast<double>(defects.size());
  st.histogram.assign(histogram_bins, 0);
  st.histogram_bin = st.max_defect > 0 ? st.max_defect / histogram_bins : 1.0;
  for (double d : defects) {
    const int b = std::min(histogram_bins - 1, static_cast<int>(d / st.histogram_bin));
    ++st.histogram[b];
  }
  return st;
}

double busemann_cartan_constant(const std::vector<GroupElement>& elements, const Flag& x) {
  double c = 0.0;
  for (const auto& g : elements) c = std::max(c, (iwasawa_cocycle(g, x) - cartan_projection(g).coords()).norm());
  return c;
}

AnosovFit anosov_slope(const std::vector<OrbitRecord>& records) {
  if (records.empty()) throw InvalidInput("no records");
  AnosovFit fit;
  fit.min_ratio = INFINITY;
  for (const auto& r : records) {
    if (r.length() < 1) throw InvalidInput("records must carry word lengths");
    const double m = min_root_value(r.kappa);
    auto it = fit.min_root_by_length.find(r.length());
    if (it == fit.min_root_by_length.end())
      fit.min_root_by_length[r.length()] = m;
    else
      it->second = std::min(it->second, m);
    fit.min_ratio = std::min(fit.min_ratio, m / r.length());
  }
  std::vector<double> ls, ms;
  for (const auto& [l, m] : fit.min_root_by_length) {
    ls.push_back(l);
    ms.push_back(m);
  }
  if (ls.size() >= 2) fit.C_hat = least_squares(ls, ms).slope;
  for (std::size_t i = 0; i < ls.size(); ++i) fit.c_hat = std::max(fit.c_hat, fit.C_hat * ls[i] - ms[i]);
  const std::size_t half = ls.size() / 2;
  if (ls.size() >= 4) {
    fit.head_slope = least_squares({ls.begin(), ls.begin() + half}, {ms.begin(), ms.begin() + half}).slope;
    fit.tail_slope = least_squares({ls.begin() + half, ls.end()}, {ms.begin() + half, ms.end()}).slope;
  } else {
    fit.head_slope = fit.tail_slope = fit.C_hat;
  }
  fit.pass = fit.C_hat > 0 && fit.min_ratio > 0 && fit.tail_slope >= 0.5 * fit.head_slope;
  return fit;
}

}  // namespace flaglab
