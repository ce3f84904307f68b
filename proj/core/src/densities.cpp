#include "wstat/densities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "wstat/errors.hpp"
#include "wstat/quadrature.hpp"

namespace wstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt3 = 1.7320508075688772935274463415059;
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;

void require_probability(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    std::ostringstream msg;
    msg << "probability " << u << " is outside (0, 1)";
    throw InvalidProbabilityError(msg.str());
  }
}

// Rational approximation of the normal quantile (relative error ~1e-9)
// followed by one Halley step against erfc, which brings it to full
// double precision.
double normal_quantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  // Work in the lower half so the tail probability keeps full precision.
  const bool upper = p > 0.5;
  const double q = upper ? 1.0 - p : p;
  double x;
  if (q < p_low) {
    const double r = std::sqrt(-2.0 * std::log(q));
    x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  } else {
    const double s = q - 0.5;
    const double r = s * s;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * s /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  for (int step = 0; step < 2; ++step) {
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - q;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return upper ? -x : x;
}

class Gaussian final : public detail::DensityModel {
 public:
  Family family() const noexcept override { return Family::gaussian; }
  std::string name() const override { return "gaussian"; }
  Support support() const noexcept override { return {}; }
  bool analytic() const noexcept override { return true; }

  double pdf(double z) const override {
    return std::isinf(z) ? 0.0 : kInvSqrt2Pi * std::exp(-0.5 * z * z);
  }
  double cdf(double z) const override { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
  double quantile(double u) const override { return normal_quantile(u); }

  double partial_first_moment(double a, double b) const override {
    if (a >= b) return 0.0;
    return pdf(a) - pdf(b);
  }

  // Antiderivative of z^2 phi(z) is Phi(z) - z phi(z).
  double partial_second_moment(double a, double b) const override {
    if (a >= b) return 0.0;
    double mass;
    if (a >= 0.0) {
      mass = upper_tail(a) - upper_tail(b);
    } else if (b <= 0.0) {
      mass = cdf(b) - cdf(a);
    } else {
      mass = 1.0 - cdf(a) - upper_tail(b);
    }
    return mass - (z_pdf(b) - z_pdf(a));
  }

  double fourth_moment() const override { return 3.0; }

 private:
  static double upper_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }
  double z_pdf(double z) const { return std::isinf(z) ? 0.0 : z * pdf(z); }
};

class Uniform final : public detail::DensityModel {
 public:
  Family family() const noexcept override { return Family::uniform; }
  std::string name() const override { return "uniform"; }
  Support support() const noexcept override { return {-kSqrt3, kSqrt3}; }
  bool analytic() const noexcept override { return true; }

  double pdf(double z) const override {
    return std::abs(z) <= kSqrt3 ? 1.0 / (2.0 * kSqrt3) : 0.0;
  }
  double cdf(double z) const override {
    return std::clamp((z + kSqrt3) / (2.0 * kSqrt3), 0.0, 1.0);
  }
  double quantile(double u) const override { return -kSqrt3 + 2.0 * kSqrt3 * u; }

  double partial_first_moment(double a, double b) const override {
    a = clip(a);
    b = clip(b);
    if (a >= b) return 0.0;
    return (b - a) * (b + a) / (4.0 * kSqrt3);
  }
  double partial_second_moment(double a, double b) const override {
    a = clip(a);
    b = clip(b);
    if (a >= b) return 0.0;
    return (b * b * b - a * a * a) / (6.0 * kSqrt3);
  }
  double fourth_moment() const override { return 9.0 / 5.0; }

 private:
  static double clip(double z) { return std::clamp(z, -kSqrt3, kSqrt3); }
};

// Scale b = 1/sqrt(2) gives unit variance; fourth moment 24 b^4 = 6.
class Laplace final : public detail::DensityModel {
 public:
  Family family() const noexcept override { return Family::laplace; }
  std::string name() const override { return "laplace"; }
  Support support() const noexcept override { return {}; }
  bool analytic() const noexcept override { return true; }

  double pdf(double z) const override {
    return std::isinf(z) ? 0.0 : std::exp(-std::abs(z) / kScale) / (2.0 * kScale);
  }
  double cdf(double z) const override {
    return z < 0.0 ? 0.5 * std::exp(z / kScale) : 1.0 - 0.5 * std::exp(-z / kScale);
  }
  double quantile(double u) const override {
    return u < 0.5 ? kScale * std::log(2.0 * u) : -kScale * std::log(2.0 * (1.0 - u));
  }

  double partial_first_moment(double a, double b) const override {
    if (a >= b) return 0.0;
    return first_antiderivative(b) - first_antiderivative(a);
  }
  double partial_second_moment(double a, double b) const override {
    if (a >= b) return 0.0;
    return second_antiderivative(b) - second_antiderivative(a);
  }
  double fourth_moment() const override { return 24.0 * std::pow(kScale, 4); }

 private:
  static constexpr double kScale = 0.70710678118654752440084436210485;

  // Both antiderivatives vanish at -inf.
  static double first_antiderivative(double z) {
    if (std::isinf(z)) return 0.0;
    if (z < 0.0) return 0.5 * std::exp(z / kScale) * (z - kScale);
    return -0.5 * std::exp(-z / kScale) * (z + kScale);
  }
  static double second_antiderivative(double z) {
    constexpr double b2 = kScale * kScale;
    if (z == -kInf) return 0.0;
    if (z == kInf) return 2.0 * b2;
    if (z < 0.0) return 0.5 * std::exp(z / kScale) * (z * z - 2.0 * kScale * z + 2.0 * b2);
    return 2.0 * b2 - 0.5 * std::exp(-z / kScale) * (z * z + 2.0 * kScale * z + 2.0 * b2);
  }
};

struct Bracket {
  double lo;
  double hi;
};

template <class Cdf>
Bracket find_bracket(const Cdf& cdf, Support support, double u, const QuantileOptions& opt) {
  Bracket br{support.lower, support.upper};
  if (!support.bounded_below()) {
    br.lo = std::min(-1.0, support.upper - 1.0);
    while (cdf(br.lo) > u) {
      br.lo *= 2.0;
      if (br.lo < -opt.max_bracket) {
        throw BracketExpansionError("quantile bracket expansion exceeded lower bound");
      }
    }
  }
  if (!support.bounded_above()) {
    br.hi = std::max(1.0, support.lower + 1.0);
    while (cdf(br.hi) < u) {
      br.hi *= 2.0;
      if (br.hi > opt.max_bracket) {
        throw BracketExpansionError("quantile bracket expansion exceeded upper bound");
      }
    }
  }
  return br;
}

// Safeguarded Newton inside a shrinking bracket.
template <class Cdf, class Pdf>
double invert_cdf(const Cdf& cdf, const Pdf& pdf, Support support, double u,
                  const QuantileOptions& opt) {
  require_probability(u);
  auto [lo, hi] = find_bracket(cdf, support, u, opt);
  double x = 0.5 * (lo + hi);
  double step_prev = hi - lo;
  double step = step_prev;
  double best_x = x;
  double best_err = kInf;
  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    const double resid = cdf(x) - u;
    if (std::abs(resid) < best_err) {
      best_err = std::abs(resid);
      best_x = x;
    }
    if (resid < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double slope = pdf(x);
    const double xtol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
    double next;
    if (slope > 0.0 && std::abs(2.0 * resid) < std::abs(step_prev * slope) &&
        (x - resid / slope) > lo && (x - resid / slope) < hi) {
      step_prev = step;
      step = resid / slope;
      next = x - step;
    } else {
      step_prev = step;
      next = 0.5 * (lo + hi);
      step = x - next;
    }
    // A collapsed bracket with best_err > tol means the cdf jumps across u.
    if (std::abs(step) <= xtol || hi - lo <= xtol) return best_x;
    x = next;
  }
  if (best_err <= opt.probability_tol) return best_x;
  throw BracketExpansionError("quantile inversion did not reach the probability tolerance");
}

quadrature::Options tight() {
  quadrature::Options o;
  o.abs_tol = 1e-15;
  o.rel_tol = 1e-13;
  o.max_intervals = 20000;
  return o;
}

class Custom final : public detail::DensityModel {
 public:
  Custom(std::function<double(double)> raw, Support raw_support, const CustomOptions& opt)
      : name_(opt.name) {
    auto checked = [&raw](double x) {
      const double v = raw(x);
      if (!std::isfinite(v) || v < 0.0) {
        std::ostringstream msg;
        msg << "custom pdf returned " << v << " at " << x;
        throw InvalidArgumentError(msg.str());
      }
      return v;
    };
    if (!(raw_support.lower < raw_support.upper)) {
      throw InvalidArgumentError("custom support must have lower < upper");
    }
    const auto qopt = tight();
    const auto mass = quadrature::integrate(checked, raw_support.lower, raw_support.upper, qopt);
    if (!mass.converged || !std::isfinite(mass.value) || !(mass.value > 0.0)) {
      throw NonIntegrableError("custom pdf mass integral failed to converge or is not positive");
    }
    const auto first = quadrature::integrate([&](double x) { return x * checked(x); },
                                             raw_support.lower, raw_support.upper, qopt);
    if (!first.converged && first.abs_error > 1e-9 * mass.value) {
      throw NonIntegrableError("custom pdf first moment failed to converge");
    }
    const double mean = first.value / mass.value;
    const auto second = quadrature::integrate(
        [&](double x) { return (x - mean) * (x - mean) * checked(x); }, raw_support.lower,
        raw_support.upper, qopt);
    if (!second.converged && second.abs_error > 1e-9 * std::max(1.0, second.value)) {
      throw NonIntegrableError("custom pdf variance integral failed to converge");
    }
    const double variance = second.value / mass.value;
    if (!std::isfinite(variance)) {
      throw NonIntegrableError("custom pdf has no finite variance");
    }
    const double width_scale = std::max({1.0, std::abs(mean), std::abs(raw_support.lower) *
                                                                   raw_support.bounded_below()});
    if (!(variance > 1e-24 * width_scale * width_scale)) {
      throw DegenerateDensityError("custom pdf has zero variance");
    }
    const double scale = std::sqrt(variance);
    const double norm = mass.value;
    standardized_ = [raw = std::move(raw), mean, scale, norm](double z) {
      const double v = raw(mean + scale * z);
      return v > 0.0 ? scale * v / norm : 0.0;
    };
    support_ = {(raw_support.lower - mean) / scale, (raw_support.upper - mean) / scale};
    build_tables(opt);
    fourth_ = quadrature::integrate([this](double z) { return std::pow(z, 4) * pdf(z); },
                                    support_.lower, support_.upper, qopt)
                  .value;
  }

  Family family() const noexcept override { return Family::custom; }
  std::string name() const override { return name_; }
  Support support() const noexcept override { return support_; }
  bool analytic() const noexcept override { return false; }

  double pdf(double z) const override {
    if (!support_.contains(z) || std::isinf(z)) return 0.0;
    return standardized_(z);
  }
  double cdf(double z) const override { return std::clamp(cumulative(0, z), 0.0, 1.0); }
  double quantile(double u) const override {
    QuantileOptions opt;
    return invert_cdf([this](double z) { return cdf(z); }, [this](double z) { return pdf(z); },
                      support_, u, opt);
  }
  double partial_first_moment(double a, double b) const override {
    if (a >= b) return 0.0;
    return cumulative(1, b) - cumulative(1, a);
  }
  double partial_second_moment(double a, double b) const override {
    if (a >= b) return 0.0;
    return cumulative(2, b) - cumulative(2, a);
  }
  double fourth_moment() const override { return fourth_; }

 private:
  static double weight(int power, double z) {
    return power == 0 ? 1.0 : (power == 1 ? z : z * z);
  }

  double integrate_power(int power, double a, double b) const {
    return quadrature::integrate([this, power](double z) { return weight(power, z) * pdf(z); },
                                 a, b, tight())
        .value;
  }

  void build_tables(const CustomOptions& opt) {
    lo_ = support_.lower;
    hi_ = support_.upper;
    if (!support_.bounded_below()) {
      lo_ = -4.0;
      while (integrate_power(0, -kInf, lo_) > opt.tail_mass) {
        lo_ *= 2.0;
        if (lo_ < -1e6) throw NonIntegrableError("custom pdf lower tail too heavy to tabulate");
      }
    }
    if (!support_.bounded_above()) {
      hi_ = 4.0;
      while (integrate_power(0, hi_, kInf) > opt.tail_mass) {
        hi_ *= 2.0;
        if (hi_ > 1e6) throw NonIntegrableError("custom pdf upper tail too heavy to tabulate");
      }
    }
    cells_ = std::max<std::size_t>(opt.table_cells, 1);
    width_ = (hi_ - lo_) / static_cast<double>(cells_);
    for (int p = 0; p < 3; ++p) {
      auto& table = tables_[p];
      table.assign(cells_ + 1, 0.0);
      table[0] = support_.bounded_below() ? 0.0 : integrate_power(p, -kInf, lo_);
      for (std::size_t j = 0; j < cells_; ++j) {
        table[j + 1] = table[j] + integrate_power(p, edge(j), edge(j + 1));
      }
      upper_tail_[p] = support_.bounded_above() ? 0.0 : integrate_power(p, hi_, kInf);
    }
  }

  double edge(std::size_t j) const {
    return j == cells_ ? hi_ : lo_ + width_ * static_cast<double>(j);
  }

  // Integral of z^power f(z) from -inf to z.
  double cumulative(int power, double z) const {
    if (z <= support_.lower) return 0.0;
    const auto& table = tables_[power];
    const double total = table[cells_] + upper_tail_[power];
    if (z >= support_.upper) return total;
    if (z < lo_) return integrate_power(power, -kInf, z);
    if (z > hi_) return total - integrate_power(power, z, kInf);
    auto j = static_cast<std::size_t>((z - lo_) / width_);
    j = std::min(j, cells_ - 1);
    // Integrate from whichever cell edge is nearer.
    if (z - edge(j) <= edge(j + 1) - z) {
      return table[j] + integrate_power(power, edge(j), z);
    }
    return table[j + 1] - integrate_power(power, z, edge(j + 1));
  }

  std::string name_;
  std::function<double(double)> standardized_;
  Support support_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double width_ = 0.0;
  std::size_t cells_ = 0;
  std::vector<double> tables_[3];
  double upper_tail_[3] = {0.0, 0.0, 0.0};
  double fourth_ = 0.0;
};

}  // namespace

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::gaussian:
      return "gaussian";
    case Family::uniform:
      return "uniform";
    case Family::laplace:
      return "laplace";
    case Family::custom:
      return "custom";
  }
  return "unknown";
}

Family parse_builtin_family(std::string_view name) {
  if (name == "gaussian" || name == "normal") return Family::gaussian;
  if (name == "uniform") return Family::uniform;
  if (name == "laplace") return Family::laplace;
  throw UnknownFamilyError(std::string(name));
}

StandardDensity::StandardDensity(std::shared_ptr<const detail::DensityModel> model)
    : model_(std::move(model)) {
  if (!model_) throw InvalidArgumentError("null density model");
}

double StandardDensity::quantile(double u) const {
  require_probability(u);
  return model_->quantile(u);
}

StandardDensity make_standard(Family family) {
  switch (family) {
    case Family::gaussian:
      return StandardDensity(std::make_shared<Gaussian>());
    case Family::uniform:
      return StandardDensity(std::make_shared<Uniform>());
    case Family::laplace:
      return StandardDensity(std::make_shared<Laplace>());
    case Family::custom:
      break;
  }
  throw UnknownFamilyError(std::string(to_string(family)));
}

StandardDensity make_standard(std::string_view family) {
  return make_standard(parse_builtin_family(family));
}

StandardDensity make_custom(std::function<double(double)> pdf, Support support,
                            const CustomOptions& options) {
  if (!pdf) throw InvalidArgumentError("custom pdf is empty");
  return StandardDensity(std::make_shared<Custom>(std::move(pdf), support, options));
}

StandardDensity make_tabulated(std::span<const double> z, std::span<const double> f,
                               const CustomOptions& options) {
  if (z.size() != f.size()) throw InvalidArgumentError("tabulated pdf columns differ in length");
  if (z.size() < 2) throw InvalidArgumentError("tabulated pdf needs at least two points");
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!std::isfinite(z[i]) || !std::isfinite(f[i])) {
      throw InvalidArgumentError("tabulated pdf contains non-finite values");
    }
    if (f[i] < 0.0) throw InvalidArgumentError("tabulated pdf has negative values");
    if (i > 0 && !(z[i] > z[i - 1])) {
      throw InvalidArgumentError("tabulated pdf abscissae must be strictly increasing");
    }
  }
  std::vector<double> zs(z.begin(), z.end());
  std::vector<double> fs(f.begin(), f.end());
  const Support support{zs.front(), zs.back()};
  auto interp = [zs = std::move(zs), fs = std::move(fs)](double x) {
    if (x < zs.front() || x > zs.back()) return 0.0;
    auto it = std::upper_bound(zs.begin(), zs.end(), x);
    if (it == zs.end()) return fs.back();
    const auto j = static_cast<std::size_t>(it - zs.begin());
    const double t = (x - zs[j - 1]) / (zs[j] - zs[j - 1]);
    return fs[j - 1] + t * (fs[j] - fs[j - 1]);
  };
  CustomOptions opt = options;
  if (opt.name == "custom") opt.name = "tabulated";
  return make_custom(std::move(interp), support, opt);
}

double quantile_numeric(const StandardDensity& density, double u, const QuantileOptions& options) {
  return invert_cdf([&density](double z) { return density.cdf(z); },
                    [&density](double z) { return density.pdf(z); }, density.support(), u,
                    options);
}

double fourth_moment_quadrature(const StandardDensity& density) {
  const auto s = density.support();
  return quadrature::integrate([&density](double z) { return std::pow(z, 4) * density.pdf(z); },
                               s.lower, s.upper, tight())
      .value;
}

}  // namespace wstat
