#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "colhyp/asymptotics.hpp"
#include "colhyp/embedding.hpp"
#include "colhyp/errors.hpp"
#include "colhyp/fields.hpp"
#include "colhyp/mollifier.hpp"
#include "colhyp/seeding.hpp"

using namespace colhyp;

namespace {

std::vector<double> ladder(double eps0 = 0.5, int count = 8) { return EpsLadder{eps0, 0.5, count}.values(); }

EpsSeries series(const std::vector<double>& eps, const std::function<double(double)>& f) {
  EpsSeries s;
  s.eps = eps;
  for (double e : eps) s.values.push_back(f(e));
  return s;
}

TestFunction bump(double c, double w) {
  return {[c, w](double x) {
            const double u = (x - c) / w;
            return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
          },
          c - w, c + w, "bump"};
}

}  // namespace

TEST(Classify, InversePowerIsModerate) {
  const Classification c = classify(series(ladder(), [](double e) { return std::pow(e, -2.0); }));
  EXPECT_EQ(c.verdict, Verdict::moderate);
  EXPECT_NEAR(c.exponent, 2.0, 0.05);
}

TEST(Classify, LogarithmIsLogType) {
  const Classification c = classify(series(ladder(), [](double e) { return 3.0 * std::abs(std::log(e)); }));
  EXPECT_EQ(c.verdict, Verdict::log_type);
  EXPECT_NEAR(c.constant, 3.0, 0.1);
}

TEST(Classify, ConstantIsBounded) {
  const Classification c = classify(series(ladder(), [](double) { return 0.42; }));
  EXPECT_EQ(c.verdict, Verdict::bounded);
  EXPECT_NEAR(c.constant, 0.42, 1e-12);
}

TEST(Classify, ExponentialDecayIsNegligibleToCutOrder) {
  ClassifyOptions opt;
  opt.b_max = 6;
  const Classification c = classify(series(ladder(), [](double e) { return std::exp(-1.0 / e); }), opt);
  EXPECT_EQ(c.verdict, Verdict::negligible);
  EXPECT_EQ(c.exponent, 6.0);
  EXPECT_NEAR(c.exponential.slope, -1.0, 1e-9);
}

TEST(Classify, ExponentialGrowthIsNotModerate) {
  const Classification c = classify(series(ladder(0.25), [](double e) { return std::exp(1.0 / e); }));
  EXPECT_NE(c.verdict, Verdict::moderate);
}

TEST(Classify, BoundedTimeIntegralIsL1Type) {
  EpsSeries s = series(ladder(), [](double e) { return 2.0 + 0.0 * e; });
  s.descriptor.time_l1 = true;
  EXPECT_EQ(classify(s).verdict, Verdict::l1_type);
}

TEST(Classify, DecreasingPowerIsBounded) {
  const Classification c = classify(series(ladder(), [](double e) { return 1.0 + e; }));
  EXPECT_EQ(c.verdict, Verdict::bounded);
}

TEST(Classify, NonPositiveValuesAreInconclusive) {
  EXPECT_EQ(classify(series(ladder(), [](double e) { return e < 0.05 ? 0.0 : 1.0; })).verdict, Verdict::inconclusive);
}

TEST(Classify, TooShortSeriesIsRejected) {
  EXPECT_THROW(classify(series(ladder(0.5, 4), [](double) { return 1.0; })), ParameterError);
}

TEST(Series, ValidationRejectsIncreasingEps) {
  EpsSeries s = series({0.1, 0.2, 0.05}, [](double) { return 1.0; });
  EXPECT_THROW(s.validate(), ParameterError);
}

TEST(Series, CsvHasHeader) {
  std::ostringstream os;
  series(ladder(0.5, 2), [](double) { return 1.0; }).write_csv(os);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "eps,value");
}

TEST(MeasureSeries, ConstantFieldMeasuresOne) {
  NormDescriptor d;
  d.K = Rect::x_interval(0.0, 1.0);
  d.p = 2;
  d.samples = 4;
  const MeasuredSeries m = measure_series([](double, std::size_t) { return SmoothField::constant(1.0); }, d, ladder(0.5, 5));
  for (double v : m.norm_of_sup.values) EXPECT_NEAR(v, 1.0, 1e-14);
  for (double v : m.sup_of_norm.values) EXPECT_NEAR(v, 1.0, 1e-14);
}

TEST(MeasureSeries, BrownianDerivativeGrowsPathwise) {
  const Mollifier m = build_mollifier(0);
  const std::vector<double> eps = ladder(0.1, 5);
  const SampledProcess W = sample_brownian_1d(Grid1D::with_max_step(-1.0, 2.0, eps.back() / 8), 5);
  NormDescriptor d;
  d.K = Rect::x_interval(0.0, 1.0);
  d.alpha = 0;
  const MeasuredSeries s = measure_series([&](double e, std::size_t) { return embed_derivative(W, m, e, 1); }, d, eps);
  for (std::size_t k = 1; k < eps.size(); ++k) EXPECT_GT(s.norm_of_sup.values[k], s.norm_of_sup.values[k - 1]);
}

TEST(MeasureSeries, SupOfNormNeverExceedsNormOfSup) {
  const std::vector<double> eps = ladder(0.5, 5);
  for (int p : {1, 2, p_infinity}) {
    NormDescriptor d;
    d.K = Rect::x_interval(-1.0, 1.0);
    d.alpha = 1;
    d.p = p;
    d.samples = 30;
    const FieldFactory f = [](double e, std::size_t s) {
      std::mt19937_64 rng(derive_seed(3, SeedPurpose::path, 0, s));
      std::normal_distribution<double> z;
      const double a = z(rng), b = z(rng), w = 1.0 + std::abs(z(rng));
      return SmoothField::of_x([a, b, w, e](double x, int k) {
        const double arg = w * x / e;
        return k == 0 ? a * std::sin(arg) + b * std::cos(arg) : (w / e) * (a * std::cos(arg) - b * std::sin(arg));
      }, Rect::everywhere(), {}, 1);
    };
    const MeasuredSeries m = measure_series(f, d, eps);
    EXPECT_TRUE(m.interchange_holds) << "p=" << p;
    EXPECT_EQ(m.interchange_checks, eps.size());
    for (std::size_t k = 0; k < eps.size(); ++k) EXPECT_LE(m.sup_of_norm.values[k], m.norm_of_sup.values[k] * (1 + 1e-12));
  }
}

TEST(Association, SmoothFamilyEqualToReferenceHasQuadratureGaps) {
  const auto v = [](double x) { return std::cos(x); };
  const FieldFactory f = [](double, std::size_t) {
    return SmoothField::of_x([](double x, int) { return std::cos(x); }, Rect::everywhere(), {}, 0);
  };
  const AssociationReport a = association_check(f, function_reference(v), {bump(0.0, 0.5), bump(0.7, 0.3)}, ladder(0.5, 4), 1, 1e-8);
  for (const auto& row : a.gaps)
    for (double g : row) EXPECT_LT(g, 1e-9);
  EXPECT_TRUE(a.below_tolerance);
}

TEST(Association, EmbeddedContinuousFunctionConverges) {
  const Mollifier m = build_mollifier(0);
  const auto v = [](double x) { return std::abs(x); };
  const std::vector<double> eps = ladder(0.2, 5);
  const SampledProcess p = sample_function(Grid1D::with_max_step(-3.0, 3.0, eps.back() / 8), v, "abs");
  const FieldFactory f = [&](double e, std::size_t) { return embed_path(p, m, e); };
  const AssociationReport a = association_check(f, function_reference(v), {bump(0.0, 0.5)}, eps, 1, 1e-3);
  EXPECT_TRUE(a.decreasing);
  for (std::size_t k = 1; k < eps.size(); ++k) EXPECT_LT(a.gaps[k][0], a.gaps[k - 1][0]);
}

TEST(Association, TestFunctionOutsideFieldDomainThrows) {
  const FieldFactory f = [](double, std::size_t) {
    return SmoothField::of_x([](double, int) { return 1.0; }, Rect::x_interval(-1.0, 1.0), {}, 0);
  };
  EXPECT_THROW(association_check(f, function_reference([](double) { return 1.0; }), {bump(0.9, 0.5)}, ladder(0.5, 2), 1, 1e-3),
               DomainError);
}

TEST(PairWith, MatchesClosedForm) {
  const TestFunction psi{[](double x) { return x; }, 0.0, 1.0, "x"};
  EXPECT_NEAR(pair_with([](double x) { return x * x; }, psi, 0.1), 0.25, 1e-14);
}

TEST(Moments, DeterministicSamplesHaveZeroError) {
  const MomentEstimate m = sample_moments([](std::size_t) { return std::vector<double>{2.0, -1.0}; }, 2, 200);
  EXPECT_EQ(m.mean[0], 4.0);
  EXPECT_EQ(m.mean[1], 1.0);
  EXPECT_EQ(m.standard_error[0], 0.0);
}

TEST(Moments, StandardNormalSecondMoment) {
  const MomentEstimate m = sample_moments([](std::size_t s) {
    std::mt19937_64 rng(derive_seed(9, SeedPurpose::auxiliary, 0, s));
    return std::vector<double>{std::normal_distribution<double>()(rng)};
  }, 2, 4000);
  EXPECT_NEAR(m.mean[0], 1.0, 5.0 * m.standard_error[0]);
  EXPECT_NEAR(m.standard_error[0], std::sqrt(2.0 / 4000.0), 0.01);
}

TEST(Moments, ResultsDoNotDependOnWorkerCount) {
  const SampleFactory f = [](std::size_t s) {
    std::mt19937_64 rng(s);
    return std::vector<double>{std::normal_distribution<double>()(rng)};
  };
  const MomentEstimate a = sample_moments(f, 1, 1000, 1), b = sample_moments(f, 1, 1000, 4);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.standard_error, b.standard_error);
}

TEST(MomentField, NormalAmplitudeSecondMoment) {
  const Grid2D g{Grid1D::from_bounds(-1.0, 1.0, 5), Grid1D::from_bounds(0.0, 0.5, 3)};
  const DeterminacyDomain d{1.0, 0.0, 0.5};
  const SolutionFactory f = [&](std::size_t s) {
    std::mt19937_64 rng(derive_seed(10, SeedPurpose::auxiliary, 0, s));
    const double z = std::normal_distribution<double>()(rng);
    SolutionField u(g, 1, d);
    for (std::size_t it = 0; it < 3; ++it)
      for (std::size_t ix = 0; ix < 5; ++ix) u.at_node(0, ix, it) = z;
    return u;
  };
  const MomentField m = moment_field(f, 0, 2, g, 2000);
  EXPECT_NEAR(m.mean_at(2, 1), 1.0, 5.0 * m.se_at(2, 1));
  EXPECT_THROW(moment_field(f, 0, 2, g, 50), ParameterError);
}

TEST(MomentField, DeterministicSolutionIsExact) {
  const Grid2D g{Grid1D::from_bounds(-1.0, 1.0, 5), Grid1D::from_bounds(0.0, 0.5, 3)};
  const DeterminacyDomain d{1.0, 0.0, 0.5};
  const SolutionFactory f = [&](std::size_t) {
    SolutionField u(g, 1, d);
    for (std::size_t it = 0; it < 3; ++it)
      for (std::size_t ix = 0; ix < 5; ++ix) u.at_node(0, ix, it) = 0.5 + ix;
    return u;
  };
  const MomentField m = moment_field(f, 0, 3, g, 100);
  EXPECT_EQ(m.mean_at(3, 0), std::pow(3.5, 3));
  EXPECT_EQ(m.se_at(3, 0), 0.0);
}

TEST(Autocovariance, DeterministicSamplesHaveZeroCovariance) {
  const CovarianceEstimate c = autocovariance([](std::size_t) { return std::vector<double>{1.0, 2.0}; }, 100);
  EXPECT_EQ(c.cov(0, 1), 0.0);
  EXPECT_EQ(c.cov(1, 1), 0.0);
}

TEST(Autocovariance, CorrelatedNormals) {
  const CovarianceEstimate c = autocovariance([](std::size_t s) {
    std::mt19937_64 rng(derive_seed(12, SeedPurpose::auxiliary, 0, s));
    std::normal_distribution<double> z;
    const double a = z(rng), b = z(rng);
    return std::vector<double>{a, 0.6 * a + 0.8 * b};
  }, 10000);
  EXPECT_NEAR(c.cov(0, 1), 0.6, 5.0 * c.se(0, 1));
  EXPECT_NEAR(c.cov(1, 1), 1.0, 5.0 * c.se(1, 1));
  EXPECT_EQ(c.cov(0, 1), c.cov(1, 0));
}

TEST(ExponentialTail, MomentsMatchClosedFormAndMonteCarlo) {
  const ExponentialTailFamily f{2.0};
  for (double e : {0.5, 0.25}) {
    EXPECT_DOUBLE_EQ(f.moment(e, 2.0), 1.0);
    EXPECT_NEAR(f.moment(e, 1.0), std::exp(-1.0 / e), 1e-15);
  }
  // E u^p = exp(p/eps) P(omega >= p'/eps) for the standard exponential law.
  std::mt19937_64 rng(4);
  std::exponential_distribution<double> law(1.0);
  const double e = 1.0;
  double acc = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) acc += f.value(e, law(rng));
  EXPECT_NEAR(acc / n, f.moment(e, 1.0), 0.02);
  EXPECT_EQ(f.value(e, 1.9), 0.0);
}

TEST(SlidingSpike, L1BoundedButLargeAlongPlantedSubsequence) {
  const SlidingSpikeFamily f;
  for (double e : {0.25, 0.1, 0.05}) EXPECT_LE(f.mean_abs(e), 1.0 + 1e-12);
  const auto sub = f.planted_subsequence(0.3L, 5);
  ASSERT_EQ(sub.size(), 5u);
  for (std::size_t k = 1; k < sub.size(); ++k) EXPECT_LT(sub[k], sub[k - 1]);
  for (long double e : sub) {
    const long double v = f.value(e, 0.3L);
    EXPECT_GT(v, 0.0L);
    EXPECT_NEAR(static_cast<double>(v / std::exp(1.0L / e)), 1.0, 1e-12);
  }
  EXPECT_EQ(f.value(sub[0], -0.5L), 0.0L);
}

TEST(Verdicts, NamesAreStable) {
  EXPECT_EQ(to_string(Verdict::moderate), "moderate");
  EXPECT_EQ(to_string(Verdict::log_type), "log-type");
}
