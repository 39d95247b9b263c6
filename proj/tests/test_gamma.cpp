#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "fractherm/gamma.hpp"

namespace fractherm {
namespace {

TEST(GammaFn, SpecialValues) {
  EXPECT_EQ(gamma_fn(1.0), 1.0);
  EXPECT_NEAR(gamma_fn(0.5), 1.7724538509055160, 1e-15 * 1.78);
  EXPECT_NEAR(gamma_fn(2.5), 1.3293403881791370, 1e-15 * 1.33);
  EXPECT_EQ(gamma_fn(5.0), 24.0);
  EXPECT_EQ(gamma_fn(20.0), 121645100408832000.0);
}

// Reference values computed with mpmath at 30 digits.
TEST(GammaFn, MatchesHighPrecisionReference) {
  struct Case {
    double x, value;
  };
  const Case cases[] = {
      {0.1, 9.5135076986687312858},     {0.05, 19.470085311255511756},
      {1.5, 0.88622692545275801365},    {3.7, 4.1706517837966040301},
      {7.25, 1155.3810139199896872},    {12.5, 136843365.46556585726},
      {19.9, 90406140079547518.549},    {0.001, 999.4237724845954453},
      {1e-6, 999999.42278532419881},
  };
  for (const auto& c : cases) {
    EXPECT_NEAR(gamma_fn(c.x) / c.value, 1.0, 1e-13) << "x = " << c.x;
  }
}

TEST(GammaFn, RelativeErrorOnDenseGrid) {
  double worst = 0.0;
  for (int i = 1; i <= 20000; ++i) {
    const double x = 20.0 * i / 20000.0;
    worst = std::max(worst, std::abs(gamma_fn(x) / std::tgamma(x) - 1.0));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(GammaFn, RecurrenceHolds) {
  for (double x = 0.01; x < 15.0; x += 0.37) {
    EXPECT_NEAR(gamma_fn(x + 1.0) / (x * gamma_fn(x)), 1.0, 1e-13);
  }
}

TEST(GammaFn, LogGammaAgreesWithStd) {
  for (double x : {0.3, 1.0, 2.5, 10.0, 50.0, 150.0}) {
    EXPECT_NEAR(log_gamma_fn(x), std::lgamma(x), 1e-12 * std::max(1.0, std::abs(std::lgamma(x))));
  }
}

TEST(GammaFn, RejectsNonPositive) {
  EXPECT_THROW(gamma_fn(0.0), std::invalid_argument);
  EXPECT_THROW(gamma_fn(-1.5), std::invalid_argument);
  EXPECT_THROW(gamma_fn(std::nan("")), std::invalid_argument);
}

}  // namespace
}  // namespace fractherm
