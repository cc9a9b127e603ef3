#ifndef ZEROONE_STATS_HPP
#define ZEROONE_STATS_HPP

#include <utility>

namespace zeroone {

// 99% two-sided Wilson score interval.
inline constexpr double kWilsonZ99 = 2.5758293035489004;

std::pair<double, double> wilson_interval(long successes, long trials,
                                          double z = kWilsonZ99);

double binom_pmf(long n, long k, double p);

// Upper regularized incomplete gamma Q(a, x); chi-square upper p-value is
// Q(df/2, stat/2).
double gamma_q(double a, double x);
double chi_square_pvalue(double stat, int df);

} // namespace zeroone

#endif
