// Minimal library walkthrough: one parameter point, analytic outage for both
// users plus a copula Monte Carlo cross-check.

#include <iostream>

#include "faswpcn/montecarlo.hpp"
#include "faswpcn/outage.hpp"

int main() {
  using namespace faswpcn;

  SystemParams params;          // defaults: p = 0.3/0.7, alpha 2.5, 0 dB targets
  params.snr_avg = 1e6;         // 60 dB

  const PortGrid grid{2, 2, 1.0, 1.0};
  const CorrelationMatrix corr = build_correlation_matrix(grid);

  const uint64_t seed = 7;
  const MvnResult op1 = outage_u1(corr, params, 1e-6, seed);
  const MvnResult op2 = outage_u2(corr, params, 1e-6, seed);
  std::cout << "analytic OP(u1) = " << op1.value << "  (+/- " << op1.error_estimate << ")\n";
  std::cout << "analytic OP(u2) = " << op2.value << "  (+/- " << op2.error_estimate << ")\n";

  const McEstimate mc1 = estimate_outage(corr, params, User::u1, McModel::copula, 1000000, seed);
  const McEstimate mc2 = estimate_outage(corr, params, User::u2, McModel::copula, 1000000, seed);
  std::cout << "simulated OP(u1) = " << mc1.estimate << "  (se " << mc1.standard_error << ")\n";
  std::cout << "simulated OP(u2) = " << mc2.estimate << "  (se " << mc2.standard_error << ")\n";
  return 0;
}
