#include "lazysched/processes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lazysched/errors.hpp"

namespace lazysched {

namespace {
constexpr double kRowSumTolerance = 1e-12;
}

void ArrivalChain::validate() const {
  const std::size_t m = lengths.size();
  if (m == 0) throw std::invalid_argument("arrival chain has no states");
  if (transition.size() != m)
    throw std::invalid_argument("transition matrix must be " +
                                std::to_string(m) + "x" + std::to_string(m));
  for (std::size_t i = 0; i < m; ++i) {
    if (transition[i].size() != m)
      throw std::invalid_argument("transition row " + std::to_string(i) +
                                  " has wrong length");
    double row_sum = 0.0;
    for (double p : transition[i]) {
      if (p < 0 || p > 1)
        throw std::invalid_argument("transition probabilities must be in [0,1]");
      row_sum += p;
    }
    if (std::abs(row_sum - 1.0) > kRowSumTolerance)
      throw std::invalid_argument("transition row " + std::to_string(i) +
                                  " does not sum to 1");
  }
  for (double l : lengths)
    if (l < 0) throw std::invalid_argument("packet lengths must be >= 0");
  if (!initial_distribution.empty()) {
    if (initial_distribution.size() != m)
      throw std::invalid_argument("initial_distribution has wrong length");
    double total = 0.0;
    for (double p : initial_distribution) {
      if (p < 0 || p > 1)
        throw std::invalid_argument("initial_distribution entries must be in [0,1]");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("initial_distribution does not sum to 1");
  }
}

std::vector<double> stationary_distribution(const ArrivalChain& chain) {
  const int m = chain.num_states();
  // Solve pi (A - I) = 0 with the last equation replaced by sum(pi) = 1,
  // by Gaussian elimination on the transposed system.  The chains here
  // have at most a handful of states.
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (int col = 0; col < m; ++col) {
    for (int row = 0; row < m; ++row)
      a[col][row] = chain.transition[row][col] - (row == col ? 1.0 : 0.0);
  }
  for (int row = 0; row < m; ++row) a[m - 1][row] = 1.0;
  a[m - 1][m] = 1.0;

  for (int col = 0; col < m; ++col) {
    int pivot = col;
    for (int r = col + 1; r < m; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-12)
      throw NoStationaryDistribution(
          "arrival chain has no unique stationary distribution");
    std::swap(a[col], a[pivot]);
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      const double factor = a[r][col] / a[col][col];
      for (int c = col; c <= m; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  std::vector<double> pi(m);
  for (int i = 0; i < m; ++i) pi[i] = a[i][m] / a[i][i];

  for (int j = 0; j < m; ++j) {
    if (pi[j] < -1e-9)
      throw NoStationaryDistribution("stationary solve produced negative mass");
    double image = 0.0;
    for (int i = 0; i < m; ++i) image += pi[i] * chain.transition[i][j];
    if (std::abs(image - pi[j]) > 1e-9)
      throw NoStationaryDistribution("stationary residual check failed");
  }
  return pi;
}

double mean_arrival_bits(const ArrivalChain& chain) {
  const std::vector<double> pi = stationary_distribution(chain);
  double mean = 0.0;
  for (int i = 0; i < chain.num_states(); ++i)
    mean += pi[i] * chain.lengths[i];
  return mean;
}

double expected_future_arrivals(const ArrivalChain& chain, int state,
                                int ahead) {
  const int m = chain.num_states();
  if (state < 0 || state >= m)
    throw std::invalid_argument("arrival state out of range");
  std::vector<double> dist(m, 0.0);
  dist[state] = 1.0;
  std::vector<double> next(m);
  double total = 0.0;
  for (int k = 0; k < ahead; ++k) {
    for (int j = 0; j < m; ++j) {
      double p = 0.0;
      for (int i = 0; i < m; ++i) p += dist[i] * chain.transition[i][j];
      next[j] = p;
    }
    dist.swap(next);
    for (int j = 0; j < m; ++j) total += dist[j] * chain.lengths[j];
  }
  return total;
}

void HarvestProcess::validate() const {
  if (amount < 0) throw std::invalid_argument("harvest amount must be >= 0");
  if (p_event < 0 || p_event > 1)
    throw std::invalid_argument("harvest p_event must be in [0,1]");
  if (p_stay < 0 || p_stay > 1)
    throw std::invalid_argument("harvest p_stay must be in [0,1]");
}

void FadingProcess::validate() const {
  if (gains.empty()) throw std::invalid_argument("fading model has no gains");
  if (probabilities.size() != gains.size())
    throw std::invalid_argument("fading probabilities/gains length mismatch");
  double total = 0.0;
  for (double g : gains)
    if (!(g > 0)) throw std::invalid_argument("fading gains must be > 0");
  for (double p : probabilities) {
    if (p < 0 || p > 1)
      throw std::invalid_argument("fading probabilities must be in [0,1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("fading probabilities do not sum to 1");
}

}  // namespace lazysched
