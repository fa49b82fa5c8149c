#pragma once

// Independent reference computations used by the test suites. Nothing here
// calls into the library's own Bell or partition code.

#include <algorithm>
#include <functional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "csl/core.hpp"

namespace csl_test {

using boost::multiprecision::cpp_int;

// Visits every set partition of 1..n via restricted growth strings.
inline void for_each_partition(int n, const std::function<void(const csl::CoalitionStructure&)>& f) {
  if (n == 0) return;
  std::vector<int> a(n, 0);
  while (true) {
    int blocks = *std::max_element(a.begin(), a.end()) + 1;
    std::vector<csl::AgentSet> bs(blocks);
    for (int i = 0; i < n; ++i) bs[a[i]].push_back(i + 1);
    f(csl::CoalitionStructure(n, bs));

    int i = n - 1;
    for (; i > 0; --i) {
      int mx = *std::max_element(a.begin(), a.begin() + i);
      if (a[i] <= mx) break;
    }
    if (i == 0) return;
    ++a[i];
    for (int k = i + 1; k < n; ++k) a[k] = 0;
  }
}

inline std::vector<csl::CoalitionStructure> all_partitions(int n) {
  std::vector<csl::CoalitionStructure> out;
  for_each_partition(n, [&](const csl::CoalitionStructure& s) { out.push_back(s); });
  return out;
}

// Counts restricted growth strings directly, without building structures.
inline long long count_partitions(int n) {
  if (n == 0) return 1;
  std::vector<int> a(n, 0), mx(n, 0);  // mx[i] = max of a[0..i-1]
  long long c = 0;
  while (true) {
    ++c;
    int i = n - 1;
    while (i > 0 && a[i] > mx[i]) --i;
    if (i == 0) return c;
    ++a[i];
    for (int k = i + 1; k < n; ++k) {
      a[k] = 0;
      mx[k] = std::max(mx[k - 1], a[k - 1]);
    }
  }
}

// B_n as a sum of Stirling numbers of the second kind.
inline cpp_int bell_by_stirling(int n) {
  std::vector<std::vector<cpp_int>> s(n + 1, std::vector<cpp_int>(n + 1, 0));
  s[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= i; ++k) s[i][k] = k * s[i - 1][k] + s[i - 1][k - 1];
  cpp_int b = 0;
  for (int k = 0; k <= n; ++k) b += s[n][k];
  return b;
}

// Smallest k with 2^k >= x.
inline int bits_needed(const cpp_int& x) {
  int k = 0;
  cpp_int p = 1;
  while (p < x) {
    p <<= 1;
    ++k;
  }
  return k;
}

inline int lower_bound_reference(int n) {
  int bits = bits_needed(bell_by_stirling(n));
  return (bits + n - 1) / n;
}

// Lowest-index teammate strictly below j, or 0.
inline int smallest_teammate(const csl::CoalitionStructure& s, int j) {
  for (int a : s.lookup_block(j))
    if (a < j) return a;
  return 0;
}

// Largest teammate strictly below j, or 0.
inline int predecessor(const csl::CoalitionStructure& s, int j) {
  int best = 0;
  for (int a : s.lookup_block(j))
    if (a < j) best = a;
  return best;
}

}  // namespace csl_test
