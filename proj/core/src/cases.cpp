#include "momenttoc/cases.hpp"

#include <stdexcept>

namespace mtoc {

std::vector<CaseDescriptor> enumerate_cases(int n) {
  if (n < 4) throw std::invalid_argument("enumerate_cases: need n >= 4");
  std::vector<CaseDescriptor> out;
  if (n % 2 == 1) {
    const int m = (n - 1) / 2;
    out.push_back({1, LemmaType::A, m + 1, true, true, 0});
    out.push_back({3, LemmaType::C, m, true, false, 1});
    out.push_back({5, LemmaType::A, m, false, false, 2});
    out.push_back({7, LemmaType::D, m, false, true, 1});
    out.push_back({9, LemmaType::B, m - 1, false, false, 2});
  } else {
    const int m = n / 2;
    out.push_back({2, LemmaType::A, m, true, false, 1});
    out.push_back({4, LemmaType::A, m, false, true, 1});
    out.push_back({6, LemmaType::C, m - 1, false, false, 2});
    out.push_back({8, LemmaType::D, m - 1, false, false, 2});
  }
  return out;
}

}  // namespace mtoc
