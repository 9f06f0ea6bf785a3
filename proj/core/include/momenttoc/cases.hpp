#ifndef MOMENTTOC_CASES_HPP
#define MOMENTTOC_CASES_HPP

#include <vector>

#include "momenttoc/hausdorff.hpp"

namespace mtoc {

/// One cell of the generic-case table: which endpoints are pinned, which
/// solvability type applies, the node count for this dimension, and the
/// offset range of the singularity family (d = 0..d_max). Exactly the
/// cases with matching parity of n occur: 1,3,5,7,9 for odd n and
/// 2,4,6,8 for even n.
struct CaseDescriptor {
  int id = 0;
  LemmaType type = LemmaType::A;
  int k = 0;
  bool a_fixed = false;  // endpoint a pinned at 0
  bool b_fixed = false;  // endpoint b pinned at x1
  int d_max = 0;
};

/// The cases applicable to dimension n (>= 4), in id order, populated with
/// the table metadata for that parity.
std::vector<CaseDescriptor> enumerate_cases(int n);

}  // namespace mtoc

#endif  // MOMENTTOC_CASES_HPP
