#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "kpvote/types.hpp"

namespace kpvote::testing {

struct entry {
  double multiplicity;
  std::initializer_list<int> members;
};

inline profile make_profile(int n, std::initializer_list<entry> entries) {
  profile pi(n);
  for (const entry& e : entries) pi.add(ballot::of(e.members), e.multiplicity);
  return pi;
}

// The six-ballot showcase profile: 800 c1, 600 c2, 122 c3, 100 {c1,c2},
// 622 {c1,c3}, 966 {c2,c3}. Index i-1 holds candidate ci.
inline profile showcase_profile() {
  return make_profile(3, {{800, {0}},
                          {600, {1}},
                          {122, {2}},
                          {100, {0, 1}},
                          {622, {0, 2}},
                          {966, {1, 2}}});
}

// Two small approval profiles: 2 c1, 2 {c1,c2}, 3 {c2,c3} and 2 c1, 3 {c2,c3}.
inline profile small_profile_1() {
  return make_profile(3, {{2, {0}}, {2, {0, 1}}, {3, {1, 2}}});
}
inline profile small_profile_2() { return make_profile(3, {{2, {0}}, {3, {1, 2}}}); }

inline outcome single_winner(int index) { return outcome({committee::of({index})}); }

}  // namespace kpvote::testing
