// Check the descent condition for the presheaf of principal bundles of a
// small groupoid over an overlapping cover.

#include <iostream>

#include "grpd/descent.hpp"

int main() {
  using namespace grpd;

  BGPresheaf bundles(share(group_groupoid(symmetric_group(3))));

  Covering cover;
  cover.base = 3;
  cover.parts = {SetMap{2, 3, {0, 1}}, SetMap{2, 3, {1, 2}}, SetMap{2, 3, {0, 2}}};

  auto verdict = check_stack_condition(bundles, cover);
  std::cout << "S3-bundles over a 3-point base, three overlapping parts\n"
            << "  descent data: " << verdict.descent_objects << "\n"
            << "  full: " << verdict.full << "\n"
            << "  faithful: " << verdict.faithful << "\n"
            << "  essentially surjective: " << verdict.ess_surjective << "\n"
            << "  stack condition: " << (verdict.holds ? "holds" : "fails") << "\n";
  return 0;
}
