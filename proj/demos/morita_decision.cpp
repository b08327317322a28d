// Decide whether two finite groupoids are Morita equivalent and check the
// synthesised span witness.

#include <iostream>

#include "grpd/bibundle.hpp"

int main() {
  using namespace grpd;

  // the pair groupoid on three points vs the one-point groupoid
  auto pairs = share(pair_groupoid(3));
  auto point = share(group_groupoid(trivial_group()));

  auto decision = morita_equivalent(pairs, point);
  std::cout << "pair(3) ~ point: " << (decision.equivalent ? "yes" : "no") << "\n";
  if (decision.witness) {
    auto const& span = *decision.witness->span;
    std::cout << "  span apex: " << span.apex->n_objects() << " objects, "
              << span.apex->n_morphisms() << " arrows\n";
    std::cout << "  legs are Morita morphisms: "
              << (is_morita_morphism(span.to_first).is_morita &&
                          is_morita_morphism(span.to_second).is_morita
                      ? "yes"
                      : "no")
              << "\n";
  }

  // three isolated points vs the point: component counts differ
  auto three = share(discrete_groupoid(3));
  auto negative = morita_equivalent(three, point);
  std::cout << "discrete(3) ~ point: " << (negative.equivalent ? "yes" : "no") << " ("
            << negative.explanation << ")\n";
  return 0;
}
