// Walk one extension around the gerbe circle: check the lifting conditions,
// form the fiber product, reduce it to a group, and rebuild the extension
// from its own functor.

#include <iostream>

#include "grpd/extension.hpp"

int main() {
  using namespace grpd;

  auto z4 = share(group_groupoid(cyclic_group(4)));
  auto z2 = share(group_groupoid(cyclic_group(2)));
  auto ext = *validate_extension(z4, z2, {0, 1, 0, 1});

  auto verdict = check_gerbe_conditions(ext.functor());
  std::cout << "Z4 -> Z2: objects_lift=" << verdict.objects_lift
            << " arrows_lift=" << verdict.arrows_lift << " gerbe=" << verdict.gerbe << "\n";

  auto fp = fiber_product_groupoid(ext);
  std::cout << "fiber product: " << fp.groupoid->n_objects() << " objects, "
            << fp.groupoid->n_morphisms() << " arrows, transitive="
            << is_transitive(*fp.groupoid) << "\n";

  auto reduced = transitive_reduction(fp.groupoid, 0);
  std::cout << "isotropy group of the fiber product has order "
            << reduced.isotropy_groupoid->n_morphisms() << "\n";

  auto induced = induced_extension(ext.functor());
  auto witness = induced_roundtrip_witness(ext, *induced);
  std::cout << "round trip Morita-equivalent: "
            << verify_extension_morita(ext, *induced, witness).equivalent << "\n";
  return 0;
}
