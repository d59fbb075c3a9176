#include <qsorter/cascade.hpp>

namespace qsorter {

CascadeComparison cascade_comparison(Index d) {
  if (d < 2) throw std::invalid_argument("compare-cascade: d must be >= 2");

  CascadeComparison c;
  c.d = d;
  c.sorter_dove_prisms = d;
  c.sorter_max_beamsplitters_per_fourier = d * (d - 1) / 2;

  c.cascade_applicable = (d & (d - 1)) == 0;
  if (c.cascade_applicable) {
    c.cascade_mzis = d - 1;
    c.cascade_dove_prisms = 2 * (d - 1);
    c.cascade_holograms = d / 2 - 1;
  }
  return c;
}

}  // namespace qsorter
