// Exact rational checks of the 2F1 multiplication formula and the discrete
// Hahn bilinear sum.
#include <qkl/exact.hpp>

#include <iostream>

using namespace qkl::exact;

int main() {
  for (const auto& s : default_mult_sets()) {
    auto v = verify_mult_2f1_exact(s.a, s.b, s.c, s.ap, s.bp, s.cp, 8);
    std::cout << s.name << ": " << (v.equal ? "equal" : "DIFFERENT") << " (" << v.coefficients_checked
              << " coefficients)\n";
  }
  std::cout << "C_j for a=-1, b=1, c=1 (both factors):";
  for (std::size_t j = 0; j < 4; ++j) {
    auto cj = c_j_printed(j, GR(-1), GR(1), GR(1), GR(-1), GR(1), GR(1));
    std::cout << " " << cj.re.get_str();
  }
  std::cout << "\n";
  for (const auto& s : default_hahn_sets()) {
    auto v = verify_hahn_lattice(s);
    auto bad = verify_hahn_lattice(s, true);
    std::cout << s.name << ": " << v.points << " lattice points, " << (v.all_equal ? "all equal" : "mismatch")
              << "; without 1/j!: " << bad.failing.size() << " failing\n";
  }
}
