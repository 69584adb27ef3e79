// Poisson kernels two ways: the bilinear sum and its closed form.
#include <qkl/kernels.hpp>

#include <cstdio>
#include <string>

using namespace qkl;

static std::string fmt(const Complex<double>& z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g%+.15gi", z.re, z.im);
  return buf;
}

int main() {
  const double k = 0.8, phi = 1.1;
  std::printf("Meixner-Pollaczek, k=%g phi=%g\n", k, phi);
  for (double t : {0.1, 0.4, 0.7}) {
    KernelPoint<double> pt;
    pt.t = Complex<double>(t, 0.1);
    pt.x = 0.3;
    pt.y = -1.2;
    auto s = mp_kernel_sum(k, phi, pt);
    auto c = mp_kernel_closed(k, phi, pt);
    std::printf("  t=%-18s sum=%-44s closed=%-44s terms=%zu\n", fmt(pt.t).c_str(), fmt(s.value).c_str(),
                fmt(c).c_str(), s.terms_used);
  }

  const double ka = 0.6, q = 0.5;
  std::printf("Al-Salam-Chihara, k=%g q=%g\n", ka, q);
  for (double t : {0.2, 0.45}) {
    KernelPoint<double> pt;
    pt.t = Complex<double>(t);
    pt.x = 0.25;
    pt.y = -0.6;
    auto s = ac_kernel_sum(ka, q, pt);
    std::printf("  t=%-5g sum=%s\n        closed=%s\n        alt=%s\n", t, fmt(s.value).c_str(),
                fmt(ac_kernel_closed(ka, q, pt)).c_str(), fmt(ac_kernel_closed_alt(ka, q, pt)).c_str());
  }
}
