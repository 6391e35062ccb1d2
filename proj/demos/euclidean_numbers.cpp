// Arithmetic with infinitesimals truncated at order 4.

#include <cstdio>

#include "hfqm/euclidean_scalar.hpp"

using hfqm::EuclideanScalar;

int main() {
  const auto eps = EuclideanScalar::epsilon();
  const EuclideanScalar one(1.0);
  auto show = [](const char* label, const EuclideanScalar& a) {
    const auto st = hfqm::standard_part(a);
    std::printf("%-16s = %-34s st = %s\n", label, a.to_string().c_str(),
                st.is_finite() ? std::to_string(st.value).c_str() : (st.value > 0 ? "+inf" : "-inf"));
  };
  show("eps", eps);
  show("1/eps", one / eps);
  show("(1 + eps)^2", (one + eps) * (one + eps));
  show("1/(1 + eps)", one / (one + eps));
  show("1/(eps - eps^2)", one / (eps - eps * eps));
  std::printf("eps < 1e-300: %s, 1/eps > 1e300: %s\n", eps < EuclideanScalar(1e-300) ? "yes" : "no",
              one / eps > EuclideanScalar(1e300) ? "yes" : "no");
  try {
    auto tiny = one / (eps * eps * eps);
    show("1/eps^3", tiny);
    show("1/eps^6", tiny * tiny);
  } catch (const hfqm::ExponentUnderflow& e) {
    std::printf("1/eps^6 leaves the truncation window: %s\n", e.what());
  }
}
