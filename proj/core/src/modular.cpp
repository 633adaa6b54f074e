#include "padicrmt/modular.hpp"

namespace padicrmt {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Modulus::Modulus(std::uint32_t p, int N) : p_(p), N_(N) {
  if (!is_prime(p)) throw InvalidParams("p must be prime, got " + std::to_string(p));
  if (N < 1) throw InvalidParams("precision N must be positive");
  pows_[0] = 1;
  for (int k = 1; k <= N; ++k) {
    if (k >= static_cast<int>(pows_.size()) || pows_[k - 1] * p >= kMaxModulus)
      throw InvalidParams("p^N too large: p=" + std::to_string(p) + " N=" + std::to_string(N));
    pows_[k] = pows_[k - 1] * p;
  }
}

std::uint64_t Modulus::pow(std::uint64_t a, std::uint64_t e) const {
  std::uint64_t r = 1 % pN();
  a %= pN();
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t Modulus::inv(std::uint64_t a) const {
  if (!is_unit(a)) throw InvalidParams("division by a non-unit");
  std::int64_t r0 = static_cast<std::int64_t>(pN()), r1 = static_cast<std::int64_t>(a % pN());
  std::int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  return reduce(s0);
}

void require_same(const Modulus& a, const Modulus& b) {
  if (a != b)
    throw MixedModulus("operands over Z/" + std::to_string(a.p()) + "^" + std::to_string(a.N()) +
                       " and Z/" + std::to_string(b.p()) + "^" + std::to_string(b.N()));
}

}  // namespace padicrmt
