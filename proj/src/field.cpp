#include "agm/field.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <limits>
#include <string>

namespace agm {

namespace {

constexpr std::uint64_t kCharacterTableLimit = std::uint64_t{1} << 17;

using Poly = std::vector<std::uint32_t>;  // low degree first, trimmed

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t result = 1, base = a % p;
  for (std::uint64_t e = p - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

// f mod g, g nonzero.
Poly poly_mod(Poly f, const Poly& g, std::uint32_t p) {
  trim(f);
  const std::size_t dg = g.size() - 1;
  const std::uint64_t lead_inv = inv_mod(g.back(), p);
  while (f.size() >= g.size()) {
    const std::uint64_t c = f.back() * lead_inv % p;
    const std::size_t shift = f.size() - 1 - dg;
    for (std::size_t j = 0; j <= dg; ++j) {
      f[shift + j] = static_cast<std::uint32_t>((f[shift + j] + p - c * g[j] % p) % p);
    }
    trim(f);
  }
  return f;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{a[i]} * b[j]) % p);
    }
  }
  return poly_mod(std::move(prod), m, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& m, std::uint32_t p) {
  Poly result{1};
  base = poly_mod(std::move(base), m, p);
  for (; e > 0; e >>= 1) {
    if (e & 1) result = poly_mulmod(result, base, m, p);
    base = poly_mulmod(base, base, m, p);
  }
  return result;
}

Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::uint64_t checked_pow(std::uint64_t p, unsigned k, std::uint64_t bound) {
  std::uint64_t q = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (q > bound / p) return bound + 1;
    q *= p;
  }
  return q;
}

}  // namespace

std::string_view to_string(ModClass mc) {
  switch (mc) {
    case ModClass::three_mod_4: return "3mod4";
    case ModClass::five_mod_8: return "5mod8";
    case ModClass::one_mod_8: return "1mod8";
  }
  return "?";
}

ModClass mod_class_of(std::uint64_t q) {
  if (q % 4 == 3) return ModClass::three_mod_4;
  if (q % 8 == 5) return ModClass::five_mod_8;
  return ModClass::one_mod_8;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::optional<std::pair<std::uint64_t, unsigned>> prime_power_decomposition(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  const auto factors = prime_factors(q);
  if (factors.size() != 1) return std::nullopt;
  unsigned k = 0;
  for (std::uint64_t r = q; r > 1; r /= factors[0]) ++k;
  return std::pair{factors[0], k};
}

bool is_irreducible(std::span<const std::uint32_t> monic, std::uint32_t p) {
  Poly f(monic.begin(), monic.end());
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t k = f.size() - 1;
  if (k == 1) return true;
  // Ben-Or: f has no factor of degree i <= k/2 iff gcd(f, x^(p^i) - x) = 1 for each i.
  Poly h{0, 1};
  for (std::size_t i = 1; i <= k / 2; ++i) {
    h = poly_powmod(h, p, f, p);
    Poly diff = h;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    if (diff.empty()) return false;
    if (poly_gcd(f, diff, p).size() > 1) return false;
  }
  return true;
}

std::vector<std::uint32_t> smallest_irreducible(std::uint32_t p, unsigned k) {
  if (k == 1) return {0, 1};
  // Constant term first in lexicographic order: digit i of the counter is the
  // coefficient of x^i, with the constant term as the most significant digit.
  std::vector<std::uint32_t> digits(k, 0);
  while (true) {
    Poly f(k + 1, 0);
    for (unsigned i = 0; i < k; ++i) f[i] = digits[i];
    f[k] = 1;
    if (is_irreducible(f, p)) return f;
    int pos = static_cast<int>(k) - 1;
    while (pos >= 0 && ++digits[pos] == p) {
      digits[pos] = 0;
      --pos;
    }
    if (pos < 0) throw FieldError("no irreducible polynomial found");
  }
}

FieldCtx FieldCtx::create(std::uint64_t p, unsigned k, std::uint64_t bound) {
  if (k < 1) throw FieldError("extension degree must be at least 1");
  if (p == 2) throw FieldError("characteristic 2 is not supported");
  if (!is_prime(p)) throw FieldError("characteristic " + std::to_string(p) + " is not prime");
  if (k > kMaxDegree) throw FieldBoundError("extension degree exceeds " + std::to_string(kMaxDegree));
  bound = std::min<std::uint64_t>(bound, std::numeric_limits<std::uint32_t>::max());
  const std::uint64_t q = checked_pow(p, k, bound);
  if (q > bound) {
    throw FieldBoundError("field order " + std::to_string(p) + "^" + std::to_string(k) +
                          " exceeds bound " + std::to_string(bound));
  }

  FieldCtx ctx;
  ctx.p_ = static_cast<std::uint32_t>(p);
  ctx.k_ = k;
  ctx.q_ = static_cast<std::uint32_t>(q);
  ctx.mod_class_ = mod_class_of(q);
  ctx.modulus_ = smallest_irreducible(ctx.p_, k);
  ctx.inv2_ = ctx.from_int((static_cast<std::int64_t>(p) + 1) / 2);

  ctx.odd_part_ = q - 1;
  while (ctx.odd_part_ % 2 == 0) {
    ctx.odd_part_ /= 2;
    ++ctx.two_adicity_;
  }
  ctx.group_order_primes_ = prime_factors(q - 1);

  if (q <= kCharacterTableLimit) {
    ctx.character_.assign(q, 0);
    for (std::uint32_t i = 1; i < q; ++i) ctx.character_[i] = static_cast<std::int8_t>(ctx.euler_criterion({i}));
  }

  for (std::uint32_t i = 1; i < q; ++i) {
    if (ctx.quadratic_character({i}) == -1) {
      ctx.nonresidue_power_ = ctx.pow({i}, ctx.odd_part_);
      break;
    }
  }
  for (std::uint32_t i = 1; i < q; ++i) {
    if (ctx.is_generator({i})) {
      ctx.generator_ = {i};
      break;
    }
  }
  return ctx;
}

FieldCtx FieldCtx::from_order(std::uint64_t q, std::uint64_t bound) {
  const auto pk = prime_power_decomposition(q);
  if (!pk) throw FieldError(std::to_string(q) + " is not a prime power");
  if (pk->first == 2) throw FieldError("characteristic 2 is not supported");
  if (q > bound) throw FieldBoundError("field order " + std::to_string(q) + " exceeds bound " + std::to_string(bound));
  return create(pk->first, pk->second, bound);
}

FieldElement FieldCtx::element(std::uint64_t index) const {
  if (index >= q_) throw FieldError("element index " + std::to_string(index) + " out of range");
  return {static_cast<std::uint32_t>(index)};
}

FieldElement FieldCtx::from_int(std::int64_t n) const {
  const std::int64_t p = p_;
  return {static_cast<std::uint32_t>(((n % p) + p) % p)};
}

std::vector<std::uint32_t> FieldCtx::coeffs(FieldElement x) const {
  std::vector<std::uint32_t> out(k_);
  std::uint32_t r = x.index;
  for (unsigned i = 0; i < k_; ++i) {
    out[i] = r % p_;
    r /= p_;
  }
  return out;
}

FieldElement FieldCtx::from_coeffs(std::span<const std::uint32_t> c) const {
  if (c.size() != k_) throw FieldError("expected " + std::to_string(k_) + " coefficients");
  std::uint64_t index = 0;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] >= p_) throw FieldError("coefficient out of range");
    index = index * p_ + c[i];
  }
  return {static_cast<std::uint32_t>(index)};
}

FieldElement FieldCtx::add(FieldElement x, FieldElement y) const {
  if (k_ == 1) {
    const std::uint32_t s = x.index + y.index;
    return {s >= p_ ? s - p_ : s};
  }
  std::uint32_t a = x.index, b = y.index, out = 0, place = 1;
  for (unsigned i = 0; i < k_; ++i) {
    std::uint32_t s = a % p_ + b % p_;
    if (s >= p_) s -= p_;
    out += s * place;
    a /= p_;
    b /= p_;
    place *= p_;
  }
  return {out};
}

FieldElement FieldCtx::neg(FieldElement x) const {
  if (k_ == 1) return {x.index == 0 ? 0 : p_ - x.index};
  std::uint32_t a = x.index, out = 0, place = 1;
  for (unsigned i = 0; i < k_; ++i) {
    const std::uint32_t c = a % p_;
    out += (c == 0 ? 0 : p_ - c) * place;
    a /= p_;
    place *= p_;
  }
  return {out};
}

FieldElement FieldCtx::sub(FieldElement x, FieldElement y) const { return add(x, neg(y)); }

FieldElement FieldCtx::mul(FieldElement x, FieldElement y) const {
  if (k_ == 1) return {static_cast<std::uint32_t>(std::uint64_t{x.index} * y.index % p_)};
  std::array<std::uint64_t, kMaxDegree> a{}, b{};
  std::array<std::uint64_t, 2 * kMaxDegree> prod{};
  std::uint32_t ra = x.index, rb = y.index;
  for (unsigned i = 0; i < k_; ++i) {
    a[i] = ra % p_;
    b[i] = rb % p_;
    ra /= p_;
    rb /= p_;
  }
  for (unsigned i = 0; i < k_; ++i) {
    if (a[i] == 0) continue;
    for (unsigned j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p_;
  }
  // x^k = -(m_0 + ... + m_{k-1} x^{k-1})
  for (unsigned i = 2 * k_ - 2; i >= k_; --i) {
    const std::uint64_t c = prod[i];
    if (c == 0) continue;
    prod[i] = 0;
    for (unsigned j = 0; j < k_; ++j) {
      prod[i - k_ + j] = (prod[i - k_ + j] + (p_ - c) * modulus_[j]) % p_;
    }
  }
  std::uint64_t index = 0;
  for (unsigned i = k_; i-- > 0;) index = index * p_ + prod[i];
  return {static_cast<std::uint32_t>(index)};
}

FieldElement FieldCtx::pow(FieldElement x, std::uint64_t e) const {
  FieldElement result = one();
  for (; e > 0; e >>= 1) {
    if (e & 1) result = mul(result, x);
    x = mul(x, x);
  }
  return result;
}

FieldElement FieldCtx::inv(FieldElement x) const {
  if (x.index == 0) throw FieldError("inversion of zero");
  return pow(x, q_ - 2);
}

int FieldCtx::euler_criterion(FieldElement x) const {
  if (x.index == 0) throw FieldError("quadratic character of zero");
  const FieldElement r = pow(x, (q_ - 1) / 2);
  return r == one() ? 1 : -1;
}

int FieldCtx::quadratic_character(FieldElement x) const {
  if (x.index == 0) throw FieldError("quadratic character of zero");
  if (!character_.empty()) return character_[x.index];
  return euler_criterion(x);
}

std::optional<SquareRoots> FieldCtx::tonelli_shanks(FieldElement x) const {
  if (x.index == 0) return SquareRoots{zero(), zero()};
  if (quadratic_character(x) != 1) return std::nullopt;
  unsigned m = two_adicity_;
  FieldElement c = nonresidue_power_;
  FieldElement t = pow(x, odd_part_);
  FieldElement r = pow(x, (odd_part_ + 1) / 2);
  while (t != one()) {
    unsigned i = 0;
    for (FieldElement t2 = t; t2 != one(); t2 = mul(t2, t2)) ++i;
    FieldElement b = c;
    for (unsigned j = 0; j + i + 1 < m; ++j) b = mul(b, b);
    r = mul(r, b);
    c = mul(b, b);
    t = mul(t, c);
    m = i;
  }
  const FieldElement s = neg(r);
  return r < s ? SquareRoots{r, s} : SquareRoots{s, r};
}

std::optional<SquareRoots> FieldCtx::sqrt(FieldElement x) const {
  if (mod_class_ != ModClass::three_mod_4 || x.index == 0) return tonelli_shanks(x);
  if (quadratic_character(x) != 1) return std::nullopt;
  const FieldElement r = pow(x, (std::uint64_t{q_} + 1) / 4);
  const FieldElement s = neg(r);
  return r < s ? SquareRoots{r, s} : SquareRoots{s, r};
}

FieldElement FieldCtx::signed_sqrt(FieldElement x, int sign) const {
  if (mod_class_ != ModClass::three_mod_4) throw FieldError("signed square root requires q = 3 mod 4");
  if (sign != 1 && sign != -1) throw FieldError("sign must be +1 or -1");
  if (x.index == 0 || quadratic_character(x) != 1) throw FieldError("signed square root of a non-square");
  const auto roots = sqrt(x);
  return quadratic_character(roots->low) == sign ? roots->low : roots->high;
}

bool FieldCtx::is_generator(FieldElement g) const {
  if (g.index == 0) return false;
  for (std::uint64_t r : group_order_primes_) {
    if (pow(g, (q_ - 1) / r) == one()) return false;
  }
  return true;
}

std::string FieldCtx::format(FieldElement x) const {
  if (k_ == 1) return std::to_string(x.index);
  std::string out;
  const auto c = coeffs(x);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(c[i]);
  }
  return out;
}

FieldElement FieldCtx::parse(std::string_view text) const {
  std::vector<std::uint32_t> c;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string_view part = text.substr(start, comma == std::string_view::npos ? text.size() - start : comma - start);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty()) {
      throw FieldError("malformed field element '" + std::string(text) + "'");
    }
    if (v <= -static_cast<std::int64_t>(p_) || v >= static_cast<std::int64_t>(p_)) {
      throw FieldError("coefficient " + std::to_string(v) + " out of range for p = " + std::to_string(p_));
    }
    c.push_back(from_int(v).index);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (c.size() != k_) {
    throw FieldError("expected " + std::to_string(k_) + " comma-separated coefficients, got '" + std::string(text) + "'");
  }
  return from_coeffs(c);
}

}  // namespace agm
