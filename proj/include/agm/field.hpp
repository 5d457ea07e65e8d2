#pragma once

// Finite fields F_q, q = p^k odd, with elements encoded as integer indices.
//
// An element of F_p[x]/(f) with coefficients c_0 + c_1 x + ... + c_{k-1} x^{k-1}
// is stored as the index c_0 + c_1 p + ... + c_{k-1} p^{k-1}. For k = 1 the
// index is the residue itself.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace agm {

/// Residue class of q that decides which AGM semantics apply.
enum class ModClass : std::uint8_t { three_mod_4, five_mod_8, one_mod_8 };

std::string_view to_string(ModClass mc);
ModClass mod_class_of(std::uint64_t q);

class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when q exceeds the configured arithmetic bound.
class FieldBoundError : public FieldError {
 public:
  using FieldError::FieldError;
};

struct FieldElement {
  std::uint32_t index = 0;

  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;
};

/// The two square roots {y, -y} of a square, ordered by index. For x = 0 both are 0.
struct SquareRoots {
  FieldElement low;
  FieldElement high;

  bool single() const { return low == high; }
};

inline constexpr std::uint64_t kDefaultFieldBound = std::uint64_t{1} << 20;
inline constexpr unsigned kMaxDegree = 32;

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// Returns (p, k) with q = p^k, or nullopt if q is not a prime power.
std::optional<std::pair<std::uint64_t, unsigned>> prime_power_decomposition(std::uint64_t q);

/// Monic polynomial test over F_p; `monic` holds coefficients low degree first,
/// leading 1 included.
bool is_irreducible(std::span<const std::uint32_t> monic, std::uint32_t p);

/// Lexicographically smallest monic irreducible of degree k over F_p, compared
/// coefficient by coefficient starting from the constant term.
std::vector<std::uint32_t> smallest_irreducible(std::uint32_t p, unsigned k);

class FieldCtx {
 public:
  /// Builds F_{p^k}. Throws FieldError for bad (p, k), FieldBoundError above `bound`.
  static FieldCtx create(std::uint64_t p, unsigned k, std::uint64_t bound = kDefaultFieldBound);
  /// Factors q and builds the field.
  static FieldCtx from_order(std::uint64_t q, std::uint64_t bound = kDefaultFieldBound);

  std::uint32_t characteristic() const { return p_; }
  unsigned degree() const { return k_; }
  std::uint32_t order() const { return q_; }
  ModClass mod_class() const { return mod_class_; }
  bool is_prime_field() const { return k_ == 1; }
  /// Monic reduction polynomial, low degree first (x - 0 placeholder when k = 1).
  const std::vector<std::uint32_t>& reduction_poly() const { return modulus_; }

  FieldElement zero() const { return {0}; }
  FieldElement one() const { return {1}; }
  /// Element with the given index; throws if index >= q.
  FieldElement element(std::uint64_t index) const;
  /// The image of an integer under Z -> F_p -> F_q.
  FieldElement from_int(std::int64_t n) const;
  std::vector<std::uint32_t> coeffs(FieldElement x) const;
  FieldElement from_coeffs(std::span<const std::uint32_t> coeffs) const;

  FieldElement add(FieldElement x, FieldElement y) const;
  FieldElement sub(FieldElement x, FieldElement y) const;
  FieldElement neg(FieldElement x) const;
  FieldElement mul(FieldElement x, FieldElement y) const;
  FieldElement inv(FieldElement x) const;
  FieldElement half(FieldElement x) const { return mul(x, inv2_); }
  FieldElement pow(FieldElement x, std::uint64_t e) const;

  /// Euler's criterion x^((q-1)/2) mapped to +1/-1. Throws for x = 0.
  int euler_criterion(FieldElement x) const;
  /// Quadratic character; served from a table filled by euler_criterion.
  int quadratic_character(FieldElement x) const;
  bool is_square(FieldElement x) const { return x.index == 0 || quadratic_character(x) == 1; }

  /// Both square roots, or nullopt for a non-square.
  std::optional<SquareRoots> sqrt(FieldElement x) const;
  /// Tonelli-Shanks, used by sqrt for every q other than q = 3 mod 4.
  std::optional<SquareRoots> tonelli_shanks(FieldElement x) const;
  /// For q = 3 mod 4: the root y of x with character `sign`.
  FieldElement signed_sqrt(FieldElement x, int sign) const;

  /// Generator of F_q^x with smallest index.
  FieldElement primitive_element() const { return generator_; }
  bool is_generator(FieldElement g) const;

  /// "a" for k = 1, "c0,c1,...,c_{k-1}" otherwise.
  std::string format(FieldElement x) const;
  /// Inverse of format. Throws FieldError on malformed input.
  FieldElement parse(std::string_view text) const;

 private:
  FieldCtx() = default;

  std::uint32_t p_ = 0;
  unsigned k_ = 0;
  std::uint32_t q_ = 0;
  ModClass mod_class_ = ModClass::three_mod_4;
  std::vector<std::uint32_t> modulus_;
  FieldElement inv2_{};
  FieldElement generator_{};
  // Tonelli-Shanks: q - 1 = 2^two_adicity_ * odd_part_.
  unsigned two_adicity_ = 0;
  std::uint64_t odd_part_ = 0;
  FieldElement nonresidue_power_{};  // z^odd_part_ for the smallest non-residue z
  std::vector<std::uint64_t> group_order_primes_;
  std::vector<std::int8_t> character_;
};

}  // namespace agm
