#pragma once

// Exact arithmetic in F_n, the direct product of the finite fields whose
// orders are the maximal prime-power divisors ("components") of an odd n.
//
// Field elements are small integers 0..q-1. For q = p^k with k > 1 the
// integer is the coefficient vector (a0, a1, ..., a_{k-1}) of
// a0 + a1 x + ... read as a base-p number with a0 as the MOST significant
// digit, so integer order coincides with the low-degree-first lexicographic
// order used for every "least element" choice in this library.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kts {

struct PrimePower {
  int64_t prime;
  int exponent;
  int64_t value;
};

// Prime factorisation grouped into components, increasing order.
std::vector<PrimePower> components_of(int64_t n);

int64_t gcd64(int64_t a, int64_t b);

// Largest divisor of n coprime with m.
int64_t coprime_part(int64_t n, int64_t m);

class Field {
 public:
  // Builds GF(p^k) over the lexicographically least monic irreducible.
  Field(int p, int k);

  int characteristic() const { return p_; }
  int degree() const { return k_; }
  int order() const { return q_; }
  // Low coefficients a0..a_{k-1} of the monic modulus x^k + ... .
  const std::vector<int>& modulus() const { return modulus_; }

  int zero() const { return 0; }
  int one() const { return one_; }
  int from_integer(int64_t v) const;

  int add(int a, int b) const;
  int sub(int a, int b) const;
  int neg(int a) const;
  int mul(int a, int b) const;
  int inv(int a) const;
  int div(int a, int b) const { return mul(a, inv(b)); }
  int pow(int a, int64_t e) const;

  bool is_square(int a) const;  // nonzero square
  int log(int a) const { return log_[a]; }
  int exp(int64_t e) const;
  int primitive() const { return primitive_; }
  int multiplicative_order(int a) const;

  std::vector<int> squares() const;     // F_q^□, increasing
  std::vector<int> nonsquares() const;  // increasing

  std::vector<int> digits(int a) const;  // a0..a_{k-1}
  int from_digits(std::span<const int> d) const;

 private:
  int mul_slow(int a, int b) const;

  int p_;
  int k_;
  int q_;
  int one_;
  int primitive_ = 0;
  std::vector<int> modulus_;
  std::vector<int> pow_p_;  // pow_p_[i] = weight of coefficient a_i
  std::vector<int> exp_;    // exp_[i] = g^i, i < q-1
  std::vector<int> log_;    // log_[g^i] = i
};

// Lexicographically least (low degree first) monic irreducible of degree k
// over Z_p, returned as its low coefficients a0..a_{k-1}.
std::vector<int> least_irreducible(int p, int k);

using RingElement = std::vector<int>;

class Ring {
 public:
  // n must be odd and positive.
  explicit Ring(int64_t n);

  int64_t order() const { return n_; }
  size_t arity() const { return fields_.size(); }
  const std::vector<int64_t>& components() const { return components_; }
  const Field& field(size_t i) const { return *fields_[i]; }

  RingElement zero() const;
  RingElement one() const;
  RingElement from_integer(int64_t v) const;
  RingElement add(const RingElement& a, const RingElement& b) const;
  RingElement sub(const RingElement& a, const RingElement& b) const;
  RingElement neg(const RingElement& a) const;
  RingElement mul(const RingElement& a, const RingElement& b) const;
  RingElement inv(const RingElement& a) const;
  RingElement pow(const RingElement& a, int64_t e) const;

  bool is_zero(const RingElement& a) const;
  bool is_unit(const RingElement& a) const;
  // Multiplicative order of a unit.
  int64_t unit_order(const RingElement& a) const;

  int64_t psi() const;

  int64_t index(const RingElement& a) const;
  RingElement at(int64_t idx) const;
  std::vector<RingElement> elements() const;
  std::vector<RingElement> nonzero() const;

  std::string name() const { return "F" + std::to_string(n_); }

 private:
  int64_t n_;
  std::vector<int64_t> components_;
  std::vector<std::shared_ptr<const Field>> fields_;
};

// Shared, cached instance; rings are immutable after construction.
std::shared_ptr<const Ring> build_ring(int64_t n);

// c(I): chooses an element of a non-empty index set (given sorted).
using IndexChoice = std::function<size_t(std::span<const size_t>)>;

size_t min_index_choice(std::span<const size_t> subset);

// Halving of F_n^*: (n-1)/2 elements, sorted canonically.
std::vector<RingElement> halving(const Ring& ring, const IndexChoice& choice = min_index_choice);

struct UnitOrbitSystem {
  int lambda = 1;
  RingElement u;                         // unit of order lambda
  std::vector<RingElement> cyclic;       // U = <u>, u^0 first
  std::vector<RingElement> stabilizer;   // T, sorted
  std::vector<RingElement> stabilizer_generators;  // one per nontrivial T_i
  std::vector<RingElement> representatives;        // S, sorted
};

// Builds u, U, T and S for every component = 1 (mod lambda). When `u` is
// given it replaces the default least generator (it is validated).
UnitOrbitSystem semiregular_system(const Ring& ring, int lambda,
                                   const std::optional<RingElement>& u = std::nullopt);

// Checks the three invariants of a unit orbit system; empty on success.
std::vector<std::string> check_unit_orbit_system(const Ring& ring, const UnitOrbitSystem& sys);

}  // namespace kts
