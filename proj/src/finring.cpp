#include "kts/finring.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "kts/errors.hpp"

namespace kts {

std::vector<PrimePower> components_of(int64_t n) {
  if (n < 1) throw PreconditionError("components_of: n must be positive");
  std::vector<PrimePower> out;
  for (int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    PrimePower pp{p, 0, 1};
    while (n % p == 0) {
      n /= p;
      ++pp.exponent;
      pp.value *= p;
    }
    out.push_back(pp);
  }
  if (n > 1) out.push_back({n, 1, n});
  std::sort(out.begin(), out.end(), [](const PrimePower& a, const PrimePower& b) { return a.value < b.value; });
  return out;
}

int64_t gcd64(int64_t a, int64_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

int64_t coprime_part(int64_t n, int64_t m) {
  for (int64_t g = gcd64(n, m); g > 1; g = gcd64(n, m)) n /= g;
  return n;
}

namespace {

using Poly = std::vector<int>;  // low degree first

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo a monic b over Z_p.
Poly poly_mod(Poly a, const Poly& b, int p) {
  trim(a);
  const size_t db = b.size() - 1;
  while (a.size() > db) {
    const int c = a.back();
    const size_t shift = a.size() - 1 - db;
    for (size_t i = 0; i <= db; ++i) a[shift + i] = ((a[shift + i] - c * b[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

bool has_monic_factor_of_degree(const Poly& f, int d, int p) {
  Poly g(d + 1, 0);
  g[d] = 1;
  int64_t count = 1;
  for (int i = 0; i < d; ++i) count *= p;
  for (int64_t code = 0; code < count; ++code) {
    int64_t c = code;
    for (int i = 0; i < d; ++i) {
      g[i] = static_cast<int>(c % p);
      c /= p;
    }
    if (poly_mod(f, g, p).empty()) return true;
  }
  return false;
}

bool is_irreducible(const Poly& f, int p) {
  const int k = static_cast<int>(f.size()) - 1;
  for (int d = 1; 2 * d <= k; ++d)
    if (has_monic_factor_of_degree(f, d, p)) return false;
  return true;
}

}  // namespace

std::vector<int> least_irreducible(int p, int k) {
  if (k == 1) return {0};
  int64_t count = 1;
  for (int i = 0; i < k; ++i) count *= p;
  // Codes enumerate (a0, ..., a_{k-1}) with a0 most significant.
  for (int64_t code = 0; code < count; ++code) {
    Poly f(k + 1, 0);
    f[k] = 1;
    int64_t c = code;
    for (int i = k - 1; i >= 0; --i) {
      f[i] = static_cast<int>(c % p);
      c /= p;
    }
    if (f[0] == 0) continue;
    if (is_irreducible(f, p)) return {f.begin(), f.end() - 1};
  }
  throw DataError("least_irreducible: none found");
}

Field::Field(int p, int k) : p_(p), k_(k) {
  if (p < 2 || k < 1) throw PreconditionError("Field: invalid characteristic or degree");
  q_ = 1;
  pow_p_.assign(k, 1);
  for (int i = 0; i < k; ++i) q_ *= p;
  for (int i = k - 1, w = 1; i >= 0; --i, w *= p) pow_p_[i] = w;
  one_ = pow_p_[0];
  modulus_ = least_irreducible(p, k);

  exp_.assign(q_ - 1, 0);
  log_.assign(q_, -1);
  if (q_ == 2) {
    primitive_ = one_;
    exp_[0] = one_;
    log_[one_] = 0;
    return;
  }
  for (int g = 1; g < q_; ++g) {
    int x = one_;
    int ord = 0;
    do {
      x = mul_slow(x, g);
      ++ord;
    } while (x != one_ && ord < q_);
    if (ord == q_ - 1) {
      primitive_ = g;
      break;
    }
  }
  int x = one_;
  for (int i = 0; i < q_ - 1; ++i) {
    exp_[i] = x;
    log_[x] = i;
    x = mul_slow(x, primitive_);
  }
}

std::vector<int> Field::digits(int a) const {
  std::vector<int> d(k_);
  for (int i = 0; i < k_; ++i) d[i] = (a / pow_p_[i]) % p_;
  return d;
}

int Field::from_digits(std::span<const int> d) const {
  if (static_cast<int>(d.size()) != k_) throw PreconditionError("Field::from_digits: wrong length");
  int a = 0;
  for (int i = 0; i < k_; ++i) a += (((d[i] % p_) + p_) % p_) * pow_p_[i];
  return a;
}

int Field::mul_slow(int a, int b) const {
  const auto da = digits(a);
  const auto db = digits(b);
  Poly prod(2 * k_ - 1, 0);
  for (int i = 0; i < k_; ++i)
    for (int j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
  Poly mod(modulus_.begin(), modulus_.end());
  mod.push_back(1);
  Poly r = poly_mod(prod, mod, p_);
  r.resize(k_, 0);
  return from_digits(r);
}

int Field::from_integer(int64_t v) const {
  const int64_t r = ((v % p_) + p_) % p_;
  return static_cast<int>(r) * one_;
}

int Field::add(int a, int b) const {
  if (k_ == 1) return (a + b) % p_;
  int r = 0;
  for (int i = 0; i < k_; ++i) r += (((a / pow_p_[i]) + (b / pow_p_[i])) % p_) * pow_p_[i];
  return r;
}

int Field::neg(int a) const {
  if (k_ == 1) return a ? p_ - a : 0;
  int r = 0;
  for (int i = 0; i < k_; ++i) r += ((p_ - (a / pow_p_[i]) % p_) % p_) * pow_p_[i];
  return r;
}

int Field::sub(int a, int b) const { return add(a, neg(b)); }

int Field::mul(int a, int b) const {
  if (a == 0 || b == 0) return 0;
  int e = log_[a] + log_[b];
  if (e >= q_ - 1) e -= q_ - 1;
  return exp_[e];
}

int Field::inv(int a) const {
  if (a == 0) throw PreconditionError("Field::inv: zero");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

int Field::exp(int64_t e) const {
  const int64_t m = q_ - 1;
  return exp_[((e % m) + m) % m];
}

int Field::pow(int a, int64_t e) const {
  if (a == 0) {
    if (e < 0) throw PreconditionError("Field::pow: zero to negative power");
    return e == 0 ? one_ : 0;
  }
  return exp(static_cast<int64_t>(log_[a]) * (e % (q_ - 1)));
}

bool Field::is_square(int a) const {
  if (a == 0) return false;
  return p_ == 2 || log_[a] % 2 == 0;
}

int Field::multiplicative_order(int a) const {
  if (a == 0) throw PreconditionError("Field::multiplicative_order: zero");
  const int m = q_ - 1;
  return m / static_cast<int>(gcd64(m, log_[a]));
}

std::vector<int> Field::squares() const {
  std::vector<int> out;
  for (int a = 1; a < q_; ++a)
    if (is_square(a)) out.push_back(a);
  return out;
}

std::vector<int> Field::nonsquares() const {
  std::vector<int> out;
  for (int a = 1; a < q_; ++a)
    if (!is_square(a)) out.push_back(a);
  return out;
}

namespace {

std::shared_ptr<const Field> build_field(int p, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const Field>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{p, k}];
  if (!slot) slot = std::make_shared<const Field>(p, k);
  return slot;
}

}  // namespace

Ring::Ring(int64_t n) : n_(n) {
  if (n < 1 || n % 2 == 0) throw PreconditionError("Ring: n must be a positive odd integer, got " + std::to_string(n));
  for (const auto& pp : components_of(n)) {
    components_.push_back(pp.value);
    fields_.push_back(build_field(static_cast<int>(pp.prime), pp.exponent));
  }
}

RingElement Ring::zero() const { return RingElement(arity(), 0); }

RingElement Ring::one() const {
  RingElement r(arity());
  for (size_t i = 0; i < arity(); ++i) r[i] = fields_[i]->one();
  return r;
}

RingElement Ring::from_integer(int64_t v) const {
  RingElement r(arity());
  for (size_t i = 0; i < arity(); ++i) r[i] = fields_[i]->from_integer(v);
  return r;
}

RingElement Ring::add(const RingElement& a, const RingElement& b) const {
  RingElement r(arity());
  for (size_t i = 0; i < arity(); ++i) r[i] = fields_[i]->add(a[i], b[i]);
  return r;
}

RingElement Ring::sub(const RingElement& a, const RingElement& b) const {
  RingElement r(arity());
  for (size_t i = 0; i < arity(); ++i) r[i] = fields_[i]->sub(a[i], b[i]);
  return r;
}

RingElement Ring::neg(const RingElement& a) const {
  RingElement r(arity());
  for (size_t i = 0; i < arity(); ++i) r[i] = fields_[i]->neg(a[i]);
  return r;
}

RingElement Ring::mul(const RingElement& a, const RingElement& b) const {
  RingElement r(arity());
  for (size_t i = 0; i < arity(); ++i) r[i] = fields_[i]->mul(a[i], b[i]);
  return r;
}

RingElement Ring::inv(const RingElement& a) const {
  RingElement r(arity());
  for (size_t i = 0; i < arity(); ++i) r[i] = fields_[i]->inv(a[i]);
  return r;
}

RingElement Ring::pow(const RingElement& a, int64_t e) const {
  RingElement r(arity());
  for (size_t i = 0; i < arity(); ++i) r[i] = fields_[i]->pow(a[i], e);
  return r;
}

bool Ring::is_zero(const RingElement& a) const {
  return std::all_of(a.begin(), a.end(), [](int c) { return c == 0; });
}

bool Ring::is_unit(const RingElement& a) const {
  return std::all_of(a.begin(), a.end(), [](int c) { return c != 0; });
}

int64_t Ring::unit_order(const RingElement& a) const {
  if (!is_unit(a)) throw PreconditionError("Ring::unit_order: not a unit");
  int64_t l = 1;
  for (size_t i = 0; i < arity(); ++i) {
    const int64_t o = fields_[i]->multiplicative_order(a[i]);
    l = l / gcd64(l, o) * o;
  }
  return l;
}

int64_t Ring::psi() const {
  int64_t r = 1;
  for (auto q : components_) r *= q - 1;
  return r;
}

int64_t Ring::index(const RingElement& a) const {
  int64_t idx = 0;
  for (size_t i = 0; i < arity(); ++i) idx = idx * components_[i] + a[i];
  return idx;
}

RingElement Ring::at(int64_t idx) const {
  RingElement r(arity());
  for (size_t i = arity(); i-- > 0;) {
    r[i] = static_cast<int>(idx % components_[i]);
    idx /= components_[i];
  }
  return r;
}

std::vector<RingElement> Ring::elements() const {
  std::vector<RingElement> out;
  out.reserve(n_);
  for (int64_t i = 0; i < n_; ++i) out.push_back(at(i));
  return out;
}

std::vector<RingElement> Ring::nonzero() const {
  std::vector<RingElement> out;
  out.reserve(n_ - 1);
  for (int64_t i = 1; i < n_; ++i) out.push_back(at(i));
  return out;
}

std::shared_ptr<const Ring> build_ring(int64_t n) {
  static std::mutex mu;
  static std::map<int64_t, std::shared_ptr<const Ring>> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  auto ring = std::make_shared<const Ring>(n);
  std::lock_guard lock(mu);
  return cache.emplace(n, ring).first->second;
}

size_t min_index_choice(std::span<const size_t> subset) { return subset.front(); }

namespace {

// Union over nonempty I of the products S_j(I); chosen(j) is the set used at j = c(I).
std::vector<RingElement> assemble_subsets(const Ring& ring, const IndexChoice& choice,
                                          const std::vector<std::vector<int>>& chosen) {
  const size_t w = ring.arity();
  std::vector<RingElement> out;
  for (uint64_t mask = 1; mask < (uint64_t{1} << w); ++mask) {
    std::vector<size_t> members;
    for (size_t j = 0; j < w; ++j)
      if (mask >> j & 1) members.push_back(j);
    const size_t c = choice(members);
    if (!(mask >> c & 1)) throw PreconditionError("halving: c(I) must belong to I");
    std::vector<std::vector<int>> factors(w);
    for (size_t j = 0; j < w; ++j) {
      if (!(mask >> j & 1)) {
        factors[j] = {0};
      } else if (j == c) {
        factors[j] = chosen[j];
      } else {
        for (int a = 1; a < ring.field(j).order(); ++a) factors[j].push_back(a);
      }
    }
    std::vector<size_t> pos(w, 0);
    for (bool more = true; more;) {
      RingElement cur(w);
      for (size_t j = 0; j < w; ++j) cur[j] = factors[j][pos[j]];
      out.push_back(std::move(cur));
      more = false;
      for (size_t j = w; j-- > 0;) {
        if (++pos[j] < factors[j].size()) {
          more = true;
          break;
        }
        pos[j] = 0;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<RingElement> halving(const Ring& ring, const IndexChoice& choice) {
  std::vector<std::vector<int>> sq(ring.arity());
  for (size_t j = 0; j < ring.arity(); ++j) sq[j] = ring.field(j).squares();
  return assemble_subsets(ring, choice, sq);
}

UnitOrbitSystem semiregular_system(const Ring& ring, int lambda, const std::optional<RingElement>& u) {
  if (lambda < 1) throw PreconditionError("semiregular_system: lambda must be positive");
  for (auto q : ring.components())
    if ((q - 1) % lambda != 0)
      throw PreconditionError("semiregular_system: component " + std::to_string(q) + " is not 1 mod " +
                              std::to_string(lambda));
  const size_t w = ring.arity();
  UnitOrbitSystem sys;
  sys.lambda = lambda;
  if (u) {
    if (u->size() != w) throw PreconditionError("semiregular_system: override has wrong arity");
    sys.u = *u;
  } else {
    sys.u.assign(w, 0);
    for (size_t i = 0; i < w; ++i) {
      const Field& f = ring.field(i);
      for (int a = 1; a < f.order(); ++a)
        if (f.multiplicative_order(a) == lambda) {
          sys.u[i] = a;
          break;
        }
    }
  }
  for (int j = 0; j < lambda; ++j) sys.cyclic.push_back(ring.pow(sys.u, j));

  std::vector<std::vector<int>> t_sets(w), sigma_t(w);
  sys.stabilizer = {ring.one()};
  for (size_t i = 0; i < w; ++i) {
    const Field& f = ring.field(i);
    const int64_t m = f.order() - 1;
    const int64_t t = coprime_part(m, lambda);
    for (int64_t e = 0; e < t; ++e) t_sets[i].push_back(f.exp(e * (m / t)));
    if (t > 1) {
      RingElement gen = ring.one();
      gen[i] = f.exp(m / t);
      sys.stabilizer_generators.push_back(gen);
    }
    std::vector<int> tu;
    for (int x : t_sets[i])
      for (int j = 0; j < lambda; ++j) tu.push_back(f.mul(x, f.pow(sys.u[i], j)));
    std::vector<char> covered(f.order(), 0);
    for (int a = 1; a < f.order(); ++a) {
      if (covered[a]) continue;
      for (int y : tu) covered[f.mul(a, y)] = 1;
      for (int x : t_sets[i]) sigma_t[i].push_back(f.mul(a, x));
    }
    std::sort(sigma_t[i].begin(), sigma_t[i].end());
    std::vector<RingElement> next;
    for (const auto& s : sys.stabilizer)
      for (int x : t_sets[i]) {
        RingElement r = s;
        r[i] = f.mul(s[i], x);
        next.push_back(r);
      }
    sys.stabilizer = std::move(next);
  }
  std::sort(sys.stabilizer.begin(), sys.stabilizer.end());
  sys.representatives = w == 0 ? std::vector<RingElement>{} : assemble_subsets(ring, min_index_choice, sigma_t);

  auto problems = check_unit_orbit_system(ring, sys);
  if (!problems.empty()) throw PreconditionError("semiregular_system: " + problems.front());
  return sys;
}

std::vector<std::string> check_unit_orbit_system(const Ring& ring, const UnitOrbitSystem& sys) {
  std::vector<std::string> problems;
  if (ring.order() == 1) return problems;
  if (!ring.is_unit(sys.u) || ring.unit_order(sys.u) != sys.lambda) problems.push_back("u does not have order lambda");
  for (int j = 1; j < sys.lambda; ++j)
    if (!ring.is_unit(ring.sub(ring.pow(sys.u, j), ring.one())))
      problems.push_back("u^" + std::to_string(j) + " - 1 is not a unit");
  if (static_cast<int64_t>(sys.stabilizer.size()) != coprime_part(ring.psi(), sys.lambda))
    problems.push_back("|T| is not the lambda-coprime part of psi(n)");
  const std::set<RingElement> s_set(sys.representatives.begin(), sys.representatives.end());
  for (const auto& t : sys.stabilizer)
    for (const auto& s : sys.representatives)
      if (!s_set.count(ring.mul(t, s))) {
        problems.push_back("T does not leave S invariant");
        goto orbit_check;
      }
orbit_check:
  std::vector<int> hits(ring.order(), 0);
  for (const auto& x : sys.cyclic)
    for (const auto& s : sys.representatives) ++hits[ring.index(ring.mul(x, s))];
  if (hits[0] != 0) problems.push_back("U*S contains zero");
  for (int64_t i = 1; i < ring.order(); ++i)
    if (hits[i] != 1) {
      problems.push_back("U*S does not cover V_n^* exactly once");
      break;
    }
  return problems;
}

}  // namespace kts
