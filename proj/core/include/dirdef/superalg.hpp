#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dirdef/ratlin.hpp"

namespace dirdef {

inline constexpr std::size_t kMaxEven = 16;
inline constexpr std::size_t kMaxOdd = 64;

enum class EvenKind { Base, Momentum, Fiber };
// Lower/Upper: the dual odd pairs a_alpha, a^alpha. Conj: odd symbol conjugate to an even generator.
enum class OddKind { Lower, Upper, Conj, Plain };

class GeneratorSet {
 public:
  struct Even {
    std::string name;
    EvenKind kind;
  };
  struct Odd {
    std::string name;
    OddKind kind;
    int partner;  // Lower<->Upper odd index, or even index for Conj, -1 for Plain
  };

  GeneratorSet(std::vector<Even> evens, std::vector<Odd> odds);

  // q1..qm, p_1..p_m, a_1..a_k, a^1..a^k
  static std::shared_ptr<const GeneratorSet> rothstein(std::size_t m, std::size_t k);
  // x1..xm, v1..vk and conjugate odd symbols X1..Xm, V1..Vk (coordinate vector fields)
  static std::shared_ptr<const GeneratorSet> schouten(std::size_t m, std::size_t k);
  // x1..xm with odd e1..ek (Grassmann generators of a frame of E*)
  static std::shared_ptr<const GeneratorSet> grassmann(std::size_t m, std::size_t k);
  // polynomial ring x1..xm, no odd part
  static std::shared_ptr<const GeneratorSet> polynomial(std::size_t m, const std::string& prefix = "x");

  std::size_t n_even() const { return evens_.size(); }
  std::size_t n_odd() const { return odds_.size(); }
  const Even& even(std::size_t i) const { return evens_[i]; }
  const Odd& odd(std::size_t j) const { return odds_[j]; }
  int find_even(const std::string& name) const;
  int find_odd(const std::string& name) const;
  bool same_as(const GeneratorSet& o) const;

  // rothstein layout helpers; valid only for the rothstein() set
  std::size_t base_dim() const { return m_; }
  std::size_t pairs() const { return k_; }
  std::size_t q(std::size_t i) const { return i; }
  std::size_t p(std::size_t i) const { return m_ + i; }
  std::size_t lower(std::size_t a) const { return a; }
  std::size_t upper(std::size_t a) const { return k_ + a; }

 private:
  std::vector<Even> evens_;
  std::vector<Odd> odds_;
  std::map<std::string, int> even_idx_, odd_idx_;
  std::size_t m_ = 0, k_ = 0;
};

using GenPtr = std::shared_ptr<const GeneratorSet>;

struct Monomial {
  std::array<std::uint8_t, kMaxEven> e{};
  std::uint64_t odd = 0;

  auto operator<=>(const Monomial&) const = default;
  int odd_degree() const { return __builtin_popcountll(odd); }
  int even_degree() const;
};

class SuperElement {
 public:
  using Terms = std::map<Monomial, Rational>;

  SuperElement() = default;
  explicit SuperElement(GenPtr gs) : gs_(std::move(gs)) {}

  static SuperElement constant(GenPtr gs, const Rational& c);
  static SuperElement even_gen(GenPtr gs, std::size_t i);
  static SuperElement odd_gen(GenPtr gs, std::size_t j);
  static SuperElement monomial(GenPtr gs, const Monomial& m, const Rational& c);
  static SuperElement parse(GenPtr gs, const std::string& text);

  const GenPtr& gens() const { return gs_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  std::string str() const;

  void add_term(const Monomial& m, const Rational& c);

  SuperElement& operator+=(const SuperElement& o);
  SuperElement& operator-=(const SuperElement& o);
  SuperElement& operator*=(const Rational& c);
  friend SuperElement operator+(SuperElement a, const SuperElement& b) { return a += b; }
  friend SuperElement operator-(SuperElement a, const SuperElement& b) { return a -= b; }
  friend SuperElement operator*(SuperElement a, const Rational& c) { return a *= c; }
  friend SuperElement operator*(const Rational& c, SuperElement a) { return a *= c; }
  SuperElement operator-() const;
  friend SuperElement operator*(const SuperElement& a, const SuperElement& b);
  bool operator==(const SuperElement& o) const;
  bool operator!=(const SuperElement& o) const { return !(*this == o); }

  // -1 when the odd degree is mixed or the element is zero
  int parity() const;
  int max_odd_degree() const;
  int max_even_degree() const;

 private:
  GenPtr gs_;
  Terms terms_;
};

SuperElement mul(const SuperElement& a, const SuperElement& b);

// Koszul sign of the product of two canonical odd subsets.
int odd_product_sign(std::uint64_t a, std::uint64_t b);

SuperElement partial_even(const SuperElement& a, std::size_t var);
SuperElement partial_odd(const SuperElement& a, std::size_t var);  // left derivative
SuperElement partial_odd_right(const SuperElement& a, std::size_t var);
SuperElement partial_even(const SuperElement& a, const std::string& var);
SuperElement partial_odd(const SuperElement& a, const std::string& var);

// i(s): left insertion, j(s): right insertion, s a linear combination of odd generators
SuperElement insert_left(const SuperElement& s, const SuperElement& phi);
SuperElement insert_right(const SuperElement& s, const SuperElement& phi);

// D(phi) = sum_y D(y) d_y phi + sum_theta D(theta) d^L_theta phi; null images are zero
SuperElement apply_derivation(const SuperElement& phi, const std::vector<const SuperElement*>& even_images,
                              const std::vector<const SuperElement*>& odd_images);

int eps_degree(const GeneratorSet& gs, const Monomial& m);
int lambda_degree(const GeneratorSet& gs, const Monomial& m);
int ghost_degree(const GeneratorSet& gs, const Monomial& m);
std::map<std::pair<int, int>, SuperElement> bidegree_components(const SuperElement& a);

// Euler weight for fiber generators; std::nullopt when not homogeneous. Zero is homogeneous of every
// weight and reports 0.
std::optional<int> euler_weight(const SuperElement& a);
int euler_weight(const GeneratorSet& gs, const Monomial& m);

// keep only monomials of given odd degree
SuperElement odd_degree_part(const SuperElement& a, int deg);

// map generators by index into another set; -1 entries must not occur in the support
SuperElement remap(const SuperElement& a, GenPtr target, const std::vector<int>& even_map,
                   const std::vector<int>& odd_map);

// substitute numeric values for even generators of an odd-free polynomial
double evaluate(const SuperElement& a, const std::vector<double>& x);

}  // namespace dirdef
