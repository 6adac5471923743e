#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dirdef/brackets.hpp"

namespace dirdef {

// Structure data of a split Courant algebroid L + L* over R^m, fiber rank k. All entries are
// polynomials in q1..qm living in the rothstein(m, k) generator set.
struct CourantInput {
  std::size_t m = 0, k = 0;
  GenPtr gens;
  std::vector<SuperElement> rho;      // rho^i_a at [i*k + a]
  std::vector<SuperElement> rho_bar;  // rho-bar^{i a} at [i*k + a]
  std::vector<SuperElement> c;        // c_{ab}^g at [(a*k + b)*k + g]
  std::vector<SuperElement> c_bar;    // c-bar^{ab}_g at [(a*k + b)*k + g]
  // psi part of Theta is sum over all (a,b,g) of psi^{abg} a_a a_b a_g
  std::vector<SuperElement> psi;  // psi^{abg} at [(a*k + b)*k + g]
  std::optional<ConnectionData> connection;

  static CourantInput zero(std::size_t m, std::size_t k);
  // TM + T*M with L = TM
  static CourantInput standard(std::size_t m);
  // TM + T*M with L = T*M (complement TM)
  static CourantInput standard_cotangent(std::size_t m);
  // Lie bialgebra or quasi-Lie bialgebra over a point
  static CourantInput point(std::size_t k, const std::vector<Rational>& c, const std::vector<Rational>& c_bar,
                            const std::vector<Rational>& psi = {});

  SuperElement& rho_at(std::size_t i, std::size_t a) { return rho[i * k + a]; }
  SuperElement& rho_bar_at(std::size_t i, std::size_t a) { return rho_bar[i * k + a]; }
  SuperElement& c_at(std::size_t a, std::size_t b, std::size_t g) { return c[(a * k + b) * k + g]; }
  SuperElement& c_bar_at(std::size_t a, std::size_t b, std::size_t g) { return c_bar[(a * k + b) * k + g]; }
  SuperElement& psi_at(std::size_t a, std::size_t b, std::size_t g) { return psi[(a * k + b) * k + g]; }
  const SuperElement& c_at(std::size_t a, std::size_t b, std::size_t g) const { return c[(a * k + b) * k + g]; }
  const SuperElement& c_bar_at(std::size_t a, std::size_t b, std::size_t g) const {
    return c_bar[(a * k + b) * k + g];
  }
  const SuperElement& psi_at(std::size_t a, std::size_t b, std::size_t g) const { return psi[(a * k + b) * k + g]; }

  // throws Shape on wrong sizes or non-polynomial entries, NotAntisymmetric on symmetry violations
  void validate() const;
  bool constant_coefficients() const;  // c, c_bar, psi of q-degree 0
};

struct ThetaStructure {
  BracketContext ctx;
  SuperElement theta, phi, mu, gamma, psi;
  std::size_t m = 0, k = 0;

  const GenPtr& gens() const { return ctx.gens(); }
  SuperElement lower(std::size_t a) const;  // a_a, frame of L
  SuperElement upper(std::size_t a) const;  // a^a, frame of L*
  SuperElement q(std::size_t i) const;
};

ThetaStructure build_theta(const CourantInput& input);
// torsion-form and r-form of mu (resp. gamma); build_theta checks they agree
SuperElement mu_torsion_form(const CourantInput& in, const BracketContext& ctx);
SuperElement mu_r_form(const CourantInput& in, const BracketContext& ctx);
SuperElement gamma_torsion_form(const CourantInput& in, const BracketContext& ctx);
SuperElement gamma_r_form(const CourantInput& in, const BracketContext& ctx);

// derived operations; sections of L + L* are elements linear in the odd generators
SuperElement courant_bracket(const ThetaStructure& T, const SuperElement& e1, const SuperElement& e2);
SuperElement anchor_apply(const ThetaStructure& T, const SuperElement& e, const SuperElement& f);
SuperElement pairing(const ThetaStructure& T, const SuperElement& e1, const SuperElement& e2);
SuperElement big_d(const ThetaStructure& T, const SuperElement& f);
SuperElement d_L(const ThetaStructure& T, const SuperElement& form);
SuperElement dual_bracket(const ThetaStructure& T, const SuperElement& a, const SuperElement& b);
SuperElement psi_triple(const ThetaStructure& T, const SuperElement& a, const SuperElement& b, const SuperElement& c);
// i_s: interior product of an L-element into a form
SuperElement insert_section(const ThetaStructure& T, const SuperElement& s, const SuperElement& form);

// the same operators written out from the structure functions, without Theta
SuperElement d_L_componentwise(const CourantInput& in, const ThetaStructure& T, const SuperElement& form);
SuperElement dual_bracket_componentwise(const CourantInput& in, const ThetaStructure& T, const SuperElement& a,
                                        const SuperElement& b);

// T_omega(s1,s2,s3) = <[omega(s1),omega(s2)]_C, omega(s3)>, assembled as a 3-form
SuperElement t_omega(const ThetaStructure& T, const SuperElement& omega);
// 1/6 {{{psi,omega},omega},omega}
SuperElement t_omega_nested(const ThetaStructure& T, const SuperElement& omega);

struct IdentityCheck {
  IdentityCheck() = default;
  explicit IdentityCheck(std::string n) : name(std::move(n)) {}
  std::string name;
  std::size_t checked = 0, failures = 0;
  std::size_t max_terms = 0;  // largest residual, in number of terms
  std::string first_failure;
  bool ok() const { return failures == 0; }
};

struct CourantReport {
  MasterResiduals master;
  std::vector<IdentityCheck> identities;
  bool ok() const;
};

struct SectionSampling {
  int degree = 2;                 // monomials in q up to this degree
  std::size_t max_triples = 300;  // random triples beyond the pure frame triples
  std::uint64_t seed = 1;
};

// polynomial sections: frame elements times q-monomials up to the given degree
std::vector<SuperElement> section_family(const ThetaStructure& T, int degree, bool with_L = true,
                                         bool with_L_star = true);

CourantReport verify_courant(const ThetaStructure& T, const SectionSampling& s = {});
// throws AxiomViolation naming the first failing identity
void require_courant(const ThetaStructure& T, const SectionSampling& s = {});

CourantReport quasi_lemma_check(const ThetaStructure& T, const SectionSampling& s = {});

// d_L omega + 1/2 [omega,omega]_* + 1/6 [omega,omega,omega]_psi via nested brackets
SuperElement mc_residual(const ThetaStructure& T, const SuperElement& omega);
SuperElement mc_residual_componentwise(const CourantInput& in, const ThetaStructure& T, const SuperElement& omega);
// series omega[0..N] with omega[0] = 0; returns the residual of every order 0..N
std::vector<SuperElement> mc_residual_series(const ThetaStructure& T, const std::vector<SuperElement>& omega);

// d_omega(x) = {mu,x} + {{omega,gamma},x} + 1/2 {{{psi,omega},omega},x}
SuperElement d_omega(const ThetaStructure& T, const SuperElement& omega, const SuperElement& x);
SuperElement universal_identity_residual(const ThetaStructure& T, const SuperElement& omega);

enum class DiracVerdict { Extends, Obstructed, NoSolutionUpToDegree };
const char* verdict_name(DiracVerdict v);

struct DiracCertificate {
  std::size_t order = 0;  // the order being solved, N + 1
  SuperElement R;         // -1/2 sum [w_i,w_j]_* - 1/6 sum [w_i,w_j,w_k]_psi
  SuperElement d_R;       // d_L R, zero when Theta is a Courant structure
  DiracVerdict verdict = DiracVerdict::Extends;
  std::optional<SuperElement> solution;  // d_L solution = R
  bool constant_case = false;
  std::size_t h3_dim = 0;  // constant case only
  VecQ witness;            // left kernel vector certifying non-exactness
  bool extends() const { return verdict == DiracVerdict::Extends; }
};

// omega = (w_1, ..., w_N); throws PreconditionMC if MC fails below N + 1,
// DegreeCapExceeded if an input order has q-degree above degree_cap
DiracCertificate deform_extend_dirac(const ThetaStructure& T, const std::vector<SuperElement>& omega,
                                     int degree_cap = 2);

struct DiracDeformReport {
  std::vector<SuperElement> omega;  // w_1..w_reached
  std::vector<DiracCertificate> orders;
  bool obstructed = false;
  std::size_t reached = 0;
};

DiracDeformReport deform_dirac(const ThetaStructure& T, const SuperElement& omega1, std::size_t N,
                               int degree_cap = 2);

// 2-forms on L and bivectors on L as k x k coefficient matrices (row-major)
std::vector<SuperElement> form_matrix(const ThetaStructure& T, const SuperElement& omega);
SuperElement form_from_matrix(const ThetaStructure& T, const std::vector<SuperElement>& W);
std::vector<SuperElement> bivector_matrix(const ThetaStructure& T, const SuperElement& lambda);
SuperElement bivector_from_matrix(const ThetaStructure& T, const std::vector<SuperElement>& L);

// w'_t = w_t (id + Lambda w_t)^{-1}, truncated at the order of the input series
std::vector<SuperElement> reparametrize_complement(const ThetaStructure& T, const SuperElement& lambda,
                                                   const std::vector<SuperElement>& omega);
// Theta for the complement moved by nu_Lambda; omega from reparametrize_complement solves the same
// equation against it
ThetaStructure change_complement(const ThetaStructure& T, const SuperElement& lambda);

}  // namespace dirdef
