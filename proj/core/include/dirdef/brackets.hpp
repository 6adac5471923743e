#pragma once

#include <optional>
#include <vector>

#include "dirdef/superalg.hpp"

namespace dirdef {

// Christoffel symbols Gamma_{i alpha}^beta as polynomials in q on a rothstein generator set.
class ConnectionData {
 public:
  explicit ConnectionData(GenPtr gs);
  static ConnectionData flat(GenPtr gs) { return ConnectionData(std::move(gs)); }

  const GenPtr& gens() const { return gs_; }
  std::size_t m() const { return gs_->base_dim(); }
  std::size_t k() const { return gs_->pairs(); }
  SuperElement& gamma(std::size_t i, std::size_t alpha, std::size_t beta) { return g_[(i * k() + alpha) * k() + beta]; }
  const SuperElement& gamma(std::size_t i, std::size_t alpha, std::size_t beta) const {
    return g_[(i * k() + alpha) * k() + beta];
  }
  bool is_flat() const;
  // R^beta_{alpha i j}
  SuperElement curvature(std::size_t beta, std::size_t alpha, std::size_t i, std::size_t j) const;

 private:
  GenPtr gs_;
  std::vector<SuperElement> g_;
};

enum class BracketKind { Schouten, Rothstein, PointBig };

class BracketContext {
 public:
  static BracketContext schouten(GenPtr gs);
  static BracketContext rothstein(const ConnectionData& conn);
  static BracketContext rothstein_flat(GenPtr gs) { return rothstein(ConnectionData::flat(std::move(gs))); }
  // m = 0 rothstein set: the big bracket over a point
  static BracketContext point(std::size_t k);

  BracketKind kind() const { return kind_; }
  const GenPtr& gens() const { return gs_; }
  const std::optional<ConnectionData>& connection() const { return conn_; }

  // covariant derivative along d/dq^i on the rothstein algebra
  SuperElement nabla(std::size_t i, const SuperElement& phi) const;
  // R^alpha_{beta ij} a_alpha a^beta
  const SuperElement& curvature_element(std::size_t i, std::size_t j) const { return curv_[i * gs_->base_dim() + j]; }

 private:
  BracketKind kind_ = BracketKind::Schouten;
  GenPtr gs_;
  std::optional<ConnectionData> conn_;
  std::vector<std::vector<SuperElement>> nabla_odd_;  // [i][odd index]
  std::vector<SuperElement> curv_;
};

SuperElement schouten(const BracketContext& ctx, const SuperElement& P, const SuperElement& Q);
SuperElement rothstein(const BracketContext& ctx, const SuperElement& phi, const SuperElement& psi);
// dispatches on kind
SuperElement bracket(const BracketContext& ctx, const SuperElement& a, const SuperElement& b);

std::vector<SuperElement> darboux_momenta(const BracketContext& ctx);

SuperElement derived_bracket(const BracketContext& ctx, const SuperElement& theta, const SuperElement& x,
                             const SuperElement& y);
SuperElement derived_diff(const BracketContext& ctx, const SuperElement& theta, const SuperElement& x);

struct ThetaParts {
  SuperElement phi, mu, gamma, psi;  // bidegrees (0,3), (1,2), (2,1), (3,0)
};
ThetaParts split_theta(const SuperElement& theta);

struct MasterResiduals {
  SuperElement total;  // {Theta, Theta}
  SuperElement r13;    // 1/2{mu,mu} + {gamma,phi}
  SuperElement r31;    // 1/2{gamma,gamma} + {mu,psi}
  SuperElement r22;    // {mu,gamma} + {phi,psi}
  SuperElement r04;    // {mu,phi}
  SuperElement r40;    // {gamma,psi}
  bool all_zero() const {
    return total.is_zero() && r13.is_zero() && r31.is_zero() && r22.is_zero() && r04.is_zero() && r40.is_zero();
  }
};
MasterResiduals master_residuals(const BracketContext& ctx, const SuperElement& theta);

}  // namespace dirdef
