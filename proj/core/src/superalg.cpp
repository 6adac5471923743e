#include "dirdef/superalg.hpp"

#include <cmath>
#include <sstream>

namespace dirdef {

GeneratorSet::GeneratorSet(std::vector<Even> evens, std::vector<Odd> odds)
    : evens_(std::move(evens)), odds_(std::move(odds)) {
  if (evens_.size() > kMaxEven) throw Error(Errc::Shape, "too many even generators");
  if (odds_.size() > kMaxOdd) throw Error(Errc::Shape, "too many odd generators");
  for (std::size_t i = 0; i < evens_.size(); ++i) {
    if (!even_idx_.emplace(evens_[i].name, int(i)).second) throw Error(Errc::Shape, "duplicate name " + evens_[i].name);
  }
  for (std::size_t j = 0; j < odds_.size(); ++j) {
    if (even_idx_.count(odds_[j].name) || !odd_idx_.emplace(odds_[j].name, int(j)).second)
      throw Error(Errc::Shape, "duplicate name " + odds_[j].name);
  }
  for (std::size_t j = 0; j < odds_.size(); ++j) {
    const Odd& o = odds_[j];
    if (o.kind == OddKind::Lower || o.kind == OddKind::Upper) {
      if (o.partner < 0 || std::size_t(o.partner) >= odds_.size() || odds_[o.partner].partner != int(j) ||
          odds_[o.partner].kind == o.kind || odds_[o.partner].kind == OddKind::Conj)
        throw Error(Errc::Shape, "odd pairing is not a bijection at " + o.name);
    }
    if (o.kind == OddKind::Conj && (o.partner < 0 || std::size_t(o.partner) >= evens_.size()))
      throw Error(Errc::Shape, "conjugate odd generator without even partner: " + o.name);
  }
  for (const Even& e : evens_) {
    if (e.kind == EvenKind::Base) ++m_;
  }
  for (const Odd& o : odds_)
    if (o.kind == OddKind::Lower) ++k_;
}

GenPtr GeneratorSet::rothstein(std::size_t m, std::size_t k) {
  std::vector<Even> ev;
  std::vector<Odd> od;
  for (std::size_t i = 0; i < m; ++i) ev.push_back({"q" + std::to_string(i + 1), EvenKind::Base});
  for (std::size_t i = 0; i < m; ++i) ev.push_back({"p_" + std::to_string(i + 1), EvenKind::Momentum});
  for (std::size_t a = 0; a < k; ++a) od.push_back({"a_" + std::to_string(a + 1), OddKind::Lower, int(k + a)});
  for (std::size_t a = 0; a < k; ++a) od.push_back({"a^" + std::to_string(a + 1), OddKind::Upper, int(a)});
  return std::make_shared<GeneratorSet>(ev, od);
}

GenPtr GeneratorSet::schouten(std::size_t m, std::size_t k) {
  std::vector<Even> ev;
  std::vector<Odd> od;
  for (std::size_t i = 0; i < m; ++i) ev.push_back({"x" + std::to_string(i + 1), EvenKind::Base});
  for (std::size_t a = 0; a < k; ++a) ev.push_back({"v" + std::to_string(a + 1), EvenKind::Fiber});
  for (std::size_t i = 0; i < m; ++i) od.push_back({"X" + std::to_string(i + 1), OddKind::Conj, int(i)});
  for (std::size_t a = 0; a < k; ++a) od.push_back({"V" + std::to_string(a + 1), OddKind::Conj, int(m + a)});
  return std::make_shared<GeneratorSet>(ev, od);
}

GenPtr GeneratorSet::grassmann(std::size_t m, std::size_t k) {
  std::vector<Even> ev;
  std::vector<Odd> od;
  for (std::size_t i = 0; i < m; ++i) ev.push_back({"x" + std::to_string(i + 1), EvenKind::Base});
  for (std::size_t a = 0; a < k; ++a) od.push_back({"e" + std::to_string(a + 1), OddKind::Plain, -1});
  return std::make_shared<GeneratorSet>(ev, od);
}

GenPtr GeneratorSet::polynomial(std::size_t m, const std::string& prefix) {
  std::vector<Even> ev;
  for (std::size_t i = 0; i < m; ++i) ev.push_back({prefix + std::to_string(i + 1), EvenKind::Base});
  return std::make_shared<GeneratorSet>(ev, std::vector<Odd>{});
}

int GeneratorSet::find_even(const std::string& name) const {
  auto it = even_idx_.find(name);
  return it == even_idx_.end() ? -1 : it->second;
}

int GeneratorSet::find_odd(const std::string& name) const {
  auto it = odd_idx_.find(name);
  return it == odd_idx_.end() ? -1 : it->second;
}

bool GeneratorSet::same_as(const GeneratorSet& o) const {
  if (this == &o) return true;
  if (evens_.size() != o.evens_.size() || odds_.size() != o.odds_.size()) return false;
  for (std::size_t i = 0; i < evens_.size(); ++i)
    if (evens_[i].name != o.evens_[i].name || evens_[i].kind != o.evens_[i].kind) return false;
  for (std::size_t j = 0; j < odds_.size(); ++j)
    if (odds_[j].name != o.odds_[j].name || odds_[j].kind != o.odds_[j].kind || odds_[j].partner != o.odds_[j].partner)
      return false;
  return true;
}

int Monomial::even_degree() const {
  int d = 0;
  for (auto x : e) d += x;
  return d;
}

namespace {

void check_same(const SuperElement& a, const SuperElement& b) {
  if (!a.gens() || !b.gens() || !a.gens()->same_as(*b.gens()))
    throw Error(Errc::GeneratorMismatch, "operands live on different generator sets");
}

}  // namespace

SuperElement SuperElement::constant(GenPtr gs, const Rational& c) {
  SuperElement s(std::move(gs));
  s.add_term(Monomial{}, c);
  return s;
}

SuperElement SuperElement::even_gen(GenPtr gs, std::size_t i) {
  if (i >= gs->n_even()) throw Error(Errc::UnknownGenerator, "even generator index");
  Monomial m;
  m.e[i] = 1;
  return monomial(std::move(gs), m, 1);
}

SuperElement SuperElement::odd_gen(GenPtr gs, std::size_t j) {
  if (j >= gs->n_odd()) throw Error(Errc::UnknownGenerator, "odd generator index");
  Monomial m;
  m.odd = std::uint64_t(1) << j;
  return monomial(std::move(gs), m, 1);
}

SuperElement SuperElement::monomial(GenPtr gs, const Monomial& m, const Rational& c) {
  SuperElement s(std::move(gs));
  s.add_term(m, c);
  return s;
}

void SuperElement::add_term(const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, ins] = terms_.try_emplace(m, c);
  if (!ins) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

SuperElement& SuperElement::operator+=(const SuperElement& o) {
  if (o.terms_.empty()) return *this;
  if (!gs_) gs_ = o.gs_;
  check_same(*this, o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

SuperElement& SuperElement::operator-=(const SuperElement& o) {
  if (o.terms_.empty()) return *this;
  if (!gs_) gs_ = o.gs_;
  check_same(*this, o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

SuperElement& SuperElement::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& kv : terms_) kv.second *= c;
  return *this;
}

SuperElement SuperElement::operator-() const {
  SuperElement r = *this;
  for (auto& kv : r.terms_) kv.second = -kv.second;
  return r;
}

bool SuperElement::operator==(const SuperElement& o) const {
  if (terms_.empty() && o.terms_.empty()) return true;
  if (!gs_ || !o.gs_ || !gs_->same_as(*o.gs_)) return false;
  return terms_ == o.terms_;
}

int odd_product_sign(std::uint64_t a, std::uint64_t b) {
  int par = 0;
  while (b) {
    int j = __builtin_ctzll(b);
    b &= b - 1;
    std::uint64_t above = j == 63 ? 0 : (a >> (j + 1));
    par += __builtin_popcountll(above);
  }
  return (par & 1) ? -1 : 1;
}

SuperElement operator*(const SuperElement& a, const SuperElement& b) {
  if (a.terms_.empty() || b.terms_.empty()) {
    SuperElement z(a.gs_ ? a.gs_ : b.gs_);
    return z;
  }
  check_same(a, b);
  SuperElement r(a.gs_);
  const std::size_t ne = a.gs_->n_even();
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      if (ma.odd & mb.odd) continue;
      Monomial m;
      for (std::size_t i = 0; i < ne; ++i) {
        unsigned s = unsigned(ma.e[i]) + mb.e[i];
        if (s > 255) throw Error(Errc::Shape, "exponent overflow");
        m.e[i] = std::uint8_t(s);
      }
      m.odd = ma.odd | mb.odd;
      Rational c = ca * cb;
      if (odd_product_sign(ma.odd, mb.odd) < 0) c = -c;
      r.add_term(m, c);
    }
  }
  return r;
}

SuperElement mul(const SuperElement& a, const SuperElement& b) { return a * b; }

int SuperElement::parity() const {
  int p = -1;
  for (const auto& kv : terms_) {
    int q = kv.first.odd_degree() & 1;
    if (p == -1) p = q;
    else if (p != q) return -1;
  }
  return p;
}

int SuperElement::max_odd_degree() const {
  int d = 0;
  for (const auto& kv : terms_) d = std::max(d, kv.first.odd_degree());
  return d;
}

int SuperElement::max_even_degree() const {
  int d = 0;
  for (const auto& kv : terms_) d = std::max(d, kv.first.even_degree());
  return d;
}

SuperElement partial_even(const SuperElement& a, std::size_t var) {
  if (!a.gens()) return a;
  if (var >= a.gens()->n_even()) throw Error(Errc::UnknownGenerator, "even derivative index");
  SuperElement r(a.gens());
  for (const auto& [m, c] : a.terms()) {
    if (m.e[var] == 0) continue;
    Monomial n = m;
    n.e[var] -= 1;
    r.add_term(n, c * int(m.e[var]));
  }
  return r;
}

SuperElement partial_odd(const SuperElement& a, std::size_t var) {
  if (!a.gens()) return a;
  if (var >= a.gens()->n_odd()) throw Error(Errc::UnknownGenerator, "odd derivative index");
  const std::uint64_t bit = std::uint64_t(1) << var;
  SuperElement r(a.gens());
  for (const auto& [m, c] : a.terms()) {
    if (!(m.odd & bit)) continue;
    Monomial n = m;
    n.odd &= ~bit;
    int below = __builtin_popcountll(m.odd & (bit - 1));
    r.add_term(n, (below & 1) ? Rational(-c) : c);
  }
  return r;
}

SuperElement partial_odd_right(const SuperElement& a, std::size_t var) {
  if (!a.gens()) return a;
  if (var >= a.gens()->n_odd()) throw Error(Errc::UnknownGenerator, "odd derivative index");
  const std::uint64_t bit = std::uint64_t(1) << var;
  SuperElement r(a.gens());
  for (const auto& [m, c] : a.terms()) {
    if (!(m.odd & bit)) continue;
    Monomial n = m;
    n.odd &= ~bit;
    int above = __builtin_popcountll(m.odd & ~((bit << 1) - 1));
    if (var == 63) above = 0;
    r.add_term(n, (above & 1) ? Rational(-c) : c);
  }
  return r;
}

SuperElement partial_even(const SuperElement& a, const std::string& var) {
  int i = a.gens() ? a.gens()->find_even(var) : -1;
  if (i < 0) throw Error(Errc::UnknownGenerator, "unknown even generator " + var);
  return partial_even(a, std::size_t(i));
}

SuperElement partial_odd(const SuperElement& a, const std::string& var) {
  int j = a.gens() ? a.gens()->find_odd(var) : -1;
  if (j < 0) throw Error(Errc::UnknownGenerator, "unknown odd generator " + var);
  return partial_odd(a, std::size_t(j));
}

namespace {

// s = sum_j c_j theta_j with constant c_j
std::vector<std::pair<std::size_t, Rational>> odd_linear(const SuperElement& s) {
  std::vector<std::pair<std::size_t, Rational>> out;
  for (const auto& [m, c] : s.terms()) {
    if (m.even_degree() != 0 || m.odd_degree() != 1) throw Error(Errc::NotOddLinear, "insertion needs a linear odd element");
    out.emplace_back(std::size_t(__builtin_ctzll(m.odd)), c);
  }
  return out;
}

}  // namespace

SuperElement insert_left(const SuperElement& s, const SuperElement& phi) {
  SuperElement r(phi.gens());
  for (const auto& [j, c] : odd_linear(s)) r += c * partial_odd(phi, j);
  return r;
}

SuperElement insert_right(const SuperElement& s, const SuperElement& phi) {
  SuperElement r(phi.gens());
  for (const auto& [j, c] : odd_linear(s)) r += c * partial_odd_right(phi, j);
  return r;
}

SuperElement apply_derivation(const SuperElement& phi, const std::vector<const SuperElement*>& even_images,
                              const std::vector<const SuperElement*>& odd_images) {
  SuperElement r(phi.gens());
  for (std::size_t i = 0; i < even_images.size(); ++i) {
    if (!even_images[i] || even_images[i]->is_zero()) continue;
    SuperElement d = partial_even(phi, i);
    if (!d.is_zero()) r += (*even_images[i]) * d;
  }
  for (std::size_t j = 0; j < odd_images.size(); ++j) {
    if (!odd_images[j] || odd_images[j]->is_zero()) continue;
    SuperElement d = partial_odd(phi, j);
    if (!d.is_zero()) r += (*odd_images[j]) * d;
  }
  return r;
}

int eps_degree(const GeneratorSet& gs, const Monomial& m) {
  int d = 0;
  for (std::size_t i = 0; i < gs.n_even(); ++i)
    if (gs.even(i).kind == EvenKind::Momentum) d += m.e[i];
  for (std::size_t j = 0; j < gs.n_odd(); ++j)
    if ((m.odd >> j) & 1 && gs.odd(j).kind == OddKind::Lower) ++d;
  return d;
}

int lambda_degree(const GeneratorSet& gs, const Monomial& m) {
  int d = 0;
  for (std::size_t i = 0; i < gs.n_even(); ++i)
    if (gs.even(i).kind == EvenKind::Momentum) d += m.e[i];
  for (std::size_t j = 0; j < gs.n_odd(); ++j)
    if ((m.odd >> j) & 1 && gs.odd(j).kind == OddKind::Upper) ++d;
  return d;
}

int ghost_degree(const GeneratorSet& gs, const Monomial& m) {
  int d = 0;
  for (std::size_t j = 0; j < gs.n_odd(); ++j) {
    if (!((m.odd >> j) & 1)) continue;
    if (gs.odd(j).kind == OddKind::Upper) ++d;
    if (gs.odd(j).kind == OddKind::Lower) --d;
  }
  return d;
}

std::map<std::pair<int, int>, SuperElement> bidegree_components(const SuperElement& a) {
  std::map<std::pair<int, int>, SuperElement> out;
  for (const auto& [m, c] : a.terms()) {
    auto key = std::make_pair(eps_degree(*a.gens(), m), lambda_degree(*a.gens(), m));
    auto it = out.try_emplace(key, SuperElement(a.gens())).first;
    it->second.add_term(m, c);
  }
  return out;
}

int euler_weight(const GeneratorSet& gs, const Monomial& m) {
  int w = 0;
  for (std::size_t i = 0; i < gs.n_even(); ++i)
    if (gs.even(i).kind == EvenKind::Fiber) w += m.e[i];
  for (std::size_t j = 0; j < gs.n_odd(); ++j) {
    if (!((m.odd >> j) & 1)) continue;
    const auto& o = gs.odd(j);
    if (o.kind == OddKind::Conj && gs.even(std::size_t(o.partner)).kind == EvenKind::Fiber) --w;
  }
  return w;
}

std::optional<int> euler_weight(const SuperElement& a) {
  std::optional<int> w;
  for (const auto& kv : a.terms()) {
    int x = euler_weight(*a.gens(), kv.first);
    if (!w) w = x;
    else if (*w != x) return std::nullopt;
  }
  return w ? w : std::optional<int>(0);
}

SuperElement odd_degree_part(const SuperElement& a, int deg) {
  SuperElement r(a.gens());
  for (const auto& [m, c] : a.terms())
    if (m.odd_degree() == deg) r.add_term(m, c);
  return r;
}

SuperElement remap(const SuperElement& a, GenPtr target, const std::vector<int>& even_map,
                   const std::vector<int>& odd_map) {
  SuperElement r(target);
  if (!a.gens()) return r;
  for (const auto& [m, c] : a.terms()) {
    SuperElement t = SuperElement::constant(target, c);
    for (std::size_t i = 0; i < a.gens()->n_even(); ++i) {
      if (!m.e[i]) continue;
      if (i >= even_map.size() || even_map[i] < 0) throw Error(Errc::GeneratorMismatch, "remap: unmapped even generator");
      for (int p = 0; p < m.e[i]; ++p) t = t * SuperElement::even_gen(target, std::size_t(even_map[i]));
    }
    for (std::size_t j = 0; j < a.gens()->n_odd(); ++j) {
      if (!((m.odd >> j) & 1)) continue;
      if (j >= odd_map.size() || odd_map[j] < 0) throw Error(Errc::GeneratorMismatch, "remap: unmapped odd generator");
      t = t * SuperElement::odd_gen(target, std::size_t(odd_map[j]));
    }
    r += t;
  }
  return r;
}

double evaluate(const SuperElement& a, const std::vector<double>& x) {
  double s = 0;
  for (const auto& [m, c] : a.terms()) {
    if (m.odd) throw Error(Errc::Shape, "evaluate: odd part present");
    double t = c.get_d();
    for (std::size_t i = 0; i < a.gens()->n_even(); ++i)
      if (m.e[i]) t *= std::pow(x.at(i), m.e[i]);
    s += t;
  }
  return s;
}

// ---- text grammar ----

std::string SuperElement::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational a = abs(c);
    if (first) {
      if (sgn(c) < 0) os << "-";
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    std::vector<std::string> f;
    for (std::size_t i = 0; i < gs_->n_even(); ++i) {
      if (!m.e[i]) continue;
      std::string s = gs_->even(i).name;
      if (m.e[i] > 1) s += "^" + std::to_string(m.e[i]);
      f.push_back(s);
    }
    for (std::size_t j = 0; j < gs_->n_odd(); ++j)
      if ((m.odd >> j) & 1) f.push_back(gs_->odd(j).name);
    bool need_coef = a != 1 || f.empty();
    if (need_coef) os << a.get_str();
    for (std::size_t t = 0; t < f.size(); ++t) os << ((t == 0 && !need_coef) ? "" : " ") << f[t];
  }
  return os.str();
}

SuperElement SuperElement::parse(GenPtr gs, const std::string& text) {
  std::istringstream is(text);
  std::vector<std::string> tok;
  for (std::string t; is >> t;) tok.push_back(t);
  SuperElement out(gs);
  std::size_t i = 0;
  if (tok.empty()) throw Error(Errc::Parse, "empty element");
  if (tok.size() == 1 && tok[0] == "0") return out;
  while (i < tok.size()) {
    int sign = 1;
    if (tok[i] == "+" || tok[i] == "-") {
      if (tok[i] == "-") sign = -1;
      ++i;
    } else if (i != 0) {
      throw Error(Errc::Parse, "expected + or - before '" + tok[i] + "'");
    }
    if (i >= tok.size()) throw Error(Errc::Parse, "dangling sign");
    Rational coef = 1;
    std::string& head = tok[i];
    if (head.size() > 1 && head[0] == '-' && gs->find_odd(head) < 0 && gs->find_even(head) < 0) {
      sign = -sign;
      head.erase(0, 1);
    }
    if (!head.empty() && (std::isdigit(static_cast<unsigned char>(head[0])))) {
      coef = parse_rational(head);
      ++i;
    }
    SuperElement term = constant(gs, coef * sign);
    while (i < tok.size() && tok[i] != "+" && tok[i] != "-") {
      const std::string& t = tok[i];
      int j = gs->find_odd(t);
      if (j >= 0) {
        term = term * odd_gen(gs, std::size_t(j));
      } else {
        std::string name = t;
        int power = 1;
        auto caret = t.rfind('^');
        if (gs->find_even(t) < 0 && caret != std::string::npos) {
          name = t.substr(0, caret);
          try {
            power = std::stoi(t.substr(caret + 1));
          } catch (...) {
            throw Error(Errc::Parse, "bad power in '" + t + "'");
          }
          if (power < 0) throw Error(Errc::Parse, "negative power in '" + t + "'");
        }
        int e = gs->find_even(name);
        if (e < 0) throw Error(Errc::UnknownGenerator, "unknown generator '" + t + "'");
        for (int p = 0; p < power; ++p) term = term * even_gen(gs, std::size_t(e));
      }
      ++i;
    }
    out += term;
  }
  return out;
}

}  // namespace dirdef
