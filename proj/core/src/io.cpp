#include "dirdef/io.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace dirdef::io {

void fail(const std::string& path, const std::string& msg) {
  throw Error(Errc::Parse, (path.empty() ? "/" : path) + ": " + msg);
}

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const json& member(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(at(path, key), "missing");
  return *it;
}

const json* optional_member(const json& j, const std::string& key) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

std::size_t read_size(const json& j, const std::string& path, std::size_t max = 64) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a non-negative integer");
  auto v = j.get<std::size_t>();
  if (v > max) fail(path, "too large (limit " + std::to_string(max) + ")");
  return v;
}

const json& list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

const json& entry(const json& j, std::size_t len, const std::string& path) {
  if (!j.is_array() || j.size() != len) fail(path, "expected an array of length " + std::to_string(len));
  return j;
}

SuperElement read_poly(const GenPtr& g, const json& j, const std::string& path) {
  std::string text;
  if (j.is_string())
    text = j.get<std::string>();
  else if (j.is_number_integer())
    text = std::to_string(j.get<long long>());
  else
    fail(path, "expected a polynomial string");
  try {
    return SuperElement::parse(g, text);
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

}  // namespace

Rational read_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) fail(path, "expected a rational as a string or integer");
  std::string s = j.get<std::string>();
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  const bool ok = !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '/';
  });
  if (!ok) fail(path, "not a rational: \"" + j.get<std::string>() + "\"");
  if (s.front() == '+') s.erase(0, 1);
  Rational q;
  try {
    if (q.set_str(s, 10) != 0) fail(path, "not a rational: \"" + s + "\"");
  } catch (const std::invalid_argument&) {
    fail(path, "not a rational: \"" + s + "\"");
  }
  if (q.get_den() == 0) fail(path, "zero denominator");
  q.canonicalize();
  return q;
}

std::size_t read_index(const json& j, std::size_t bound, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an index");
  long long v = j.get<long long>();
  if (v < 0 || static_cast<std::size_t>(v) >= bound)
    fail(path, "index " + std::to_string(v) + " out of range [0, " + std::to_string(bound) + ")");
  return static_cast<std::size_t>(v);
}

MultiMap read_constants(const json& lst, std::size_t dim, const std::string& path) {
  list(lst, path);
  // (a < b, g) -> value, with the path that set it
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::pair<Rational, std::string>> seen;
  for (std::size_t t = 0; t < lst.size(); ++t) {
    const std::string p = at(path, t);
    const json& e = entry(lst[t], 4, p);
    std::size_t a = read_index(e[0], dim, at(p, 0)), b = read_index(e[1], dim, at(p, 1)),
                g = read_index(e[2], dim, at(p, 2));
    Rational v = read_rational(e[3], at(p, 3));
    if (a == b) {
      if (v != 0) throw Error(Errc::NotAntisymmetric, p + ": c^g_{aa} must vanish");
      continue;
    }
    if (a > b) std::swap(a, b), v = -v;
    auto [it, fresh] = seen.try_emplace({a, b, g}, v, p);
    if (!fresh && it->second.first != v)
      throw Error(Errc::NotAntisymmetric, p + ": contradicts " + it->second.second);
  }
  std::vector<std::tuple<int, int, int, Rational>> c;
  for (const auto& [key, val] : seen)
    c.emplace_back(int(std::get<0>(key)), int(std::get<1>(key)), int(std::get<2>(key)), val.first);
  return MultiMap::from_constants(dim, c);
}

MultiMap read_structure(const json& j) {
  const std::size_t dim = read_size(member(j, "dim", ""), "/dim", 16);
  const json* c = optional_member(j, "c");
  return c ? read_constants(*c, dim, "/c") : MultiMap(2, dim);
}

json write(const Rational& q) { return to_string(q); }

json write(const VecQ& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(write(x));
  return a;
}

json write(const MatrixQ& M) {
  json a = json::array();
  for (std::size_t i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < M.cols(); ++j) row.push_back(write(M(i, j)));
    a.push_back(row);
  }
  return a;
}

json write(const SubspaceQ& S) {
  json a = json::array();
  for (const auto& v : S.basis()) a.push_back(write(v));
  return a;
}

json write(const SuperElement& f) { return f.str(); }

json write_entries(const MultiMap& f) {
  json c = json::array();
  const auto& tuples = sorted_tuples(f.arity(), f.dim());
  for (std::size_t t = 0; t < tuples.size(); ++t)
    for (std::size_t g = 0; g < f.dim(); ++g)
      if (f.at(t, g) != 0) {
        json e = json::array();
        for (int i : tuples[t]) e.push_back(i);
        e.push_back(g);
        e.push_back(write(f.at(t, g)));
        c.push_back(e);
      }
  return c;
}

json write_structure(const MultiMap& mu) { return json{{"dim", mu.dim()}, {"c", write_entries(mu)}}; }

CourantInput read_courant(const json& j) {
  const std::size_t m = read_size(member(j, "m", ""), "/m", 6), k = read_size(member(j, "k", ""), "/k", 6);
  CourantInput in = CourantInput::zero(m, k);
  if (const json* pre = optional_member(j, "preset")) {
    std::string name = pre->is_string() ? pre->get<std::string>() : "";
    if (name != "standard" && name != "standard_cotangent") fail("/preset", "unknown preset");
    if (m != k) fail("/k", "presets need k = m");
    in = name == "standard" ? CourantInput::standard(m) : CourantInput::standard_cotangent(m);
  }
  const GenPtr g = in.gens;
  auto anchors = [&](const char* key, std::vector<SuperElement>& dst) {
    const json* lst = optional_member(j, key);
    if (!lst) return;
    const std::string path = std::string("/") + key;
    list(*lst, path);
    for (std::size_t t = 0; t < lst->size(); ++t) {
      const std::string p = at(path, t);
      const json& e = entry((*lst)[t], 3, p);
      std::size_t i = read_index(e[0], m, at(p, 0)), a = read_index(e[1], k, at(p, 1));
      dst[i * k + a] = read_poly(g, e[2], at(p, 2));
    }
  };
  anchors("rho", in.rho);
  anchors("rho_bar", in.rho_bar);
  auto brackets = [&](const char* key, std::vector<SuperElement>& dst) {
    const json* lst = optional_member(j, key);
    if (!lst) return;
    const std::string path = std::string("/") + key;
    list(*lst, path);
    for (std::size_t t = 0; t < lst->size(); ++t) {
      const std::string p = at(path, t);
      const json& e = entry((*lst)[t], 4, p);
      std::size_t a = read_index(e[0], k, at(p, 0)), b = read_index(e[1], k, at(p, 1)),
                  c = read_index(e[2], k, at(p, 2));
      SuperElement v = read_poly(g, e[3], at(p, 3));
      if (a == b) {
        if (!v.is_zero()) throw Error(Errc::NotAntisymmetric, p + ": diagonal entry must vanish");
        continue;
      }
      dst[(a * k + b) * k + c] = v;
      dst[(b * k + a) * k + c] = -v;
    }
  };
  brackets("c", in.c);
  brackets("c_bar", in.c_bar);
  if (const json* lst = optional_member(j, "psi")) {
    list(*lst, "/psi");
    for (std::size_t t = 0; t < lst->size(); ++t) {
      const std::string p = at("/psi", t);
      const json& e = entry((*lst)[t], 4, p);
      std::vector<int> idx{int(read_index(e[0], k, at(p, 0))), int(read_index(e[1], k, at(p, 1))),
                           int(read_index(e[2], k, at(p, 2)))};
      SuperElement v = read_poly(g, e[3], at(p, 3));
      if (idx[0] == idx[1] || idx[1] == idx[2] || idx[0] == idx[2]) {
        if (!v.is_zero()) throw Error(Errc::NotAntisymmetric, p + ": psi needs distinct indices");
        continue;
      }
      std::vector<int> perm{0, 1, 2};
      do {
        std::vector<int> sorted = perm;
        const int s = sort_with_sign(sorted);
        in.psi_at(idx[perm[0]], idx[perm[1]], idx[perm[2]]) = s > 0 ? v : -v;
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
  if (const json* lst = optional_member(j, "gamma_conn")) {
    ConnectionData conn(g);
    list(*lst, "/gamma_conn");
    for (std::size_t t = 0; t < lst->size(); ++t) {
      const std::string p = at("/gamma_conn", t);
      const json& e = entry((*lst)[t], 4, p);
      std::size_t i = read_index(e[0], m, at(p, 0)), a = read_index(e[1], k, at(p, 1)),
                  b = read_index(e[2], k, at(p, 2));
      conn.gamma(i, a, b) = read_poly(g, e[3], at(p, 3));
    }
    in.connection = conn;
  }
  in.validate();
  return in;
}

SuperElement read_form(const ThetaStructure& T, const json& lst, const std::string& path) {
  list(lst, path);
  const std::size_t k = T.k;
  std::vector<SuperElement> W(k * k, SuperElement(T.gens()));
  for (std::size_t t = 0; t < lst.size(); ++t) {
    const std::string p = at(path, t);
    const json& e = entry(lst[t], 3, p);
    std::size_t a = read_index(e[0], k, at(p, 0)), b = read_index(e[1], k, at(p, 1));
    SuperElement v = read_poly(T.gens(), e[2], at(p, 2));
    if (a == b) {
      if (!v.is_zero()) throw Error(Errc::NotAntisymmetric, p + ": diagonal entry must vanish");
      continue;
    }
    W[b * k + a] = v;
    W[a * k + b] = -v;
  }
  return form_from_matrix(T, W);
}

LinearDirac read_dirac(const json& j, const std::string& path) {
  const std::size_t n = read_size(member(j, "n", path), at(path, "n"), 32);
  auto pairs = [&](const std::string& key) {
    const std::string p0 = at(path, key);
    const json& lst = list(j.at(key), p0);
    MatrixQ M(n, n);
    for (std::size_t t = 0; t < lst.size(); ++t) {
      const std::string p = at(p0, t);
      const json& e = entry(lst[t], 3, p);
      std::size_t a = read_index(e[0], n, at(p, 0)), b = read_index(e[1], n, at(p, 1));
      Rational v = read_rational(e[2], at(p, 2));
      if (a == b) {
        if (v != 0) throw Error(Errc::NotAntisymmetric, p + ": diagonal entry must vanish");
        continue;
      }
      M(a, b) = v;
      M(b, a) = -v;
    }
    return M;
  };
  int given = 0;
  for (const char* key : {"two_form", "bivector", "basis", "preset"}) given += j.contains(key);
  if (given != 1) fail(path, "give exactly one of two_form, bivector, basis, preset");
  if (j.contains("two_form")) return from_two_form(pairs("two_form"));
  if (j.contains("bivector")) return from_bivector(pairs("bivector"));
  if (j.contains("preset")) {
    const json& pre = j.at("preset");
    if (pre == "tangent") return LinearDirac::tangent(n);
    if (pre == "cotangent") return LinearDirac::cotangent(n);
    fail(at(path, "preset"), "unknown preset");
  }
  const std::string p0 = at(path, "basis");
  const json& lst = list(j.at("basis"), p0);
  std::vector<VecQ> B;
  for (std::size_t t = 0; t < lst.size(); ++t) {
    const std::string p = at(p0, t);
    const json& e = entry(lst[t], 2 * n, p);
    VecQ v(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i) v[i] = read_rational(e[i], at(p, i));
    B.push_back(v);
  }
  return LinearDirac(n, SubspaceQ::span(2 * n, B));
}

IHSInput read_ihs(const json& j) {
  LinearDirac L = read_dirac(member(j, "dirac", ""), "/dirac");
  const std::size_t n = read_size(member(j, "n", ""), "/n", 32);
  if (n != L.n()) fail("/n", "does not match /dirac/n");
  IHSInput in{L, read_poly(GeneratorSet::polynomial(n), member(j, "H", ""), "/H")};
  if (const json* t = optional_member(j, "tol")) {
    if (!t->is_number() || !(t->get<double>() > 0)) fail("/tol", "expected a positive number");
    in.tol = t->get<double>();
  }
  return in;
}

}  // namespace dirdef::io
