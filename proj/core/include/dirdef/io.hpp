#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "dirdef/courant.hpp"
#include "dirdef/dirac_linear.hpp"
#include "dirdef/ihs.hpp"
#include "dirdef/multimap.hpp"

// JSON reading and writing. Rationals are strings ("3/2") or integers; polynomials are strings in the
// generator names of the target set. Reading errors are Errc::Parse with a JSON pointer to the offending
// entry at the front of the message.
namespace dirdef::io {

using nlohmann::json;

inline constexpr int schema_version = 1;

[[noreturn]] void fail(const std::string& path, const std::string& msg);

Rational read_rational(const json& j, const std::string& path);
std::size_t read_index(const json& j, std::size_t bound, const std::string& path);

// {"dim": 3, "c": [[a, b, g, "val"], ...]}, 0-based indices, c^g_{ab}; the (b, a) entry is implied
MultiMap read_structure(const json& j);
// entries only, for reuse (e.g. a mu1 list next to the structure)
MultiMap read_constants(const json& list, std::size_t dim, const std::string& path);
json write_structure(const MultiMap& mu);
// [[i1, ..., in, g, "val"]] over sorted index tuples, any arity
json write_entries(const MultiMap& f);

// {"m", "k", "preset"?: "standard" | "standard_cotangent", "rho": [[i, a, "poly"]], "rho_bar", "c": [[a, b, g, "poly"]],
//  "c_bar", "psi": [[a, b, g, "val"]] (one ordering, antisymmetrized), "gamma_conn": [[i, a, b, "poly"]]}
CourantInput read_courant(const json& j);
// 2-form on L: [[a, b, "poly"]] with omega(a_a, a_b) = value
SuperElement read_form(const ThetaStructure& T, const json& list, const std::string& path);

// {"n", and one of "two_form": [[i, j, "val"]], "bivector": [[i, j, "val"]], "basis": [[2n rationals]...],
//  "preset": "tangent" | "cotangent"}
LinearDirac read_dirac(const json& j, const std::string& path = "");

struct IHSInput {
  LinearDirac L;
  SuperElement H;  // in x1..xn
  double tol = 1e-9;
};
// {"n", "dirac": {...}, "H": "poly", "tol"?}
IHSInput read_ihs(const json& j);

json write(const Rational& q);
json write(const VecQ& v);
json write(const MatrixQ& M);
json write(const SubspaceQ& S);  // list of basis vectors
json write(const SuperElement& f);  // string form

}  // namespace dirdef::io
