#pragma once

#include <map>
#include <vector>

#include "dirdef/ratlin.hpp"

namespace dirdef {

// Assembles a matrix column by column from sparse images keyed by an ordered type.
template <class Key>
class ColumnAssembler {
 public:
  void add_column(const std::map<Key, Rational>& col) {
    for (const auto& kv : col) rows_.try_emplace(kv.first, rows_.size());
    cols_.push_back(col);
  }
  // register a row key up front (fixes the target space even if columns miss it)
  std::size_t row_of(const Key& k) { return rows_.try_emplace(k, rows_.size()).first->second; }
  std::size_t n_rows() const { return rows_.size(); }
  std::size_t n_cols() const { return cols_.size(); }
  MatrixQ matrix() const {
    MatrixQ M(rows_.size(), cols_.size());
    for (std::size_t j = 0; j < cols_.size(); ++j)
      for (const auto& kv : cols_[j]) M(rows_.at(kv.first), j) = kv.second;
    return M;
  }
  VecQ vector(const std::map<Key, Rational>& v) const {
    VecQ out(rows_.size());
    for (const auto& kv : v) {
      auto it = rows_.find(kv.first);
      if (it == rows_.end()) throw Error(Errc::ShapeMismatch, "vector has a coordinate outside the target space");
      out[it->second] = kv.second;
    }
    return out;
  }
  bool covers(const std::map<Key, Rational>& v) const {
    for (const auto& kv : v)
      if (!rows_.count(kv.first)) return false;
    return true;
  }

 private:
  std::map<Key, std::size_t> rows_;
  std::vector<std::map<Key, Rational>> cols_;
};

}  // namespace dirdef
