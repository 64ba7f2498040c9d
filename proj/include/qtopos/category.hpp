#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

namespace qtopos {

/// An arrow of a finite site: an operator (monoid index) between two objects.
///
/// Within one site an arrow is determined by (dom, op, cod); composition is
/// operator multiplication, so a monoid product table fixes it completely.
struct Arrow {
  std::size_t dom = 0;
  std::size_t cod = 0;
  std::size_t op = 0;

  friend auto operator<=>(const Arrow&, const Arrow&) = default;
};

/// A small category presented by objects 0..n-1, arrows, and a monoid product
/// table for composing operators. Arrow ids are sorted by (dom, op, cod).
class FiniteCategory {
 public:
  FiniteCategory() = default;

  /// Throws InconsistentSite if an identity is missing or composition of two
  /// composable arrows is not itself an arrow.
  FiniteCategory(std::size_t num_objects, std::vector<Arrow> arrows, std::vector<std::vector<std::size_t>> product,
                 std::size_t identity_op);

  std::size_t num_objects() const noexcept { return out_.size(); }
  std::size_t num_arrows() const noexcept { return arrows_.size(); }
  const std::vector<Arrow>& arrows() const noexcept { return arrows_; }
  const Arrow& arrow(std::size_t id) const { return arrows_.at(id); }

  /// Arrow ids with the given domain, ascending.
  const std::vector<std::size_t>& out(std::size_t object) const { return out_.at(object); }
  std::size_t identity(std::size_t object) const { return identity_.at(object); }

  std::optional<std::size_t> find(std::size_t dom, std::size_t op, std::size_t cod) const;

  /// after . before; requires cod(before) == dom(after).
  std::size_t compose(std::size_t after, std::size_t before) const;

  /// For arrow m: pairs (m', m' . m) over every m' out of cod(m), ordered by m'.
  const std::vector<std::pair<std::size_t, std::size_t>>& postcompositions(std::size_t m) const {
    return post_.at(m);
  }

  std::size_t op_product(std::size_t a, std::size_t b) const { return product_.at(a).at(b); }
  std::size_t identity_op() const noexcept { return identity_op_; }

  /// Objects reachable from `object` by some arrow (including itself), ascending.
  std::vector<std::size_t> reachable(std::size_t object) const;

 private:
  std::vector<Arrow> arrows_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::size_t> identity_;
  std::vector<std::vector<std::size_t>> product_;
  std::size_t identity_op_ = 0;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> index_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> post_;
};

}  // namespace qtopos
