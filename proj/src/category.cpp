#include "qtopos/category.hpp"

#include <algorithm>
#include <string>

#include "qtopos/error.hpp"

namespace qtopos {

FiniteCategory::FiniteCategory(std::size_t num_objects, std::vector<Arrow> arrows,
                               std::vector<std::vector<std::size_t>> product, std::size_t identity_op)
    : arrows_(std::move(arrows)), out_(num_objects), identity_(num_objects), product_(std::move(product)),
      identity_op_(identity_op) {
  std::sort(arrows_.begin(), arrows_.end(), [](const Arrow& a, const Arrow& b) {
    return std::tie(a.dom, a.op, a.cod) < std::tie(b.dom, b.op, b.cod);
  });
  arrows_.erase(std::unique(arrows_.begin(), arrows_.end()), arrows_.end());
  for (std::size_t id = 0; id < arrows_.size(); ++id) {
    const Arrow& a = arrows_[id];
    if (a.dom >= num_objects || a.cod >= num_objects) throw InconsistentSite("arrow endpoint out of range");
    index_.emplace(std::make_tuple(a.dom, a.op, a.cod), id);
    out_[a.dom].push_back(id);
  }
  for (std::size_t o = 0; o < num_objects; ++o) {
    auto id = find(o, identity_op_, o);
    if (!id) throw InconsistentSite("object " + std::to_string(o) + " has no identity arrow");
    identity_[o] = *id;
  }
  post_.resize(arrows_.size());
  for (std::size_t m = 0; m < arrows_.size(); ++m) {
    for (std::size_t after : out_[arrows_[m].cod]) {
      const Arrow& b = arrows_[after];
      auto c = find(arrows_[m].dom, product_[b.op][arrows_[m].op], b.cod);
      if (!c)
        throw InconsistentSite("composite of arrows " + std::to_string(after) + " and " + std::to_string(m) +
                               " is not an arrow");
      post_[m].emplace_back(after, *c);
    }
  }
}

std::optional<std::size_t> FiniteCategory::find(std::size_t dom, std::size_t op, std::size_t cod) const {
  auto it = index_.find(std::make_tuple(dom, op, cod));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FiniteCategory::compose(std::size_t after, std::size_t before) const {
  const Arrow& a = arrow(after);
  const Arrow& b = arrow(before);
  if (b.cod != a.dom) throw InconsistentSite("compose: arrows are not composable");
  auto c = find(b.dom, product_[a.op][b.op], a.cod);
  if (!c) throw InconsistentSite("compose: composite is not an arrow");
  return *c;
}

std::vector<std::size_t> FiniteCategory::reachable(std::size_t object) const {
  std::vector<std::size_t> objs;
  for (std::size_t id : out(object)) objs.push_back(arrows_[id].cod);
  std::sort(objs.begin(), objs.end());
  objs.erase(std::unique(objs.begin(), objs.end()), objs.end());
  return objs;
}

}  // namespace qtopos
