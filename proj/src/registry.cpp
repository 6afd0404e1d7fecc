#include "zeittafel/registry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "zeittafel/error.hpp"

namespace zeittafel {

void ServiceOffer::validate() const {
  if (id.empty()) throw ValidationError("service offer without id");
  try {
    estimate.validate();
  } catch (const ValidationError& e) {
    throw ValidationError("service " + id + ": " + e.what());
  }
  if (!std::isfinite(cost) || cost < 0.0) throw ValidationError("service " + id + ": cost must be >= 0");
  if (capacity < 1) throw ValidationError("service " + id + ": capacity must be >= 1");
  for (std::size_t i = 0; i < windows.size(); ++i) {
    windows[i].validate();
    if (i > 0 && windows[i].start <= windows[i - 1].end) {
      throw ValidationError("service " + id + ": windows must be sorted and disjoint");
    }
  }
}

void ConstraintSet::validate() const {
  if (party_size < 1) throw ValidationError("constraints: party_size must be >= 1");
  if (max_cost && (std::isnan(*max_cost) || *max_cost < 0.0)) {
    throw ValidationError("constraints: max_cost must be >= 0");
  }
  if (!std::isfinite(plan_epoch) || plan_epoch < 0.0) {
    throw ValidationError("constraints: plan_epoch must be >= 0");
  }
}

ServiceMatrix ServiceMatrix::make(std::vector<Category> categories, std::vector<ServiceOffer> offers) {
  ServiceMatrix m;
  std::set<std::string> ids;
  for (const auto& c : categories) {
    if (c.id.empty()) throw ValidationError("category without id");
    if (!ids.insert(c.id).second) throw ValidationError("duplicate category id: " + c.id);
  }
  m.categories_ = std::move(categories);
  m.columns_.assign(m.categories_.size(), {});

  std::set<std::string> offer_ids;
  for (auto& offer : offers) {
    auto col = m.category_index(offer.category_id);
    if (!col) {
      throw ValidationError("service " + offer.id + " references unknown category: " + offer.category_id);
    }
    offer.windows = normalize(std::move(offer.windows));
    offer.validate();
    if (!offer_ids.insert(offer.id).second) throw ValidationError("duplicate service id: " + offer.id);
    m.columns_[*col].push_back(std::move(offer));
  }
  return m;
}

const Category* ServiceMatrix::find_category(const std::string& id) const {
  auto i = category_index(id);
  return i ? &categories_[*i] : nullptr;
}

std::optional<std::size_t> ServiceMatrix::category_index(const std::string& id) const {
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    if (categories_[i].id == id) return i;
  }
  return std::nullopt;
}

const std::vector<ServiceOffer>& ServiceMatrix::column(const std::string& category_id) const {
  auto i = category_index(category_id);
  if (!i) throw ValidationError("unknown category: " + category_id);
  return columns_[*i];
}

const ServiceOffer* ServiceMatrix::find_offer(const std::string& service_id) const {
  for (const auto& col : columns_) {
    for (const auto& o : col) {
      if (o.id == service_id) return &o;
    }
  }
  return nullptr;
}

std::vector<ServiceOffer> ServiceMatrix::all_offers() const {
  std::vector<ServiceOffer> out;
  for (const auto& col : columns_) out.insert(out.end(), col.begin(), col.end());
  return out;
}

std::size_t ServiceMatrix::offer_count() const {
  std::size_t n = 0;
  for (const auto& col : columns_) n += col.size();
  return n;
}

ServiceMatrix register_offer(const ServiceMatrix& matrix, ServiceOffer offer) {
  if (!matrix.find_category(offer.category_id)) {
    throw ValidationError("unknown category: " + offer.category_id);
  }
  auto offers = matrix.all_offers();
  auto same = std::find_if(offers.begin(), offers.end(), [&](const auto& o) { return o.id == offer.id; });
  if (same != offers.end() && same->category_id == offer.category_id) {
    *same = std::move(offer);
  } else {
    if (same != offers.end()) offers.erase(same);
    offers.push_back(std::move(offer));
  }
  return ServiceMatrix::make(matrix.categories(), std::move(offers));
}

ServiceMatrix edit_windows(const ServiceMatrix& matrix, const std::string& service_id,
                           const std::function<WindowSet(const WindowSet&)>& edit) {
  auto offers = matrix.all_offers();
  auto it = std::find_if(offers.begin(), offers.end(), [&](const auto& o) { return o.id == service_id; });
  if (it == offers.end()) throw ValidationError("unknown service: " + service_id);
  it->windows = edit(it->windows);
  return ServiceMatrix::make(matrix.categories(), std::move(offers));
}

ServiceMatrix block(const ServiceMatrix& matrix, const std::string& service_id,
                    const AvailabilityWindow& window) {
  window.validate();
  return edit_windows(matrix, service_id, [&](const WindowSet& w) { return subtract(w, window); });
}

ServiceMatrix unblock(const ServiceMatrix& matrix, const std::string& service_id,
                      const AvailabilityWindow& window) {
  window.validate();
  return edit_windows(matrix, service_id, [&](const WindowSet& w) { return add(w, window); });
}

AvailableMatrix available_submatrix(const ServiceMatrix& matrix, const ConstraintSet& constraints,
                                    std::span<const OfferPredicate> extra) {
  constraints.validate();
  std::vector<ServiceOffer> kept;
  for (const auto& o : matrix.all_offers()) {
    if (constraints.max_cost && o.cost > *constraints.max_cost) continue;
    if (o.capacity < constraints.party_size) continue;
    if (o.windows.empty()) continue;
    if (!std::all_of(extra.begin(), extra.end(), [&](const OfferPredicate& p) { return p(o); })) continue;
    kept.push_back(o);
  }
  AvailableMatrix out{ServiceMatrix::make(matrix.categories(), std::move(kept)), {}};
  for (std::size_t i = 0; i < out.matrix.category_count(); ++i) {
    if (out.matrix.column(i).empty()) out.empty_categories.push_back(out.matrix.categories()[i].id);
  }
  return out;
}

ServiceMatrix without_categories(const ServiceMatrix& matrix, const std::vector<std::string>& ids) {
  auto drop = [&](const std::string& id) { return std::find(ids.begin(), ids.end(), id) != ids.end(); };
  std::vector<Category> cats;
  for (const auto& c : matrix.categories()) {
    if (!drop(c.id)) cats.push_back(c);
  }
  std::vector<ServiceOffer> offers;
  for (auto& o : matrix.all_offers()) {
    if (!drop(o.category_id)) offers.push_back(std::move(o));
  }
  return ServiceMatrix::make(std::move(cats), std::move(offers));
}

std::string to_string(CategoryKind kind) {
  return kind == CategoryKind::fixed ? "fixed" : "non_fixed";
}

CategoryKind category_kind_from_string(const std::string& s) {
  if (s == "fixed") return CategoryKind::fixed;
  if (s == "non_fixed") return CategoryKind::non_fixed;
  throw ValidationError("category kind must be \"fixed\" or \"non_fixed\", got \"" + s + "\"");
}

}  // namespace zeittafel
