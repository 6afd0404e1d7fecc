#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zeittafel/interval.hpp"
#include "zeittafel/pert.hpp"

namespace zeittafel {

enum class CategoryKind { fixed, non_fixed };

struct Category {
  std::string id;
  std::string name;
  CategoryKind kind = CategoryKind::non_fixed;

  bool operator==(const Category&) const = default;
};

struct ServiceOffer {
  std::string id;
  std::string category_id;
  std::string name;
  ThreePointEstimate estimate;
  double cost = 0.0;
  int capacity = 1;
  // Empty means the offer is never available.
  WindowSet windows;
  // Free-form QoS attributes, matched by caller-supplied predicates.
  std::map<std::string, std::string> attributes;

  void validate() const;

  bool operator==(const ServiceOffer&) const = default;
};

struct ConstraintSet {
  std::optional<double> max_cost;  // unbounded when absent
  int party_size = 1;
  Minutes plan_epoch = 0.0;

  void validate() const;
};

// Categories are the columns; each column holds that category's offers in
// registration order. Columns may be ragged, and in a filtered matrix empty.
class ServiceMatrix {
 public:
  ServiceMatrix() = default;

  // Validates every offer, normalizes windows and rejects duplicate ids or
  // offers for unknown categories.
  static ServiceMatrix make(std::vector<Category> categories, std::vector<ServiceOffer> offers);

  const std::vector<Category>& categories() const { return categories_; }
  std::size_t category_count() const { return categories_.size(); }

  const Category* find_category(const std::string& id) const;
  std::optional<std::size_t> category_index(const std::string& id) const;

  // Throws ValidationError for an unknown category.
  const std::vector<ServiceOffer>& column(const std::string& category_id) const;
  const std::vector<ServiceOffer>& column(std::size_t i) const { return columns_[i]; }

  const ServiceOffer* find_offer(const std::string& service_id) const;

  // Offers across all columns, column by column.
  std::vector<ServiceOffer> all_offers() const;
  std::size_t offer_count() const;

 private:
  std::vector<Category> categories_;
  std::vector<std::vector<ServiceOffer>> columns_;
};

using OfferPredicate = std::function<bool(const ServiceOffer&)>;

// Appends the offer to its category column, replacing any offer with the same id.
ServiceMatrix register_offer(const ServiceMatrix& matrix, ServiceOffer offer);

// Applies `edit` to one service's windows. Throws ValidationError for unknown ids.
ServiceMatrix edit_windows(const ServiceMatrix& matrix, const std::string& service_id,
                           const std::function<WindowSet(const WindowSet&)>& edit);

// Removes `window` from the service's availability.
ServiceMatrix block(const ServiceMatrix& matrix, const std::string& service_id,
                    const AvailabilityWindow& window);

// Re-opens `window` for the service, e.g. after a booking is cancelled.
ServiceMatrix unblock(const ServiceMatrix& matrix, const std::string& service_id,
                      const AvailabilityWindow& window);

struct AvailableMatrix {
  ServiceMatrix matrix;
  // Categories whose column ended up empty, in column order.
  std::vector<std::string> empty_categories;
};

// Drops offers that cost too much, are too small for the party, have no
// availability at all, or fail any extra predicate. Slot-level timing is the
// planner's job.
AvailableMatrix available_submatrix(const ServiceMatrix& matrix, const ConstraintSet& constraints,
                                    std::span<const OfferPredicate> extra = {});

// Copy of the matrix without the given categories and their offers.
ServiceMatrix without_categories(const ServiceMatrix& matrix, const std::vector<std::string>& ids);

std::string to_string(CategoryKind kind);
CategoryKind category_kind_from_string(const std::string& s);

}  // namespace zeittafel
