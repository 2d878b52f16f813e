#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lateral/error.hpp"

namespace lateral {

enum class Target : std::uint8_t { Y, Ym };

std::string_view to_string(Target t);
std::optional<Target> target_from_string(std::string_view s);

/// One (second, stream) classification, either detected or annotated.
struct AnnotationRecord {
  std::int64_t t = 0;
  std::string stream;
  bool critical = false;
  bool critical_moving = false;

  bool positive(Target target) const { return target == Target::Y ? critical : critical_moving; }
  bool operator==(const AnnotationRecord&) const = default;
};

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  bool operator==(const ConfusionCounts&) const = default;
};

/// Seconds covered by only one of the two inputs.
class DomainMismatch : public ValidationError {
 public:
  explicit DomainMismatch(std::vector<std::pair<std::int64_t, std::string>> seconds);
  const std::vector<std::pair<std::int64_t, std::string>>& seconds() const { return seconds_; }

 private:
  std::vector<std::pair<std::int64_t, std::string>> seconds_;
};

/// Confusion counts per stream, positives being critical (Y) or
/// critical-moving (Y_m) seconds. Both inputs must cover the same
/// (t, stream) pairs; throws DomainMismatch otherwise.
std::map<std::string, ConfusionCounts> score(std::span<const AnnotationRecord> detected,
                                             std::span<const AnnotationRecord> truth, Target target);

struct PrecisionRecall {
  std::optional<int> precision_pct;
  std::optional<int> recall_pct;

  bool operator==(const PrecisionRecall&) const = default;
};

/// Integer percentages, rounded half away from zero; absent on a zero denominator.
PrecisionRecall precision_recall(const ConfusionCounts& counts);

/// round(100 * num / den) with halves away from zero, exact. `den` > 0.
int rounded_percent(std::int64_t num, std::int64_t den);

}  // namespace lateral
