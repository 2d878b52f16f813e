#include "lateral/evaluation.hpp"

#include <algorithm>
#include <set>

namespace lateral {

std::string_view to_string(Target t) { return t == Target::Y ? "Y" : "Ym"; }

std::optional<Target> target_from_string(std::string_view s) {
  if (s == "Y") return Target::Y;
  if (s == "Ym" || s == "Y_m") return Target::Ym;
  return std::nullopt;
}

namespace {

std::string mismatch_message(const std::vector<std::pair<std::int64_t, std::string>>& seconds) {
  std::string msg = "detections and annotations cover different seconds (" + std::to_string(seconds.size()) + "):";
  std::size_t shown = 0;
  for (const auto& [t, stream] : seconds) {
    if (shown++ == 10) {
      msg += " ...";
      break;
    }
    msg += " " + stream + "@" + std::to_string(t);
  }
  return msg;
}

using Key = std::pair<std::string, std::int64_t>;

std::map<Key, const AnnotationRecord*> index(std::span<const AnnotationRecord> records, const char* what) {
  std::map<Key, const AnnotationRecord*> out;
  for (const auto& r : records)
    if (!out.emplace(Key{r.stream, r.t}, &r).second)
      throw ValidationError(std::string("duplicate ") + what + " record for " + r.stream + "@" + std::to_string(r.t));
  return out;
}

}  // namespace

DomainMismatch::DomainMismatch(std::vector<std::pair<std::int64_t, std::string>> seconds)
    : ValidationError(mismatch_message(seconds)), seconds_(std::move(seconds)) {}

std::map<std::string, ConfusionCounts> score(std::span<const AnnotationRecord> detected,
                                             std::span<const AnnotationRecord> truth, Target target) {
  auto det = index(detected, "detection");
  auto ann = index(truth, "annotation");

  std::vector<std::pair<std::int64_t, std::string>> mismatched;
  for (const auto& [k, _] : det)
    if (!ann.count(k)) mismatched.emplace_back(k.second, k.first);
  for (const auto& [k, _] : ann)
    if (!det.count(k)) mismatched.emplace_back(k.second, k.first);
  if (!mismatched.empty()) {
    std::sort(mismatched.begin(), mismatched.end());
    throw DomainMismatch(std::move(mismatched));
  }

  std::map<std::string, ConfusionCounts> out;
  for (const auto& [k, d] : det) {
    auto& c = out[k.first];
    const bool predicted = d->positive(target);
    const bool actual = ann.at(k)->positive(target);
    if (predicted && actual) ++c.tp;
    else if (predicted) ++c.fp;
    else if (actual) ++c.fn;
  }
  return out;
}

int rounded_percent(std::int64_t num, std::int64_t den) {
  // floor((200 num + den) / (2 den)) == round-half-up of 100 num / den for num >= 0
  return static_cast<int>((200 * num + den) / (2 * den));
}

PrecisionRecall precision_recall(const ConfusionCounts& c) {
  PrecisionRecall out;
  if (c.tp + c.fp > 0) out.precision_pct = rounded_percent(c.tp, c.tp + c.fp);
  if (c.tp + c.fn > 0) out.recall_pct = rounded_percent(c.tp, c.tp + c.fn);
  return out;
}

}  // namespace lateral
