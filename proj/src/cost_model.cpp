#include "fftplan/cost_model.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "fftplan/errors.hpp"
#include "json.hpp"

namespace fftplan {

const char* to_string(ModelErrc code) {
  switch (code) {
    case ModelErrc::parse_error: return "parse error";
    case ModelErrc::missing_field: return "missing field";
    case ModelErrc::wrong_type: return "wrong type";
    case ModelErrc::bad_stage_count: return "bad stage count";
    case ModelErrc::bad_context_order: return "bad context order";
    case ModelErrc::unknown_edge: return "unknown edge type";
    case ModelErrc::unknown_prev: return "unknown predecessor tag";
    case ModelErrc::bad_stage: return "stage out of range";
    case ModelErrc::non_positive_weight: return "non-positive weight";
    case ModelErrc::duplicate_entry: return "duplicate entry";
    case ModelErrc::prev_order_mismatch: return "predecessor does not match context order";
    case ModelErrc::infeasible_edge: return "edge cannot start at stage";
    case ModelErrc::infeasible_context: return "predecessor cannot end at stage";
    case ModelErrc::incomplete_model: return "incomplete model";
    case ModelErrc::negative_weight: return "negative weight";
  }
  return "model error";
}

std::string_view to_string(Provenance p) noexcept {
  return p == Provenance::measured ? "measured" : "synthetic";
}

namespace {

std::string describe(EdgeType edge, int stage, std::optional<ContextTag> prev) {
  return std::string(to_string(edge)) + "@" + std::to_string(stage) + " after " +
         (prev ? std::string(to_string(*prev)) : std::string("*"));
}

}  // namespace

CostModel::CostModel(int stages, int context_order, Provenance provenance)
    : stages_(stages), context_order_(context_order), provenance_(provenance) {
  if (stages < 1 || stages > 30) {
    throw ModelError(ModelErrc::bad_stage_count, "L must be in [1, 30], got " + std::to_string(stages));
  }
  if (context_order != 0 && context_order != 1) {
    throw ModelError(ModelErrc::bad_context_order,
                     "context_order must be 0 or 1, got " + std::to_string(context_order));
  }
}

void CostModel::add(EdgeType edge, int stage, std::optional<ContextTag> prev, double ns) {
  const auto what = describe(edge, stage, prev);
  if (stage < 0 || stage >= stages_) {
    throw ModelError(ModelErrc::bad_stage, what + " (L = " + std::to_string(stages_) + ")");
  }
  if (!std::isfinite(ns) || ns <= 0.0) {
    throw ModelError(ModelErrc::non_positive_weight, what + " has weight " + std::to_string(ns));
  }
  if ((context_order_ == 0) != !prev.has_value()) {
    throw ModelError(ModelErrc::prev_order_mismatch,
                     what + " in a context-order-" + std::to_string(context_order_) + " model");
  }
  if (!edge_fits(edge, stage, stages_)) {
    throw ModelError(ModelErrc::infeasible_edge, what);
  }
  if (prev) {
    const bool root = stage == 0;
    const bool ok = root ? *prev == ContextTag::start
                         : *prev != ContextTag::start && context_fits(*prev, stage, stages_);
    if (!ok) throw ModelError(ModelErrc::infeasible_context, what);
  }
  if (!entries_.emplace(CostKey{stage, edge, prev}, ns).second) {
    throw ModelError(ModelErrc::duplicate_entry, what);
  }
}

std::optional<double> CostModel::lookup(EdgeType edge, int stage, ContextTag prev) const {
  const auto key = context_order_ == 0 ? CostKey{stage, edge, std::nullopt}
                                       : CostKey{stage, edge, prev};
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  return std::nullopt;
}

CostModel collapse_context(const CostModel& model) {
  if (model.context_order() == 0) return model;
  struct Acc {
    double sum = 0.0;
    int count = 0;
  };
  std::map<std::pair<int, EdgeType>, Acc> acc;
  for (const auto& [key, ns] : model.entries()) {
    auto& a = acc[{key.stage, key.edge}];
    a.sum += ns;
    ++a.count;
  }
  CostModel out(model.stages(), 0, model.provenance());
  for (const auto& [k, a] : acc) {
    out.add(k.second, k.first, std::nullopt, a.sum / a.count);
  }
  return out;
}

namespace {

using json = nlohmann::json;

const json& require(const json& obj, const char* field, const std::string& where) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    throw ModelError(ModelErrc::missing_field, where + ": '" + field + "' is required");
  }
  return *it;
}

int require_int(const json& obj, const char* field, const std::string& where) {
  const auto& v = require(obj, field, where);
  if (!v.is_number_integer()) {
    throw ModelError(ModelErrc::wrong_type, where + ": '" + field + "' must be an integer");
  }
  const auto wide = v.get<std::int64_t>();
  if (wide < -1'000'000 || wide > 1'000'000) {
    throw ModelError(ModelErrc::wrong_type, where + ": '" + field + "' out of range");
  }
  return static_cast<int>(wide);
}

std::string require_string(const json& obj, const char* field, const std::string& where) {
  const auto& v = require(obj, field, where);
  if (!v.is_string()) {
    throw ModelError(ModelErrc::wrong_type, where + ": '" + field + "' must be a string");
  }
  return v.get<std::string>();
}

}  // namespace

CostModel load_cost_model(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ModelError(ModelErrc::parse_error, e.what());
  }
  if (!doc.is_object()) {
    throw ModelError(ModelErrc::wrong_type, "document root must be an object");
  }
  const int stages = require_int(doc, "L", "document");
  const int order = require_int(doc, "context_order", "document");
  Provenance provenance = Provenance::synthetic;
  if (auto it = doc.find("provenance"); it != doc.end()) {
    if (*it == "measured") {
      provenance = Provenance::measured;
    } else if (*it != "synthetic") {
      throw ModelError(ModelErrc::wrong_type, "document: 'provenance' must be measured|synthetic");
    }
  }
  CostModel model(stages, order, provenance);

  const auto& entries = require(doc, "entries", "document");
  if (!entries.is_array()) {
    throw ModelError(ModelErrc::wrong_type, "document: 'entries' must be an array");
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string where = "entries[" + std::to_string(i) + "]";
    const auto& e = entries[i];
    if (!e.is_object()) throw ModelError(ModelErrc::wrong_type, where + " must be an object");

    const auto edge_name = require_string(e, "edge", where);
    const auto edge = parse_edge_type(edge_name);
    if (!edge) throw ModelError(ModelErrc::unknown_edge, where + ": '" + edge_name + "'");

    const int stage = require_int(e, "stage", where);

    const auto prev_name = require_string(e, "prev", where);
    std::optional<ContextTag> prev;
    if (prev_name != "*") {
      prev = parse_context_tag(prev_name);
      if (!prev) throw ModelError(ModelErrc::unknown_prev, where + ": '" + prev_name + "'");
    }

    const auto& ns = require(e, "ns", where);
    if (!ns.is_number()) throw ModelError(ModelErrc::wrong_type, where + ": 'ns' must be a number");

    try {
      model.add(*edge, stage, prev, ns.get<double>());
    } catch (const ModelError& err) {
      throw ModelError(err.code(), where + ": " + err.detail());
    }
  }
  return model;
}

std::string save_cost_model(const CostModel& model) {
  nlohmann::ordered_json doc;
  doc["L"] = model.stages();
  doc["context_order"] = model.context_order();
  doc["provenance"] = std::string(to_string(model.provenance()));
  auto entries = nlohmann::ordered_json::array();
  for (const auto& [key, ns] : model.entries()) {
    nlohmann::ordered_json e;
    e["edge"] = std::string(to_string(key.edge));
    e["stage"] = key.stage;
    e["prev"] = key.prev ? std::string(to_string(*key.prev)) : std::string("*");
    e["ns"] = ns;
    entries.push_back(std::move(e));
  }
  doc["entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

}  // namespace fftplan
