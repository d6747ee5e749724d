// Copyright 2026 unihpf contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "unihpf/csv.hpp"
#include "unihpf/events.hpp"

namespace unihpf {

struct DefinitionJoin {
  std::string column;
  fs::path path;
  std::string key_column;
  std::string value_column;
};

struct TableConfig {
  fs::path path;
  std::string event_type;
  std::string patient_id_column;
  std::string stay_id_column;
  std::string timestamp_column;
  std::string time_format = "datetime";  // "datetime" | "minutes"
  std::vector<DefinitionJoin> definitions;
  std::vector<std::string> excluded_columns;
};

struct DemographicsConfig {
  fs::path path;
  std::string patient_id_column;
  std::string stay_id_column;
  std::string admission_id_column;
  std::string age_column;
  std::string intime_column;
  std::string outtime_column;
  std::string time_format = "datetime";
  std::string status_column;
  std::string expired_value = "expired";
  std::string location_column;
};

struct DiagnosesConfig {
  fs::path path;
  std::string stay_id_column;
  std::string class_column;
};

enum class ColumnClass : uint8_t {
  Text = 0,
  Numeric = 1,       // decimal values with a fractional part present
  Categorical = 2,   // all-integer, under the distinct-value cutoff
  DroppedInteger = 3,  // all-integer id-like column, excluded from features
  Reserved = 4,        // id / timestamp / configured exclusion
};

struct ColumnSchema {
  std::string name;
  ColumnClass cls = ColumnClass::Text;
  size_t distinct = 0;
};

inline constexpr size_t kCategoricalCutoff = 50;

// Column typing: all-integer columns are identifier-like and dropped unless
// their distinct count stays under the cutoff (then categorical); columns
// whose values all parse as decimals with at least one fractional part are
// numeric; everything else is free text. Empty cells don't vote.
inline std::vector<ColumnSchema> infer_schema(const CsvTable& table, const TableConfig& cfg) {
  std::unordered_set<std::string> reserved = {cfg.patient_id_column, cfg.stay_id_column,
                                              cfg.timestamp_column};
  for (const auto& c : cfg.excluded_columns) reserved.insert(c);

  std::vector<ColumnSchema> out;
  for (size_t ci = 0; ci < table.columns.size(); ++ci) {
    ColumnSchema cs;
    cs.name = table.columns[ci];
    if (reserved.count(cs.name)) {
      cs.cls = ColumnClass::Reserved;
      out.push_back(cs);
      continue;
    }
    bool all_int = true, all_decimal = true, any_frac = false, any_value = false;
    std::unordered_set<std::string> distinct;
    for (const auto& row : table.rows) {
      const std::string& v = row[ci];
      if (v.empty()) continue;
      any_value = true;
      distinct.insert(v);
      if (!is_integer_string(v)) all_int = false;
      if (!is_decimal_string(v)) all_decimal = false;
      else if (v.find('.') != std::string::npos) any_frac = true;
    }
    cs.distinct = distinct.size();
    if (!any_value) cs.cls = ColumnClass::Text;
    else if (all_int)
      cs.cls = distinct.size() < kCategoricalCutoff ? ColumnClass::Categorical
                                                    : ColumnClass::DroppedInteger;
    else if (all_decimal && any_frac)
      cs.cls = ColumnClass::Numeric;
    else
      cs.cls = ColumnClass::Text;
    out.push_back(cs);
  }
  return out;
}

struct IngestStats {
  int64_t rows_total = 0;
  int64_t rows_skipped_missing_id = 0;
  int64_t rows_skipped_unknown_stay = 0;
  int64_t join_misses = 0;
  int64_t features_dropped_rare = 0;
  int64_t events_deleted_rare = 0;
};

inline int64_t parse_time_value(const std::string& v, const std::string& format) {
  if (format == "datetime") return parse_datetime_minutes(v);
  if (format == "minutes") return parse_i64(v);
  throw ConfigError("unknown time_format '" + format + "'");
}

inline std::unordered_map<std::string, StayInfo> load_demographics(const DemographicsConfig& cfg) {
  CsvTable t = read_csv(cfg.path);
  int pid = t.require_column(cfg.patient_id_column);
  int sid = t.require_column(cfg.stay_id_column);
  int aid = t.require_column(cfg.admission_id_column);
  int age = t.require_column(cfg.age_column);
  int tin = t.require_column(cfg.intime_column);
  int tout = t.require_column(cfg.outtime_column);
  int status = t.require_column(cfg.status_column);
  int loc = t.require_column(cfg.location_column);
  std::unordered_map<std::string, StayInfo> out;
  for (const auto& row : t.rows) {
    StayInfo s;
    s.patient_id = row[pid];
    s.stay_id = row[sid];
    s.admission_id = row[aid];
    s.age = static_cast<int>(parse_i64(row[age]));
    s.intime_abs = parse_time_value(row[tin], cfg.time_format);
    s.outtime_abs = parse_time_value(row[tout], cfg.time_format);
    s.expired = lowercase(trim(row[status])) == lowercase(cfg.expired_value);
    s.discharge_location = row[loc];
    if (s.stay_id.empty()) throw DataError(cfg.path.string() + ": empty stay id");
    if (!out.emplace(s.stay_id, s).second)
      throw DataError(cfg.path.string() + ": duplicate stay id '" + s.stay_id + "'");
  }
  return out;
}

inline void attach_diagnoses(const DiagnosesConfig& cfg,
                             std::unordered_map<std::string, StayInfo>& stays) {
  CsvTable t = read_csv(cfg.path);
  int sid = t.require_column(cfg.stay_id_column);
  int cls = t.require_column(cfg.class_column);
  for (const auto& row : t.rows) {
    auto it = stays.find(row[sid]);
    if (it == stays.end()) continue;
    int c = static_cast<int>(parse_i64(row[cls]));
    if (c < 0 || c >= kNumDxClasses)
      throw DataError(cfg.path.string() + ": diagnosis class out of range: " + row[cls]);
    it->second.dx_classes.push_back(c);
  }
}

inline std::unordered_map<std::string, std::string> load_definition(const DefinitionJoin& j) {
  CsvTable t = read_csv(j.path);
  int k = t.require_column(j.key_column);
  int v = t.require_column(j.value_column);
  std::unordered_map<std::string, std::string> out;
  for (const auto& row : t.rows) out[row[k]] = row[v];
  return out;
}

// One table -> events. Features keep column order; definition joins swap the
// raw code into the description while the raw string is retained alongside.
inline std::vector<MedicalEvent> extract_events(const CsvTable& table, const TableConfig& cfg,
                                                const std::unordered_map<std::string, StayInfo>& stays,
                                                IngestStats& stats) {
  int pid = table.require_column(cfg.patient_id_column);
  int sid = table.require_column(cfg.stay_id_column);
  int tcol = table.require_column(cfg.timestamp_column);
  auto schema = infer_schema(table, cfg);

  std::unordered_map<std::string, std::unordered_map<std::string, std::string>> defs;
  for (const auto& j : cfg.definitions) {
    if (table.column_index(j.column) < 0)
      throw ConfigError("definition join on unknown column '" + j.column + "'");
    defs[j.column] = load_definition(j);
  }

  std::vector<MedicalEvent> out;
  for (size_t ri = 0; ri < table.rows.size(); ++ri) {
    const auto& row = table.rows[ri];
    ++stats.rows_total;
    if (row[static_cast<size_t>(pid)].empty() || row[static_cast<size_t>(sid)].empty()) {
      ++stats.rows_skipped_missing_id;
      continue;
    }
    auto stay_it = stays.find(row[static_cast<size_t>(sid)]);
    if (stay_it == stays.end()) {
      ++stats.rows_skipped_unknown_stay;
      continue;
    }
    MedicalEvent e;
    e.patient_id = row[static_cast<size_t>(pid)];
    e.stay_id = row[static_cast<size_t>(sid)];
    e.event_type = cfg.event_type;
    const std::string& tv = row[static_cast<size_t>(tcol)];
    int64_t abs;
    try {
      abs = parse_time_value(tv, cfg.time_format);
    } catch (const DataError&) {
      throw DataError(cfg.path.string() + " row " + std::to_string(ri + 2) +
                      ": unparseable timestamp '" + tv + "'");
    }
    e.t = abs - stay_it->second.intime_abs;

    for (size_t ci = 0; ci < table.columns.size(); ++ci) {
      const auto& cs = schema[ci];
      if (cs.cls == ColumnClass::Reserved || cs.cls == ColumnClass::DroppedInteger) continue;
      Feature f;
      f.name = cs.name;
      f.raw = trim(row[ci]);
      f.value = f.raw;
      auto dit = defs.find(cs.name);
      if (dit != defs.end() && !f.raw.empty()) {
        auto vit = dit->second.find(f.raw);
        if (vit != dit->second.end()) f.value = vit->second;
        else ++stats.join_misses;  // raw code kept as the value
      }
      if (cs.cls == ColumnClass::Numeric || has_fractional_part(f.value))
        f.kind = ValueKind::Numeric;
      else if (cs.cls == ColumnClass::Categorical)
        f.kind = ValueKind::Categorical;
      else
        f.kind = ValueKind::Text;
      e.features.push_back(std::move(f));
    }
    out.push_back(std::move(e));
  }
  return out;
}

// (name, value) pairs seen fewer than min_count times lose the feature; an
// event whose first (main) feature is lost is deleted outright. Single pass,
// counts taken before any removal.
inline void drop_rare_features(std::vector<MedicalEvent>& events, int64_t min_count,
                               IngestStats& stats) {
  if (min_count <= 1) return;
  std::map<std::pair<std::string, std::string>, int64_t> counts;
  for (const auto& e : events)
    for (const auto& f : e.features) ++counts[{f.name, f.value}];

  std::vector<MedicalEvent> kept;
  kept.reserve(events.size());
  for (auto& e : events) {
    bool main_removed = false;
    std::vector<Feature> fs;
    for (size_t i = 0; i < e.features.size(); ++i) {
      const auto& f = e.features[i];
      if (counts[{f.name, f.value}] < min_count) {
        ++stats.features_dropped_rare;
        if (i == 0) main_removed = true;
      } else {
        fs.push_back(f);
      }
    }
    if (main_removed || fs.empty()) {
      ++stats.events_deleted_rare;
      continue;
    }
    e.features = std::move(fs);
    kept.push_back(std::move(e));
  }
  events = std::move(kept);
}

struct HospitalIngestConfig {
  std::vector<TableConfig> tables;
  DemographicsConfig demographics;
  DiagnosesConfig diagnoses;
  int64_t rare_min_count = 5;
};

struct IngestResult {
  std::vector<MedicalEvent> events;  // grouped by stay, time-ordered within stay
  std::unordered_map<std::string, StayInfo> stays;
  IngestStats stats;
};

inline IngestResult ingest_hospital(const HospitalIngestConfig& cfg) {
  IngestResult r;
  r.stays = load_demographics(cfg.demographics);
  if (!cfg.diagnoses.path.empty()) attach_diagnoses(cfg.diagnoses, r.stays);
  for (const auto& tc : cfg.tables) {
    CsvTable t = read_csv(tc.path);
    auto evs = extract_events(t, tc, r.stays, r.stats);
    r.events.insert(r.events.end(), std::make_move_iterator(evs.begin()),
                    std::make_move_iterator(evs.end()));
  }
  // group by stay in first-seen order, then time-order within each stay;
  // ties keep table processing order
  std::unordered_map<std::string, size_t> stay_rank;
  for (const auto& e : r.events) stay_rank.emplace(e.stay_id, stay_rank.size());
  std::stable_sort(r.events.begin(), r.events.end(),
                   [&](const MedicalEvent& a, const MedicalEvent& b) {
                     size_t ra = stay_rank[a.stay_id], rb = stay_rank[b.stay_id];
                     if (ra != rb) return ra < rb;
                     return a.t < b.t;
                   });
  drop_rare_features(r.events, cfg.rare_min_count, r.stats);
  return r;
}

}  // namespace unihpf
