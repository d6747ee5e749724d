// Copyright 2026 unihpf contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "unihpf/common.hpp"

namespace unihpf {

enum class ValueKind : uint8_t { Text = 0, Numeric = 1, Categorical = 2 };

// value is the description-joined form; raw keeps the pre-join source string
// (identical when no definition join applies). Conventional code vocabularies
// are built from raw, text tokenization reads value.
struct Feature {
  std::string name;
  std::string value;
  std::string raw;
  ValueKind kind = ValueKind::Text;
};

struct MedicalEvent {
  std::string stay_id;
  std::string patient_id;
  std::string event_type;
  int64_t t = 0;  // minutes from stay admission
  std::vector<Feature> features;
};

struct StayInfo {
  std::string stay_id;
  std::string patient_id;
  std::string admission_id;
  int age = 0;
  int64_t intime_abs = 0;   // absolute minutes, format-specific origin
  int64_t outtime_abs = 0;
  bool expired = false;
  std::string discharge_location;
  std::vector<int> dx_classes;  // 0..17
};

// discharge location classes shared by fi_ac / im_disch heads
inline constexpr int kNumLocationClasses = 6;  // home, other hospital, rehab, skilled nursing, died, other
inline constexpr int kLocationDied = 4;
inline constexpr int kNoDischargeClass = kNumLocationClasses;  // fallback class id 6
inline constexpr int kNumDxClasses = 18;

inline int location_class_from_string(const std::string& s) {
  std::string v = lowercase(trim(s));
  if (v == "home") return 0;
  if (v == "other hospital") return 1;
  if (v == "rehab") return 2;
  if (v == "skilled nursing") return 3;
  if (v == "died") return kLocationDied;
  return 5;  // other
}

struct LabelSet {
  int mort = 0, los3 = 0, los7 = 0, readm = 0;
  int fi_ac = kNoDischargeClass;
  int im_disch = kNoDischargeClass;
  uint32_t dx_bits = 0;

  bool operator==(const LabelSet&) const = default;
};

struct PatientRecord {
  StayInfo stay;
  LabelSet labels;
  std::vector<MedicalEvent> events;  // truncated to the observation window, time order
};

enum class TaskKind { Binary, Multiclass, Multilabel };

struct TaskInfo {
  std::string name;
  TaskKind kind;
  int n_outputs;
};

inline const std::vector<TaskInfo>& all_tasks() {
  static const std::vector<TaskInfo> tasks = {
      {"mort", TaskKind::Binary, 1},       {"los3", TaskKind::Binary, 1},
      {"los7", TaskKind::Binary, 1},       {"readm", TaskKind::Binary, 1},
      {"fi_ac", TaskKind::Multiclass, 7},  {"im_disch", TaskKind::Multiclass, 7},
      {"dx", TaskKind::Multilabel, kNumDxClasses}};
  return tasks;
}

inline const TaskInfo& task_info(const std::string& name) {
  for (const auto& t : all_tasks())
    if (t.name == name) return t;
  throw ConfigError("unknown task '" + name + "'");
}

// label of a record for one task, encoded as an integer (class id for
// multiclass, bitmask for multilabel)
inline uint32_t task_label(const LabelSet& l, const TaskInfo& t) {
  if (t.name == "mort") return static_cast<uint32_t>(l.mort);
  if (t.name == "los3") return static_cast<uint32_t>(l.los3);
  if (t.name == "los7") return static_cast<uint32_t>(l.los7);
  if (t.name == "readm") return static_cast<uint32_t>(l.readm);
  if (t.name == "fi_ac") return static_cast<uint32_t>(l.fi_ac);
  if (t.name == "im_disch") return static_cast<uint32_t>(l.im_disch);
  return l.dx_bits;
}

inline void write_event(ByteWriter& w, const MedicalEvent& e) {
  w.str(e.stay_id);
  w.str(e.patient_id);
  w.str(e.event_type);
  w.i64(e.t);
  w.u32(static_cast<uint32_t>(e.features.size()));
  for (const auto& f : e.features) {
    w.str(f.name);
    w.str(f.value);
    w.str(f.raw);
    w.u8(static_cast<uint8_t>(f.kind));
  }
}

inline MedicalEvent read_event(ByteReader& r) {
  MedicalEvent e;
  e.stay_id = r.str();
  e.patient_id = r.str();
  e.event_type = r.str();
  e.t = r.i64();
  uint32_t nf = r.u32();
  e.features.resize(nf);
  for (auto& f : e.features) {
    f.name = r.str();
    f.value = r.str();
    f.raw = r.str();
    f.kind = static_cast<ValueKind>(r.u8());
  }
  return e;
}

inline constexpr std::string_view kEventMagic = "UHEV1\n";
inline constexpr std::string_view kCohortMagic = "UHCO1\n";

inline void save_events(const fs::path& path, const std::vector<MedicalEvent>& events) {
  ByteWriter w;
  w.buf.append(kEventMagic);
  w.u64(events.size());
  for (const auto& e : events) write_event(w, e);
  write_file_atomic(path, w.buf);
}

inline std::vector<MedicalEvent> load_events(const fs::path& path) {
  std::string data = read_file(path);
  if (data.size() < kEventMagic.size() || std::string_view(data).substr(0, kEventMagic.size()) != kEventMagic)
    throw IoError(path.string() + ": not an event stream file");
  ByteReader r(std::string_view(data).substr(kEventMagic.size()));
  uint64_t n = r.u64();
  std::vector<MedicalEvent> out;
  out.reserve(n);
  for (uint64_t i = 0; i < n; ++i) out.push_back(read_event(r));
  if (!r.eof()) throw IoError(path.string() + ": trailing bytes");
  return out;
}

inline void save_cohort(const fs::path& path, const std::vector<PatientRecord>& recs) {
  ByteWriter w;
  w.buf.append(kCohortMagic);
  w.u64(recs.size());
  for (const auto& rec : recs) {
    w.str(rec.stay.stay_id);
    w.str(rec.stay.patient_id);
    w.str(rec.stay.admission_id);
    w.u32(static_cast<uint32_t>(rec.stay.age));
    w.i64(rec.stay.intime_abs);
    w.i64(rec.stay.outtime_abs);
    w.u8(rec.stay.expired ? 1 : 0);
    w.str(rec.stay.discharge_location);
    w.u32(static_cast<uint32_t>(rec.stay.dx_classes.size()));
    for (int c : rec.stay.dx_classes) w.u32(static_cast<uint32_t>(c));
    w.u8(static_cast<uint8_t>(rec.labels.mort));
    w.u8(static_cast<uint8_t>(rec.labels.los3));
    w.u8(static_cast<uint8_t>(rec.labels.los7));
    w.u8(static_cast<uint8_t>(rec.labels.readm));
    w.u8(static_cast<uint8_t>(rec.labels.fi_ac));
    w.u8(static_cast<uint8_t>(rec.labels.im_disch));
    w.u32(rec.labels.dx_bits);
    w.u32(static_cast<uint32_t>(rec.events.size()));
    for (const auto& e : rec.events) write_event(w, e);
  }
  write_file_atomic(path, w.buf);
}

inline std::vector<PatientRecord> load_cohort(const fs::path& path) {
  std::string data = read_file(path);
  if (data.size() < kCohortMagic.size() ||
      std::string_view(data).substr(0, kCohortMagic.size()) != kCohortMagic)
    throw IoError(path.string() + ": not a cohort file");
  ByteReader r(std::string_view(data).substr(kCohortMagic.size()));
  uint64_t n = r.u64();
  std::vector<PatientRecord> out;
  out.reserve(n);
  for (uint64_t i = 0; i < n; ++i) {
    PatientRecord rec;
    rec.stay.stay_id = r.str();
    rec.stay.patient_id = r.str();
    rec.stay.admission_id = r.str();
    rec.stay.age = static_cast<int>(r.u32());
    rec.stay.intime_abs = r.i64();
    rec.stay.outtime_abs = r.i64();
    rec.stay.expired = r.u8() != 0;
    rec.stay.discharge_location = r.str();
    uint32_t ndx = r.u32();
    rec.stay.dx_classes.resize(ndx);
    for (auto& c : rec.stay.dx_classes) c = static_cast<int>(r.u32());
    rec.labels.mort = r.u8();
    rec.labels.los3 = r.u8();
    rec.labels.los7 = r.u8();
    rec.labels.readm = r.u8();
    rec.labels.fi_ac = r.u8();
    rec.labels.im_disch = r.u8();
    rec.labels.dx_bits = r.u32();
    uint32_t ne = r.u32();
    rec.events.resize(ne);
    for (auto& e : rec.events) e = read_event(r);
    out.push_back(std::move(rec));
  }
  if (!r.eof()) throw IoError(path.string() + ": trailing bytes");
  return out;
}

}  // namespace unihpf
