// Copyright 2026 unihpf contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "unihpf/csv.hpp"
#include "unihpf/events.hpp"
#include "unihpf/ingest.hpp"

namespace unihpf {

// Synthetic two-hospital EHR generator. Hospitals share clinical content
// verbatim (descriptions, units, numeric draws) but expose it under disjoint
// column names and hospital-prefixed codes; a designated signal drug's
// presence probability rises with a per-patient latent risk that also fixes
// every outcome label.
struct HospitalSpec {
  std::string hospital_id = "hospA";
  std::string code_prefix = "A_";
  int column_layout = 0;    // which of the two disjoint column-name sets
  int lexicon_variant = 0;  // surface wording for the variant drug concepts
  int n_patients = 500;
  uint64_t seed = 1;
  double signal_strength = 1.0;  // 0: independent of risk, 1: fully ramped
};

struct GroundTruthRow {
  std::string stay_id;
  double latent_risk = 0.0;
  int signal_present = 0;
  LabelSet labels;
};

namespace synth_detail {

struct LayoutNames {
  const char* lab_file;
  const char* med_file;
  const char* drip_file;
  const char* demo_file;
  const char* dx_file;
  const char* pid;
  const char* sid;
  const char* lab_time;
  const char* lab_item;
  const char* lab_value;
  const char* lab_units;
  const char* lab_priority;
  const char* lab_serial;
  const char* med_time;
  const char* med_item;
  const char* med_dose;
  const char* med_dose_units;
  const char* med_route;
  const char* med_serial;
  const char* drip_time;
  const char* drip_item;
  const char* drip_rate;
  const char* drip_rate_units;
  const char* drip_serial;
  const char* adm_id;
  const char* age;
  const char* intime;
  const char* outtime;
  const char* status;
  const char* location;
  const char* dx_class;
  const char* time_format;
};

inline const LayoutNames& layout_names(int layout) {
  static const LayoutNames l0 = {
      "labs.csv", "meds.csv", "drips.csv", "admissions.csv", "diagnoses.csv",
      "subject_code", "icu_stay_code",
      "lab_charted_at", "lab_item_code", "lab_result_value", "lab_result_units",
      "lab_priority_flag", "lab_row_serial",
      "med_ordered_at", "med_item_code", "med_dose_amount", "med_dose_units_code",
      "med_route_code", "med_row_serial",
      "drip_started_at", "drip_item_code", "drip_rate_amount", "drip_rate_units_code",
      "drip_row_serial",
      "hospital_admission_code", "admit_age_years", "icu_intime", "icu_outtime",
      "vital_status_at_discharge", "discharge_destination", "diagnosis_class_group",
      "datetime"};
  static const LayoutNames l1 = {
      "assays.csv", "medication.csv", "infusion.csv", "census.csv", "conditions.csv",
      "person_ref", "unit_visit_ref",
      "assay_recorded_offset", "assay_kind_ref", "assay_quantity", "assay_scale_ref",
      "assay_urgency_tier", "assay_line_number",
      "medication_ordered_offset", "formulary_ref", "strength_quantity", "strength_scale_ref",
      "delivery_mode_ref", "medication_line_number",
      "infusion_begun_offset", "infusion_kind_ref", "infusion_speed_quantity",
      "infusion_speed_scale_ref", "infusion_line_number",
      "facility_encounter_ref", "person_age_at_entry", "unit_entry_offset", "unit_exit_offset",
      "exit_vital_state", "post_exit_setting", "condition_class_group",
      "minutes"};
  return layout == 0 ? l0 : l1;
}

struct LabConcept {
  const char* desc;
  int unit;
  double mu, sigma;
  int dp;
};

inline const std::vector<LabConcept>& lab_concepts() {
  static const std::vector<LabConcept> v = {
      {"creatinine", 0, 0.10, 0.45, 1},
      {"blood urea nitrogen", 0, 2.90, 0.40, 1},
      {"hemoglobin", 2, 2.35, 0.15, 1},
      {"platelet count", 4, 5.30, 0.40, 1},
      {"lactate", 3, 0.55, 0.50, 1},
      {"sodium", 1, 4.94, 0.02, 1},
      {"potassium", 1, 1.40, 0.12, 1},
      {"glucose", 0, 4.90, 0.30, 1},
      {"total bilirubin", 0, -0.30, 0.60, 2},
      {"troponin t", 5, -3.00, 0.80, 2},
      {"white blood cell count", 4, 2.20, 0.35, 1},
      {"hematocrit", 6, 3.45, 0.12, 1},
  };
  return v;
}

inline const std::vector<std::string>& lab_units() {
  static const std::vector<std::string> v = {"mg/dl", "meq/l", "g/dl", "mmol/l",
                                             "k/ul",  "ng/ml", "%"};
  return v;
}

struct MedConcept {
  const char* desc;  // null for the variant concepts, resolved per lexicon
  double mu_dose;
  int dose_unit;
};

inline const std::vector<MedConcept>& shared_meds() {
  static const std::vector<MedConcept> v = {
      {"metoprolol tartrate", 3.2, 0},      {"furosemide injection", 3.7, 0},
      {"potassium chloride solution", 3.0, 5}, {"acetaminophen oral tablet", 6.5, 0},
      {"heparin sodium flush", 8.5, 2},     {"pantoprazole sodium", 3.7, 0},
      {"midazolam hydrochloride", 0.7, 0},  {"fentanyl citrate", 4.6, 3},
  };
  return v;
}

inline const std::vector<std::string>& dose_units() {
  static const std::vector<std::string> v = {"mg", "ml", "units", "mcg", "grams", "meq"};
  return v;
}

inline const std::vector<std::string>& routes() {
  static const std::vector<std::string> v = {"iv push", "oral", "intravenous drip",
                                             "subcutaneous"};
  return v;
}

struct DripConcept {
  const char* desc;
  double mu_rate;
  int rate_unit;
  int dp;
};

inline const std::vector<DripConcept>& drip_concepts() {
  static const std::vector<DripConcept> v = {
      {"sodium chloride 0.9 %", 4.4, 0, 1},   {"dextrose 5 % in water", 4.2, 0, 1},
      {"lactated ringers solution", 4.6, 0, 1}, {"propofol infusion", 3.4, 0, 1},
      {"dobutamine in dextrose", 1.6, 1, 1},  {"amiodarone in dextrose", 1.0, 1, 1},
  };
  return v;
}

inline const std::vector<std::string>& rate_units() {
  static const std::vector<std::string> v = {"ml per hour", "mcg per minute"};
  return v;
}

inline double frac(double x) { return x - std::floor(x); }

inline Rng patient_rng(uint64_t seed, int idx) {
  // hospital identity deliberately left out: twin specs draw identical content
  return Rng(splitmix64(splitmix64(seed ^ 0x5eedc0de5eedc0deull) + static_cast<uint64_t>(idx)));
}

}  // namespace synth_detail

// Surface forms of the signal drug under one lexicon; index 0..2 chosen per
// prescription. All forms share only the stem word.
inline const std::vector<std::string>& signal_surface_forms(int lexicon) {
  static const std::vector<std::string> lex0 = {
      "norepinephrine bitartrate", "norepinephrine in dextrose", "norepinephrine tartrate mix"};
  static const std::vector<std::string> lex1 = {
      "norepinephrine premix", "norepinephrine base solution", "norepinephrine concentrate"};
  return lexicon == 0 ? lex0 : lex1;
}

inline constexpr const char* kSignalStem = "norepinephrine";

// Non-signal drug concepts whose wording also differs per lexicon.
inline const std::vector<std::string>& variant_noise_forms(int lexicon) {
  static const std::vector<std::string> lex0 = {"vancomycin hydrochloride",
                                                "insulin human regular"};
  static const std::vector<std::string> lex1 = {"vancomycin in sodium chloride",
                                                "insulin regular in saline"};
  return lexicon == 0 ? lex0 : lex1;
}

// lexicon A -> lexicon B rewrite pairs, signal forms first
inline std::vector<std::pair<std::string, std::string>> lexicon_swap_mapping(int from, int to) {
  std::vector<std::pair<std::string, std::string>> out;
  for (size_t i = 0; i < signal_surface_forms(from).size(); ++i)
    out.emplace_back(signal_surface_forms(from)[i], signal_surface_forms(to)[i]);
  for (size_t i = 0; i < variant_noise_forms(from).size(); ++i)
    out.emplace_back(variant_noise_forms(from)[i], variant_noise_forms(to)[i]);
  return out;
}

inline double signal_probability(double risk, double strength) {
  double ramp = std::clamp((risk - 0.62) / 0.12, 0.0, 1.0);
  return (1.0 - strength) * 0.35 + strength * (0.08 + 0.87 * ramp);
}

// Labels are pure functions of the latent risk; times are integer minutes so
// the cohort derivation lands on identical values.
inline GroundTruthRow labels_from_risk(double r) {
  using synth_detail::frac;
  GroundTruthRow g;
  g.latent_risk = r;
  int64_t los;
  if (r >= 0.70) {
    g.labels.mort = 1;
    los = 1500 + static_cast<int64_t>(frac(r * 37.61) * 2041.0);  // death inside the window
    g.labels.fi_ac = kLocationDied;
    g.labels.im_disch = kLocationDied;
  } else {
    los = 1512 + static_cast<int64_t>(frac(r * 17.1317) * 11448.0);
    static const int survivor_classes[5] = {0, 1, 2, 3, 5};
    int loc = survivor_classes[static_cast<int>(frac(r * 13.713) * 5.0)];
    bool in_window = los <= 3600;
    g.labels.fi_ac = in_window ? loc : kNoDischargeClass;
    g.labels.im_disch = in_window ? loc : kNoDischargeClass;
    g.labels.readm = frac(r * 29.7177) > 0.72 ? 1 : 0;
  }
  g.labels.los3 = los > 4320 ? 1 : 0;
  g.labels.los7 = los > 10080 ? 1 : 0;
  for (int k = 0; k < kNumDxClasses; ++k)
    if (frac(r * (3.37 + 1.93 * k)) < 0.22) g.labels.dx_bits |= 1u << k;
  return g;
}

inline int64_t los_minutes_from_risk(double r) {
  using synth_detail::frac;
  if (r >= 0.70) return 1500 + static_cast<int64_t>(frac(r * 37.61) * 2041.0);
  return 1512 + static_cast<int64_t>(frac(r * 17.1317) * 11448.0);
}

inline int age_from_risk(double r) {
  return 18 + static_cast<int>(synth_detail::frac(r * 7.77) * 70.0);
}

inline std::vector<GroundTruthRow> generate_hospital(const HospitalSpec& spec,
                                                     const fs::path& dir) {
  using namespace synth_detail;
  const LayoutNames& L = layout_names(spec.column_layout);
  const bool dt = std::string(L.time_format) == "datetime";
  const int64_t epoch = dt ? parse_datetime_minutes("2103-01-01 00:00:00") : 0;
  const std::string& px = spec.code_prefix;

  auto code = [&](const char* tag, int k) { return px + tag + "_" + std::to_string(k); };
  auto fmt_time = [&](int64_t abs) {
    return dt ? format_datetime(abs) : std::to_string(abs);
  };

  CsvTable labs, meds, drips, demo, dx;
  labs.columns = {L.pid, L.sid, L.lab_time, L.lab_item, L.lab_value, L.lab_units,
                  L.lab_priority, L.lab_serial};
  meds.columns = {L.pid, L.sid, L.med_time, L.med_item, L.med_dose, L.med_dose_units,
                  L.med_route, L.med_serial};
  drips.columns = {L.pid, L.sid, L.drip_time, L.drip_item, L.drip_rate, L.drip_rate_units,
                   L.drip_serial};
  demo.columns = {L.pid, L.sid, L.adm_id, L.age, L.intime, L.outtime, L.status, L.location};
  dx.columns = {L.sid, L.dx_class};

  const auto& sig_forms = signal_surface_forms(spec.lexicon_variant);
  const auto& var_noise = variant_noise_forms(spec.lexicon_variant);
  // med item codes: 0..7 shared concepts, 8..9 variant noise, 10..12 signal forms
  const size_t n_noise_meds = shared_meds().size() + var_noise.size();

  static const char* location_names[7] = {"home",    "other hospital", "rehab",
                                          "skilled nursing", "died",   "other",
                                          "not discharged"};

  std::vector<GroundTruthRow> truth;
  int lab_serial = 1, med_serial = 1, drip_serial = 1;

  for (int i = 0; i < spec.n_patients; ++i) {
    Rng rng = patient_rng(spec.seed, i);
    double r = rng.uniform();
    GroundTruthRow g = labels_from_risk(r);
    char idbuf[32];
    std::snprintf(idbuf, sizeof(idbuf), "%sP%05d", px.c_str(), i);
    std::string pid = idbuf;
    std::snprintf(idbuf, sizeof(idbuf), "%sS%05d_1", px.c_str(), i);
    g.stay_id = idbuf;
    std::snprintf(idbuf, sizeof(idbuf), "%sH%05d", px.c_str(), i);
    std::string adm = idbuf;

    int64_t los = los_minutes_from_risk(r);
    int64_t intime = dt ? epoch + static_cast<int64_t>(i) * 1507 : 0;
    int age = age_from_risk(r);

    demo.rows.push_back({pid, g.stay_id, adm, std::to_string(age), fmt_time(intime),
                         fmt_time(intime + los), g.labels.mort ? "expired" : "alive",
                         g.labels.mort ? "died" : location_names[location_class_from_string(
                             "")] ,  // placeholder replaced below
                         });
    // resolve survivor location wording from the label class
    {
      auto& row = demo.rows.back();
      if (g.labels.mort) row[7] = "died";
      else {
        int cls = g.labels.fi_ac == kNoDischargeClass ? -1 : g.labels.fi_ac;
        // the stored location is the eventual destination even when discharge
        // falls outside the label window
        using synth_detail::frac;
        static const int survivor_classes[5] = {0, 1, 2, 3, 5};
        int loc = survivor_classes[static_cast<int>(frac(r * 13.713) * 5.0)];
        (void)cls;
        row[7] = location_names[loc];
      }
    }

    if (g.labels.readm) {
      std::snprintf(idbuf, sizeof(idbuf), "%sS%05d_2", px.c_str(), i);
      int64_t in2 = intime + los + 600;
      demo.rows.push_back({pid, idbuf, adm, std::to_string(age), fmt_time(in2),
                           fmt_time(in2 + 2000), "alive", "home"});
    }

    for (int k = 0; k < kNumDxClasses; ++k)
      if (g.labels.dx_bits & (1u << k)) dx.rows.push_back({g.stay_id, std::to_string(k)});

    g.signal_present = rng.bernoulli(signal_probability(r, spec.signal_strength)) ? 1 : 0;

    // window labs
    int n_lab_w = 5 + static_cast<int>(rng.uniform_int(static_cast<uint64_t>(4)));
    for (int e = 0; e < n_lab_w + 4; ++e) {
      bool in_window = e < n_lab_w;
      int64_t t = in_window ? 1 + static_cast<int64_t>(rng.uniform_int(static_cast<uint64_t>(719)))
                            : 721 + static_cast<int64_t>(rng.uniform_int(
                                        static_cast<uint64_t>(std::max<int64_t>(1, los - 751))));
      if (e == n_lab_w)  // force one late event so stays always span a full day
        t = los - 20;
      int ci = static_cast<int>(rng.uniform_int(lab_concepts().size()));
      const auto& c = lab_concepts()[ci];
      std::string val = format_fixed(rng.lognormal(c.mu, c.sigma), c.dp);
      if (rng.bernoulli(0.02)) val = "";  // missing result
      labs.rows.push_back({pid, g.stay_id, fmt_time(intime + t), code("LAB", ci), val,
                           code("U", c.unit),
                           std::to_string(1 + rng.uniform_int(static_cast<uint64_t>(3))),
                           std::to_string(lab_serial++)});
    }

    // window prescriptions; slot 0 carries the signal drug when present
    int n_med_w = 3 + static_cast<int>(rng.uniform_int(static_cast<uint64_t>(3)));
    for (int e = 0; e < n_med_w; ++e) {
      int64_t t = 1 + static_cast<int64_t>(rng.uniform_int(static_cast<uint64_t>(719)));
      int ni = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(n_noise_meds)));
      int form = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(3)));
      int item;
      double mu;
      int du;
      if (e == 0 && g.signal_present) {
        item = static_cast<int>(n_noise_meds) + form;
        mu = 1.4;
        du = 0;
      } else if (ni < static_cast<int>(shared_meds().size())) {
        item = ni;
        mu = shared_meds()[ni].mu_dose;
        du = shared_meds()[ni].dose_unit;
      } else {
        item = ni;           // variant noise concept
        mu = ni == static_cast<int>(shared_meds().size()) ? 6.9 : 2.3;
        du = ni == static_cast<int>(shared_meds().size()) ? 0 : 2;
      }
      meds.rows.push_back({pid, g.stay_id, fmt_time(intime + t), code("RX", item),
                           format_fixed(rng.lognormal(mu, 0.3), 1), code("DU", du),
                           code("RT", static_cast<int>(rng.uniform_int(routes().size()))),
                           std::to_string(med_serial++)});
    }

    // window infusions
    int n_drip_w = 2 + static_cast<int>(rng.uniform_int(static_cast<uint64_t>(2)));
    for (int e = 0; e < n_drip_w; ++e) {
      int64_t t = 1 + static_cast<int64_t>(rng.uniform_int(static_cast<uint64_t>(719)));
      int ci = static_cast<int>(rng.uniform_int(drip_concepts().size()));
      const auto& c = drip_concepts()[ci];
      drips.rows.push_back({pid, g.stay_id, fmt_time(intime + t), code("IV", ci),
                            format_fixed(rng.lognormal(c.mu_rate, 0.35), c.dp),
                            code("RU", c.rate_unit), std::to_string(drip_serial++)});
    }

    truth.push_back(std::move(g));
  }

  write_file_atomic(dir / L.lab_file, to_csv(labs));
  write_file_atomic(dir / L.med_file, to_csv(meds));
  write_file_atomic(dir / L.drip_file, to_csv(drips));
  write_file_atomic(dir / L.demo_file, to_csv(demo));
  write_file_atomic(dir / L.dx_file, to_csv(dx));

  // definition tables: code -> description
  auto write_defs = [&](const char* col, const std::vector<std::pair<std::string, std::string>>& kv) {
    CsvTable t;
    t.columns = {col, std::string(col) + "_desc"};
    for (const auto& [k, v] : kv) t.rows.push_back({k, v});
    write_file_atomic(dir / ("defs_" + std::string(col) + ".csv"), to_csv(t));
  };
  {
    std::vector<std::pair<std::string, std::string>> kv;
    for (size_t k = 0; k < lab_concepts().size(); ++k)
      kv.emplace_back(code("LAB", static_cast<int>(k)), lab_concepts()[k].desc);
    write_defs(L.lab_item, kv);
    kv.clear();
    for (size_t k = 0; k < lab_units().size(); ++k)
      kv.emplace_back(code("U", static_cast<int>(k)), lab_units()[k]);
    write_defs(L.lab_units, kv);
    kv.clear();
    for (size_t k = 0; k < shared_meds().size(); ++k)
      kv.emplace_back(code("RX", static_cast<int>(k)), shared_meds()[k].desc);
    for (size_t k = 0; k < var_noise.size(); ++k)
      kv.emplace_back(code("RX", static_cast<int>(shared_meds().size() + k)), var_noise[k]);
    for (size_t k = 0; k < sig_forms.size(); ++k)
      kv.emplace_back(code("RX", static_cast<int>(n_noise_meds + k)), sig_forms[k]);
    write_defs(L.med_item, kv);
    kv.clear();
    for (size_t k = 0; k < dose_units().size(); ++k)
      kv.emplace_back(code("DU", static_cast<int>(k)), dose_units()[k]);
    write_defs(L.med_dose_units, kv);
    kv.clear();
    for (size_t k = 0; k < routes().size(); ++k)
      kv.emplace_back(code("RT", static_cast<int>(k)), routes()[k]);
    write_defs(L.med_route, kv);
    kv.clear();
    for (size_t k = 0; k < drip_concepts().size(); ++k)
      kv.emplace_back(code("IV", static_cast<int>(k)), drip_concepts()[k].desc);
    write_defs(L.drip_item, kv);
    kv.clear();
    for (size_t k = 0; k < rate_units().size(); ++k)
      kv.emplace_back(code("RU", static_cast<int>(k)), rate_units()[k]);
    write_defs(L.drip_rate_units, kv);
  }

  // ground truth
  CsvTable gt;
  gt.columns = {"stay_id", "latent_risk", "signal_present", "mort", "los3", "los7",
                "readm", "fi_ac", "im_disch", "dx_bits"};
  for (const auto& g : truth) {
    char rbuf[40];
    std::snprintf(rbuf, sizeof(rbuf), "%.17g", g.latent_risk);
    gt.rows.push_back({g.stay_id, rbuf, std::to_string(g.signal_present),
                       std::to_string(g.labels.mort), std::to_string(g.labels.los3),
                       std::to_string(g.labels.los7), std::to_string(g.labels.readm),
                       std::to_string(g.labels.fi_ac), std::to_string(g.labels.im_disch),
                       std::to_string(g.labels.dx_bits)});
  }
  write_file_atomic(dir / "ground_truth.csv", to_csv(gt));
  return truth;
}

inline std::vector<GroundTruthRow> load_ground_truth(const fs::path& path) {
  CsvTable t = read_csv(path);
  std::vector<GroundTruthRow> out;
  for (const auto& row : t.rows) {
    GroundTruthRow g;
    g.stay_id = row[0];
    g.latent_risk = parse_double(row[1]);
    g.signal_present = static_cast<int>(parse_i64(row[2]));
    g.labels.mort = static_cast<int>(parse_i64(row[3]));
    g.labels.los3 = static_cast<int>(parse_i64(row[4]));
    g.labels.los7 = static_cast<int>(parse_i64(row[5]));
    g.labels.readm = static_cast<int>(parse_i64(row[6]));
    g.labels.fi_ac = static_cast<int>(parse_i64(row[7]));
    g.labels.im_disch = static_cast<int>(parse_i64(row[8]));
    g.labels.dx_bits = static_cast<uint32_t>(parse_i64(row[9]));
    out.push_back(std::move(g));
  }
  return out;
}

// Ingest configuration matching a generated hospital directory.
inline HospitalIngestConfig hospital_ingest_config(const HospitalSpec& spec, const fs::path& dir,
                                                    int64_t rare_min_count = 5) {
  using namespace synth_detail;
  const LayoutNames& L = layout_names(spec.column_layout);
  auto def = [&](const char* col) {
    return DefinitionJoin{col, dir / ("defs_" + std::string(col) + ".csv"), col,
                          std::string(col) + "_desc"};
  };
  HospitalIngestConfig cfg;
  cfg.rare_min_count = rare_min_count;

  TableConfig lab;
  lab.path = dir / L.lab_file;
  lab.event_type = "lab";
  lab.patient_id_column = L.pid;
  lab.stay_id_column = L.sid;
  lab.timestamp_column = L.lab_time;
  lab.time_format = L.time_format;
  lab.definitions = {def(L.lab_item), def(L.lab_units)};
  cfg.tables.push_back(lab);

  TableConfig med;
  med.path = dir / L.med_file;
  med.event_type = "prescription";
  med.patient_id_column = L.pid;
  med.stay_id_column = L.sid;
  med.timestamp_column = L.med_time;
  med.time_format = L.time_format;
  med.definitions = {def(L.med_item), def(L.med_dose_units), def(L.med_route)};
  cfg.tables.push_back(med);

  TableConfig drip;
  drip.path = dir / L.drip_file;
  drip.event_type = "infusion";
  drip.patient_id_column = L.pid;
  drip.stay_id_column = L.sid;
  drip.timestamp_column = L.drip_time;
  drip.time_format = L.time_format;
  drip.definitions = {def(L.drip_item), def(L.drip_rate_units)};
  cfg.tables.push_back(drip);

  cfg.demographics.path = dir / L.demo_file;
  cfg.demographics.patient_id_column = L.pid;
  cfg.demographics.stay_id_column = L.sid;
  cfg.demographics.admission_id_column = L.adm_id;
  cfg.demographics.age_column = L.age;
  cfg.demographics.intime_column = L.intime;
  cfg.demographics.outtime_column = L.outtime;
  cfg.demographics.time_format = L.time_format;
  cfg.demographics.status_column = L.status;
  cfg.demographics.expired_value = "expired";
  cfg.demographics.location_column = L.location;

  cfg.diagnoses.path = dir / L.dx_file;
  cfg.diagnoses.stay_id_column = L.sid;
  cfg.diagnoses.class_column = L.dx_class;
  return cfg;
}

}  // namespace unihpf
