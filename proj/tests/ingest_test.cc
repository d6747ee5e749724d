#include "unihpf/ingest.hpp"

#include <gtest/gtest.h>

namespace {

using namespace unihpf;

fs::path write_temp(const std::string& name, const std::string& content) {
  fs::path p = fs::path(testing::TempDir()) / name;
  write_file_atomic(p, content);
  return p;
}

CsvTable table_from(const std::string& csv) {
  fs::path p = write_temp("t_" + std::to_string(fnv1a64(csv)) + ".csv", csv);
  return read_csv(p);
}

TableConfig basic_cfg() {
  TableConfig cfg;
  cfg.event_type = "lab";
  cfg.patient_id_column = "pid";
  cfg.stay_id_column = "sid";
  cfg.timestamp_column = "ts";
  cfg.time_format = "minutes";
  return cfg;
}

TEST(InferSchema, IntegerColumnsDropUnlessLowCardinality) {
  std::string csv = "pid,sid,ts,wide_id,narrow_code\n";
  for (int i = 0; i < 60; ++i)
    csv += "p,s,1," + std::to_string(1000 + i) + "," + std::to_string(i % 3) + "\n";
  auto schema = infer_schema(table_from(csv), basic_cfg());
  EXPECT_EQ(schema[3].cls, ColumnClass::DroppedInteger);
  EXPECT_EQ(schema[4].cls, ColumnClass::Categorical);
}

TEST(InferSchema, CutoffBoundaryAt50Distinct) {
  std::string csv49 = "pid,sid,ts,c\n", csv50 = "pid,sid,ts,c\n";
  for (int i = 0; i < 49; ++i) csv49 += "p,s,1," + std::to_string(i) + "\n";
  for (int i = 0; i < 50; ++i) csv50 += "p,s,1," + std::to_string(i) + "\n";
  EXPECT_EQ(infer_schema(table_from(csv49), basic_cfg())[3].cls, ColumnClass::Categorical);
  EXPECT_EQ(infer_schema(table_from(csv50), basic_cfg())[3].cls, ColumnClass::DroppedInteger);
}

TEST(InferSchema, DecimalAndTextColumns) {
  std::string csv =
      "pid,sid,ts,val,mixed,words,blank\n"
      "p,s,1,10.5,5,alpha,\n"
      "p,s,2,3,5.5,7,\n"
      "p,s,3,0.25,x,beta,\n";
  auto schema = infer_schema(table_from(csv), basic_cfg());
  EXPECT_EQ(schema[3].cls, ColumnClass::Numeric);      // ints may mix into a numeric column
  EXPECT_EQ(schema[4].cls, ColumnClass::Text);         // 'x' breaks numeric parse
  EXPECT_EQ(schema[5].cls, ColumnClass::Text);
  EXPECT_EQ(schema[6].cls, ColumnClass::Text);         // empty column defaults to text
  EXPECT_EQ(schema[0].cls, ColumnClass::Reserved);
}

TEST(InferSchema, IdempotentOnFilteredOutput) {
  std::string csv = "pid,sid,ts,val,code,junk_id\n";
  for (int i = 0; i < 55; ++i)
    csv += "p,s,1," + std::to_string(i) + ".5," + std::to_string(i % 4) + "," +
           std::to_string(i + 500) + "\n";
  CsvTable t = table_from(csv);
  auto schema = infer_schema(t, basic_cfg());

  // re-render only the kept feature columns plus reserved ones
  CsvTable filtered;
  std::vector<size_t> keep;
  for (size_t i = 0; i < schema.size(); ++i)
    if (schema[i].cls != ColumnClass::DroppedInteger) {
      filtered.columns.push_back(t.columns[i]);
      keep.push_back(i);
    }
  for (const auto& row : t.rows) {
    std::vector<std::string> r;
    for (size_t i : keep) r.push_back(row[i]);
    filtered.rows.push_back(r);
  }
  auto schema2 = infer_schema(filtered, basic_cfg());
  for (size_t i = 0; i < filtered.columns.size(); ++i) {
    EXPECT_EQ(schema2[i].cls, schema[keep[i]].cls) << filtered.columns[i];
  }
}

std::unordered_map<std::string, StayInfo> one_stay(const std::string& sid, int64_t intime) {
  StayInfo s;
  s.stay_id = sid;
  s.patient_id = "p1";
  s.intime_abs = intime;
  return {{sid, s}};
}

TEST(ExtractEvents, SkipsBadRowsAndCountsThem) {
  std::string csv =
      "pid,sid,ts,val\n"
      "p1,s1,10,1.5\n"
      ",s1,11,1.5\n"
      "p1,,12,1.5\n"
      "p1,ghost,13,1.5\n";
  IngestStats stats;
  auto evs = extract_events(table_from(csv), basic_cfg(), one_stay("s1", 0), stats);
  EXPECT_EQ(evs.size(), 1u);
  EXPECT_EQ(stats.rows_skipped_missing_id, 2);
  EXPECT_EQ(stats.rows_skipped_unknown_stay, 1);
}

TEST(ExtractEvents, UnparseableTimestampIsHardError) {
  std::string csv = "pid,sid,ts,val\np1,s1,notatime,1.5\n";
  IngestStats stats;
  CsvTable t = table_from(csv);
  TableConfig cfg = basic_cfg();
  try {
    extract_events(t, cfg, one_stay("s1", 0), stats);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
  }
}

TEST(ExtractEvents, TimestampsNormalizeAcrossFormats) {
  // absolute datetimes
  std::string csv =
      "pid,sid,ts,val\n"
      "p1,s1,2103-01-02 01:30:00,1.5\n";
  TableConfig cfg = basic_cfg();
  cfg.time_format = "datetime";
  IngestStats stats;
  auto stays = one_stay("s1", parse_datetime_minutes("2103-01-02 00:00:00"));
  auto evs = extract_events(table_from(csv), cfg, stays, stats);
  ASSERT_EQ(evs.size(), 1u);
  EXPECT_EQ(evs[0].t, 90);

  // offsets in minutes with intime 0 give the same normalized time
  std::string csv2 = "pid,sid,ts,val\np1,s1,90,1.5\n";
  auto evs2 = extract_events(table_from(csv2), basic_cfg(), one_stay("s1", 0), stats);
  ASSERT_EQ(evs2.size(), 1u);
  EXPECT_EQ(evs2[0].t, 90);
}

TEST(ExtractEvents, EmptyNumericCellKeepsFeature) {
  std::string csv =
      "pid,sid,ts,dose\n"
      "p1,s1,1,2.5\n"
      "p1,s1,2,\n";
  IngestStats stats;
  auto evs = extract_events(table_from(csv), basic_cfg(), one_stay("s1", 0), stats);
  ASSERT_EQ(evs.size(), 2u);
  ASSERT_EQ(evs[1].features.size(), 1u);
  EXPECT_EQ(evs[1].features[0].name, "dose");
  EXPECT_EQ(evs[1].features[0].value, "");
  EXPECT_EQ(evs[1].features[0].kind, ValueKind::Numeric);
}

TEST(ExtractEvents, DefinitionJoinReplacesValueKeepsRaw) {
  fs::path defs = write_temp("defs.csv", "code,label\nA_7,creatinine\n");
  std::string csv =
      "pid,sid,ts,item,val\n"
      "p1,s1,1,A_7,1.2\n"
      "p1,s1,2,A_8,3.4\n";
  TableConfig cfg = basic_cfg();
  cfg.definitions.push_back({"item", defs, "code", "label"});
  IngestStats stats;
  auto evs = extract_events(table_from(csv), cfg, one_stay("s1", 0), stats);
  ASSERT_EQ(evs.size(), 2u);
  EXPECT_EQ(evs[0].features[0].value, "creatinine");
  EXPECT_EQ(evs[0].features[0].raw, "A_7");
  EXPECT_EQ(evs[1].features[0].value, "A_8");  // miss keeps the raw code
  EXPECT_EQ(stats.join_misses, 1);
}

TEST(DropRare, PairUnderFiveOccurrencesRemoved) {
  std::vector<MedicalEvent> events;
  auto mk = [](const std::string& main, const std::string& unit) {
    MedicalEvent e;
    e.stay_id = "s1";
    e.features = {{"item", main, main, ValueKind::Text},
                  {"unit", unit, unit, ValueKind::Text}};
    return e;
  };
  for (int i = 0; i < 5; ++i) events.push_back(mk("common", "mg"));
  for (int i = 0; i < 4; ++i) events.push_back(mk("rare", "mg"));
  IngestStats stats;
  drop_rare_features(events, 5, stats);
  // 4 'rare' main features removed -> their events deleted
  EXPECT_EQ(events.size(), 5u);
  EXPECT_EQ(stats.events_deleted_rare, 4);
  EXPECT_EQ(stats.features_dropped_rare, 4);
  for (const auto& e : events) {
    EXPECT_EQ(e.features.size(), 2u);  // 'mg' occurs 9 times and stays
    EXPECT_EQ(e.features[0].value, "common");
  }
}

TEST(DropRare, NonMainRemovalShrinksEventOnly) {
  std::vector<MedicalEvent> events;
  for (int i = 0; i < 6; ++i) {
    MedicalEvent e;
    e.stay_id = "s1";
    e.features = {{"item", "drug", "drug", ValueKind::Text},
                  {"route", i < 2 ? "strange" : "iv", i < 2 ? "strange" : "iv", ValueKind::Text}};
    events.push_back(e);
  }
  IngestStats stats;
  drop_rare_features(events, 5, stats);
  EXPECT_EQ(events.size(), 6u);
  EXPECT_EQ(events[0].features.size(), 1u);  // 'strange' route dropped
  EXPECT_EQ(events[5].features.size(), 1u);  // 'iv' count is 4, also dropped
  EXPECT_EQ(stats.events_deleted_rare, 0);
}

}  // namespace
