#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "morphoforge/archive.hpp"
#include "morphoforge/objectives.hpp"
#include "support/oracles.hpp"

namespace morphoforge {
namespace {

namespace fs = std::filesystem;

ArchiveRecord record(std::size_t index, double task, double design, const Genome& g = {}) {
  ArchiveRecord r;
  r.eval_index = index;
  r.objectives = {task, design};
  r.genome = g.size() ? g : random_genome(index, 6);
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(ExtractPareto, Singleton) {
  const auto out = extract_pareto(std::vector{record(0, 1.0, 2.0)});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].eval_index, 0u);
  EXPECT_TRUE(extract_pareto(std::vector<ArchiveRecord>{}).empty());
}

TEST(ExtractPareto, DominatingRecordRemovesOthers) {
  const std::vector records{record(0, 2.0, 2.0), record(1, 1.0, 1.0), record(2, 3.0, 1.5)};
  const auto out = extract_pareto(records);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].eval_index, 1u);
}

TEST(ExtractPareto, DuplicatesKeptOnceLowestIndex) {
  const std::vector records{record(4, 1.0, 1.0), record(2, 1.0, 1.0), record(7, 0.5, 3.0)};
  const auto out = extract_pareto(records);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].eval_index, 2u);
  EXPECT_EQ(out[1].eval_index, 7u);
}

TEST(ExtractPareto, MatchesBruteForce) {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<int> grid(0, 20);  // coarse grid forces ties
  std::vector<ArchiveRecord> records;
  for (std::size_t i = 0; i < 500; ++i) records.push_back(record(i, grid(rng) * 0.1, grid(rng) * 0.1));
  const auto out = extract_pareto(records);

  std::vector<ObjectivePair> expected;
  for (std::size_t i = 0; i < records.size(); ++i) {
    bool dominated = false;
    for (const auto& other : records) dominated = dominated || dominates(other.objectives, records[i].objectives);
    bool earlier_duplicate = false;
    for (std::size_t j = 0; j < i; ++j) earlier_duplicate = earlier_duplicate || records[j].objectives == records[i].objectives;
    if (!dominated && !earlier_duplicate) expected.push_back(records[i].objectives);
  }
  ASSERT_EQ(out.size(), expected.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    EXPECT_EQ(out[k].objectives, expected[k]);
    if (k) EXPECT_LT(out[k - 1].eval_index, out[k].eval_index);
    for (const auto& r : records) EXPECT_FALSE(dominates(r.objectives, out[k].objectives));
  }
}

TEST(ArchiveCsv, KnownRow) {
  const RobotDesign d = parse_design("Y:0.25,P:0.2,S:0.35,F:0.1,F:0.1,F:0.1");
  ArchiveRecord r;
  r.eval_index = 12;
  r.genome = encode_design(d);
  r.objectives = {0.5, 3.0 + d.total_length()};
  r.rank = 0;
  const std::string row = csv_row(r, true);
  EXPECT_EQ(row.substr(0, row.find(",YPSFFF")), "12,0.5,4.1,3,1.1");
  EXPECT_NE(row.find(",YPSFFF,0.25;0.2;0.35;0.1;0.1;0.1,0"), std::string::npos) << row;
}

TEST(ArchiveCsv, ExportReadBackReExport) {
  std::mt19937_64 rng(62);
  ParetoArchive archive;
  archive.scenario_name = "synthetic";
  archive.seed = 62;
  for (std::size_t i = 0; i < 200; ++i) {
    auto r = record(i, std::uniform_real_distribution<double>(0, 3)(rng), 0.0, random_genome(rng));
    r.objectives.design = eval_design(decode_genome(r.genome)).e_design;
    archive.records.push_back(r);
  }
  assign_archive_ranks(archive);

  const auto dir = fs::temp_directory_path() / "morphoforge_archive_test";
  fs::create_directories(dir);
  export_csv(archive, (dir / "a.csv").string());
  export_pareto(archive, (dir / "p.csv").string());

  const auto back = read_archive_csv((dir / "a.csv").string());
  ASSERT_EQ(back.size(), archive.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].eval_index, archive.records[i].eval_index);
    EXPECT_NEAR(back[i].objectives.task, archive.records[i].objectives.task,
                1e-8 * std::max(1.0, archive.records[i].objectives.task));
    EXPECT_EQ(back[i].genome.joints, archive.records[i].genome.joints);
    const auto a = decode_genome(back[i].genome), b = decode_genome(archive.records[i].genome);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k].length(), b[k].length(), 1e-9);
  }
  const std::string first = slurp(dir / "a.csv");
  export_csv(archive, (dir / "a.csv").string());
  EXPECT_EQ(slurp(dir / "a.csv"), first);
  const auto pareto_back = read_archive_csv((dir / "p.csv").string());
  EXPECT_EQ(pareto_back.size(), extract_pareto(archive).size());
  for (const auto& r : pareto_back) EXPECT_EQ(r.rank, 0);

  EXPECT_THROW(export_csv(archive, (dir / "missing_dir" / "x.csv").string()), IoError);
  fs::remove_all(dir);
}

TEST(ArchiveCsv, MalformedInputNamesLine) {
  const auto path = fs::temp_directory_path() / "morphoforge_bad.csv";
  {
    std::ofstream out(path);
    out << kArchiveCsvHeader << "\n0,1,2,0,0.1,F,0.1\n1,x,2,0,0.1,F,0.1\n";
  }
  try {
    read_archive_csv(path.string());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
  fs::remove(path);
  EXPECT_THROW(read_archive_csv(path.string()), IoError);
}

TEST(ParetoJson, Contents) {
  ParetoArchive archive;
  archive.scenario_name = "s";
  archive.seed = 9;
  archive.config = {{"optimizer", {{"population_size", 4}}}};
  archive.records = {record(0, 1.0, 5.0), record(1, 2.0, 4.0), record(2, 2.0, 6.0)};
  assign_archive_ranks(archive);
  const auto j = nlohmann::json::parse(pareto_json(archive));
  EXPECT_EQ(j["scenario"], "s");
  EXPECT_EQ(j["seed"], 9);
  EXPECT_EQ(j["evaluations"], 3);
  EXPECT_EQ(j["config"]["optimizer"]["population_size"], 4);
  ASSERT_EQ(j["solutions"].size(), 2u);
  EXPECT_EQ(j["solutions"][1]["eval_index"], 1);
  EXPECT_EQ(j["solutions"][1]["rank"], 0);
  EXPECT_EQ(j["solutions"][0]["joints"].get<std::string>().size(), 6u);
  EXPECT_EQ(j["solutions"][0]["lengths"].size(), 6u);
}

}  // namespace
}  // namespace morphoforge
