#pragma once

// Archive of every evaluated individual of a run, Pareto extraction and
// CSV/JSON export.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "morphoforge/errors.hpp"
#include "morphoforge/joint_module.hpp"
#include "morphoforge/pareto.hpp"

namespace morphoforge {

struct ArchiveRecord {
  std::size_t eval_index = 0;
  Genome genome;
  ObjectivePair objectives;
  int rank = -1;  // front index over the whole archive, set at the end of a run
};

struct ParetoArchive {
  std::vector<ArchiveRecord> records;
  std::string scenario_name;
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();

  std::vector<ObjectivePair> objectives() const {
    std::vector<ObjectivePair> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.objectives);
    return out;
  }
};

/// Sets every record's rank from a non-dominated sort over the full archive.
inline void assign_archive_ranks(ParetoArchive& archive) {
  const auto obj = archive.objectives();
  const auto rank = ranks_from_fronts(non_dominated_sort(obj), obj.size());
  for (std::size_t i = 0; i < archive.records.size(); ++i) archive.records[i].rank = rank[i];
}

/// Maximal non-dominated subset; records sharing an objective pair are kept
/// once (lowest evaluation index wins). Output is in evaluation order.
inline std::vector<ArchiveRecord> extract_pareto(const std::vector<ArchiveRecord>& records) {
  std::vector<ObjectivePair> obj;
  obj.reserve(records.size());
  for (const auto& r : records) obj.push_back(r.objectives);
  const auto fronts = non_dominated_sort(obj);
  std::vector<std::size_t> front0 = fronts.empty() ? std::vector<std::size_t>{} : fronts[0];
  std::sort(front0.begin(), front0.end(), [&](std::size_t a, std::size_t b) {
    return records[a].eval_index < records[b].eval_index;
  });
  std::vector<ArchiveRecord> out;
  std::vector<ObjectivePair> seen;
  for (std::size_t i : front0) {
    if (std::find(seen.begin(), seen.end(), records[i].objectives) != seen.end()) continue;
    seen.push_back(records[i].objectives);
    out.push_back(records[i]);
  }
  return out;
}

inline std::vector<ArchiveRecord> extract_pareto(const ParetoArchive& archive) {
  return extract_pareto(archive.records);
}

inline std::string format_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string csv_row(const ArchiveRecord& r, bool with_rank) {
  const RobotDesign d = decode_genome(r.genome);
  std::string row = std::to_string(r.eval_index) + "," + format_g9(r.objectives.task) + "," +
                    format_g9(r.objectives.design) + "," + std::to_string(d.dof()) + "," +
                    format_g9(d.total_length()) + "," + d.joint_string() + ",";
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) row += ';';
    row += format_g9(d[i].length());
  }
  if (with_rank) row += "," + std::to_string(r.rank);
  return row;
}

inline constexpr const char* kArchiveCsvHeader =
    "eval_index,e_task,e_design,dof,total_length,joints,lengths";

inline std::string archive_csv(const std::vector<ArchiveRecord>& records, bool with_rank) {
  std::string out = kArchiveCsvHeader;
  if (with_rank) out += ",rank";
  out += '\n';
  for (const auto& r : records) out += csv_row(r, with_rank) + '\n';
  return out;
}

namespace detail {

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  out << content;
  out.close();
  if (!out) throw IoError(path, "write failed");
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace detail

inline void export_csv(const ParetoArchive& archive, const std::string& path) {
  detail::write_file(path, archive_csv(archive.records, false));
}

inline void export_pareto(const ParetoArchive& archive, const std::string& path) {
  detail::write_file(path, archive_csv(extract_pareto(archive), true));
}

inline nlohmann::json record_to_json(const ArchiveRecord& r) {
  const RobotDesign d = decode_genome(r.genome);
  const auto joint_count = static_cast<int>(d.dof());
  nlohmann::json lengths = nlohmann::json::array();
  for (const auto& m : d.modules()) lengths.push_back(m.length());
  return {{"eval_index", r.eval_index},
          {"e_task", r.objectives.task},
          {"e_design", r.objectives.design},
          {"e_design_joint", joint_count},
          {"e_design_length", d.total_length()},
          {"dof", d.dof()},
          {"joints", d.joint_string()},
          {"lengths", lengths},
          {"length_genes", r.genome.length_genes},
          {"rank", r.rank}};
}

inline std::string pareto_json(const ParetoArchive& archive) {
  nlohmann::json j;
  j["scenario"] = archive.scenario_name;
  j["seed"] = archive.seed;
  j["config"] = archive.config;
  j["evaluations"] = archive.records.size();
  j["solutions"] = nlohmann::json::array();
  for (const auto& r : extract_pareto(archive)) j["solutions"].push_back(record_to_json(r));
  return j.dump(2) + "\n";
}

inline void export_pareto_json(const ParetoArchive& archive, const std::string& path) {
  detail::write_file(path, pareto_json(archive));
}

/// Reads an archive or Pareto CSV back. Genomes are re-encoded from the
/// printed lengths, so they carry 9 significant digits.
inline std::vector<ArchiveRecord> read_archive_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open archive");
  std::string line;
  if (!std::getline(in, line) || line.rfind(kArchiveCsvHeader, 0) != 0) {
    throw ValidationError(path + ":1: unexpected header");
  }
  const bool with_rank = line == std::string(kArchiveCsvHeader) + ",rank";
  std::vector<ArchiveRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    const auto cols = detail::split(line, ',');
    if (cols.size() != (with_rank ? 8u : 7u)) throw ValidationError(where + ": wrong column count");
    try {
      ArchiveRecord r;
      r.eval_index = std::stoul(cols[0]);
      r.objectives = {std::stod(cols[1]), std::stod(cols[2])};
      const auto lengths = detail::split(cols[6], ';');
      if (lengths.size() != cols[5].size()) throw ValidationError("joints/lengths size mismatch");
      for (std::size_t i = 0; i < lengths.size(); ++i) {
        const auto kind = kind_from_letter(cols[5][i]);
        if (!kind) throw ValidationError("unknown joint letter");
        r.genome.joints.push_back(*kind);
        r.genome.length_genes.push_back(encode_length(*kind, std::stod(lengths[i])));
      }
      if (with_rank) r.rank = std::stoi(cols[7]);
      out.push_back(std::move(r));
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    } catch (const std::logic_error&) {
      throw ValidationError(where + ": malformed number");
    }
  }
  return out;
}

}  // namespace morphoforge
