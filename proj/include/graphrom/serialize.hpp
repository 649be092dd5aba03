#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphrom/clustering.hpp"
#include "graphrom/dense.hpp"
#include "graphrom/metrics.hpp"
#include "graphrom/rogl.hpp"
#include "graphrom/rom.hpp"

namespace graphrom {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

/// Dense matrices are written as {"rows", "cols", "data"} with data row-major.
Json matrix_to_json(const DenseMatrix& m);
DenseMatrix matrix_from_json(const Json& j);

/// Non-finite values become the strings "inf", "-inf" or "nan".
Json number_to_json(double x);
double number_from_json(const Json& j);

Json rom_to_json(const RomState& rom, bool include_q12 = false);
RomState rom_from_json(const Json& j);

/// `external_ids`, when non-empty, maps internal vertex ids to input ids.
Json rogl_to_json(const Rogl& r, const std::vector<std::int64_t>& external_ids = {});
Rogl rogl_from_json(const Json& j);

Json grid_to_json(const OptimalGrid1D& g);

Json distance_report_to_json(const DistanceReport& rep, const TargetSubset& subset,
                             const std::vector<std::int64_t>& external_ids = {});
std::string distance_report_table(const DistanceReport& rep);

struct ClusterReport {
  std::string method;  // rvsc | roglc | rwnsc
  std::size_t n_c = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> vertices;  // internal ids
  std::vector<std::size_t> labels;    // 0-based cluster per vertex
  std::vector<std::pair<std::size_t, std::size_t>> trials;  // (n_t, n_g), roglc only
  std::size_t n_t_star = 0;
  std::size_t n_g_star = 0;
  double inertia = 0.0;
};

/// Labels are written 1-based under the external vertex id.
Json cluster_report_to_json(const ClusterReport& rep,
                            const std::vector<std::int64_t>& external_ids = {});
std::string cluster_report_table(const ClusterReport& rep);

/// Writes with a trailing newline; throws IoError on failure.
void write_json_file(const std::string& path, const Json& j);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// printf("%.17g").
std::string format_double(double x);

}  // namespace graphrom
