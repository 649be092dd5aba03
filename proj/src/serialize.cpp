#include "graphrom/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "graphrom/error.hpp"

namespace graphrom {

namespace {

void expect_format(const Json& j, const char* format) {
  if (!j.is_object() || !j.contains("format") || j.at("format") != format)
    throw IoError(std::string("expected a ") + format + " container");
  if (!j.contains("version") || !j.at("version").is_number_integer())
    throw IoError(std::string(format) + ": missing version");
  const int v = j.at("version").get<int>();
  if (v != kFormatVersion)
    throw IoError(std::string(format) + ": unsupported version " + std::to_string(v));
}

Json numbers_to_json(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number_to_json(x));
  return a;
}

std::vector<double> numbers_from_json(const Json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number_from_json(x));
  return out;
}

std::int64_t external_id(const std::vector<std::int64_t>& ids, std::size_t v) {
  return ids.empty() ? static_cast<std::int64_t>(v) : ids.at(v);
}

BlockTridiagonal split_blocks(const DenseMatrix& a, const std::vector<std::size_t>& sizes) {
  BlockTridiagonal t;
  t.block_sizes = sizes;
  std::size_t off = 0;
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    t.alphas.push_back(a.block(off, off, sizes[j], sizes[j]));
    if (j + 1 < sizes.size())
      t.betas.push_back(a.block(off + sizes[j], off, sizes[j + 1], sizes[j]));
    off += sizes[j];
  }
  if (off != a.rows()) throw IoError("block sizes do not add up to the matrix order");
  return t;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json number_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw IoError("expected a number");
}

Json matrix_to_json(const DenseMatrix& m) {
  Json data = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) data.push_back(number_to_json(m(i, j)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

DenseMatrix matrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const auto& data = j.at("data");
  if (data.size() != rows * cols) throw IoError("matrix data has the wrong length");
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = number_from_json(data[i * cols + c]);
  return m;
}

Json rom_to_json(const RomState& rom, bool include_q12) {
  Json j;
  j["format"] = "graphrom.rom";
  j["version"] = kFormatVersion;
  j["n_vertices"] = rom.n_vertices;
  j["n1"] = rom.n1;
  j["m"] = rom.m;
  j["m0"] = rom.m0;
  j["n"] = rom.n;
  j["krylov_dim"] = rom.krylov_dim;
  j["targets"] = rom.targets;
  j["d_hat"] = numbers_to_json(rom.d_hat);
  j["v"] = matrix_to_json(rom.v);
  j["a12"] = matrix_to_json(rom.a12);
  j["ritz_values"] = numbers_to_json(rom.ritz_values);
  j["ritz_coords"] = matrix_to_json(rom.ritz_coords);
  j["e1v"] = matrix_to_json(rom.e1v);
  j["c_block"] = matrix_to_json(rom.c_block);
  j["q12t_sqrt_d_ones"] = numbers_to_json(rom.q12t_sqrt_d_ones);
  j["sampled_vertices"] = rom.sampled_vertices;
  j["sampled_q12_rows"] = matrix_to_json(rom.sampled_q12_rows);
  if (include_q12 && rom.q12) j["q12"] = matrix_to_json(*rom.q12);
  return j;
}

RomState rom_from_json(const Json& j) {
  expect_format(j, "graphrom.rom");
  try {
    RomState r;
    r.n_vertices = j.at("n_vertices").get<std::size_t>();
    r.n1 = j.at("n1").get<std::size_t>();
    r.m = j.at("m").get<std::size_t>();
    r.m0 = j.at("m0").get<std::size_t>();
    r.n = j.at("n").get<std::size_t>();
    r.krylov_dim = j.at("krylov_dim").get<std::size_t>();
    r.targets = j.at("targets").get<std::vector<std::size_t>>();
    r.d_hat = numbers_from_json(j.at("d_hat"));
    r.v = matrix_from_json(j.at("v"));
    r.a12 = matrix_from_json(j.at("a12"));
    r.ritz_values = numbers_from_json(j.at("ritz_values"));
    r.ritz_coords = matrix_from_json(j.at("ritz_coords"));
    r.e1v = matrix_from_json(j.at("e1v"));
    r.c_block = matrix_from_json(j.at("c_block"));
    r.q12t_sqrt_d_ones = numbers_from_json(j.at("q12t_sqrt_d_ones"));
    r.sampled_vertices = j.at("sampled_vertices").get<std::vector<std::size_t>>();
    r.sampled_q12_rows = matrix_from_json(j.at("sampled_q12_rows"));
    if (j.contains("q12")) r.q12 = matrix_from_json(j.at("q12"));
    if (r.targets.size() != r.m || r.d_hat.size() != r.m || r.ritz_values.size() != r.n ||
        r.a12.rows() != r.n || r.ritz_coords.rows() != r.n || r.e1v.rows() != r.n ||
        r.n != r.krylov_dim + r.m0)
      throw IoError("graphrom.rom: inconsistent dimensions");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("graphrom.rom: ") + e.what());
  }
}

Json rogl_to_json(const Rogl& r, const std::vector<std::int64_t>& external_ids) {
  Json j;
  j["format"] = "graphrom.rogl";
  j["version"] = kFormatVersion;
  j["n"] = r.n;
  j["m"] = r.m;
  j["m0"] = r.m0;
  j["block_sizes"] = r.a_tilde.block_sizes;
  j["d_tilde"] = numbers_to_json(r.d_tilde);
  Json rows = Json::array(), cols = Json::array(), vals = Json::array();
  for (std::size_t c = 0; c < r.n; ++c)
    for (std::size_t i = 0; i < r.n; ++i)
      if (r.l_tilde(i, c) != 0.0) {
        rows.push_back(i);
        cols.push_back(c);
        vals.push_back(number_to_json(r.l_tilde(i, c)));
      }
  j["l_tilde"] = Json{{"n", r.n}, {"row", rows}, {"col", cols}, {"value", vals}};
  j["z0"] = numbers_to_json(r.z0);
  j["a_tilde"] = matrix_to_json(r.a_dense);
  j["q_tilde"] = matrix_to_json(r.q_tilde);
  Json map = Json::array();
  for (std::size_t k = 0; k < r.reduced_target.size(); ++k)
    map.push_back({{"reduced", r.reduced_target[k]},
                   {"vertex", r.original_target[k]},
                   {"external_id", external_id(external_ids, r.original_target[k])}});
  j["targets"] = map;
  const auto& d = r.diagnostics;
  j["diagnostics"] = {{"row_sum_residual", number_to_json(d.row_sum_residual)},
                      {"min_eigenvalue_rel", number_to_json(d.min_eigenvalue_rel)},
                      {"diag_match_residual", number_to_json(d.diag_match_residual)},
                      {"assumption2_margin", number_to_json(d.assumption2_margin)},
                      {"z0_consistency", number_to_json(d.z0_consistency)},
                      {"nullspace_residual", number_to_json(d.nullspace_residual)},
                      {"ghost_ratio", numbers_to_json(d.ghost_ratio)}};
  return j;
}

Rogl rogl_from_json(const Json& j) {
  expect_format(j, "graphrom.rogl");
  try {
    Rogl r;
    r.n = j.at("n").get<std::size_t>();
    r.m = j.at("m").get<std::size_t>();
    r.m0 = j.at("m0").get<std::size_t>();
    r.d_tilde = numbers_from_json(j.at("d_tilde"));
    r.z0 = numbers_from_json(j.at("z0"));
    const auto& l = j.at("l_tilde");
    const auto& rows = l.at("row");
    const auto& cols = l.at("col");
    const auto& vals = l.at("value");
    if (rows.size() != cols.size() || rows.size() != vals.size())
      throw IoError("graphrom.rogl: coordinate arrays differ in length");
    r.l_tilde = DenseMatrix(r.n, r.n);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto i = rows[k].get<std::size_t>(), c = cols[k].get<std::size_t>();
      if (i >= r.n || c >= r.n) throw IoError("graphrom.rogl: coordinate out of range");
      r.l_tilde(i, c) = number_from_json(vals[k]);
    }
    r.a_dense = matrix_from_json(j.at("a_tilde"));
    r.q_tilde = matrix_from_json(j.at("q_tilde"));
    r.a_tilde = split_blocks(r.a_dense, j.at("block_sizes").get<std::vector<std::size_t>>());
    for (const auto& t : j.at("targets")) {
      r.reduced_target.push_back(t.at("reduced").get<std::size_t>());
      r.original_target.push_back(t.at("vertex").get<std::size_t>());
    }
    const auto& d = j.at("diagnostics");
    r.diagnostics.row_sum_residual = number_from_json(d.at("row_sum_residual"));
    r.diagnostics.min_eigenvalue_rel = number_from_json(d.at("min_eigenvalue_rel"));
    r.diagnostics.diag_match_residual = number_from_json(d.at("diag_match_residual"));
    r.diagnostics.assumption2_margin = number_from_json(d.at("assumption2_margin"));
    r.diagnostics.z0_consistency = number_from_json(d.at("z0_consistency"));
    r.diagnostics.nullspace_residual = number_from_json(d.at("nullspace_residual"));
    r.diagnostics.ghost_ratio = numbers_from_json(d.at("ghost_ratio"));
    if (r.d_tilde.size() != r.n || r.z0.size() != r.n || r.a_dense.rows() != r.n ||
        r.reduced_target.size() != r.m)
      throw IoError("graphrom.rogl: inconsistent dimensions");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("graphrom.rogl: ") + e.what());
  }
}

Json grid_to_json(const OptimalGrid1D& g) {
  return Json{{"format", "graphrom.grid1d"},
              {"version", kFormatVersion},
              {"h", numbers_to_json(g.h)},
              {"h_hat", numbers_to_json(g.h_hat)},
              {"sigma", numbers_to_json(g.sigma)},
              {"sigma_hat", numbers_to_json(g.sigma_hat)}};
}

Json distance_report_to_json(const DistanceReport& rep, const TargetSubset& subset,
                             const std::vector<std::int64_t>& external_ids) {
  Json j;
  j["format"] = "graphrom.distances";
  j["version"] = kFormatVersion;
  j["kind"] = rep.kind;
  if (rep.p) j["p"] = *rep.p;
  Json rows = Json::array();
  for (std::size_t i = 0; i < rep.pairs.size(); ++i) {
    const auto [a, b] = rep.pairs[i];
    rows.push_back({{"j", a},
                    {"k", b},
                    {"vertex_j", external_id(external_ids, subset.indices[a])},
                    {"vertex_k", external_id(external_ids, subset.indices[b])},
                    {"full", number_to_json(rep.full_values[i])},
                    {"reduced", number_to_json(rep.reduced_values[i])},
                    {"abs_err", number_to_json(rep.abs_err[i])},
                    {"rel_err", number_to_json(rep.rel_err[i])}});
  }
  j["pairs"] = rows;
  j["max_rel_err"] = number_to_json(rep.max_rel_err);
  return j;
}

std::string distance_report_table(const DistanceReport& rep) {
  std::ostringstream out;
  out << "# " << rep.kind;
  if (rep.p) out << " p=" << *rep.p;
  out << "\n# j k full reduced abs_err rel_err\n";
  for (std::size_t i = 0; i < rep.pairs.size(); ++i)
    out << rep.pairs[i].first << ' ' << rep.pairs[i].second << ' '
        << format_double(rep.full_values[i]) << ' ' << format_double(rep.reduced_values[i])
        << ' ' << format_double(rep.abs_err[i]) << ' ' << format_double(rep.rel_err[i]) << '\n';
  out << "# max_rel_err " << format_double(rep.max_rel_err) << '\n';
  return out.str();
}

Json cluster_report_to_json(const ClusterReport& rep,
                            const std::vector<std::int64_t>& external_ids) {
  Json j;
  j["format"] = "graphrom.clusters";
  j["version"] = kFormatVersion;
  j["method"] = rep.method;
  j["n_c"] = rep.n_c;
  j["seed"] = rep.seed;
  Json labels = Json::object();
  for (std::size_t i = 0; i < rep.vertices.size(); ++i)
    labels[std::to_string(external_id(external_ids, rep.vertices[i]))] = rep.labels[i] + 1;
  j["labels"] = labels;
  if (!rep.trials.empty()) {
    Json trials = Json::array();
    for (const auto& [t, g] : rep.trials) trials.push_back({{"n_t", t}, {"n_g", g}});
    j["trials"] = trials;
    j["n_t_star"] = rep.n_t_star;
    j["n_g_star"] = rep.n_g_star;
  }
  j["inertia"] = number_to_json(rep.inertia);
  return j;
}

std::string cluster_report_table(const ClusterReport& rep) {
  std::ostringstream out;
  out << "# method " << rep.method << " n_c=" << rep.n_c << " seed=" << rep.seed << '\n';
  if (!rep.trials.empty()) {
    out << "# n_t n_g\n";
    for (const auto& [t, g] : rep.trials)
      out << t << ' ' << g << (t == rep.n_t_star ? " *" : "") << '\n';
    out << "# n_t* " << rep.n_t_star << " n_g* " << rep.n_g_star << '\n';
  }
  out << "# vertex cluster\n";
  for (std::size_t i = 0; i < rep.vertices.size(); ++i)
    out << rep.vertices[i] << ' ' << rep.labels[i] + 1 << '\n';
  return out.str();
}

void write_json_file(const std::string& path, const Json& j) {
  write_text_file(path, j.dump(1) + "\n");
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace graphrom
